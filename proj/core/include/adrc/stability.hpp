#pragma once

// Closed-loop stability certificates for the LS control law with an ESO.
//
// The extended error ē = [δx̄; e] obeys ē' = (H + Δt)ē + δt. A certificate is
// issued when Ã = Ā - LC̄ and A + BB†(K - A) are Hurwitz and
//
//     S = 2M - ΔᵀN - NΔ - 2β₁σmax(N)I ≻ 0,   HᵀN + NH = -2M,
//
// with Δ the constant worst-case matrix built from the mismatch bounds.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adrc/control.hpp"
#include "adrc/estimation.hpp"
#include "adrc/model.hpp"
#include "adrc/numkernel.hpp"

namespace adrc {

// Growth and rate bounds on the model mismatch. All entries are non-negative.
struct LipschitzBounds {
  // ‖w‖ <= l_w + l_w_x‖x‖ + l_w_u‖u‖ + l_w_w0‖w₀‖
  double l_w = 0.0, l_w_x = 0.0, l_w_u = 0.0, l_w_w0 = 0.0;
  // ‖∂w/∂t‖, ‖∂w/∂x‖, ‖∂w/∂u‖, ‖∂w/∂w₀‖
  double l_dw = 0.0, l_dw_x = 0.0, l_dw_u = 0.0, l_dw_w0 = 0.0;
  // ‖v‖ <= l_v + l_v_x‖x‖ + l_v_u‖u‖ + l_v_v0‖v₀‖
  double l_v = 0.0, l_v_x = 0.0, l_v_u = 0.0, l_v_v0 = 0.0;
  // ‖xr‖ <= c_xr, ‖ẋr‖ <= c_xr_dot
  double c_xr = 0.0, c_xr_dot = 0.0;
  // ‖w₀‖, ‖ẇ₀‖, ‖v₀‖, ‖û‖
  double c_w0 = 0.0, c_w0_dot = 0.0, c_v0 = 0.0, c_u = 0.0;
  // Lipschitz constant of the desired error dynamics h.
  double l_h = 0.0;

  // Throws std::invalid_argument if any entry is negative or non-finite.
  void validate() const;
};

// How the worst-case Δ treats the signs of the partial-derivative bounds.
enum class DeltaMode {
  Signed,     // bounds enter with positive sign, matrices keep their signs
  Rectified,  // element-wise |Δ|
};

struct StabilityCertificate {
  bool atilde_hurwitz = false;
  bool acl_hurwitz = false;
  Matrix N;
  double sigma_max_N = 0.0;
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double condition_min_eig = 0.0;
  bool satisfied = false;
  std::optional<double> ultimate_radius;
};

struct Betas {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

// H = [[Ã, 0], [-BB†[A-K, Γ], A + BB†(K-A)]], (2n+k)×(2n+k).
Matrix build_H(const NominalLinearModel& m, const ErrorLaw& law, const Matrix& l);

// Δ from explicit mismatch Jacobians ∂w/∂x (k×n) and ∂w/∂û (k×m):
// middle block row [∂w/∂û B†[A-K, Γ],  ∂w/∂û B†(A-K) - ∂w/∂x A], zero elsewhere.
Matrix build_delta(const NominalLinearModel& m, const ErrorLaw& law, const Matrix& dw_dx,
                   const Matrix& dw_du);

// Worst-case Δ with ∂w/∂x and ∂w/∂û replaced by l_dw_x and l_dw_u times the
// rectangular identity.
Matrix build_delta_bound(const NominalLinearModel& m, const ErrorLaw& law,
                         const LipschitzBounds& b, DeltaMode mode = DeltaMode::Signed);

Betas betas(const NominalLinearModel& m, const Matrix& l, const LipschitzBounds& b);

struct Theorem2Options {
  std::optional<Matrix> M;                // defaults to identity
  std::optional<Matrix> delta_override;   // full signed Δ
  DeltaMode delta_mode = DeltaMode::Signed;
};

StabilityCertificate check_theorem2(const NominalLinearModel& m, const ErrorLaw& law,
                                    const Matrix& l, const LipschitzBounds& b,
                                    const Theorem2Options& options = {});

// One member of a parameterized certificate family.
struct CertificateProblem {
  NominalLinearModel model;
  ErrorLaw law;
  Matrix L;
  LipschitzBounds bounds;
};

using CertificateFamily = std::function<CertificateProblem(double)>;

struct SweepEntry {
  double parameter = 0.0;
  StabilityCertificate certificate;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  // Longest contiguous run of satisfied grid points (first one on ties).
  std::optional<std::pair<double, double>> satisfied_interval;
};

SweepResult sweep_certificates(const CertificateFamily& family, const std::vector<double>& grid,
                               const Theorem2Options& options = {});

// σmax(P)/σmin(Q)·(c_ẇ + c_v‖LΠ‖) with ÃᵀP + PÃ = -2Q.
double lemma1_bound(const Matrix& atilde, const Matrix& q, const Matrix& l, const Matrix& pi,
                    double c_wdot, double c_v);

// Tracking-error bound divided by the (non-computable) ISS constant c:
// σmax(P)/σmin(Q)·(c_ẇ + c_v‖LΠ‖)·(l_h + ‖[A Γ]‖).
double theorem1_xi_factor(const NominalLinearModel& m, double l_h, const Matrix& l,
                          const Matrix& p, const Matrix& q, double c_wdot, double c_v);

// Radius beyond which V̇ < 0: 2σmax(N)·Kc / λmin(S), with Kc collecting the
// exogenous terms of the V̇ bound. Throws NumericalError("no ultimate bound
// available") for an unsatisfied certificate.
double ultimate_bound(const StabilityCertificate& cert, const NominalLinearModel& m,
                      const Matrix& l, const LipschitzBounds& b);

// Exogenous constant Kc of the V̇ bound.
double ultimate_bound_constant(const NominalLinearModel& m, const Matrix& l,
                               const LipschitzBounds& b, const Betas& beta);

// Flat key=value block: atilde_hurwitz, acl_hurwitz, beta0..2, min_eig,
// satisfied, ultimate_radius.
std::string certificate_report(const StabilityCertificate& cert);

// First-order example: mismatch bounds for a given reference gain k
// (unit-step reference, so c_xr = 1 and c_xr_dot = k).
LipschitzBounds example1_bounds(double k);

// First-order example family: model (2, 3, 1, 0, 1, 1), K = -k, L = (6k+2, 9k²).
CertificateProblem example1_problem(double k);

}  // namespace adrc
