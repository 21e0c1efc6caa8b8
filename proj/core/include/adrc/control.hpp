#pragma once

// Least-squares control law, its bias, reference generation, and the
// pendulum controllers A (feedback linearization) and B.II (ESO-based).

#include <functional>

#include "adrc/model.hpp"
#include "adrc/numkernel.hpp"

namespace adrc {

// ẋr = Ar xr + Br ur(t).
class ReferenceModel {
 public:
  using InputSignal = std::function<Vector(double)>;

  ReferenceModel(Matrix ar, Matrix br, InputSignal ur, Vector xr0);

  const Matrix& Ar() const { return ar_; }
  const Matrix& Br() const { return br_; }
  const Vector& xr() const { return xr_; }
  Vector ur(double t) const { return ur_(t); }

  // f_r(t, xr, ur) = Ar xr + Br ur(t).
  Vector fr_value(double t) const { return fr_value(t, xr_); }
  Vector fr_value(double t, const Vector& xr) const;

  ReferenceModel with_state(Vector xr) const;

 private:
  Matrix ar_;
  Matrix br_;
  InputSignal ur_;
  Vector xr_;
};

// RK4-advanced reference.
ReferenceModel reference_step(const ReferenceModel& r, double t, double dt);

// First-order example reference ẋr = -k xr + k ur with ur a step of the given
// amplitude.
ReferenceModel example1_reference(double k, double step = 1.0, double xr0 = 0.0);

// Pendulum reference ẋr1 = xr2, ẋr2 = -k1 xr1 - k2 xr2, starting at xr0.
ReferenceModel pendulum_reference(double k1, double k2, const Vector& xr0);

// Desired tracking-error dynamics ė = Ke with K Hurwitz.
class ErrorLaw {
 public:
  explicit ErrorLaw(Matrix k);
  const Matrix& K() const { return k_; }

 private:
  Matrix k_;
};

struct SaturationLimits {
  double umax = 5.0;
};

double saturate(double value, const SaturationLimits& limits);
Vector saturate(const Vector& value, const SaturationLimits& limits);

// fr - Γŵ - Ax̂ - K(xr - x̂): the right-hand side the LS control matches.
Vector design_residual(const NominalLinearModel& m, const ErrorLaw& law, const Vector& fr_value,
                       const Vector& xhat, const Vector& what, const Vector& xr);

// û = B†(fr - Γŵ - Ax̂ - K(xr - x̂)).
Vector ls_control(const NominalLinearModel& m, const ErrorLaw& law, const Vector& fr_value,
                  const Vector& xhat, const Vector& what, const Vector& xr);

// δu = (I - BB†)(fr - Γŵ - Ax̂ - K(xr - x̂)).
Vector control_bias(const NominalLinearModel& m, const ErrorLaw& law, const Vector& fr_value,
                    const Vector& xhat, const Vector& what, const Vector& xr);

// First-order example in closed form: û = (k ur - (k+2)x̂ - ŵ)/3 (unsaturated).
double example1_control(double k, double ur, double xhat, double what);

// Controller A: u = sat((k1x1 + k2x2 + sin x1)/cos x1).
//
// Where cos x1 is exactly zero the raw value is unbounded; the output is then
// sign(numerator)·umax, and 0 when the numerator is zero as well.
double controller_A(double x1, double x2, double k1, double k2, double umax);
double controller_A_raw(double x1, double x2, double k1, double k2);

// Controller B.II: û = sat((k1x1 + k2x2 + ŵ)/α).
double controller_B2(double x1, double x2, double what, double k1, double k2, double alpha,
                     double umax);

}  // namespace adrc
