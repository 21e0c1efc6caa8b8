#pragma once

// Nominal linear model (A, B, C, D, Γ, Π), its extended form for the ESO, and
// the two benchmark plants: the uncertain first-order system and the
// normalized inverted pendulum.

#include <memory>
#include <stdexcept>
#include <string>

#include "adrc/numkernel.hpp"

namespace adrc {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a plant derivative becomes non-finite.
class PlantBlowUp : public std::runtime_error {
 public:
  explicit PlantBlowUp(double time);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

enum class Validation {
  Strict,
  // Skips rank/controllability/observability checks for deliberately
  // degenerate test models. Dimension checks always run.
  DimensionsOnly,
};

// ẋ = Ax + Bu + Γw,  y = Cx + Du + Πv.
class NominalLinearModel {
 public:
  // D defaults to zero (l×m) and Π to identity (l×l) when passed empty.
  NominalLinearModel(Matrix a, Matrix b, Matrix c, Matrix d, Matrix gamma, Matrix pi,
                     Validation validation = Validation::Strict);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& C() const { return c_; }
  const Matrix& D() const { return d_; }
  const Matrix& Gamma() const { return gamma_; }
  const Matrix& Pi() const { return pi_; }

  int n() const { return static_cast<int>(a_.rows()); }
  int m() const { return static_cast<int>(b_.cols()); }
  int l() const { return static_cast<int>(c_.rows()); }
  int k() const { return static_cast<int>(gamma_.cols()); }
  int p() const { return static_cast<int>(pi_.cols()); }

  // B† and I - BB†, cached at construction.
  const Matrix& B_pinv() const { return b_pinv_; }
  const Matrix& B_tilde() const { return b_tilde_; }

  friend bool operator==(const NominalLinearModel& x, const NominalLinearModel& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_ &&
           x.gamma_ == y.gamma_ && x.pi_ == y.pi_;
  }

 private:
  Matrix a_, b_, c_, d_, gamma_, pi_;
  Matrix b_pinv_, b_tilde_;
};

// x̄ = [x; w]:  x̄' = Āx̄ + B̄u + Eẇ,  y = C̄x̄ + Du + Πv.
struct ExtendedModel {
  Matrix Abar;
  Matrix Bbar;
  Matrix Cbar;
  Matrix E;
  Matrix D;
  Matrix Pi;
  int n = 0;
  int k = 0;
  // pair_rank(Ā, C̄, observability); full rank is n + k.
  int observability_rank = 0;

  bool observable() const { return observability_rank == n + k; }
};

ExtendedModel build_extended(const NominalLinearModel& model);

// Recovers the nominal model from its extension (inverse of build_extended).
NominalLinearModel strip_extended(const ExtendedModel& ext,
                                  Validation validation = Validation::Strict);

// True plant ẋ = f₀(t, x, u), y = g₀(t, x, u, v₀).
class Plant {
 public:
  virtual ~Plant() = default;

  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;
  // Half-width of the admissible measurement-noise sample per channel.
  virtual double noise_bound() const = 0;
  virtual std::string name() const = 0;

  // Unchecked derivative rule including the true disturbance w₀(t).
  virtual Vector rhs(double t, const Vector& x, const Vector& u) const = 0;
  virtual Vector measure(double t, const Vector& x, const Vector& u, const Vector& v0) const = 0;

  // rhs() with a finiteness check; throws PlantBlowUp on failure.
  Vector derivative(double t, const Vector& x, const Vector& u) const;

  // True lumped disturbance w with respect to a nominal model:
  // Γw = f₀ - Ax - Bu solved in the least-squares sense.
  Vector lumped_disturbance(const NominalLinearModel& model, double t, const Vector& x,
                            const Vector& u) const;
};

// ẋ = 2x + 3u + w, w = 0.2x + 0.3u + 0.1 sin t, y = x + v₀.
class FirstOrderPlant final : public Plant {
 public:
  int state_dim() const override { return 1; }
  int input_dim() const override { return 1; }
  int output_dim() const override { return 1; }
  double noise_bound() const override { return 0.1; }
  std::string name() const override { return "first-order"; }

  Vector rhs(double t, const Vector& x, const Vector& u) const override;
  Vector measure(double t, const Vector& x, const Vector& u, const Vector& v0) const override;

  static double w0(double t);
};

// ẋ₁ = x₂, ẋ₂ = sin x₁ - u cos x₁ + w₀(t), y = (x₁, x₂) + v₀.
// w₀(t) = 0 for t <= onset, sin t afterwards.
class PendulumPlant final : public Plant {
 public:
  explicit PendulumPlant(double disturbance_onset = 10.0, double noise_bound = 0.1);

  int state_dim() const override { return 2; }
  int input_dim() const override { return 1; }
  int output_dim() const override { return 2; }
  double noise_bound() const override { return noise_bound_; }
  std::string name() const override { return "pendulum"; }

  Vector rhs(double t, const Vector& x, const Vector& u) const override;
  Vector measure(double t, const Vector& x, const Vector& u, const Vector& v0) const override;

  double w0(double t) const;
  double disturbance_onset() const { return onset_; }

 private:
  double onset_;
  double noise_bound_;
};

// Nominal model of the first-order example: A=2, B=3, C=1, D=0, Γ=Π=1.
NominalLinearModel first_order_model();

// Fictitious double-integrator model ẋ₁ = x₂, ẋ₂ = -αu + w with both states
// measured. α must lie in [0.05, 1.0].
NominalLinearModel pendulum_fictitious_model(double alpha);

inline constexpr double kMinPendulumAlpha = 0.05;
inline constexpr double kMaxPendulumAlpha = 1.0;

}  // namespace adrc
