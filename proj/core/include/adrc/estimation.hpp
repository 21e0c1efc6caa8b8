#pragma once

// State and disturbance estimators: the linear extended state observer
// (Type-II) and filter-based estimation with first-order low-pass filters
// (Type-I), plus the concrete observer gains of the two benchmarks.

#include <utility>
#include <vector>

#include "adrc/model.hpp"
#include "adrc/numkernel.hpp"

namespace adrc {

// Estimated extended state x̂̄ = [x̂; ŵ].
struct EsoState {
  Vector xhat_bar;

  Vector xhat(int n) const { return xhat_bar.head(n); }
  Vector what(int n) const { return xhat_bar.tail(xhat_bar.size() - n); }
};

// Observer gain L ((n+k)×l) with Ā - LC̄ Hurwitz.
class ObserverGain {
 public:
  // Throws std::invalid_argument if dimensions mismatch or Ā - LC̄ is not Hurwitz.
  ObserverGain(const ExtendedModel& ext, Matrix l);

  const Matrix& L() const { return l_; }
  // Ã = Ā - LC̄.
  const Matrix& Atilde() const { return atilde_; }

 private:
  Matrix l_;
  Matrix atilde_;
};

// Ā x̂̄ + B̄u + L(y - C̄x̂̄ - Du).
Vector eso_derivative(const ExtendedModel& ext, const ObserverGain& gain, const EsoState& s,
                      const Vector& u, const Vector& y);

// First-order example gain L = (6k+2, 9k²): double observer pole at -3k.
ObserverGain example1_gain(double k);

// Structured 3×2 gain [[l1,0],[0,l2],[0,l3]] for the pendulum's fictitious
// model: l1 = -p_x1 and λ² + l2 λ + l3 = (λ - p₁)(λ - p₂). The spectrum of
// Ā - LC̄ does not depend on α.
ObserverGain pendulum_eso_gain(double p_x1, std::pair<double, double> p_pair);

// Low-pass 1/(τs+1) discretized exactly under zero-order hold.
struct FirstOrderLowPass {
  double tau = 0.05;
  double z = 0.0;

  // Starts at the given input so the filtered derivative is zero at t0.
  static FirstOrderLowPass settled(double tau, double input);

  // (input - z)/τ, i.e. s/(τs+1) applied to the input at the sample instant.
  double derivative(double input) const { return (input - z) / tau; }
};

struct LowPassStep {
  FirstOrderLowPass next;
  double output = 0.0;      // updated z
  double derivative = 0.0;  // (input - z)/τ at the start of the step
};

// Advances ż = (input - z)/τ over dt with the input held. Requires
// 0 < dt <= τ/5.
LowPassStep lowpass_step(const FirstOrderLowPass& f, double input, double dt);

// Bank of per-channel filters for the Type-I disturbance estimate
// Γŵ = F ⋆ (ẋ̂ - Ax̂ - Bû), with F ⋆ ẋ̂ realized as s/(τs+1) x̂.
struct Type1Estimator {
  std::vector<FirstOrderLowPass> state_filters;     // filter x̂ (derivative channel)
  std::vector<FirstOrderLowPass> residual_filters;  // filter Ax̂ + Bû

  // Derivative filters settle on xhat0; residual filters start at zero.
  static Type1Estimator initial(double tau, const Vector& xhat0);
};

struct Type1Step {
  Type1Estimator next;
  Vector gamma_w;  // Γŵ at the start of the step
};

Type1Step type1_disturbance_estimate(const Type1Estimator& est, const Vector& xhat,
                                     const Matrix& a, const Matrix& b, const Vector& uhat,
                                     double dt);

// Pendulum controller B.I: û = (k1X1 + (k2 + sF)X2) / (α(1 - F)), F = 1/(τs+1).
// Realized as v = k1x1 + k2x2 + d with d the filtered derivative of x2, then
// û = sat((v + q)/α) with q̇ = v/τ (1/(1-F) = 1 + 1/(τs)).
struct ControllerB1State {
  FirstOrderLowPass x2_filter;
  double q = 0.0;

  static ControllerB1State initial(double tau, double x2_0);
};

struct PendulumGains {
  double k1 = 2.0;
  double k2 = 2.0;
  double alpha = 0.1;
  double umax = 5.0;
  double tau = 0.05;
};

struct ControllerB1Step {
  ControllerB1State next;
  double u = 0.0;      // saturated control
  double u_raw = 0.0;  // pre-saturation value
};

ControllerB1Step controller_B1_step(const ControllerB1State& s, double x1, double x2,
                                    const PendulumGains& g, double dt);

}  // namespace adrc
