#include "adrc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adrc {

ObserverGain::ObserverGain(const ExtendedModel& ext, Matrix l) : l_(std::move(l)) {
  if (l_.rows() != ext.Abar.rows() || l_.cols() != ext.Cbar.rows()) {
    throw std::invalid_argument("observer gain must be (n+k) x l");
  }
  atilde_ = ext.Abar - l_ * ext.Cbar;
  if (!is_hurwitz(atilde_)) {
    throw std::invalid_argument("observer gain does not make Abar - L Cbar Hurwitz");
  }
}

Vector eso_derivative(const ExtendedModel& ext, const ObserverGain& gain, const EsoState& s,
                      const Vector& u, const Vector& y) {
  const Vector innovation = y - ext.Cbar * s.xhat_bar - ext.D * u;
  return ext.Abar * s.xhat_bar + ext.Bbar * u + gain.L() * innovation;
}

ObserverGain example1_gain(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("example1_gain: k must be positive");
  Matrix l(2, 1);
  l << 6.0 * k + 2.0, 9.0 * k * k;
  return ObserverGain(build_extended(first_order_model()), std::move(l));
}

ObserverGain pendulum_eso_gain(double p_x1, std::pair<double, double> p_pair) {
  if (!(p_x1 < 0.0 && p_pair.first < 0.0 && p_pair.second < 0.0)) {
    throw std::invalid_argument("unstable pole request: observer poles must be negative");
  }
  Matrix l = Matrix::Zero(3, 2);
  l(0, 0) = -p_x1;
  l(1, 1) = -(p_pair.first + p_pair.second);
  l(2, 1) = p_pair.first * p_pair.second;
  // Ā and C̄ of the fictitious model do not involve α.
  return ObserverGain(build_extended(pendulum_fictitious_model(1.0)), std::move(l));
}

FirstOrderLowPass FirstOrderLowPass::settled(double tau, double input) {
  return FirstOrderLowPass{tau, input};
}

LowPassStep lowpass_step(const FirstOrderLowPass& f, double input, double dt) {
  if (!(f.tau > 0.0)) throw std::invalid_argument("lowpass_step: tau must be positive");
  if (!(dt > 0.0) || dt > f.tau / 5.0) {
    throw std::invalid_argument("lowpass_step: require 0 < dt <= tau/5");
  }
  const double decay = std::exp(-dt / f.tau);
  LowPassStep out;
  out.derivative = f.derivative(input);
  out.next = f;
  out.next.z = decay * f.z + (1.0 - decay) * input;
  out.output = out.next.z;
  return out;
}

Type1Estimator Type1Estimator::initial(double tau, const Vector& xhat0) {
  Type1Estimator est;
  for (Eigen::Index i = 0; i < xhat0.size(); ++i) {
    est.state_filters.push_back(FirstOrderLowPass::settled(tau, xhat0[i]));
    est.residual_filters.push_back(FirstOrderLowPass{tau, 0.0});
  }
  return est;
}

Type1Step type1_disturbance_estimate(const Type1Estimator& est, const Vector& xhat,
                                     const Matrix& a, const Matrix& b, const Vector& uhat,
                                     double dt) {
  const auto n = static_cast<Eigen::Index>(est.state_filters.size());
  if (xhat.size() != n || static_cast<Eigen::Index>(est.residual_filters.size()) != n ||
      a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != uhat.size()) {
    throw std::invalid_argument("type1_disturbance_estimate: dimension mismatch");
  }
  const Vector model_rate = a * xhat + b * uhat;
  Type1Step out;
  out.gamma_w.resize(n);
  out.next = est;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const LowPassStep sx = lowpass_step(est.state_filters[ui], xhat[i], dt);
    const LowPassStep sr = lowpass_step(est.residual_filters[ui], model_rate[i], dt);
    out.gamma_w[i] = sx.derivative - est.residual_filters[ui].z;
    out.next.state_filters[ui] = sx.next;
    out.next.residual_filters[ui] = sr.next;
  }
  return out;
}

ControllerB1State ControllerB1State::initial(double tau, double x2_0) {
  return ControllerB1State{FirstOrderLowPass::settled(tau, x2_0), 0.0};
}

ControllerB1Step controller_B1_step(const ControllerB1State& s, double x1, double x2,
                                    const PendulumGains& g, double dt) {
  if (!(g.alpha > 0.0)) throw std::invalid_argument("controller B.I: alpha must be positive");
  const LowPassStep filtered = lowpass_step(s.x2_filter, x2, dt);
  const double v = g.k1 * x1 + g.k2 * x2 + filtered.derivative;
  ControllerB1Step out;
  out.u_raw = (v + s.q) / g.alpha;
  out.u = std::clamp(out.u_raw, -g.umax, g.umax);
  out.next.x2_filter = filtered.next;
  // q̇ = v/τ; the derivative channel is integrated exactly under the same hold
  // as the filter (∫d dt = Δz), the proportional part by the rectangle rule.
  const double proportional = g.k1 * x1 + g.k2 * x2;
  out.next.q = s.q + (dt * proportional + (filtered.next.z - s.x2_filter.z)) / s.x2_filter.tau;
  return out;
}

}  // namespace adrc
