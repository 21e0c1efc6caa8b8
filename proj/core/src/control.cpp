#include "adrc/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adrc {

ReferenceModel::ReferenceModel(Matrix ar, Matrix br, InputSignal ur, Vector xr0)
    : ar_(std::move(ar)), br_(std::move(br)), ur_(std::move(ur)), xr_(std::move(xr0)) {
  if (ar_.rows() != ar_.cols() || ar_.rows() != xr_.size() || br_.rows() != ar_.rows()) {
    throw std::invalid_argument("reference model: dimension mismatch");
  }
  if (!ur_) throw std::invalid_argument("reference model: missing input signal");
}

Vector ReferenceModel::fr_value(double t, const Vector& xr) const {
  return ar_ * xr + br_ * ur_(t);
}

ReferenceModel ReferenceModel::with_state(Vector xr) const {
  ReferenceModel r = *this;
  r.xr_ = std::move(xr);
  return r;
}

ReferenceModel reference_step(const ReferenceModel& r, double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("reference_step: dt must be positive");
  const Vector& x = r.xr();
  const Vector k1 = r.fr_value(t, x);
  const Vector k2 = r.fr_value(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Vector k3 = r.fr_value(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Vector k4 = r.fr_value(t + dt, x + dt * k3);
  return r.with_state(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

ReferenceModel example1_reference(double k, double step, double xr0) {
  return ReferenceModel(Matrix::Constant(1, 1, -k), Matrix::Constant(1, 1, k),
                        [step](double) { return Vector::Constant(1, step); },
                        Vector::Constant(1, xr0));
}

ReferenceModel pendulum_reference(double k1, double k2, const Vector& xr0) {
  Matrix ar{{0.0, 1.0}, {-k1, -k2}};
  return ReferenceModel(std::move(ar), Matrix::Zero(2, 1),
                        [](double) { return Vector::Zero(1); }, xr0);
}

ErrorLaw::ErrorLaw(Matrix k) : k_(std::move(k)) {
  if (k_.rows() != k_.cols()) throw std::invalid_argument("error law: K must be square");
  if (!is_hurwitz(k_)) throw std::invalid_argument("error law: K must be Hurwitz");
}

double saturate(double value, const SaturationLimits& limits) {
  return std::clamp(value, -limits.umax, limits.umax);
}

Vector saturate(const Vector& value, const SaturationLimits& limits) {
  return value.cwiseMax(-limits.umax).cwiseMin(limits.umax);
}

namespace {

const Matrix& checked_pinv(const NominalLinearModel& m) {
  if (m.B_pinv().size() == 0) {
    // Rank-deficient B only survives construction with relaxed validation.
    pinv_tall(m.B());
  }
  return m.B_pinv();
}

}  // namespace

Vector design_residual(const NominalLinearModel& m, const ErrorLaw& law, const Vector& fr_value,
                       const Vector& xhat, const Vector& what, const Vector& xr) {
  if (law.K().rows() != m.n()) throw std::invalid_argument("error law dimension mismatch");
  return fr_value - m.Gamma() * what - m.A() * xhat - law.K() * (xr - xhat);
}

Vector ls_control(const NominalLinearModel& m, const ErrorLaw& law, const Vector& fr_value,
                  const Vector& xhat, const Vector& what, const Vector& xr) {
  const Matrix& bp = checked_pinv(m);
  return bp * design_residual(m, law, fr_value, xhat, what, xr);
}

Vector control_bias(const NominalLinearModel& m, const ErrorLaw& law, const Vector& fr_value,
                    const Vector& xhat, const Vector& what, const Vector& xr) {
  checked_pinv(m);
  return m.B_tilde() * design_residual(m, law, fr_value, xhat, what, xr);
}

double example1_control(double k, double ur, double xhat, double what) {
  return (k * ur - (k + 2.0) * xhat - what) / 3.0;
}

double controller_A_raw(double x1, double x2, double k1, double k2) {
  const double num = k1 * x1 + k2 * x2 + std::sin(x1);
  const double den = std::cos(x1);
  if (den == 0.0) {
    if (num == 0.0) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), num);
  }
  return num / den;
}

double controller_A(double x1, double x2, double k1, double k2, double umax) {
  return std::clamp(controller_A_raw(x1, x2, k1, k2), -umax, umax);
}

double controller_B2(double x1, double x2, double what, double k1, double k2, double alpha,
                     double umax) {
  if (!(alpha > 0.0)) throw std::invalid_argument("controller B.II: alpha must be positive");
  return std::clamp((k1 * x1 + k2 * x2 + what) / alpha, -umax, umax);
}

}  // namespace adrc
