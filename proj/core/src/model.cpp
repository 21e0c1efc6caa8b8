#include "adrc/model.hpp"

#include <cmath>
#include <sstream>

namespace adrc {

PlantBlowUp::PlantBlowUp(double time)
    : std::runtime_error([time] {
        std::ostringstream os;
        os.precision(17);
        os << "plant blow-up at t=" << time;
        return os.str();
      }()),
      time_(time) {}

namespace {

std::string dims(const Matrix& x) {
  return std::to_string(x.rows()) + "x" + std::to_string(x.cols());
}

}  // namespace

NominalLinearModel::NominalLinearModel(Matrix a, Matrix b, Matrix c, Matrix d, Matrix gamma,
                                       Matrix pi, Validation validation)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      gamma_(std::move(gamma)),
      pi_(std::move(pi)) {
  const auto n = a_.rows();
  if (n == 0 || a_.cols() != n) throw ModelError("A must be square and non-empty, got " + dims(a_));
  if (b_.rows() != n || b_.cols() == 0) throw ModelError("B must be n x m, got " + dims(b_));
  if (c_.cols() != n || c_.rows() == 0) throw ModelError("C must be l x n, got " + dims(c_));
  if (gamma_.rows() != n || gamma_.cols() == 0) {
    throw ModelError("Gamma must be n x k, got " + dims(gamma_));
  }
  const auto m = b_.cols();
  const auto l = c_.rows();
  if (d_.size() == 0) d_ = Matrix::Zero(l, m);
  if (pi_.size() == 0) pi_ = Matrix::Identity(l, l);
  if (d_.rows() != l || d_.cols() != m) throw ModelError("D must be l x m, got " + dims(d_));
  if (pi_.rows() != l) throw ModelError("Pi must be l x p, got " + dims(pi_));

  if (m > n) throw ModelError("input dimension m exceeds state dimension n");
  if (l > n) throw ModelError("output dimension l exceeds state dimension n");
  if (gamma_.cols() > n) throw ModelError("disturbance dimension k exceeds n");
  if (pi_.cols() > l) throw ModelError("noise dimension p exceeds l");

  for (const Matrix* x : {&a_, &b_, &c_, &d_, &gamma_, &pi_}) {
    if (!x->allFinite()) throw ModelError("model matrices must be finite");
  }

  if (validation == Validation::Strict) {
    const int ni = static_cast<int>(n);
    if (numerical_rank(b_) != static_cast<int>(m)) throw ModelError("B must have full column rank");
    if (numerical_rank(gamma_) != static_cast<int>(gamma_.cols())) {
      throw ModelError("Gamma must have full column rank (degenerate disturbance channel)");
    }
    if (pair_rank(a_, b_, PairMode::Reachability) != ni) {
      throw ModelError("(A, B) is not controllable");
    }
    if (pair_rank(a_, c_, PairMode::Observability) != ni) {
      throw ModelError("(A, C) is not observable");
    }
  }

  if (numerical_rank(b_) == static_cast<int>(m)) {
    b_pinv_ = pinv_tall(b_);
    b_tilde_ = Matrix::Identity(n, n) - b_ * b_pinv_;
  }
}

ExtendedModel build_extended(const NominalLinearModel& model) {
  const int n = model.n();
  const int k = model.k();
  const int m = model.m();
  const int l = model.l();
  ExtendedModel ext;
  ext.n = n;
  ext.k = k;
  ext.Abar = Matrix::Zero(n + k, n + k);
  ext.Abar.topLeftCorner(n, n) = model.A();
  ext.Abar.topRightCorner(n, k) = model.Gamma();
  ext.Bbar = Matrix::Zero(n + k, m);
  ext.Bbar.topRows(n) = model.B();
  ext.Cbar = Matrix::Zero(l, n + k);
  ext.Cbar.leftCols(n) = model.C();
  ext.E = Matrix::Zero(n + k, k);
  ext.E.bottomRows(k) = Matrix::Identity(k, k);
  ext.D = model.D();
  ext.Pi = model.Pi();
  ext.observability_rank = pair_rank(ext.Abar, ext.Cbar, PairMode::Observability);
  return ext;
}

NominalLinearModel strip_extended(const ExtendedModel& ext, Validation validation) {
  const int n = ext.n;
  const int k = ext.k;
  return NominalLinearModel(ext.Abar.topLeftCorner(n, n), ext.Bbar.topRows(n),
                            ext.Cbar.leftCols(n), ext.D, ext.Abar.topRightCorner(n, k), ext.Pi,
                            validation);
}

Vector Plant::derivative(double t, const Vector& x, const Vector& u) const {
  Vector dx = rhs(t, x, u);
  if (!dx.allFinite()) throw PlantBlowUp(t);
  return dx;
}

Vector Plant::lumped_disturbance(const NominalLinearModel& model, double t, const Vector& x,
                                 const Vector& u) const {
  const Vector residual = rhs(t, x, u) - model.A() * x - model.B() * u;
  return model.Gamma().colPivHouseholderQr().solve(residual);
}

double FirstOrderPlant::w0(double t) { return 0.1 * std::sin(t); }

Vector FirstOrderPlant::rhs(double t, const Vector& x, const Vector& u) const {
  const double w = 0.2 * x[0] + 0.3 * u[0] + w0(t);
  Vector dx(1);
  dx[0] = 2.0 * x[0] + 3.0 * u[0] + w;
  return dx;
}

Vector FirstOrderPlant::measure(double /*t*/, const Vector& x, const Vector& /*u*/,
                                const Vector& v0) const {
  Vector y(1);
  y[0] = x[0] + (v0.size() > 0 ? v0[0] : 0.0);
  return y;
}

PendulumPlant::PendulumPlant(double disturbance_onset, double noise_bound)
    : onset_(disturbance_onset), noise_bound_(noise_bound) {}

double PendulumPlant::w0(double t) const { return t <= onset_ ? 0.0 : std::sin(t); }

Vector PendulumPlant::rhs(double t, const Vector& x, const Vector& u) const {
  Vector dx(2);
  dx[0] = x[1];
  dx[1] = std::sin(x[0]) - u[0] * std::cos(x[0]) + w0(t);
  return dx;
}

Vector PendulumPlant::measure(double /*t*/, const Vector& x, const Vector& /*u*/,
                              const Vector& v0) const {
  Vector y = x;
  if (v0.size() == 2) y += v0;
  return y;
}

NominalLinearModel first_order_model() {
  return NominalLinearModel(Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 3.0),
                            Matrix::Identity(1, 1), Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                            Matrix::Identity(1, 1));
}

NominalLinearModel pendulum_fictitious_model(double alpha) {
  if (!(alpha >= kMinPendulumAlpha && alpha <= kMaxPendulumAlpha)) {
    throw ModelError("pendulum alpha must lie in [0.05, 1.0]");
  }
  Matrix a{{0.0, 1.0}, {0.0, 0.0}};
  Matrix b{{0.0}, {-alpha}};
  Matrix gamma{{0.0}, {1.0}};
  return NominalLinearModel(std::move(a), std::move(b), Matrix::Identity(2, 2),
                            Matrix::Zero(2, 1), std::move(gamma), Matrix::Identity(2, 2));
}

}  // namespace adrc
