#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "adrc/control.hpp"
#include "adrc/model.hpp"

using namespace adrc;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

NominalLinearModel double_integrator() {
  return NominalLinearModel(Matrix{{0.0, 1.0}, {0.0, 0.0}}, Matrix{{0.0}, {1.0}},
                            Matrix::Identity(2, 2), Matrix(), Matrix{{0.0}, {1.0}}, Matrix());
}

}  // namespace

TEST(LsControl, ZeroInputs) {
  const ErrorLaw law(Matrix::Constant(1, 1, -1.5));
  EXPECT_EQ(ls_control(first_order_model(), law, v1(0), v1(0), v1(0), v1(0)), v1(0));
}

TEST(LsControl, FirstOrderMatchesClosedForm) {
  const double k = 1.5;
  const ErrorLaw law(Matrix::Constant(1, 1, -k));
  const double xr = 1.0, ur = 1.0;
  const Vector u = ls_control(first_order_model(), law, v1(-k * xr + k * ur), v1(1.0), v1(0.0), v1(xr));
  EXPECT_NEAR(u[0], -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(u[0], example1_control(k, ur, 1.0, 0.0), 1e-15);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double xh = d(rng), wh = d(rng), x_r = d(rng), u_r = d(rng);
    const Vector ls = ls_control(first_order_model(), law, v1(-k * x_r + k * u_r), v1(xh), v1(wh),
                                 v1(x_r));
    EXPECT_NEAR(ls[0], example1_control(k, u_r, xh, wh), 1e-12);
  }
}

TEST(LsControl, SquareInvertibleB) {
  const NominalLinearModel m(Matrix{{1.0, 2.0}, {0.0, -1.0}}, Matrix{{2.0, 1.0}, {1.0, 1.0}},
                             Matrix::Identity(2, 2), Matrix(), Matrix::Identity(2, 2), Matrix());
  const ErrorLaw law(Matrix{{-1.0, 0.0}, {0.0, -2.0}});
  const Vector fr = v2(0.3, -0.4), xh = v2(1.0, 2.0), wh = v2(-0.5, 0.1), xr = v2(0.2, 0.2);
  const Vector resid = design_residual(m, law, fr, xh, wh, xr);
  EXPECT_LT((m.B() * ls_control(m, law, fr, xh, wh, xr) - resid).norm(), 1e-12);
  EXPECT_LT(control_bias(m, law, fr, xh, wh, xr).norm(), 1e-12);
}

TEST(ControlBias, ProjectorKillsActuatedChannel) {
  const NominalLinearModel m(Matrix{{0.0, 1.0}, {1.0, 0.0}}, Matrix{{1.0}, {0.0}},
                             Matrix::Identity(2, 2), Matrix(), Matrix{{0.0}, {1.0}}, Matrix());
  const ErrorLaw law(Matrix{{-1.0, 0.0}, {0.0, -1.0}});
  // With x̂ = xr = ŵ = 0 the residual is fr itself.
  const Vector bias = control_bias(m, law, v2(0.7, -1.3), v2(0, 0), v1(0), v2(0, 0));
  EXPECT_NEAR(bias[0], 0.0, 1e-15);
  EXPECT_NEAR(bias[1], -1.3, 1e-15);
}

TEST(ControlBias, LeastSquaresSplit) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  const NominalLinearModel m(Matrix{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {-1.0, -2.0, -3.0}},
                             Matrix{{1.0}, {0.0}, {2.0}}, Matrix::Identity(3, 3), Matrix(),
                             Matrix{{0.0}, {1.0}, {0.0}}, Matrix());
  const ErrorLaw law(Matrix{{-1.0, 0.5, 0.0}, {0.0, -2.0, 0.0}, {0.0, 0.0, -3.0}});
  auto rv = [&](int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = g(rng);
    return v;
  };
  for (int i = 0; i < 200; ++i) {
    const Vector fr = rv(3), xh = rv(3), wh = rv(1), xr = rv(3);
    const Vector resid = design_residual(m, law, fr, xh, wh, xr);
    const Vector u = ls_control(m, law, fr, xh, wh, xr);
    const Vector bias = control_bias(m, law, fr, xh, wh, xr);
    EXPECT_LT((m.B() * u + bias - resid).norm(), 1e-12 * std::max(1.0, resid.norm()));
    // Perturbing along the null space of Bᵀ leaves the control unchanged.
    const Vector null_dir = m.B_tilde() * rv(3);
    const Vector u2 = ls_control(m, law, fr + null_dir, xh, wh, xr);
    EXPECT_LT((u2 - u).norm(), 1e-12 * std::max(1.0, u.norm()));
  }
}

TEST(ControlBias, CanonicalDoubleIntegratorIsUnbiased) {
  const NominalLinearModel m = double_integrator();
  const ErrorLaw law(Matrix{{0.0, 1.0}, {-2.0, -2.0}});
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Vector xr = v2(d(rng), d(rng));
    const Vector fr = law.K() * xr;  // companion-form reference
    const Vector bias = control_bias(m, law, fr, v2(xr[0], d(rng)), v1(d(rng)), xr);
    EXPECT_LE(bias.norm(), 1e-12);
  }
}

TEST(ControllerA, Values) {
  EXPECT_EQ(controller_A(0.0, 0.0, 2.0, 2.0, 5.0), 0.0);
  EXPECT_NEAR(controller_A_raw(-std::numbers::pi / 3, 0.0, 2.0, 2.0), -5.9208410123552673, 1e-12);
  EXPECT_EQ(controller_A(-std::numbers::pi / 3, 0.0, 2.0, 2.0, 5.0), -5.0);
  for (double x2 : {-1.0, 0.0, 1.0}) {
    EXPECT_EQ(std::abs(controller_A(1.57, x2, 2.0, 2.0, 5.0)), 5.0);
  }
}

TEST(ControllerA, SingularAngleConvention) {
  // cos(±π/2) is ~6e-17 in double precision; the huge raw value clamps with
  // the numerator's sign.
  EXPECT_EQ(controller_A(std::numbers::pi / 2, 0.0, 2.0, 2.0, 5.0), 5.0);
  EXPECT_EQ(controller_A(-std::numbers::pi / 2, 0.0, 2.0, 2.0, 5.0), -5.0);
}

TEST(ControllerA, EqualsLsControlOnExactModel) {
  // Exact pendulum written as ẋ = Ax + B(x₁)u + Γ sin x₁ with B(x₁) = [0; -cos x₁].
  const double k1 = 2.0, k2 = 2.0;
  const ErrorLaw law(Matrix{{0.0, 1.0}, {-k1, -k2}});
  for (double x1 = -1.0; x1 <= 1.0; x1 += 0.05) {
    for (double x2 = -2.0; x2 <= 2.0; x2 += 0.25) {
      const NominalLinearModel m(Matrix{{0.0, 1.0}, {0.0, 0.0}}, Matrix{{0.0}, {-std::cos(x1)}},
                                 Matrix::Identity(2, 2), Matrix(), Matrix{{0.0}, {1.0}}, Matrix());
      const Vector xr = v2(0.1, -0.2);
      const Vector u = ls_control(m, law, law.K() * xr, v2(x1, x2), v1(std::sin(x1)), xr);
      EXPECT_NEAR(u[0], controller_A_raw(x1, x2, k1, k2), 1e-12);
    }
  }
}

TEST(ControllerB2, Values) {
  EXPECT_EQ(controller_B2(0.0, 0.0, 0.0, 2.0, 2.0, 0.1, 5.0), 0.0);
  EXPECT_EQ(controller_B2(-std::numbers::pi / 3, 0.0, 0.0, 2.0, 2.0, 0.1, 5.0), -5.0);
  EXPECT_NEAR(controller_B2(0.01, 0.02, 0.03, 2.0, 2.0, 0.5, 5.0), 0.18, 1e-15);
  EXPECT_THROW(controller_B2(0.0, 0.0, 0.0, 2.0, 2.0, 0.0, 5.0), std::invalid_argument);
}

TEST(Saturation, BoundsAndPassThrough) {
  const SaturationLimits lim{5.0};
  for (double raw = -20.0; raw <= 20.0; raw += 0.37) {
    const double out = saturate(raw, lim);
    EXPECT_LE(std::abs(out), 5.0);
    if (std::abs(raw) <= 5.0) EXPECT_EQ(out, raw);
  }
  EXPECT_EQ(saturate(v2(7.0, -2.0), lim), v2(5.0, -2.0));
}

TEST(Reference, FirstOrderStepResponse) {
  const double k = 1.5;
  ReferenceModel r = example1_reference(k);
  const double dt = 1e-3;
  const int steps = static_cast<int>(std::lround((1.0 / k) / dt));
  for (int i = 0; i < steps; ++i) r = reference_step(r, i * dt, dt);
  EXPECT_NEAR(r.xr()[0], 1.0 - std::exp(-k * steps * dt), 1e-6);
}

TEST(Reference, Equilibria) {
  ReferenceModel r = example1_reference(1.5, 1.0, 1.0);
  EXPECT_EQ(r.fr_value(0.0), v1(0.0));
  r = reference_step(r, 0.0, 0.01);
  EXPECT_EQ(r.xr(), v1(1.0));

  ReferenceModel p = pendulum_reference(2.0, 2.0, v2(0.0, 0.0));
  for (int i = 0; i < 100; ++i) p = reference_step(p, i * 0.01, 0.01);
  EXPECT_EQ(p.xr(), v2(0.0, 0.0));
}

TEST(ErrorLaw, RequiresHurwitz) {
  EXPECT_THROW(ErrorLaw(Matrix::Constant(1, 1, 0.5)), std::invalid_argument);
  EXPECT_NO_THROW(ErrorLaw(Matrix::Constant(1, 1, -0.5)));
}
