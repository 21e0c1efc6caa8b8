// Acceptance suite. `adrc_acceptance --criterion N` checks one criterion,
// no arguments checks all; each prints one PASS/FAIL line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_support.hpp"
#include "adrc/control.hpp"
#include "adrc/estimation.hpp"
#include "adrc/format.hpp"
#include "adrc/sim.hpp"
#include "adrc/stability.hpp"

using namespace adrc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_double(v); }

Scenario builtin(const std::string& name) { return *builtin_scenario(name); }

std::vector<double> grid(double a, double step, double b) {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((b - a) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(std::round((a + i * step) * 1e12) / 1e12);
  return out;
}

Outcome certificate_at_k() {
  const CertificateProblem p = example1_problem(1.5);
  Theorem2Options opt;
  opt.M = Matrix::Identity(3, 3);
  const StabilityCertificate c = check_theorem2(p.model, p.law, p.L, p.bounds, opt);
  const bool pass = std::abs(c.condition_min_eig - 0.86) <= 0.02 && c.satisfied;
  return {pass, "min_eig=" + fmt(c.condition_min_eig) + " satisfied=" +
                    (c.satisfied ? "true" : "false") + " (expected 0.86 +- 0.02, true)"};
}

Outcome certificate_sweep() {
  const SweepResult r = sweep_certificates(example1_problem, grid(0.1, 0.1, 6.0));
  std::vector<double> sat;
  for (const SweepEntry& e : r.entries) {
    if (e.certificate.satisfied) sat.push_back(e.parameter);
  }
  const std::vector<double> expected = grid(0.8, 0.1, 4.1);
  std::string got = "none";
  if (!sat.empty()) {
    got = "{" + fmt(sat.front()) + ".." + fmt(sat.back()) + "} (" + std::to_string(sat.size()) +
          " points)";
  }
  return {sat == expected, "satisfied=" + got + " (expected {0.8..4.1}, 34 points)"};
}

Outcome observer_poles() {
  double worst1 = 0.0;
  for (double k : {0.5, 1.0, 1.5, 3.0}) {
    const ComplexVector ev = eigenvalues(example1_gain(k).Atilde());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      worst1 = std::max(worst1, std::abs(ev[i] + 3.0 * k));
    }
  }
  double worst2 = 0.0;
  const Matrix l = pendulum_eso_gain(-20.0, {-20.0, -40.0}).L();
  for (double alpha : {0.1, 0.5, 1.0}) {
    const ExtendedModel ext = build_extended(pendulum_fictitious_model(alpha));
    const ComplexVector ev = eigenvalues(ext.Abar - l * ext.Cbar);
    std::vector<double> re;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      worst2 = std::max(worst2, std::abs(ev[i].imag()));
      re.push_back(ev[i].real());
    }
    std::sort(re.begin(), re.end());
    const double target[] = {-40.0, -20.0, -20.0};
    for (int i = 0; i < 3; ++i) worst2 = std::max(worst2, std::abs(re[i] - target[i]));
  }
  return {worst1 <= 1e-9 && worst2 <= 1e-8,
          "first-order max err=" + fmt(worst1) + " pendulum max err=" + fmt(worst2)};
}

Outcome pendulum_a_metrics() {
  Scenario s = builtin("pendulum-a");
  s.tf = 20.0;
  s.dt = 1e-3;
  s.noise.kind = NoiseKind::Off;
  const Metrics m = metrics(run_closed_loop(s), 1, 0.0);
  const bool pass = std::abs(m.iae - 6.71) <= 0.15 * 6.71 && std::abs(m.iv - 0.28) <= 0.2 * 0.28;

  Scenario longer = s;
  longer.tf = 30.0;
  const Metrics m30 = metrics(run_closed_loop(longer), 1, 0.0);
  return {pass, "iae=" + fmt(m.iae) + " iv=" + fmt(m.iv) +
                    " (expected 6.71 +- 15%, 0.28 +- 20%); diagnostic 30 s: iae=" + fmt(m30.iae) +
                    " iv*0.01=" + fmt(m30.iv * 0.01)};
}

Outcome disturbance_rejection() {
  const auto window = std::make_pair(10.0, 20.0);
  const double a = metrics(run_closed_loop(builtin("pendulum-a")), 1, 0.0, window).iae;
  const double b1 = metrics(run_closed_loop(builtin("pendulum-b1")), 1, 0.0, window).iae;
  const double b2 = metrics(run_closed_loop(builtin("pendulum-b2")), 1, 0.0, window).iae;
  return {b1 < 0.25 * a && b2 < 0.25 * a,
          "iae[10,20] A=" + fmt(a) + " B1=" + fmt(b1) + " B2=" + fmt(b2)};
}

Outcome alpha_monotonicity() {
  const std::vector<AlphaSweepRow> rows = alpha_sweep(builtin("pendulum-b2"), grid(0.1, 0.1, 1.0));
  int violations = 0;
  bool small = true;
  std::ostringstream trend;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    trend << (i ? "," : "") << fmt(rows[i].b2.iae);
    if (i == 0) continue;
    const double prev = rows[i - 1].b2.iae, cur = rows[i].b2.iae;
    if (cur < prev) {
      ++violations;
      if (prev - cur > 0.05 * prev) small = false;
    }
  }
  return {violations <= 1 && small,
          "B2 iae=[" + trend.str() + "] violations=" + std::to_string(violations)};
}

Outcome observer_bound_empirical() {
  const Scenario s = builtin("example1");
  const SimulationTrace tr = run_closed_loop(s);
  const FirstOrderPlant plant;
  const CertificateProblem p = example1_problem(s.observer_k);
  const LipschitzBounds& b = p.bounds;
  const double settle = 5.0;

  double max_xdot = 0.0, max_udot = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const TraceRecord& r = tr.records[i];
    if (r.t < settle) continue;
    max_xdot = std::max(max_xdot, plant.derivative(r.t, r.x, r.u).cwiseAbs().maxCoeff());
    if (i > 0) {
      max_udot = std::max(max_udot, (r.u - tr.records[i - 1].u).cwiseAbs().maxCoeff() / tr.dt);
    }
  }
  const double c_wdot = b.l_dw_w0 * b.c_w0_dot + b.l_dw_x * max_xdot + b.l_dw_u * max_udot;
  const ObserverGain g = example1_gain(s.observer_k);
  const double bound =
      lemma1_bound(g.Atilde(), Matrix::Identity(2, 2), g.L(), p.model.Pi(), c_wdot, 0.0);

  double worst = 0.0;
  for (const TraceRecord& r : tr.records) {
    if (r.t < settle) continue;
    Vector err(2);
    err << r.x[0] - r.xhat[0], r.w_true[0] - r.what[0];
    worst = std::max(worst, err.norm());
  }
  return {worst <= bound, "max |dx| for t>=5: " + fmt(worst) + " bound=" + fmt(bound) +
                              " (c_wdot=" + fmt(c_wdot) + ")"};
}

Outcome lyapunov_suite() {
  std::mt19937_64 rng(20240601);
  double worst_res = 0.0, worst_rel = 0.0, worst_oracle = 0.0;
  bool all_pd = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 8;
    const Matrix h = testing::random_hurwitz(rng, d);
    const Matrix m = testing::random_spd(rng, d);
    const Matrix n = solve_lyapunov(h, m);
    const Matrix oracle = testing::lyapunov_oracle(h, m);
    const double scale = m.norm() * std::max(1.0, n.norm());
    const double res = (h.transpose() * n + n * h + 2.0 * m).norm();
    worst_res = std::max(worst_res, res);
    worst_rel = std::max(worst_rel, res / scale);
    worst_oracle = std::max(worst_oracle, (n - oracle).norm() / std::max(1.0, oracle.norm()));
    all_pd = all_pd && is_positive_definite(n);
  }
  return {worst_res <= 1e-9 && worst_oracle <= 1e-10 && all_pd,
          "max residual=" + fmt(worst_res) + " (relative " + fmt(worst_rel) +
              ") max oracle gap=" + fmt(worst_oracle) + " all positive definite=" + (all_pd ? "true" : "false")};
}

Outcome canonical_bias() {
  const NominalLinearModel m(Matrix{{0.0, 1.0}, {0.0, 0.0}}, Matrix{{0.0}, {1.0}},
                             Matrix::Identity(2, 2), Matrix(), Matrix{{0.0}, {1.0}}, Matrix());
  const ErrorLaw law(Matrix{{0.0, 1.0}, {-2.0, -2.0}});
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Vector xr(2), xh(2);
    xr << d(rng), d(rng);
    xh << d(rng), d(rng);
    const Vector wh = Vector::Constant(1, d(rng));
    // Canonical reference: the first row of fr repeats the chain integrator.
    Vector fr(2);
    fr << xr[1], d(rng);
    worst = std::max(worst, control_bias(m, law, fr, xh, wh, xr).norm());
  }
  return {worst <= 1e-12, "max |bias|=" + fmt(worst)};
}

Outcome rk4_order() {
  auto f = [](double, const Vector& x) { return Vector(-x); };
  auto err = [&](int n) {
    const double dt = 1.0 / n;
    Vector x = Vector::Ones(1);
    for (int i = 0; i < n; ++i) x = rk4_step(f, i * dt, x, dt);
    return std::abs(x[0] - std::exp(-1.0));
  };
  std::vector<int> steps = {5, 10, 20, 40};
  std::vector<double> lx, ly;
  for (int n : steps) {
    lx.push_back(std::log(1.0 / n));
    ly.push_back(std::log(err(n)));
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4.0;
  const double my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 4; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  return {std::abs(slope - 4.0) <= 0.2, "slope=" + fmt(slope)};
}

Outcome example1_closed_loop() {
  Scenario s = builtin("example1");
  const SimulationTrace clean = run_closed_loop(s);
  const double final_err = std::abs(clean.records.back().x[0] - 1.0);

  s.noise.kind = NoiseKind::GaussianTruncated;
  const SimulationTrace noisy = run_closed_loop(s);
  double lo = 1e300, hi = -1e300;
  for (const TraceRecord& r : noisy.records) {
    if (r.t < 5.0) continue;
    lo = std::min(lo, r.x[0]);
    hi = std::max(hi, r.x[0]);
  }
  return {final_err < 0.05 && lo >= 0.8 && hi <= 1.2,
          "|x(15)-1|=" + fmt(final_err) + " noisy x range for t>=5: [" + fmt(lo) + "," + fmt(hi) +
              "]"};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"certificate at k=1.5", certificate_at_k},
      {"certificate sweep over k", certificate_sweep},
      {"observer pole placement", observer_poles},
      {"pendulum controller A metrics", pendulum_a_metrics},
      {"disturbance rejection B.I/B.II vs A", disturbance_rejection},
      {"alpha-sweep monotonicity", alpha_monotonicity},
      {"observer error bound", observer_bound_empirical},
      {"Lyapunov solver properties", lyapunov_suite},
      {"canonical model has zero bias", canonical_bias},
      {"RK4 convergence order", rk4_order},
      {"first-order closed loop", example1_closed_loop},
  };
  return all;
}

bool run_one(int index) {
  const Criterion& c = criteria()[static_cast<std::size_t>(index - 1)];
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream time;
  time.precision(3);
  time << secs;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << index << " (" << c.name
            << "): " << o.detail << " [" << time.str() << " s]\n";
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const int count = static_cast<int>(criteria().size());
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      const int n = std::atoi(argv[++i]);
      if (n < 1 || n > count) {
        std::cerr << "criterion must be in 1.." << count << '\n';
        return 2;
      }
      which.push_back(n);
    } else {
      std::cerr << "usage: adrc_acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (which.empty()) {
    for (int i = 1; i <= count; ++i) which.push_back(i);
  }
  bool ok = true;
  for (int n : which) ok = run_one(n) && ok;
  return ok ? 0 : 1;
}
