#include "adrc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "adrc/control.hpp"
#include "adrc/estimation.hpp"
#include "adrc/format.hpp"
#include "adrc/model.hpp"

namespace adrc {

Vector rk4_step(const DerivativeRule& f, double t, const Vector& x, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  const Vector k1 = f(t, x);
  const Vector k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Vector k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Vector k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double Rng::next_uniform() {
  state = state * kMultiplier + kIncrement;
  // Top 53 bits, shifted into (0, 1] so the logarithm below is finite.
  return static_cast<double>((state >> 11) + 1) * 0x1.0p-53;
}

GaussianDraw gaussian_truncated(Rng stream, double variance, double bound) {
  if (!(variance > 0.0) || !(bound > 0.0)) {
    throw std::invalid_argument("gaussian_truncated: variance and bound must be positive");
  }
  const double u1 = stream.next_uniform();
  const double u2 = stream.next_uniform();
  const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return {stream, std::clamp(std::sqrt(variance) * g, -bound, bound)};
}

SimulationFailure::SimulationFailure(const std::string& what, double time,
                                     SimulationTrace partial)
    : std::runtime_error(what), time_(time), partial_(std::move(partial)) {}

std::size_t record_count(double t0, double tf, double dt) {
  if (!(dt > 0.0) || !(tf > t0)) throw std::invalid_argument("record_count: bad time grid");
  // The small slack absorbs representation error in (tf - t0)/dt.
  return static_cast<std::size_t>(std::floor((tf - t0) / dt + 1e-9)) + 1;
}

void Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("scenario: " + msg); };
  if (!std::isfinite(t0) || !std::isfinite(tf) || !(tf > t0)) fail("tf must exceed t0");
  if (!std::isfinite(dt) || !(dt > 0.0)) fail("dt must be positive");
  if (!(umax > 0.0)) fail("umax must be positive");

  const bool pend = plant == PlantKind::Pendulum;
  if (pend != (model == ModelKind::PendulumFictitious)) fail("plant and model kinds differ");
  if (pend && (alpha < kMinPendulumAlpha || alpha > kMaxPendulumAlpha)) {
    fail("alpha must lie in [0.05, 1]");
  }
  const Eigen::Index n = pend ? 2 : 1;
  if (x0.size() != n) fail("x0 has wrong dimension");
  if (xhat0.size() != 0 && xhat0.size() != n + 1) fail("xhat0 has wrong dimension");
  if (xr0.size() != 0 && xr0.size() != n) fail("xr0 has wrong dimension");
  if (!all_finite(x0) || !all_finite(xhat0) || !all_finite(xr0)) fail("non-finite initial state");

  switch (controller) {
    case ControllerKind::A:
      if (!pend) fail("controller A needs the pendulum plant");
      if (estimator != EstimatorKind::None) fail("controller A uses no estimator");
      break;
    case ControllerKind::B1:
      if (!pend) fail("controller B1 needs the pendulum plant");
      if (estimator != EstimatorKind::Type1) fail("controller B1 needs the type1 estimator");
      break;
    case ControllerKind::B2:
      if (!pend) fail("controller B2 needs the pendulum plant");
      if (estimator != EstimatorKind::Eso) fail("controller B2 needs the eso estimator");
      break;
    case ControllerKind::Example1:
      if (pend) fail("controller example1 needs the first-order plant");
      if (estimator != EstimatorKind::Eso) fail("controller example1 needs the eso estimator");
      break;
    case ControllerKind::GenericLS:
      if (estimator != EstimatorKind::Eso) fail("controller ls needs the eso estimator");
      break;
  }
  if (estimator == EstimatorKind::Eso) {
    if (pend) {
      if (poles.size() != 3) fail("eso needs three poles");
      for (double p : poles) {
        if (!(p < 0.0)) fail("eso poles must be negative");
      }
    } else if (!(observer_k > 0.0)) {
      fail("observer k must be positive");
    }
  }
  if (estimator == EstimatorKind::Type1 && (!(tau > 0.0) || dt > tau / 5.0)) {
    fail("type1 filters need 0 < dt <= tau/5");
  }
  if (!pend && !(k > 0.0)) fail("k must be positive");
  if (pend && (!(k1 > 0.0) || !(k2 > 0.0))) fail("k1 and k2 must be positive");
  if (noise.kind == NoiseKind::GaussianTruncated &&
      (!(noise.variance > 0.0) || !(noise.bound > 0.0))) {
    fail("noise variance and bound must be positive");
  }
}

namespace {

struct Assembly {
  std::unique_ptr<Plant> plant;
  NominalLinearModel model;
  ExtendedModel ext;
  std::optional<ObserverGain> gain;
  std::optional<ErrorLaw> law;
  ReferenceModel reference;
};

Assembly assemble(const Scenario& s) {
  const bool pend = s.plant == PlantKind::Pendulum;
  std::unique_ptr<Plant> plant;
  if (pend) {
    plant = std::make_unique<PendulumPlant>(s.disturbance_onset, s.noise.bound);
  } else {
    plant = std::make_unique<FirstOrderPlant>();
  }
  NominalLinearModel model = pend ? pendulum_fictitious_model(s.alpha) : first_order_model();
  ExtendedModel ext = build_extended(model);

  std::optional<ObserverGain> gain;
  if (s.estimator == EstimatorKind::Eso) {
    gain = pend ? pendulum_eso_gain(s.poles[0], {s.poles[1], s.poles[2]})
                : example1_gain(s.observer_k);
  }

  Vector xr0 = s.xr0;
  if (xr0.size() == 0) xr0 = pend ? s.x0 : Vector::Zero(1);
  ReferenceModel reference = pend ? pendulum_reference(s.k1, s.k2, xr0)
                                  : example1_reference(s.k, s.reference_step, xr0[0]);

  std::optional<ErrorLaw> law;
  if (s.controller == ControllerKind::GenericLS) {
    law = pend ? ErrorLaw(reference.Ar()) : ErrorLaw(Matrix::Constant(1, 1, -s.k));
  }
  return Assembly{std::move(plant), std::move(model), std::move(ext), std::move(gain),
                  std::move(law), std::move(reference)};
}

}  // namespace

SimulationTrace run_closed_loop(const Scenario& s) {
  s.validate();
  Assembly a = assemble(s);
  const Plant& plant = *a.plant;
  const int n = plant.state_dim();
  const int m = plant.input_dim();
  const int l = plant.output_dim();
  const int k = a.model.k();
  const bool has_eso = a.gain.has_value();
  const int ne = has_eso ? n + k : 0;
  const int nr = static_cast<int>(a.reference.xr().size());

  const std::size_t count = record_count(s.t0, s.tf, s.dt);
  SimulationTrace trace;
  trace.dt = s.dt;
  trace.records.reserve(count);

  // Stacked integration state [x; x̂̄; xr].
  Vector z(n + ne + nr);
  z.head(n) = s.x0;
  if (has_eso) {
    z.segment(n, ne) = s.xhat0.size() ? s.xhat0 : Vector::Zero(ne);
  }
  z.tail(nr) = a.reference.xr();

  Rng rng{s.noise.seed};
  PendulumGains pg{s.k1, s.k2, s.alpha, s.umax, s.tau};
  ControllerB1State b1 = ControllerB1State::initial(s.tau, s.x0.size() > 1 ? s.x0[1] : 0.0);
  Type1Estimator t1 = Type1Estimator::initial(s.tau, s.x0);
  const Matrix gamma_pinv = a.model.Gamma().colPivHouseholderQr().solve(Matrix::Identity(n, n));
  const SaturationLimits limits{s.umax};
  Vector u_prev = Vector::Zero(m);

  for (std::size_t i = 0; i < count; ++i) {
    const double t = s.t0 + static_cast<double>(i) * s.dt;
    const Vector x = z.head(n);
    Vector v0 = Vector::Zero(l);
    if (s.noise.kind == NoiseKind::GaussianTruncated) {
      for (int j = 0; j < l; ++j) {
        const GaussianDraw g = gaussian_truncated(rng, s.noise.variance, s.noise.bound);
        rng = g.stream;
        v0[j] = g.value;
      }
    }
    const Vector y = plant.measure(t, x, u_prev, v0);

    TraceRecord rec;
    rec.t = t;
    rec.x = x;
    rec.y = y;
    EsoState eso{has_eso ? Vector(z.segment(n, ne)) : Vector()};
    if (has_eso) {
      rec.xhat = eso.xhat(n);
      rec.what = eso.what(n);
    }
    const Vector xr = z.tail(nr);

    Vector u(m);
    switch (s.controller) {
      case ControllerKind::A:
        u[0] = controller_A(y[0], y[1], s.k1, s.k2, s.umax);
        break;
      case ControllerKind::B1: {
        const ControllerB1Step step = controller_B1_step(b1, y[0], y[1], pg, s.dt);
        b1 = step.next;
        u[0] = step.u;
        // Implicit estimate made explicit for logging only.
        const Type1Step est = type1_disturbance_estimate(t1, y, a.model.A(), a.model.B(), u, s.dt);
        t1 = est.next;
        rec.what = gamma_pinv * est.gamma_w;
        break;
      }
      case ControllerKind::B2:
        u[0] = controller_B2(y[0], y[1], rec.what[0], s.k1, s.k2, s.alpha, s.umax);
        break;
      case ControllerKind::Example1:
        u[0] = saturate(example1_control(s.k, a.reference.ur(t)[0], rec.xhat[0], rec.what[0]),
                        limits);
        break;
      case ControllerKind::GenericLS:
        u = saturate(ls_control(a.model, *a.law, a.reference.fr_value(t, xr), rec.xhat,
                                rec.what, xr),
                     limits);
        break;
    }
    rec.u = u;
    rec.w_true = plant.lumped_disturbance(a.model, t, x, u);
    trace.records.push_back(std::move(rec));
    u_prev = u;
    if (i + 1 == count) break;

    const ReferenceModel& ref = a.reference;
    auto rhs = [&](double tt, const Vector& zz) {
      Vector dz(zz.size());
      dz.head(n) = plant.derivative(tt, zz.head(n), u);
      if (has_eso) {
        dz.segment(n, ne) =
            eso_derivative(a.ext, *a.gain, EsoState{zz.segment(n, ne)}, u, y);
      }
      dz.tail(nr) = ref.fr_value(tt, zz.tail(nr));
      return dz;
    };
    try {
      z = rk4_step(rhs, t, z, s.dt);
      if (!all_finite(z)) throw PlantBlowUp(t + s.dt);
    } catch (const PlantBlowUp& e) {
      throw SimulationFailure(e.what(), e.time(), std::move(trace));
    }
  }
  return trace;
}

Metrics metrics(const SimulationTrace& trace, int state_index, double reference_value,
                std::optional<std::pair<double, double>> window) {
  if (trace.empty()) throw std::invalid_argument("metrics: empty trace");
  if (state_index < 0 || state_index >= trace.records.front().x.size()) {
    throw std::invalid_argument("metrics: state index out of range");
  }
  auto inside = [&](double t) {
    return !window || (t >= window->first && t <= window->second);
  };
  Metrics out;
  const TraceRecord* prev = nullptr;
  for (const TraceRecord& r : trace.records) {
    if (!inside(r.t)) continue;
    out.iae += std::abs(r.x[state_index] - reference_value) * trace.dt;
    if (prev) out.iv += (r.u - prev->u).cwiseAbs().sum();
    prev = &r;
  }
  return out;
}

std::vector<AlphaSweepRow> alpha_sweep(const Scenario& base, const std::vector<double>& alphas) {
  for (double alpha : alphas) {
    if (!(alpha > 0.0) || alpha > 1.0) {
      throw std::invalid_argument("alpha_sweep: alpha must lie in (0, 1]");
    }
  }
  auto run_one = [base](double alpha) {
    Scenario b1 = base;
    b1.alpha = alpha;
    b1.controller = ControllerKind::B1;
    b1.estimator = EstimatorKind::Type1;
    Scenario b2 = base;
    b2.alpha = alpha;
    b2.controller = ControllerKind::B2;
    b2.estimator = EstimatorKind::Eso;
    return AlphaSweepRow{alpha, metrics(run_closed_loop(b1), 1, 0.0),
                         metrics(run_closed_loop(b2), 1, 0.0)};
  };
  std::vector<std::future<AlphaSweepRow>> jobs;
  jobs.reserve(alphas.size());
  for (double alpha : alphas) jobs.push_back(std::async(std::launch::async, run_one, alpha));
  std::vector<AlphaSweepRow> rows;
  rows.reserve(alphas.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

std::optional<Scenario> builtin_scenario(const std::string& name) {
  if (name == "example1") {
    Scenario s;
    s.x0 = Vector::Zero(1);
    return s;
  }
  Scenario p;
  p.plant = PlantKind::Pendulum;
  p.model = ModelKind::PendulumFictitious;
  p.alpha = 0.1;
  p.x0 = Vector(2);
  p.x0 << -std::numbers::pi / 3.0, 0.0;
  p.tf = 20.0;
  if (name == "pendulum-a") {
    p.estimator = EstimatorKind::None;
    p.controller = ControllerKind::A;
    return p;
  }
  if (name == "pendulum-b1") {
    p.estimator = EstimatorKind::Type1;
    p.controller = ControllerKind::B1;
    return p;
  }
  if (name == "pendulum-b2") {
    p.estimator = EstimatorKind::Eso;
    p.controller = ControllerKind::B2;
    return p;
  }
  return std::nullopt;
}

std::vector<std::string> builtin_names() {
  return {"example1", "pendulum-a", "pendulum-b1", "pendulum-b2"};
}

std::string trace_csv_header(const SimulationTrace& trace) {
  if (trace.empty()) return "t";
  const TraceRecord& r = trace.records.front();
  std::string h = "t";
  auto add = [&h](const char* prefix, Eigen::Index count) {
    for (Eigen::Index i = 1; i <= count; ++i) h += std::string(",") + prefix + std::to_string(i);
  };
  add("x", r.x.size());
  add("xhat", r.xhat.size());
  add("what", r.what.size());
  add("u", r.u.size());
  add("y", r.y.size());
  add("w_true", r.w_true.size());
  return h;
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& os) {
  os << trace_csv_header(trace) << '\n';
  for (const TraceRecord& r : trace.records) {
    os << format_double(r.t);
    for (const Vector* v : {&r.x, &r.xhat, &r.what, &r.u, &r.y, &r.w_true}) {
      for (Eigen::Index i = 0; i < v->size(); ++i) os << ',' << format_double((*v)[i]);
    }
    os << '\n';
  }
}

std::string metrics_report(const Metrics& m) {
  return "iae=" + format_double(m.iae) + "\niv=" + format_double(m.iv) + "\n";
}

}  // namespace adrc
