#include "adrc_cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "adrc/format.hpp"
#include "adrc/scenario_config.hpp"
#include "adrc/sim.hpp"
#include "adrc/stability.hpp"

namespace adrc::cli {

namespace fs = std::filesystem;

std::vector<double> parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
    throw std::invalid_argument("grid must look like A:STEP:B, got '" + text + "'");
  }
  double a = 0.0, step = 0.0, b = 0.0;
  if (!parse_double(text.substr(0, c1), a) || !parse_double(text.substr(c1 + 1, c2 - c1 - 1), step) ||
      !parse_double(text.substr(c2 + 1), b)) {
    throw std::invalid_argument("grid must look like A:STEP:B, got '" + text + "'");
  }
  if (!(step > 0.0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("grid needs STEP > 0 and B >= A");
  }
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    grid.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return grid;
}

namespace {

Scenario resolve_scenario(const std::string& target) {
  if (auto s = builtin_scenario(target)) return *s;
  if (fs::is_regular_file(target)) return load_scenario_file(target);
  std::string names;
  for (const auto& n : builtin_names()) names += " " + n;
  throw std::invalid_argument("unknown scenario '" + target + "' (builtins:" + names + ")");
}

void apply_overrides(Scenario& s, const CommonOptions& opts) {
  if (opts.seed) s.noise.seed = *opts.seed;
  if (opts.dt) s.dt = *opts.dt;
  if (opts.horizon) s.tf = s.t0 + *opts.horizon;
  s.validate();
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::ofstream f(fs::path(dir) / name);
  if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
  f << body;
}

void write_trace(const std::string& dir, const SimulationTrace& trace) {
  std::ofstream f(fs::path(dir) / "trace.csv");
  if (!f) throw std::runtime_error("cannot write trace.csv in " + dir);
  write_trace_csv(trace, f);
}

// IAE/IV target: x₂ against 0 for the pendulum, x against the step for the
// first-order example.
Metrics scenario_metrics(const Scenario& s, const SimulationTrace& trace) {
  if (s.plant == PlantKind::Pendulum) return metrics(trace, 1, 0.0);
  return metrics(trace, 0, s.reference_step);
}

}  // namespace

int cmd_run(const std::string& target, const CommonOptions& opts, std::ostream& out,
            std::ostream& err) {
  Scenario s;
  try {
    s = resolve_scenario(target);
    apply_overrides(s, opts);
    ensure_dir(opts.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    const SimulationTrace trace = run_closed_loop(s);
    const std::string report = metrics_report(scenario_metrics(s, trace));
    if (!opts.out_dir.empty()) {
      write_trace(opts.out_dir, trace);
      write_file(opts.out_dir, "metrics.txt", report);
      write_file(opts.out_dir, "scenario.ini", dump_scenario_config(s));
    }
    out << report;
    return kExitOk;
  } catch (const SimulationFailure& e) {
    if (!opts.out_dir.empty()) write_trace(opts.out_dir, e.partial_trace());
    err << "simulation failed: " << e.what() << '\n';
    return kExitSimulation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_certify(const std::string& target, std::optional<double> k,
                std::optional<std::string> k_grid, const CommonOptions& opts, std::ostream& out,
                std::ostream& err) {
  CertificateFamily family;
  double default_k = 1.5;
  try {
    if (target == "example1") {
      family = example1_problem;
    } else {
      const Scenario s = resolve_scenario(target);
      if (s.model != ModelKind::FirstOrder || s.estimator != EstimatorKind::Eso) {
        throw std::invalid_argument("certificates need a first-order model with an ESO");
      }
      const double observer_k = s.observer_k;
      default_k = s.k;
      family = [observer_k](double kk) {
        CertificateProblem p = example1_problem(kk);
        p.L = example1_gain(observer_k).L();
        return p;
      };
    }
    if (k && k_grid) throw std::invalid_argument("--k and --k-grid are exclusive");
    ensure_dir(opts.out_dir);

    std::ostringstream report;
    if (k_grid) {
      const SweepResult sweep = sweep_certificates(family, parse_grid(*k_grid));
      for (const SweepEntry& e : sweep.entries) {
        report << "k=" << format_double(e.parameter)
               << " min_eig=" << format_double(e.certificate.condition_min_eig)
               << " satisfied=" << (e.certificate.satisfied ? "true" : "false") << '\n';
      }
      if (sweep.satisfied_interval) {
        report << "satisfied_interval=[" << format_double(sweep.satisfied_interval->first) << ','
               << format_double(sweep.satisfied_interval->second) << "]\n";
      } else {
        report << "satisfied_interval=none\n";
      }
    } else {
      const CertificateProblem p = family(k.value_or(default_k));
      report << certificate_report(check_theorem2(p.model, p.law, p.L, p.bounds));
    }
    if (!opts.out_dir.empty()) write_file(opts.out_dir, "certificate.txt", report.str());
    out << report.str();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_sweep(const std::string& target, std::optional<std::string> alpha_grid,
              const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  Scenario base;
  std::vector<double> alphas;
  try {
    if (target == "pendulum-alpha") {
      base = *builtin_scenario("pendulum-b2");
    } else {
      base = resolve_scenario(target);
      if (base.plant != PlantKind::Pendulum) {
        throw std::invalid_argument("alpha sweeps need a pendulum scenario");
      }
    }
    apply_overrides(base, opts);
    alphas = parse_grid(alpha_grid.value_or("0.1:0.1:1.0"));
    for (double a : alphas) {
      if (!(a > 0.0) || a > 1.0) throw std::invalid_argument("alpha must lie in (0, 1]");
    }
    ensure_dir(opts.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    std::ostringstream table;
    table << "alpha,iae_b1,iv_b1,iae_b2,iv_b2\n";
    for (const AlphaSweepRow& r : alpha_sweep(base, alphas)) {
      table << format_double(r.alpha) << ',' << format_double(r.b1.iae) << ','
            << format_double(r.b1.iv) << ',' << format_double(r.b2.iae) << ','
            << format_double(r.b2.iv) << '\n';
    }
    if (!opts.out_dir.empty()) write_file(opts.out_dir, "alpha_sweep.csv", table.str());
    out << table.str();
    return kExitOk;
  } catch (const SimulationFailure& e) {
    err << "simulation failed: " << e.what() << '\n';
    return kExitSimulation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Active disturbance rejection control experiments"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string target;
  std::optional<double> k;
  std::optional<std::string> k_grid;
  std::optional<std::string> alpha_grid;
  std::optional<unsigned long long> seed;
  std::optional<double> dt;
  std::optional<double> horizon;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", opts.out_dir, "Output directory");
    sub->add_option("--seed", seed, "Noise seed");
    sub->add_option("--dt", dt, "Integration step [s]");
    sub->add_option("--horizon", horizon, "Simulated duration [s]");
  };

  CLI::App* run = app.add_subcommand("run", "Simulate a builtin scenario or config file");
  run->add_option("scenario", target, "Builtin name or config path")->required();
  add_common(run);

  CLI::App* certify = app.add_subcommand("certify", "Check the closed-loop stability certificate");
  certify->add_option("family", target, "Builtin family (example1) or config path")->required();
  certify->add_option("--k", k, "Reference gain");
  certify->add_option("--k-grid", k_grid, "Gain grid A:STEP:B");
  add_common(certify);

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep alpha for controllers B.I and B.II");
  sweep->add_option("family", target, "pendulum-alpha or a pendulum config path")->required();
  sweep->add_option("--alpha-grid", alpha_grid, "Alpha grid A:STEP:B");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  opts.seed = seed;
  opts.dt = dt;
  opts.horizon = horizon;

  if (run->parsed()) return cmd_run(target, opts, out, err);
  if (certify->parsed()) return cmd_certify(target, k, k_grid, opts, out, err);
  return cmd_sweep(target, alpha_grid, opts, out, err);
}

}  // namespace adrc::cli
