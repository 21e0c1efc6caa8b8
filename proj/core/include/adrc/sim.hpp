#pragma once

// Fixed-step closed-loop simulation: plant, observer and reference are
// co-integrated with RK4 while control and measurement are held over each
// step. Also holds the reproducible noise source and the IAE/IV metrics.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adrc/numkernel.hpp"

namespace adrc {

using DerivativeRule = std::function<Vector(double, const Vector&)>;

// Classical fourth-order Runge-Kutta step.
Vector rk4_step(const DerivativeRule& f, double t, const Vector& x, double dt);

// 64-bit LCG (Knuth's MMIX constants).
struct Rng {
  std::uint64_t state = 0;

  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  // Advances and returns a uniform draw in (0, 1].
  double next_uniform();
};

struct GaussianDraw {
  Rng stream;
  double value = 0.0;
};

// Box-Muller draw with the given variance, clamped to [-bound, bound].
GaussianDraw gaussian_truncated(Rng stream, double variance, double bound);

enum class PlantKind { FirstOrder, Pendulum };
enum class ModelKind { FirstOrder, PendulumFictitious };
enum class EstimatorKind { None, Type1, Eso };
enum class ControllerKind { A, B1, B2, GenericLS, Example1 };
enum class NoiseKind { Off, GaussianTruncated };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Off;
  double variance = 0.01;
  double bound = 0.1;
  std::uint64_t seed = 1;
};

struct Scenario {
  PlantKind plant = PlantKind::FirstOrder;
  double disturbance_onset = 10.0;  // pendulum only

  ModelKind model = ModelKind::FirstOrder;
  double alpha = 0.1;  // pendulum fictitious model only

  EstimatorKind estimator = EstimatorKind::Eso;
  double observer_k = 1.5;                              // first-order ESO gain parameter
  std::vector<double> poles = {-20.0, -20.0, -40.0};    // pendulum ESO poles
  double tau = 0.05;                                    // Type-I filter time constant

  ControllerKind controller = ControllerKind::Example1;
  double k = 1.5;  // first-order reference/error gain
  double k1 = 2.0;
  double k2 = 2.0;
  double umax = 5.0;

  double reference_step = 1.0;  // first-order step amplitude
  Vector xr0;                   // empty: 0 for first-order, x0 for pendulum

  Vector x0;
  Vector xhat0;  // extended estimate; empty means zero

  double t0 = 0.0;
  double tf = 15.0;
  double dt = 1e-3;

  NoiseSpec noise;

  // Throws std::invalid_argument describing the first inconsistency.
  void validate() const;
};

struct TraceRecord {
  double t = 0.0;
  Vector x;
  Vector xhat;   // empty without an observer
  Vector what;   // empty without a disturbance estimate
  Vector u;
  Vector y;
  Vector w_true;
};

struct SimulationTrace {
  std::vector<TraceRecord> records;
  double dt = 0.0;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
};

// Thrown when the plant derivative turns non-finite; carries the trace up to
// the failing step.
class SimulationFailure : public std::runtime_error {
 public:
  SimulationFailure(const std::string& what, double time, SimulationTrace partial);
  double time() const noexcept { return time_; }
  const SimulationTrace& partial_trace() const noexcept { return partial_; }

 private:
  double time_;
  SimulationTrace partial_;
};

// Number of grid points in [t0, tf]: floor((tf - t0)/dt) + 1.
std::size_t record_count(double t0, double tf, double dt);

SimulationTrace run_closed_loop(const Scenario& s);

struct Metrics {
  double iae = 0.0;
  double iv = 0.0;
};

// IAE = Σ|x_i - ref|·dt over the records, IV = Σ|u_{i+1} - u_i| (summed over
// input channels). An optional [ta, tb] window restricts both sums to records
// with ta <= t <= tb.
Metrics metrics(const SimulationTrace& trace, int state_index, double reference_value,
                std::optional<std::pair<double, double>> window = std::nullopt);

struct AlphaSweepRow {
  double alpha = 0.0;
  Metrics b1;
  Metrics b2;
};

// Runs controllers B.I and B.II per α (concurrently over the grid) and
// reports IAE/IV of x₂ against zero.
std::vector<AlphaSweepRow> alpha_sweep(const Scenario& base, const std::vector<double>& alphas);

// Built-in benchmark scenarios: example1, pendulum-a, pendulum-b1, pendulum-b2.
std::optional<Scenario> builtin_scenario(const std::string& name);
std::vector<std::string> builtin_names();

// CSV: header then one row per record, doubles in shortest round-trip form.
std::string trace_csv_header(const SimulationTrace& trace);
void write_trace_csv(const SimulationTrace& trace, std::ostream& os);

std::string metrics_report(const Metrics& m);

}  // namespace adrc
