#pragma once

#include <cstdint>
#include <vector>

#include "msj/model.hpp"

namespace msj {

enum class SimMode {
  /// Inexhaustible queue; job classes are drawn only when they matter.
  kSaturated,
  /// Poisson arrivals at rate `lambda`.
  kOpen,
};

struct SimConfig {
  MsjParams params;
  SimMode mode = SimMode::kSaturated;
  double lambda = 0.0;
  std::uint64_t seed = 1;
  /// Statistics cover simulated time (warmup, horizon].
  double warmup = 0.0;
  double horizon = 1.0;
  int batches = 20;
};

/// Throws InvalidParameters on horizon <= warmup, warmup < 0, batches < 2 or
/// a non-positive arrival rate in open mode.
void validate(const SimConfig& config);

/// Config with warmup set to 10% of the horizon.
SimConfig make_config(const MsjParams& params, SimMode mode, double horizon,
                      std::uint64_t seed = 1, double lambda = 0.0);

struct Estimate {
  double mean = 0.0;
  /// Batch-means standard error.
  double std_error = 0.0;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct SimStats {
  Estimate throughput;
  /// Open mode only: time from arrival to departure.
  Estimate mean_response_time;
  /// Open mode only: time-average number of waiting jobs.
  Estimate mean_queue_length;
  /// Open mode only: least-squares slope of batch queue lengths (jobs/time).
  Estimate queue_growth_rate;
  /// Time-average idle servers over the whole run.
  double time_avg_wastage_saturated = 0.0;
  /// Time-average idle servers while the queue is nonempty.
  double time_avg_wastage_conditional = 0.0;
  /// Fraction of time with a nonempty queue.
  double queue_nonempty_fraction = 0.0;

  std::uint64_t completions_class1 = 0;
  std::uint64_t completions_class2 = 0;
  /// Arrivals and departures processed, warmup included.
  std::uint64_t events = 0;
  std::uint64_t final_queue_length = 0;
  std::vector<double> batch_queue_length;

  /// Saturated mode: time fraction spent in each StateSpace position.
  std::vector<double> state_occupancy;
  /// Saturated mode: visits to states outside the enumerated state space.
  std::uint64_t off_list_visits = 0;
  /// Fraction of time with a waiting job while >= n1 servers are idle.
  double blocked_idle_fraction = 0.0;
  /// Times a waiting job sat idle capacity without being a blocking class-2
  /// job. FCFS admission keeps this at zero.
  std::uint64_t conservation_violations = 0;

  friend bool operator==(const SimStats&, const SimStats&) = default;
};

/// Event-driven FCFS simulation. Deterministic for a given config.
SimStats simulate(const SimConfig& config);

struct EmpiricalOptions {
  std::uint64_t seed = 7;
  /// Approximate number of events per simulated run.
  double events_per_run = 2e6;
  int batches = 40;
  int max_runs = 24;
};

struct EmpiricalInterval {
  /// Interval that contains lambda* given the verdict resolution.
  double lo = 0.0;
  double hi = 0.0;
  /// Largest rate judged stable and smallest judged unstable.
  double stable_rate = 0.0;
  double unstable_rate = 0.0;
  int runs = 0;
  /// False when bisection stopped on an inconclusive verdict.
  bool converged = false;
};

enum class EmpiricalVerdict { kStable, kUnstable, kInconclusive };

/// Judges a single open-mode run from its queue growth rate. A run is
/// unstable when the slope exceeds `resolution` by three standard errors,
/// stable when it is three standard errors below `resolution`.
EmpiricalVerdict judge_queue_growth(const SimStats& stats, double resolution);

/// Brackets lambda* by bisection over simulated open-mode verdicts. The
/// relative `tolerance` sets both the target width and the drift
/// resolution (tolerance * lambda / 4); the interval is widened by that
/// resolution on the stable side so that it still holds lambda*.
EmpiricalInterval estimate_lambda_star_empirical(const MsjParams& params, double tolerance,
                                                 const EmpiricalOptions& options = {});

}  // namespace msj
