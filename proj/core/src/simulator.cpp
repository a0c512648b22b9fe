#include "msj/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <random>

#include "msj/stability.hpp"

namespace msj {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

struct Event {
  double time;
  std::uint64_t seq;
  bool arrival;
  int job_class;
  double arrived_at;
};

struct LaterFirst {
  bool operator()(const Event& x, const Event& y) const {
    if (x.time != y.time) return x.time > y.time;
    return x.seq > y.seq;
  }
};

struct Waiting {
  int job_class;
  double arrived_at;
};

struct BatchTotals {
  std::uint64_t completions = 0;
  double response_sum = 0.0;
  std::uint64_t responses = 0;
  double queue_area = 0.0;
};

Estimate batch_estimate(const std::vector<double>& values) {
  Estimate out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  const auto k = static_cast<double>(values.size());
  out.std_error = std::sqrt(sq / (k - 1.0) / k);
  return out;
}

// Least-squares slope of ys against xs with its standard error.
Estimate slope_estimate(const std::vector<double>& xs, const std::vector<double>& ys) {
  Estimate out;
  const auto k = static_cast<double>(xs.size());
  if (xs.size() < 3) return out;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.mean = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - my - out.mean * (xs[i] - mx);
    ssr += r * r;
  }
  out.std_error = std::sqrt(ssr / (k - 2.0) / sxx);
  return out;
}

class Simulation {
 public:
  explicit Simulation(const SimConfig& config)
      : config_(config),
        params_(config.params),
        space_(config.params),
        rng_(config.seed),
        free_(config.params.n),
        batch_length_((config.horizon - config.warmup) / config.batches),
        batches_(static_cast<std::size_t>(config.batches)) {
    if (config.mode == SimMode::kSaturated) {
      stats_.state_occupancy.assign(space_.size(), 0.0);
    }
  }

  SimStats run() {
    if (config_.mode == SimMode::kOpen) {
      schedule_arrival(0.0);
    }
    admit(0.0);
    while (!events_.empty() && events_.top().time <= config_.horizon) {
      const Event e = events_.top();
      events_.pop();
      advance(e.time);
      ++stats_.events;
      if (e.arrival) {
        queue_.push_back({e.job_class, e.time});
        schedule_arrival(e.time);
      } else {
        complete(e);
      }
      admit(e.time);
    }
    advance(config_.horizon);
    stats_.final_queue_length = queue_.size();
    return finish();
  }

 private:
  int sample_class() { return rng_.uniform() < params_.p1 ? 1 : 2; }
  int demand(int job_class) const { return job_class == 1 ? params_.n1 : params_.n2; }
  double rate(int job_class) const { return job_class == 1 ? params_.mu1 : params_.mu2; }

  void schedule_arrival(double now) {
    const double t = now + rng_.exponential(config_.lambda);
    events_.push({t, seq_++, true, sample_class(), t});
  }

  void start_service(int job_class, double arrived_at, double now) {
    free_ -= demand(job_class);
    (job_class == 1 ? in_service1_ : in_service2_) += 1;
    events_.push({now + rng_.exponential(rate(job_class)), seq_++, false, job_class, arrived_at});
  }

  void complete(const Event& e) {
    free_ += demand(e.job_class);
    (e.job_class == 1 ? in_service1_ : in_service2_) -= 1;
    if (e.time <= config_.warmup) return;
    (e.job_class == 1 ? stats_.completions_class1 : stats_.completions_class2) += 1;
    BatchTotals& batch = batches_[batch_of(e.time)];
    ++batch.completions;
    if (config_.mode == SimMode::kOpen) {
      batch.response_sum += e.time - e.arrived_at;
      ++batch.responses;
    }
  }

  void admit(double now) {
    if (config_.mode == SimMode::kSaturated) {
      // Classes stay unsampled while no job of either class could fit.
      while (free_ >= params_.n1) {
        if (saturated_head_ == 0) saturated_head_ = sample_class();
        if (demand(saturated_head_) > free_) break;
        start_service(saturated_head_, now, now);
        saturated_head_ = 0;
      }
      return;
    }
    while (!queue_.empty() && demand(queue_.front().job_class) <= free_) {
      start_service(queue_.front().job_class, queue_.front().arrived_at, now);
      queue_.pop_front();
    }
  }

  std::size_t batch_of(double t) const {
    const auto i = static_cast<std::size_t>((t - config_.warmup) / batch_length_);
    return std::min(i, batches_.size() - 1);
  }

  bool queue_nonempty() const {
    return config_.mode == SimMode::kSaturated || !queue_.empty();
  }

  int head_class() const {
    if (config_.mode == SimMode::kSaturated) return saturated_head_;
    return queue_.empty() ? 0 : queue_.front().job_class;
  }

  SaturatedState saturated_state() const {
    return {saturated_head_ == 2 && free_ >= params_.n1 ? 1 : 0, in_service1_, in_service2_};
  }

  // Accounts for the state held on (clock_, t].
  void advance(double t) {
    if (config_.mode == SimMode::kSaturated && t > clock_ &&
        !space_.index_of(saturated_state())) {
      ++stats_.off_list_visits;
    }
    const double lo = std::max(clock_, config_.warmup);
    const double hi = std::min(t, config_.horizon);
    if (hi > lo) {
      const double dt = hi - lo;
      measured_ += dt;
      idle_area_ += dt * free_;
      if (queue_nonempty()) {
        nonempty_time_ += dt;
        idle_nonempty_area_ += dt * free_;
        if (free_ >= params_.n1) {
          blocked_idle_time_ += dt;
          if (head_class() != 2 || free_ >= params_.n2) ++stats_.conservation_violations;
        }
      }
      if (config_.mode == SimMode::kSaturated) {
        if (auto idx = space_.index_of(saturated_state())) stats_.state_occupancy[*idx] += dt;
      } else {
        // Queue area split across batch boundaries.
        double from = lo;
        while (from < hi) {
          const std::size_t b = batch_of(from);
          const double edge =
              b + 1 == batches_.size() ? hi
                                       : std::min(hi, config_.warmup + (b + 1) * batch_length_);
          batches_[b].queue_area += (edge - from) * static_cast<double>(queue_.size());
          if (edge <= from) break;
          from = edge;
        }
      }
    }
    clock_ = t;
  }

  SimStats finish() {
    std::vector<double> rates;
    std::vector<double> responses;
    std::vector<double> queues;
    std::vector<double> mids;
    for (std::size_t b = 0; b < batches_.size(); ++b) {
      const BatchTotals& batch = batches_[b];
      rates.push_back(static_cast<double>(batch.completions) / batch_length_);
      if (batch.responses > 0) {
        responses.push_back(batch.response_sum / static_cast<double>(batch.responses));
      }
      if (config_.mode == SimMode::kOpen) {
        queues.push_back(batch.queue_area / batch_length_);
        mids.push_back(config_.warmup + (static_cast<double>(b) + 0.5) * batch_length_);
      }
    }
    stats_.throughput = batch_estimate(rates);
    stats_.mean_response_time = batch_estimate(responses);
    stats_.mean_queue_length = batch_estimate(queues);
    stats_.queue_growth_rate = slope_estimate(mids, queues);
    stats_.batch_queue_length = queues;
    if (measured_ > 0.0) {
      stats_.time_avg_wastage_saturated = idle_area_ / measured_;
      stats_.queue_nonempty_fraction = nonempty_time_ / measured_;
      stats_.blocked_idle_fraction = blocked_idle_time_ / measured_;
      for (double& occ : stats_.state_occupancy) occ /= measured_;
    }
    if (nonempty_time_ > 0.0) stats_.time_avg_wastage_conditional = idle_nonempty_area_ / nonempty_time_;
    return stats_;
  }

  SimConfig config_;
  MsjParams params_;
  StateSpace space_;
  Rng rng_;
  std::priority_queue<Event, std::vector<Event>, LaterFirst> events_;
  std::uint64_t seq_ = 0;
  std::deque<Waiting> queue_;
  int saturated_head_ = 0;
  int free_;
  int in_service1_ = 0;
  int in_service2_ = 0;
  double clock_ = 0.0;
  double batch_length_;
  std::vector<BatchTotals> batches_;

  double measured_ = 0.0;
  double idle_area_ = 0.0;
  double nonempty_time_ = 0.0;
  double idle_nonempty_area_ = 0.0;
  double blocked_idle_time_ = 0.0;
  SimStats stats_;
};

}  // namespace

void validate(const SimConfig& config) {
  validate(config.params);
  if (!(config.warmup >= 0.0)) throw InvalidParameters("warmup must be >= 0");
  if (!(config.horizon > config.warmup) || !std::isfinite(config.horizon)) {
    throw InvalidParameters("horizon must be finite and exceed warmup");
  }
  if (config.batches < 2) throw InvalidParameters("batches must be >= 2");
  if (config.mode == SimMode::kOpen && (!(config.lambda > 0.0) || !std::isfinite(config.lambda))) {
    throw InvalidParameters("open mode needs a positive arrival rate");
  }
}

SimConfig make_config(const MsjParams& params, SimMode mode, double horizon, std::uint64_t seed,
                      double lambda) {
  SimConfig config;
  config.params = params;
  config.mode = mode;
  config.lambda = lambda;
  config.seed = seed;
  config.horizon = horizon;
  config.warmup = 0.1 * horizon;
  config.batches = 20;
  return config;
}

SimStats simulate(const SimConfig& config) {
  validate(config);
  return Simulation(config).run();
}

EmpiricalVerdict judge_queue_growth(const SimStats& stats, double resolution) {
  const Estimate& g = stats.queue_growth_rate;
  if (g.mean - 3.0 * g.std_error > resolution) return EmpiricalVerdict::kUnstable;
  if (g.mean + 3.0 * g.std_error < resolution) return EmpiricalVerdict::kStable;
  return EmpiricalVerdict::kInconclusive;
}

EmpiricalInterval estimate_lambda_star_empirical(const MsjParams& params, double tolerance,
                                                 const EmpiricalOptions& options) {
  validate(params);
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw InvalidParameters("tolerance must lie in (0, 1)");
  }

  EmpiricalInterval out;
  std::uint64_t seed = options.seed;
  auto verdict_at = [&](double lambda) {
    // Arrivals plus departures run at about 2 lambda events per unit time.
    SimConfig config =
        make_config(params, SimMode::kOpen, options.events_per_run / (2.0 * lambda), seed++, lambda);
    config.batches = options.batches;
    ++out.runs;
    return judge_queue_growth(simulate(config), tolerance * lambda / 4.0);
  };

  // lambda* <= lambda_naive, so a rate just above it must look unstable.
  double stable = 0.0;
  double unstable = lambda_naive(params) * (1.0 + 2.0 * tolerance);
  while (out.runs < options.max_runs) {
    const EmpiricalVerdict v = verdict_at(unstable);
    if (v == EmpiricalVerdict::kUnstable) break;
    if (v == EmpiricalVerdict::kStable) stable = unstable;
    unstable *= 1.5;
  }

  out.converged = true;
  while (unstable - stable > tolerance * unstable) {
    if (out.runs >= options.max_runs) {
      out.converged = false;
      break;
    }
    const double mid = 0.5 * (stable + unstable);
    const EmpiricalVerdict v = verdict_at(mid);
    if (v == EmpiricalVerdict::kInconclusive) {
      out.converged = false;
      break;
    }
    (v == EmpiricalVerdict::kStable ? stable : unstable) = mid;
  }

  out.stable_rate = stable;
  out.unstable_rate = unstable;
  out.lo = std::max(0.0, stable - tolerance * stable / 4.0);
  out.hi = unstable;
  return out;
}

}  // namespace msj
