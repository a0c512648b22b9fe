#include <gtest/gtest.h>

#include <cmath>

#include "msj/saturated.hpp"
#include "msj/simulator.hpp"
#include "msj/stability.hpp"

namespace msj {
namespace {

const MsjParams kTiny{1, 2, 2, 1.0, 1.0, 0.5};
const MsjParams k31030{3, 10, 30, 1.0, 0.5, 0.7};

TEST(SimConfig, Validation) {
  SimConfig c = make_config(kTiny, SimMode::kSaturated, 100.0);
  EXPECT_DOUBLE_EQ(c.warmup, 10.0);
  EXPECT_NO_THROW(validate(c));
  c.warmup = 200.0;
  EXPECT_THROW(validate(c), InvalidParameters);
  c = make_config(kTiny, SimMode::kOpen, 100.0);
  EXPECT_THROW(validate(c), InvalidParameters);
  c.lambda = 0.5;
  c.batches = 1;
  EXPECT_THROW(validate(c), InvalidParameters);
  c.batches = 10;
  c.params.n1 = 3;
  EXPECT_THROW(simulate(c), InvalidParameters);
}

TEST(Simulate, DeterministicForASeed) {
  const SimConfig c = make_config(k31030, SimMode::kSaturated, 2000.0, 5);
  EXPECT_EQ(simulate(c), simulate(c));
  SimConfig other = c;
  other.seed = 6;
  EXPECT_NE(simulate(c).throughput.mean, simulate(other).throughput.mean);
}

TEST(Simulate, SaturatedThroughputMatchesAnalysis) {
  for (const MsjParams& p : {kTiny, k31030}) {
    const SimStats s = simulate(make_config(p, SimMode::kSaturated, 4e4, 11));
    const double x = lambda_star(p);
    EXPECT_NEAR(s.throughput.mean, x, 3.5 * s.throughput.std_error) << s.throughput.std_error;
    EXPECT_LT(s.throughput.std_error, 0.01 * x);
    EXPECT_EQ(s.off_list_visits, 0u);
    EXPECT_EQ(s.conservation_violations, 0u);
  }
}

TEST(Simulate, OccupancyMatchesTimeAverageDistribution) {
  const CtmcSolution sol = ctmc_steady_state(k31030);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SimStats s = simulate(make_config(k31030, SimMode::kSaturated, 2e4, seed));
    ASSERT_EQ(s.state_occupancy.size(), sol.dist.size());
    double tv = 0.0;
    for (std::size_t i = 0; i < sol.dist.size(); ++i) {
      tv += std::abs(s.state_occupancy[i] - sol.dist[i]);
    }
    EXPECT_LT(0.5 * tv, 0.01) << "seed " << seed;
    EXPECT_NEAR(s.time_avg_wastage_saturated, saturated_wastage(k31030), 0.1);
  }
}

TEST(Simulate, SaturatedSystemShowsBlockedIdleServers) {
  const SimStats s = simulate(make_config(k31030, SimMode::kSaturated, 5e3, 3));
  EXPECT_GT(s.blocked_idle_fraction, 0.0);
  EXPECT_DOUBLE_EQ(s.queue_nonempty_fraction, 1.0);
}

TEST(Simulate, OpenModeBelowAndAboveThreshold) {
  const double x = lambda_star(kTiny);
  const SimStats low = simulate(make_config(kTiny, SimMode::kOpen, 4e4, 2, 0.7 * x));
  const SimStats high = simulate(make_config(kTiny, SimMode::kOpen, 4e4, 2, 1.3 * x));
  EXPECT_NEAR(low.throughput.mean, 0.7 * x, 4.0 * low.throughput.std_error + 1e-3);
  EXPECT_LT(low.final_queue_length, 200u);
  EXPECT_GT(high.final_queue_length, 0.2 * x * 0.9 * 4e4);
  EXPECT_NEAR(high.queue_growth_rate.mean, 0.3 * x, 0.1 * x);
  EXPECT_NEAR(high.throughput.mean, x, 4.0 * high.throughput.std_error + 0.01);
  EXPECT_EQ(low.conservation_violations, 0u);
  EXPECT_EQ(high.conservation_violations, 0u);
  EXPECT_EQ(judge_queue_growth(low, 0.01 * x), EmpiricalVerdict::kStable);
  EXPECT_EQ(judge_queue_growth(high, 0.01 * x), EmpiricalVerdict::kUnstable);
}

TEST(Simulate, LittlesLawInOpenMode) {
  const double lambda = 0.6 * lambda_star(k31030);
  const SimStats s = simulate(make_config(k31030, SimMode::kOpen, 4e4, 9, lambda));
  const double queue_delay = s.mean_queue_length.mean / lambda;
  EXPECT_GT(s.mean_response_time.mean, queue_delay);
}

TEST(Empirical, IntervalContainsThreshold) {
  EmpiricalOptions opts;
  opts.events_per_run = 4e5;
  const EmpiricalInterval iv = estimate_lambda_star_empirical(kTiny, 0.05, opts);
  EXPECT_LE(iv.lo, 8.0 / 7.0);
  EXPECT_GE(iv.hi, 8.0 / 7.0);
  EXPECT_LT(iv.hi - iv.lo, 0.2);
  EXPECT_GT(iv.runs, 1);
}

}  // namespace
}  // namespace msj
