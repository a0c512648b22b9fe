// Acceptance gate. Prints one [PASS]/[FAIL] line per criterion; tolerances
// are fixed here and not configurable.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "msj/rm.hpp"
#include "msj/saturated.hpp"
#include "msj/simulator.hpp"
#include "msj/stability.hpp"
#include "oracles.hpp"

namespace {

using namespace msj;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(i == count - 1 ? hi
                                 : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i /
                                                               (count - 1)));
  }
  out.front() = lo;
  return out;
}

std::vector<double> lin_grid(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1));
  return out;
}

Outcome product_form() {
  testing::ParamGenerator gen(1001, 60);
  double worst_diff = 0.0;
  double worst_balance = 0.0;
  const int sets = 200;
  for (int i = 0; i < sets; ++i) {
    const MsjParams p = gen.next();
    const StateSpace space(p);
    const TransitionMatrix tm = transition_matrix(space);
    const Distribution pi = embedded_steady_state(space);
    const Distribution dense = solve_dtmc_oracle(tm);
    for (std::size_t k = 0; k < pi.size(); ++k) {
      worst_diff = std::max(worst_diff, std::abs(pi[k] - dense[k]));
    }
    worst_balance = std::max(worst_balance, verify_balance(tm, pi, p).max_residual());
  }
  Outcome o;
  o.require(worst_diff < 1e-9, "max |pi - oracle| " + fmt("%.3g", worst_diff) + " < 1e-9");
  o.require(worst_balance < 1e-10, "max balance residual " + fmt("%.3g", worst_balance) + " < 1e-10");
  o.detail += " over " + std::to_string(sets) + " sets";
  return o;
}

Outcome ctmc_throughput() {
  Outcome o;
  const double x = lambda_star({1, 2, 2, 1.0, 1.0, 0.5});
  o.require(std::abs(x - 8.0 / 7.0) <= 1e-12, "X = " + fmt("%.17g", x) + " vs 8/7 to 1e-12");
  testing::ParamGenerator gen(1002, 60);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) worst = std::max(worst, ctmc_balance_residual(gen.next()));
  o.require(worst < 1e-10, "CTMC residual " + fmt("%.3g", worst) + " < 1e-10");
  return o;
}

Outcome cross_model() {
  testing::ParamGenerator gen(1003, 16);
  double worst_model = 0.0;
  double worst_dp = 0.0;
  int instances = 0;
  while (instances < 60) {
    MsjParams p = gen.next();
    p.mu2 = p.mu1;
    const RmParams rm = to_rm(p);
    // Two demand classes: K^n = 2^n.
    if (p.n > 16) continue;
    const double e = rm_throughput_enumerate(rm, 100'000);
    worst_model = std::max(worst_model, std::abs(lambda_star(p) / e - 1.0));
    worst_dp = std::max(worst_dp, std::abs(rm_throughput_dp(rm) / e - 1.0));
    ++instances;
  }
  Outcome o;
  o.require(worst_model <= 1e-9, "two-class vs enumeration rel " + fmt("%.3g", worst_model) + " <= 1e-9");
  o.require(worst_dp <= 1e-10, "recursion vs enumeration rel " + fmt("%.3g", worst_dp) + " <= 1e-10");
  o.detail += " over " + std::to_string(instances) + " instances";
  return o;
}

void check_peak(Outcome& o, const char* label, const MsjParams& base, double peak, double peak_tol,
                double at, double at_tol, double util) {
  const std::vector<double> grid = lin_grid(0.0, 1.0, 512);
  const std::vector<MixRow> rows = sweep_mix(base, grid);
  std::vector<double> w;
  for (const MixRow& r : rows) w.push_back(r.wastage);
  const MixRow& best = rows[argmax(w)];
  o.require(std::abs(best.wastage - peak) <= peak_tol,
            std::string(label) + " peak " + fmt("%.2f", best.wastage) + " = " + fmt("%g", peak) +
                " +- " + fmt("%g", peak_tol));
  o.require(std::abs(best.p2 - at) <= at_tol, std::string(label) + " at p2 " + fmt("%.4f", best.p2) +
                                                  " = " + fmt("%g", at) + " +- " + fmt("%g", at_tol));
  o.require(std::abs(100.0 * best.utilization - util) <= 2.0,
            std::string(label) + " utilization " + fmt("%.1f", 100.0 * best.utilization) + "% = " +
                fmt("%g", util) + " +- 2");
}

Outcome mix_peaks() {
  Outcome o;
  check_peak(o, "(a)", {1, 100, 200, 2.0, 1.0, 0.5}, 77.0, 2.0, 0.064, 0.01, 61.0);
  check_peak(o, "(b)", {1, 200, 200, 2.0, 1.0, 0.5}, 125.0, 2.0, 0.013, 0.005, 37.0);
  return o;
}

Outcome asymptotics() {
  Outcome o;
  MsjParams p{1, 10, 30, 1.0, 1e-5, 0.5};
  const double slow = saturated_wastage(p);
  p.mu2 = 1e5;
  const double fast = saturated_wastage(p);
  const double approx = asymptotic_wastage(p, RatioLimit::kInfinite);
  o.require(slow < 0.01, "ratio 1e-5 wastage " + fmt("%.3g", slow) + " < 0.01");
  o.require(fast >= 7.0 && fast < 10.0, "ratio 1e5 wastage " + fmt("%.4f", fast) + " in [7, 10)");
  o.require(std::abs(fast - approx) <= 1.0, "within 1 of n2 - n1/p2 = " + fmt("%g", approx));
  return o;
}

Outcome scaling() {
  testing::ParamGenerator gen(1006, 60);
  std::vector<MsjParams> sets = {{3, 10, 30, 1.0, 1.0, 0.5}, {1, 67, 201, 1.0, 30.0, 0.5}};
  for (int i = 0; i < 20; ++i) sets.push_back(gen.next());
  double worst_w = 0.0;
  double worst_x = 0.0;
  for (const MsjParams& p : sets) {
    const double w = saturated_wastage(p);
    const double x = lambda_star(p);
    for (double c : {1e-3, 1.0, 1e3}) {
      MsjParams q = p;
      q.mu1 *= c;
      q.mu2 *= c;
      worst_w = std::max(worst_w, std::abs(saturated_wastage(q) - w));
      worst_x = std::max(worst_x, std::abs(lambda_star(q) / (c * x) - 1.0));
    }
  }
  Outcome o;
  o.require(worst_w <= 1e-10, "wastage change " + fmt("%.3g", worst_w) + " <= 1e-10");
  o.require(worst_x <= 1e-12, "X/(cX) - 1 " + fmt("%.3g", worst_x) + " <= 1e-12");
  return o;
}

Outcome monotonicity() {
  const std::vector<double> grid = log_grid(1e-3, 1e3, 400);
  Outcome o;
  {
    const auto rows = sweep_ratio({3, 10, 30, 1.0, 1.0, 0.5}, grid);
    int decreases = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) decreases += rows[i].wastage < rows[i - 1].wastage;
    o.require(decreases == 0, "3-10-30 nondecreasing (" + std::to_string(decreases) + " decreases)");
  }
  {
    const auto rows = sweep_ratio({1, 67, 201, 1.0, 1.0, 0.5}, grid);
    std::vector<double> w;
    for (const RatioRow& r : rows) w.push_back(r.wastage);
    const auto maxima = strict_local_maxima(w);
    std::string where;
    for (std::size_t i : maxima) where += " " + fmt("%.4g", grid[i]);
    o.require(maxima.size() >= 3,
              "1-67-201 strict local maxima " + std::to_string(maxima.size()) + " >= 3 (at ratio" +
                  where + ")");
  }
  return o;
}

Outcome simulator() {
  Outcome o;
  const std::vector<MsjParams> sets = {{1, 2, 2, 1.0, 1.0, 0.5},
                                       {3, 10, 30, 1.0, 0.5, 0.7},
                                       {1, 10, 10, 16.2, 8.1, 0.2},
                                       {1, 10, 10, 8.6, 4.3, 0.6},
                                       {1, 100, 200, 2.0, 1.0, 0.936}};
  double worst_z = 0.0;
  std::uint64_t fewest_events = ~0ull;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const double x = lambda_star(sets[i]);
    SimConfig c = make_config(sets[i], SimMode::kSaturated, 1.25e6 / x, 100 + i);
    const SimStats s = simulate(c);
    worst_z = std::max(worst_z, std::abs(s.throughput.mean - x) / s.throughput.std_error);
    fewest_events = std::min(fewest_events, s.events);
  }
  o.require(worst_z <= 3.0, "saturated X within " + fmt("%.2f", worst_z) + " SE (<= 3)");
  o.require(fewest_events >= 1'000'000, "events per run >= 1e6 (min " +
                                            std::to_string(fewest_events) + ")");

  double worst_bounded = 0.0;
  double worst_ratio_dev = 0.0;
  double worst_slope_dev = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const double x = lambda_star(sets[i]);
    const double horizon = 1e6 / x;
    for (double load : {0.8, 1.2}) {
      const double lambda = load * x;
      SimConfig c1 = make_config(sets[i], SimMode::kOpen, horizon, 200 + i, lambda);
      SimConfig c2 = c1;
      c2.horizon = 2.0 * horizon;
      const SimStats s1 = simulate(c1);
      const SimStats s2 = simulate(c2);
      if (load < 1.0) {
        // Bounded: doubling the horizon leaves the time-average queue put.
        const double a = s1.mean_queue_length.mean;
        const double b = s2.mean_queue_length.mean;
        worst_bounded = std::max(worst_bounded, b / std::max(a, 1.0));
      } else {
        const double ratio = static_cast<double>(s2.final_queue_length) /
                             static_cast<double>(std::max<std::uint64_t>(s1.final_queue_length, 1));
        worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 2.0));
        worst_slope_dev = std::max(worst_slope_dev,
                                   std::abs(s2.queue_growth_rate.mean / (lambda - x) - 1.0));
      }
    }
  }
  o.require(worst_bounded <= 1.5, "0.8 lambda*: mean queue(2H)/mean queue(H) max " +
                                      fmt("%.3f", worst_bounded) + " <= 1.5");
  o.require(worst_ratio_dev <= 0.3, "1.2 lambda*: final queue(2H)/(H) within " +
                                        fmt("%.3f", worst_ratio_dev) + " of 2 (<= 0.3)");
  o.require(worst_slope_dev <= 0.25, "1.2 lambda*: slope vs lambda - lambda* rel " +
                                         fmt("%.3f", worst_slope_dev) + " <= 0.25");

  for (std::size_t i : {0u, 1u, 2u}) {
    const double x = lambda_star(sets[i]);
    const EmpiricalInterval iv = estimate_lambda_star_empirical(sets[i], 0.05);
    o.require(iv.lo <= x && x <= iv.hi, "set " + std::to_string(i + 1) + " empirical [" +
                                            fmt("%.4f", iv.lo) + ", " + fmt("%.4f", iv.hi) +
                                            "] contains " + fmt("%.4f", x));
  }
  return o;
}

Outcome response_blowup() {
  Outcome o;
  const std::pair<const char*, MsjParams> sets[] = {{"blue", {1, 10, 10, 16.2, 8.1, 0.2}},
                                                    {"red", {1, 10, 10, 8.6, 4.3, 0.6}}};
  for (const auto& [name, p] : sets) {
    const double x = lambda_star(p);
    const double naive = lambda_naive(p);
    o.require(x < naive && std::abs(naive - 10.0) < 1e-9,
              std::string(name) + " lambda* " + fmt("%.4f", x) + " < lambda_naive " + fmt("%g", naive));
    const SimStats half = simulate(make_config(p, SimMode::kOpen, 2e5, 31, 0.5 * x));
    const SimStats near = simulate(make_config(p, SimMode::kOpen, 2e5, 31, 0.98 * x));
    const double ratio = near.mean_response_time.mean / half.mean_response_time.mean;
    o.require(ratio >= 5.0, std::string(name) + " E[T](0.98)/E[T](0.5) " + fmt("%.1f", ratio) + " >= 5");
  }
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const Criterion kCriteria[] = {
    {"product form matches linear solve", product_form},
    {"saturated throughput and CTMC balance", ctmc_throughput},
    {"single-rate model agrees with two-class model", cross_model},
    {"class-mix wastage peaks", mix_peaks},
    {"ratio asymptotics", asymptotics},
    {"rate scaling invariance", scaling},
    {"ratio monotonicity regimes", monotonicity},
    {"simulator agrees with analysis", simulator},
    {"response time diverges below lambda*", response_blowup},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  constexpr int count = static_cast<int>(std::size(kCriteria));
  if (only < 0 || only > count) {
    std::fprintf(stderr, "criterion must be 1..%d\n", count);
    return 2;
  }
  bool all = true;
  for (int i = 1; i <= count; ++i) {
    if (only != 0 && i != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = kCriteria[i - 1].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] C%d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i, kCriteria[i - 1].name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
