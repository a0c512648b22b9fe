#include "msj/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "msj/parallel.hpp"
#include "msj/saturated.hpp"
#include "numeric.hpp"

namespace msj {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kStable:
      return "stable";
    case Verdict::kUnstable:
      return "unstable";
    case Verdict::kBoundary:
      return "boundary";
  }
  return "unknown";
}

double lambda_star(const MsjParams& params) { return ctmc_steady_state(params).throughput; }

double lambda_naive(const MsjParams& params) {
  validate(params);
  return params.n / mean_server_seconds(params);
}

StabilityReport report(const MsjParams& params) {
  const StateSpace space(params);
  const CtmcSolution ctmc = ctmc_steady_state(space, embedded_steady_state(space));

  StabilityReport out;
  out.params = params;
  out.lambda_star = ctmc.throughput;
  out.mean_server_seconds = mean_server_seconds(params);
  out.lambda_naive = params.n / out.mean_server_seconds;
  out.limiting_wastage = saturated_wastage(space, ctmc.dist);
  out.utilization = 1.0 - out.limiting_wastage / params.n;

  const double identity = (out.lambda_naive - out.lambda_star) * out.mean_server_seconds;
  if (std::abs(identity - out.limiting_wastage) > 1e-9) {
    throw std::logic_error("report: wastage " + std::to_string(out.limiting_wastage) +
                           " disagrees with (lambda_naive - lambda_star) E[S] = " +
                           std::to_string(identity));
  }
  return out;
}

Verdict classify(const MsjParams& params, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidParameters("arrival rate must be >= 0");
  const double threshold = lambda_star(params);
  const double load = lambda / threshold;
  if (std::abs(load - 1.0) <= 1e-12) return Verdict::kBoundary;
  return load < 1.0 ? Verdict::kStable : Verdict::kUnstable;
}

std::vector<MixRow> sweep_mix(const MsjParams& base, std::span<const double> p2_grid,
                              unsigned threads) {
  for (double p2 : p2_grid) {
    MsjParams params = base;
    params.p1 = 1.0 - p2;
    validate(params);
  }
  std::vector<MixRow> rows(p2_grid.size());
  parallel_for(p2_grid.size(), threads, [&](std::size_t i) {
    MsjParams params = base;
    const double p2 = p2_grid[i];
    params.p1 = 1.0 - p2;
    const StabilityReport r = report(params);
    rows[i] = {p2,
               params.p1 * r.lambda_star,
               p2 * r.lambda_star,
               r.limiting_wastage,
               r.utilization,
               params.p1 * r.lambda_naive,
               p2 * r.lambda_naive};
  });
  return rows;
}

std::vector<RatioRow> sweep_ratio(const MsjParams& base, std::span<const double> ratios,
                                  unsigned threads) {
  for (double ratio : ratios) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
      throw InvalidParameters("service rate ratio must be positive and finite");
    }
  }
  MsjParams check = base;
  check.mu1 = check.mu2 = 1.0;
  validate(check);

  std::vector<RatioRow> rows(ratios.size());
  parallel_for(ratios.size(), threads, [&](std::size_t i) {
    MsjParams params = base;
    params.mu1 = 1.0;
    params.mu2 = ratios[i];
    rows[i] = {ratios[i], saturated_wastage(params)};
  });
  return rows;
}

double asymptotic_wastage(const MsjParams& params, RatioLimit limit) {
  validate(params);
  if (limit == RatioLimit::kZero) return params.n % params.n2;
  if (!(params.p2() > 0.0)) {
    throw InvalidParameters("infinite-ratio limit needs p2 > 0");
  }
  return params.n2 - params.n1 / params.p2();
}

std::vector<std::size_t> strict_local_maxima(std::span<const double> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i - 1] < values[i] && values[i] > values[i + 1]) out.push_back(i);
  }
  return out;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of empty range");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                  values.begin());
}

}  // namespace msj
