#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "msj/model.hpp"

namespace msj {

/// Verdict for an arrival rate against a stability threshold. Equality is
/// not covered by the theory and is reported as kBoundary.
enum class Verdict { kStable, kUnstable, kBoundary };

const char* to_string(Verdict verdict);

struct StabilityReport {
  MsjParams params;
  double lambda_star = 0.0;
  double lambda_naive = 0.0;
  double mean_server_seconds = 0.0;
  /// E[N*_idle]: idle servers as the arrival rate approaches lambda_star.
  double limiting_wastage = 0.0;
  double utilization = 0.0;
};

/// Largest stable arrival rate: the saturated-system throughput.
double lambda_star(const MsjParams& params);

/// n / E[S], the threshold if jobs always packed perfectly.
double lambda_naive(const MsjParams& params);

/// Assembles the report. Wastage is computed from the saturated time-average
/// distribution and cross-checked against (lambda_naive - lambda_star) E[S];
/// throws std::logic_error if the two disagree by more than 1e-9.
StabilityReport report(const MsjParams& params);

/// Classifies `lambda` against lambda_star. |lambda/lambda_star - 1| <= 1e-12
/// is reported as kBoundary.
Verdict classify(const MsjParams& params, double lambda);

struct MixRow {
  double p2 = 0.0;
  double lambda1_star = 0.0;
  double lambda2_star = 0.0;
  double wastage = 0.0;
  double utilization = 0.0;
  /// Point on the perfect-packing frontier with the same class mix.
  double naive_lambda1 = 0.0;
  double naive_lambda2 = 0.0;
};

/// One row per p2 value; p1 in `base` is ignored. Rows keep grid order.
std::vector<MixRow> sweep_mix(const MsjParams& base, std::span<const double> p2_grid,
                              unsigned threads = 1);

struct RatioRow {
  double ratio = 0.0;
  double wastage = 0.0;
};

/// Saturated wastage with mu1 = 1 and mu2 = ratio; rates in `base` are ignored.
std::vector<RatioRow> sweep_ratio(const MsjParams& base, std::span<const double> ratios,
                                  unsigned threads = 1);

enum class RatioLimit { kZero, kInfinite };

/// mu2/mu1 -> 0: n mod n2 (exact). mu2/mu1 -> infinity: n2 - n1/p2, an
/// approximation that is good when n2 >> n1. Throws InvalidParameters for the
/// infinite limit when p2 = 0.
double asymptotic_wastage(const MsjParams& params, RatioLimit limit);

/// Indices i with values[i-1] < values[i] > values[i+1].
std::vector<std::size_t> strict_local_maxima(std::span<const double> values);

/// Index of the largest value (first on ties). `values` must be non-empty.
std::size_t argmax(std::span<const double> values);

}  // namespace msj
