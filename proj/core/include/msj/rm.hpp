#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "msj/model.hpp"
#include "msj/stability.hpp"

namespace msj {

/// Multiserver-job system where every job has the same Exp(mu) duration and
/// demands k servers with probability class_probs[k - 1].
struct RmParams {
  int n = 1;
  double mu = 1.0;
  std::vector<double> class_probs;
};

/// Thrown when exhaustive enumeration of phase vectors would be too large.
class EnumerationTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

void validate(const RmParams& params);

/// Single-rate system equivalent to a two-class system with mu1 = mu2.
RmParams to_rm(const MsjParams& params);

/// Jobs in service for demand vector `demands` under strict FCFS: the
/// longest prefix whose demands sum to at most n. Throws InvalidParameters
/// when a demand is < 1 or the first job never fits.
int sigma(std::span<const int> demands, int n);

/// Saturated throughput by summing prod p / (mu sigma) over all K^n phase
/// vectors, K counting classes with positive probability. Throws
/// EnumerationTooLarge when K^n exceeds `limit`.
double rm_throughput_enumerate(const RmParams& params, std::uint64_t limit = 10'000'000);

/// Same quantity in O(n^2 K) via a recursion over the served prefix.
double rm_throughput_dp(const RmParams& params);

/// Enumeration when feasible, otherwise the recursion.
double rm_throughput(const RmParams& params);

/// Stable iff lambda < X. |lambda / X - 1| <= 1e-12 is kBoundary.
Verdict rm_is_stable(const RmParams& params, double lambda);

/// Largest |pi_m - sum_{m'} pi_{m'} P(m', m)| over all phase vectors with
/// pi_m = prod_j p_{m_j}. P is built forward: one of the sigma(m') served
/// jobs departs uniformly, the rest shift up, and a fresh job joins the end.
double rm_balance_residual(const RmParams& params, std::uint64_t limit = 10'000);

}  // namespace msj
