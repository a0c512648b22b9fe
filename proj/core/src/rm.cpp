#include "msj/rm.hpp"

#include <cmath>
#include <string>

#include "numeric.hpp"

namespace msj {

namespace {

struct DemandClass {
  int servers;
  double prob;
};

std::vector<DemandClass> positive_classes(const RmParams& params) {
  std::vector<DemandClass> out;
  for (std::size_t k = 0; k < params.class_probs.size(); ++k) {
    if (params.class_probs[k] > 0.0) out.push_back({static_cast<int>(k) + 1, params.class_probs[k]});
  }
  return out;
}

// K^n, or limit + 1 once it exceeds limit.
std::uint64_t count_vectors(std::size_t classes, int n, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (int j = 0; j < n; ++j) {
    if (total > limit / std::max<std::uint64_t>(classes, 1)) return limit + 1;
    total *= classes;
  }
  return total;
}

// Visits every phase vector as a digit string over `classes`, in
// lexicographic order, together with its position.
template <typename Fn>
void for_each_vector(std::size_t classes, int n, Fn&& fn) {
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  std::uint64_t index = 0;
  while (true) {
    fn(std::span<const std::size_t>(digits), index);
    ++index;
    int pos = n - 1;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == classes) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

int served_count(std::span<const std::size_t> digits, const std::vector<DemandClass>& classes,
                 int n) {
  int used = 0;
  int served = 0;
  for (std::size_t d : digits) {
    used += classes[d].servers;
    if (used > n) break;
    ++served;
  }
  return served;
}

}  // namespace

void validate(const RmParams& params) {
  if (params.n < 1) throw InvalidParameters("n must be a positive integer");
  if (!(params.mu > 0.0) || !std::isfinite(params.mu)) {
    throw InvalidParameters("mu must be a positive finite rate");
  }
  if (params.class_probs.empty()) throw InvalidParameters("class_probs must not be empty");
  detail::CompensatedSum total;
  for (std::size_t k = 0; k < params.class_probs.size(); ++k) {
    const double p = params.class_probs[k];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidParameters("class probability for demand " + std::to_string(k + 1) +
                              " must lie in [0, 1]");
    }
    if (p > 0.0 && static_cast<int>(k) + 1 > params.n) {
      throw InvalidParameters("demand " + std::to_string(k + 1) + " exceeds n = " +
                              std::to_string(params.n));
    }
    total.add(p);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw InvalidParameters("class probabilities must sum to 1");
  }
}

RmParams to_rm(const MsjParams& params) {
  validate(params);
  if (params.mu1 != params.mu2) {
    throw InvalidParameters("single-rate model needs mu1 == mu2");
  }
  RmParams out;
  out.n = params.n;
  out.mu = params.mu1;
  out.class_probs.assign(static_cast<std::size_t>(params.n2), 0.0);
  out.class_probs[static_cast<std::size_t>(params.n1 - 1)] += params.p1;
  out.class_probs[static_cast<std::size_t>(params.n2 - 1)] += params.p2();
  return out;
}

int sigma(std::span<const int> demands, int n) {
  if (demands.empty()) throw InvalidParameters("sigma: empty phase vector");
  for (int d : demands) {
    if (d < 1) throw InvalidParameters("sigma: demands must be >= 1");
  }
  if (demands.front() > n) {
    throw InvalidParameters("sigma: head job demands " + std::to_string(demands.front()) +
                            " servers but only " + std::to_string(n) + " exist");
  }
  int used = 0;
  int served = 0;
  for (int d : demands) {
    used += d;
    if (used > n) break;
    ++served;
  }
  return served;
}

double rm_throughput_enumerate(const RmParams& params, std::uint64_t limit) {
  validate(params);
  const std::vector<DemandClass> classes = positive_classes(params);
  if (count_vectors(classes.size(), params.n, limit) > limit) {
    throw EnumerationTooLarge("rm_throughput_enumerate: K^n = " +
                              std::to_string(classes.size()) + "^" + std::to_string(params.n) +
                              " exceeds " + std::to_string(limit) +
                              "; use rm_throughput_dp");
  }
  detail::CompensatedSum mean_gap;
  for_each_vector(classes.size(), params.n, [&](std::span<const std::size_t> digits, std::uint64_t) {
    double prob = 1.0;
    for (std::size_t d : digits) prob *= classes[d].prob;
    mean_gap.add(prob / (params.mu * served_count(digits, classes, params.n)));
  });
  return 1.0 / mean_gap.value();
}

double rm_throughput_dp(const RmParams& params) {
  validate(params);
  const std::vector<DemandClass> classes = positive_classes(params);
  const int n = params.n;

  // mass[s]: probability that the first j jobs all fit, using s servers.
  std::vector<double> mass(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> next(mass.size());
  mass[0] = 1.0;
  detail::CompensatedSum inverse_served;
  for (int j = 0; j < n; ++j) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int used = 0; used <= n; ++used) {
      const double m = mass[static_cast<std::size_t>(used)];
      if (m == 0.0) continue;
      for (const DemandClass& c : classes) {
        if (used + c.servers <= n) {
          next[static_cast<std::size_t>(used + c.servers)] += m * c.prob;
        } else {
          // Job j+1 is the first that does not fit: sigma = j >= 1.
          inverse_served.add(m * c.prob / j);
        }
      }
    }
    mass.swap(next);
  }
  for (double m : mass) inverse_served.add(m / n);
  return params.mu / inverse_served.value();
}

double rm_throughput(const RmParams& params) {
  try {
    return rm_throughput_enumerate(params, 100'000);
  } catch (const EnumerationTooLarge&) {
    return rm_throughput_dp(params);
  }
}

Verdict rm_is_stable(const RmParams& params, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidParameters("arrival rate must be >= 0");
  const double load = lambda / rm_throughput(params);
  if (std::abs(load - 1.0) <= 1e-12) return Verdict::kBoundary;
  return load < 1.0 ? Verdict::kStable : Verdict::kUnstable;
}

double rm_balance_residual(const RmParams& params, std::uint64_t limit) {
  validate(params);
  const std::vector<DemandClass> classes = positive_classes(params);
  const std::size_t k = classes.size();
  const std::uint64_t total = count_vectors(k, params.n, limit);
  if (total > limit) {
    throw EnumerationTooLarge("rm_balance_residual: state space exceeds " + std::to_string(limit));
  }

  std::vector<double> pi(total);
  std::vector<double> inflow(total, 0.0);
  for_each_vector(k, params.n, [&](std::span<const std::size_t> digits, std::uint64_t index) {
    double prob = 1.0;
    for (std::size_t d : digits) prob *= classes[d].prob;
    pi[index] = prob;
  });

  // Positional value of digit j in the lexicographic index.
  std::vector<std::uint64_t> weight(static_cast<std::size_t>(params.n));
  std::uint64_t w = 1;
  for (int j = params.n - 1; j >= 0; --j) {
    weight[static_cast<std::size_t>(j)] = w;
    w *= k;
  }

  for_each_vector(k, params.n, [&](std::span<const std::size_t> digits, std::uint64_t index) {
    const int served = served_count(digits, classes, params.n);
    for (int leaving = 0; leaving < served; ++leaving) {
      // Shift the jobs behind the departing one up by one position.
      std::uint64_t base = 0;
      std::size_t pos = 0;
      for (std::size_t j = 0; j < digits.size(); ++j) {
        if (static_cast<int>(j) == leaving) continue;
        base += digits[j] * weight[pos++];
      }
      for (std::size_t c = 0; c < k; ++c) {
        inflow[base + c * weight.back()] += pi[index] * classes[c].prob / served;
      }
    }
  });

  double worst = 0.0;
  for (std::uint64_t i = 0; i < total; ++i) worst = std::max(worst, std::abs(pi[i] - inflow[i]));
  return worst;
}

}  // namespace msj
