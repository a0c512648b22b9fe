#include "msj/saturated.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "numeric.hpp"

namespace msj {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(p^k) with 0^0 = 1 and 0^k = 0 for k > 0.
double log_power(double p, int k) {
  if (k == 0) return 0.0;
  if (p <= 0.0) return kNegInf;
  return k * std::log(p);
}

std::size_t as_index(int a) { return static_cast<std::size_t>(a); }

}  // namespace

std::vector<Transition> enumerate_transitions(const StateSpace& space) {
  const MsjParams& params = space.params();
  const double p1 = params.p1;
  const double p2 = params.p2();
  std::vector<Transition> out;

  auto emit = [&](std::size_t from, int to_a, int cls, TransitionCase family, double prob,
                  const SaturatedState* expected) {
    const std::size_t to = as_index(to_a);
    if (expected != nullptr && space[to] != *expected) {
      throw std::logic_error("enumerate_transitions: target " + to_string(*expected) +
                             " is not a saturated state");
    }
    out.push_back({from, to, cls, family, prob});
  };

  for (std::size_t i = 0; i < space.size(); ++i) {
    const SaturatedState& s = space[i];
    const auto [f1, f2] = completion_fractions(s, params);
    const int a = s.a;
    const int b = s.b;

    if (s.h == 0) {
      if (a > 0) {
        emit(i, a, 1, TransitionCase::kI, f1 * p1, nullptr);
        emit(i, a - 1, 1, TransitionCase::kII, f1 * p2, nullptr);
      }
      if (b > 0) {
        emit(i, a, 2, TransitionCase::kIII, f2 * p2, nullptr);
        const int filled = s2(b - 1, params).a;
        emit(i, filled, 2, TransitionCase::kIV, f2 * std::pow(p1, filled - a), nullptr);
        for (int a2 = a + 1; a2 < filled; ++a2) {
          const SaturatedState target{1, a2, b - 1};
          emit(i, a2, 2, TransitionCase::kV, f2 * std::pow(p1, a2 - a) * p2, &target);
        }
      }
    } else {
      if (a > 0) emit(i, a - 1, 1, TransitionCase::kVI, f1, nullptr);
      if (b > 0) {
        const int filled = s2(b, params).a;
        emit(i, filled, 2, TransitionCase::kVII, f2 * std::pow(p1, filled - a), nullptr);
        for (int a2 = a; a2 < filled; ++a2) {
          const SaturatedState target{1, a2, b};
          emit(i, a2, 2, TransitionCase::kVIII, f2 * std::pow(p1, a2 - a) * p2, &target);
        }
      }
    }
  }
  return out;
}

TransitionMatrix::TransitionMatrix(std::size_t size)
    : size_(size), class1_(size * size, 0.0), class2_(size * size, 0.0) {}

void TransitionMatrix::add(std::size_t from, std::size_t to, int completing_class,
                           double probability) {
  auto& target = completing_class == 1 ? class1_ : class2_;
  target[from * size_ + to] += probability;
}

double TransitionMatrix::row_sum(std::size_t from) const {
  detail::CompensatedSum sum;
  for (std::size_t to = 0; to < size_; ++to) sum.add((*this)(from, to));
  return sum.value();
}

TransitionMatrix transition_matrix(const StateSpace& space) {
  TransitionMatrix tm(space.size());
  for (const Transition& t : enumerate_transitions(space)) {
    tm.add(t.from, t.to, t.completing_class, t.probability);
  }
  return tm;
}

TransitionMatrix transition_matrix(const MsjParams& params) {
  return transition_matrix(StateSpace(params));
}

Distribution embedded_steady_state(const StateSpace& space) {
  const MsjParams& params = space.params();
  const int a_max = max_class1(params);
  const int b_max = max_class2(params);

  // Prefix sums of -log f1(s1(i)) and -log f2(s2(j)).
  std::vector<double> class1_terms(as_index(a_max) + 1, 0.0);
  for (int i = 1; i <= a_max; ++i) {
    class1_terms[as_index(i)] =
        class1_terms[as_index(i - 1)] - std::log(completion_fractions(s1(i, params), params).f1);
  }
  std::vector<double> class2_terms(as_index(b_max) + 1, 0.0);
  for (int j = 1; j <= b_max; ++j) {
    class2_terms[as_index(j)] =
        class2_terms[as_index(j - 1)] - std::log(completion_fractions(s2(j, params), params).f2);
  }

  std::vector<double> log_weight(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const SaturatedState& s = space[i];
    const double lp1 = log_power(params.p1, s.a);
    const double lp2 = log_power(params.p2(), s.b + s.h);
    if (lp1 == kNegInf || lp2 == kNegInf) {
      log_weight[i] = kNegInf;
    } else {
      log_weight[i] = lp1 + lp2 + class1_terms[as_index(s.a)] + class2_terms[as_index(s.b)];
    }
  }

  const double shift = *std::max_element(log_weight.begin(), log_weight.end());
  Distribution dist{std::vector<double>(space.size(), 0.0), Distribution::Kind::kEmbedded};
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (log_weight[i] == kNegInf) continue;
    dist.probs[i] = std::exp(log_weight[i] - shift);
    total.add(dist.probs[i]);
  }
  const double norm = total.value();
  for (double& p : dist.probs) p /= norm;
  return dist;
}

Distribution embedded_steady_state(const MsjParams& params) {
  return embedded_steady_state(StateSpace(params));
}

Distribution solve_dtmc_oracle(const TransitionMatrix& tm) {
  const auto size = static_cast<Eigen::Index>(tm.size());
  if (size == 0) throw std::invalid_argument("solve_dtmc_oracle: empty chain");

  // (P^T - I) pi = 0 with the first equation swapped for sum(pi) = 1.
  Eigen::MatrixXd system(size, size);
  for (Eigen::Index to = 0; to < size; ++to) {
    for (Eigen::Index from = 0; from < size; ++from) {
      system(to, from) = tm(static_cast<std::size_t>(from), static_cast<std::size_t>(to));
    }
    system(to, to) -= 1.0;
  }
  system.row(0).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs(0) = 1.0;

  Distribution dist{std::vector<double>(tm.size()), Distribution::Kind::kEmbedded};
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (lu.isInvertible()) {
    const Eigen::VectorXd pi = lu.solve(rhs);
    for (Eigen::Index i = 0; i < size; ++i) dist.probs[static_cast<std::size_t>(i)] = pi(i);
    return dist;
  }

  // Several closed classes: iterate from the uniform vector. Lazy (half
  // self-loop) steps avoid oscillation on periodic components.
  std::vector<double> pi(tm.size(), 1.0 / static_cast<double>(tm.size()));
  std::vector<double> next(tm.size());
  for (int iter = 0; iter < 1'000'000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t from = 0; from < tm.size(); ++from) {
      for (std::size_t to = 0; to < tm.size(); ++to) next[to] += pi[from] * tm(from, to);
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < tm.size(); ++i) {
      next[i] = 0.5 * (next[i] + pi[i]);
      delta = std::max(delta, std::abs(next[i] - pi[i]));
    }
    pi.swap(next);
    if (delta < 1e-15) break;
  }
  dist.probs = pi;
  return dist;
}

CtmcSolution ctmc_steady_state(const StateSpace& space, const Distribution& embedded) {
  const MsjParams& params = space.params();
  CtmcSolution out;
  out.dist = {std::vector<double>(space.size()), Distribution::Kind::kTimeAverage};
  detail::CompensatedSum mean_gap;
  for (std::size_t i = 0; i < space.size(); ++i) {
    out.dist.probs[i] = embedded[i] / space[i].completion_rate(params);
    mean_gap.add(out.dist.probs[i]);
  }
  out.throughput = 1.0 / mean_gap.value();
  for (double& p : out.dist.probs) p *= out.throughput;
  return out;
}

CtmcSolution ctmc_steady_state(const MsjParams& params) {
  const StateSpace space(params);
  return ctmc_steady_state(space, embedded_steady_state(space));
}

double saturated_wastage(const StateSpace& space, const Distribution& time_average) {
  detail::CompensatedSum idle;
  for (std::size_t i = 0; i < space.size(); ++i) {
    idle.add(time_average[i] * space[i].free_servers(space.params()));
  }
  return idle.value();
}

double saturated_wastage(const MsjParams& params) {
  const StateSpace space(params);
  return saturated_wastage(space, ctmc_steady_state(space, embedded_steady_state(space)).dist);
}

double BalanceReport::max_residual() const {
  return std::max({max_residual_full, max_residual_class1, max_residual_class2});
}

BalanceReport verify_balance(const TransitionMatrix& tm, const Distribution& embedded,
                             const MsjParams& params) {
  BalanceReport report;
  for (std::size_t to = 0; to < tm.size(); ++to) {
    detail::CompensatedSum inflow1;
    detail::CompensatedSum inflow2;
    for (std::size_t from = 0; from < tm.size(); ++from) {
      inflow1.add(embedded[from] * tm.class1(from, to));
      inflow2.add(embedded[from] * tm.class2(from, to));
    }
    const double r1 = std::abs(params.p1 * embedded[to] - inflow1.value());
    const double r2 = std::abs(params.p2() * embedded[to] - inflow2.value());
    const double full = std::abs(embedded[to] - (inflow1.value() + inflow2.value()));
    report.max_residual_class1 = std::max(report.max_residual_class1, r1);
    report.max_residual_class2 = std::max(report.max_residual_class2, r2);
    report.max_residual_full = std::max(report.max_residual_full, full);
  }
  return report;
}

BalanceReport verify_balance(const MsjParams& params) {
  const StateSpace space(params);
  return verify_balance(transition_matrix(space), embedded_steady_state(space), params);
}

double ctmc_balance_residual(const MsjParams& params) {
  const StateSpace space(params);
  const TransitionMatrix tm = transition_matrix(space);
  const CtmcSolution ctmc = ctmc_steady_state(space, embedded_steady_state(space));
  std::vector<double> flux(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    flux[i] = ctmc.dist[i] * space[i].completion_rate(params);
  }
  double worst = 0.0;
  for (std::size_t to = 0; to < space.size(); ++to) {
    detail::CompensatedSum inflow;
    for (std::size_t from = 0; from < space.size(); ++from) inflow.add(flux[from] * tm(from, to));
    worst = std::max(worst, std::abs(flux[to] - inflow.value()));
  }
  return worst;
}

}  // namespace msj
