#pragma once

#include <cstddef>
#include <vector>

#include "msj/model.hpp"

namespace msj {

/// Probability vector aligned with StateSpace order.
struct Distribution {
  enum class Kind { kEmbedded, kTimeAverage };

  std::vector<double> probs;
  Kind kind = Kind::kEmbedded;

  [[nodiscard]] std::size_t size() const { return probs.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return probs[i]; }
};

/// The eight transition families of the embedded chain, named after the
/// order they are usually listed in.
enum class TransitionCase {
  kI,     // [0,a,b] -> [0,a,b], class 1 done, class 1 enters
  kII,    // [0,a,b] -> s1(a-1), class 1 done, class 2 enters or blocks
  kIII,   // [0,a,b] -> [0,a,b], class 2 done, class 2 enters
  kIV,    // [0,a,b] -> s2(b-1), class 2 done, class 1 jobs fill the gap
  kV,     // [0,a,b] -> [1,a',b-1], a < a' < a(s2(b-1))
  kVI,    // [1,a,b] -> s1(a-1), class 1 done
  kVII,   // [1,a,b] -> s2(b), class 2 done, blocker enters, class 1 jobs fill
  kVIII,  // [1,a,b] -> [1,a',b], a <= a' < a(s2(b))
};

struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  int completing_class = 1;
  TransitionCase family = TransitionCase::kI;
  double probability = 0.0;
};

/// Every one-step transition of the embedded chain, with its family.
/// Transition probabilities have the form f_i(s) * p1^j * p2^k with k <= 1.
std::vector<Transition> enumerate_transitions(const StateSpace& space);

/// Dense transition matrix split by the class of the completing job.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(std::size_t size);

  [[nodiscard]] std::size_t size() const { return size_; }

  /// P(from, to) = P1(from, to) + P2(from, to).
  [[nodiscard]] double operator()(std::size_t from, std::size_t to) const {
    return class1_[from * size_ + to] + class2_[from * size_ + to];
  }
  [[nodiscard]] double class1(std::size_t from, std::size_t to) const {
    return class1_[from * size_ + to];
  }
  [[nodiscard]] double class2(std::size_t from, std::size_t to) const {
    return class2_[from * size_ + to];
  }

  void add(std::size_t from, std::size_t to, int completing_class, double probability);

  [[nodiscard]] double row_sum(std::size_t from) const;

 private:
  std::size_t size_ = 0;
  std::vector<double> class1_;
  std::vector<double> class2_;
};

TransitionMatrix transition_matrix(const MsjParams& params);
TransitionMatrix transition_matrix(const StateSpace& space);

/// Product-form stationary distribution of the embedded (post-departure)
/// chain, evaluated in log space and normalised with a max shift.
Distribution embedded_steady_state(const MsjParams& params);
Distribution embedded_steady_state(const StateSpace& space);

/// Stationary distribution of an arbitrary row-stochastic matrix by dense
/// linear solve. Falls back to power iteration when the system is singular.
Distribution solve_dtmc_oracle(const TransitionMatrix& tm);

struct CtmcSolution {
  Distribution dist;
  /// Saturated throughput X (jobs / time).
  double throughput = 0.0;
};

/// Time-average distribution of the saturated system and its throughput.
CtmcSolution ctmc_steady_state(const MsjParams& params);
CtmcSolution ctmc_steady_state(const StateSpace& space, const Distribution& embedded);

/// Expected number of idle servers in the saturated system.
double saturated_wastage(const MsjParams& params);
double saturated_wastage(const StateSpace& space, const Distribution& time_average);

struct BalanceReport {
  double max_residual_full = 0.0;
  double max_residual_class1 = 0.0;
  double max_residual_class2 = 0.0;

  [[nodiscard]] double max_residual() const;
  [[nodiscard]] bool within(double tol) const { return max_residual() <= tol; }
};

/// Residuals of pi = pi P and of the per-class equations
/// p_i pi = pi P_i, using the product-form pi.
BalanceReport verify_balance(const MsjParams& params);

/// Same check against a caller-supplied embedded distribution.
BalanceReport verify_balance(const TransitionMatrix& tm, const Distribution& embedded,
                             const MsjParams& params);

/// Max residual of p_s nu_s = sum_{s'} p_{s'} nu_{s'} P(s', s).
double ctmc_balance_residual(const MsjParams& params);

}  // namespace msj
