#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msj {

/// Raised when a parameter set violates the model invariants.
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two-class multiserver-job system.
///
/// A class-i job holds n_i servers concurrently for an Exp(mu_i) duration.
/// Jobs are class 1 with probability p1 and class 2 otherwise, and are
/// served in strict FCFS order on n servers.
struct MsjParams {
  int n1 = 1;
  int n2 = 2;
  int n = 2;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double p1 = 0.5;

  [[nodiscard]] double p2() const { return 1.0 - p1; }

  friend bool operator==(const MsjParams&, const MsjParams&) = default;
};

/// Returns a description of the first violated invariant, or nullopt.
std::optional<std::string> find_violation(const MsjParams& params);

/// Throws InvalidParameters if any invariant is violated.
void validate(const MsjParams& params);

/// State of the saturated system: [h, a, b].
///
/// h is 1 when a class-2 job blocks the head of the queue, a and b are the
/// class-1 and class-2 counts in service.
struct SaturatedState {
  int h = 0;
  int a = 0;
  int b = 0;

  [[nodiscard]] int free_servers(const MsjParams& params) const {
    return params.n - a * params.n1 - b * params.n2;
  }
  /// Total completion rate a*mu1 + b*mu2.
  [[nodiscard]] double completion_rate(const MsjParams& params) const {
    return a * params.mu1 + b * params.mu2;
  }

  friend bool operator==(const SaturatedState&, const SaturatedState&) = default;
};

std::string to_string(const SaturatedState& state);

/// Largest class-1 count that fits on the servers.
inline int max_class1(const MsjParams& params) { return params.n / params.n1; }
/// Largest class-2 count that fits on the servers.
inline int max_class2(const MsjParams& params) { return params.n / params.n2; }

/// The unique saturated state with exactly `a` class-1 jobs in service.
SaturatedState s1(int a, const MsjParams& params);

/// The unique non-blocking saturated state with exactly `b` class-2 jobs in
/// service.
SaturatedState s2(int b, const MsjParams& params);

/// Saturated state space, one state per class-1 count.
class StateSpace {
 public:
  explicit StateSpace(const MsjParams& params);

  [[nodiscard]] std::size_t size() const { return states_.size(); }
  [[nodiscard]] const std::vector<SaturatedState>& states() const { return states_; }
  [[nodiscard]] const SaturatedState& operator[](std::size_t i) const { return states_[i]; }
  [[nodiscard]] const MsjParams& params() const { return params_; }

  /// Position of [h, a, b], or nullopt if it is not a saturated state.
  [[nodiscard]] std::optional<std::size_t> index_of(const SaturatedState& state) const;

  [[nodiscard]] auto begin() const { return states_.begin(); }
  [[nodiscard]] auto end() const { return states_.end(); }

 private:
  MsjParams params_;
  std::vector<SaturatedState> states_;
};

StateSpace enumerate_states(const MsjParams& params);

struct CompletionFractions {
  double f1 = 0.0;
  double f2 = 0.0;
};

/// Probability that the next completion in `state` is class 1 / class 2.
/// Throws std::logic_error when no job is in service.
CompletionFractions completion_fractions(const SaturatedState& state, const MsjParams& params);

/// E[S] = p1*n1/mu1 + p2*n2/mu2, server-seconds demanded per job.
double mean_server_seconds(const MsjParams& params);

}  // namespace msj
