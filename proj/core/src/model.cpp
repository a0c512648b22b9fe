#include "msj/model.hpp"

#include <cmath>
#include <sstream>

namespace msj {

std::optional<std::string> find_violation(const MsjParams& params) {
  if (params.n1 < 1) return "n1 must be a positive integer";
  if (params.n2 < 1) return "n2 must be a positive integer";
  if (params.n < 1) return "n must be a positive integer";
  if (!(params.n1 < params.n2)) return "n1 must be < n2";
  if (!(params.n2 <= params.n)) return "n2 must be <= n";
  if (!(params.mu1 > 0.0) || !std::isfinite(params.mu1)) return "mu1 must be a positive finite rate";
  if (!(params.mu2 > 0.0) || !std::isfinite(params.mu2)) return "mu2 must be a positive finite rate";
  if (!(params.p1 >= 0.0 && params.p1 <= 1.0)) return "p1 must lie in [0, 1]";
  return std::nullopt;
}

void validate(const MsjParams& params) {
  if (auto violation = find_violation(params)) throw InvalidParameters(*violation);
}

std::string to_string(const SaturatedState& state) {
  std::ostringstream out;
  out << '[' << state.h << ", " << state.a << ", " << state.b << ']';
  return out.str();
}

SaturatedState s1(int a, const MsjParams& params) {
  if (a < 0 || a > max_class1(params)) {
    throw std::out_of_range("s1: class-1 count " + std::to_string(a) + " outside [0, " +
                            std::to_string(max_class1(params)) + "]");
  }
  // Fill with class-2 jobs; the leftover either blocks (fits a class-1 job)
  // or is too small for either class.
  const int left = params.n - a * params.n1;
  const int b = left / params.n2;
  const int rem = left % params.n2;
  return {rem >= params.n1 ? 1 : 0, a, b};
}

SaturatedState s2(int b, const MsjParams& params) {
  if (b < 0 || b > max_class2(params)) {
    throw std::out_of_range("s2: class-2 count " + std::to_string(b) + " outside [0, " +
                            std::to_string(max_class2(params)) + "]");
  }
  return {0, (params.n - b * params.n2) / params.n1, b};
}

StateSpace::StateSpace(const MsjParams& params) : params_(params) {
  validate(params);
  const int a_max = max_class1(params);
  states_.reserve(static_cast<std::size_t>(a_max) + 1);
  for (int a = 0; a <= a_max; ++a) states_.push_back(s1(a, params));
}

std::optional<std::size_t> StateSpace::index_of(const SaturatedState& state) const {
  if (state.a < 0 || static_cast<std::size_t>(state.a) >= states_.size()) return std::nullopt;
  const auto i = static_cast<std::size_t>(state.a);
  if (states_[i] != state) return std::nullopt;
  return i;
}

StateSpace enumerate_states(const MsjParams& params) { return StateSpace(params); }

CompletionFractions completion_fractions(const SaturatedState& state, const MsjParams& params) {
  if (state.a + state.b <= 0) {
    throw std::logic_error("completion_fractions: no job in service in state " + to_string(state));
  }
  const double r1 = state.a * params.mu1;
  const double r2 = state.b * params.mu2;
  const double total = r1 + r2;
  // Both are formed directly so that tiny fractions keep full relative
  // precision; their sum is 1 to within one ulp.
  return {r1 / total, r2 / total};
}

double mean_server_seconds(const MsjParams& params) {
  return params.p1 * params.n1 / params.mu1 + params.p2() * params.n2 / params.mu2;
}

}  // namespace msj
