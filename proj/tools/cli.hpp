#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace msj::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidParameters = 1,
  kBadFlags = 2,
  kResidualTooLarge = 3,
};

/// Grid given as lo:hi:lin|log:count. Endpoints are included exactly.
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;
  int count = 2;

  [[nodiscard]] std::vector<double> values() const;
};

/// Throws std::invalid_argument on malformed input.
Grid parse_grid(std::string_view text);

/// Renders with 17 significant digits (round-trip exact).
std::string format_double(double value);

/// Runs one command. `args` excludes the program name. Output goes to `out`
/// unless --output names a file; errors go to `err` as a one-line JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msj::cli
