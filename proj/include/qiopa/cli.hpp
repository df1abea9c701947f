#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qiopa::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericError = 3 };

/// Runs one command. args excludes the program name. Data goes to --output (or `out` for "-"),
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// start:stop:step (inclusive within half a step, at least two points) or a single number.
std::vector<double> parse_sweep(const std::string& spec);

/// printf %.17g.
std::string format_number(double v);

}  // namespace qiopa::cli
