#pragma once

#include <string>
#include <vector>

namespace smms::cli {

enum ExitCode { success = 0, argument_error = 1, non_convergence = 2, invariant_violation = 3 };

/// Runs one subcommand: constants, bubble-check, quotient, minimize,
/// nu-sweep, lift-check or f-table. Returns an ExitCode.
int dispatch(int argc, char** argv);

/// "0,0.25,...,3" -> 0, 0.25, ..., 3 (the step is taken from the two values
/// before the ellipsis); plain comma lists pass through.
std::vector<double> parse_real_list(const std::string& text);

/// "3..10" -> 3, 4, ..., 10; also accepts comma lists of integers.
std::vector<int> parse_int_list(const std::string& text);

} // namespace smms::cli
