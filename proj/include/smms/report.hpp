#pragma once

// JSON and CSV serialization of results. Doubles in CSV are printed with
// %.17g; JSON numbers use the shortest representation that round-trips.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "smms/functionals.hpp"
#include "smms/lift.hpp"
#include "smms/minimizer.hpp"

namespace smms {

nlohmann::json to_json(const QuotientBreakdown& b);
nlohmann::json to_json(const WReport& r);
nlohmann::json to_json(const LiftCheck& c);
/// Summary of a run without the traces.
nlohmann::json to_json(const MinimizeReport& r);

std::string format_number(double x);

/// Writes rows of numbers as CSV; `header` lines are prefixed with '#'.
void write_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

} // namespace smms
