#include "smms/report.hpp"

#include <cstdio>
#include <ostream>

namespace smms {

nlohmann::json to_json(const QuotientBreakdown& b)
{
    nlohmann::json j{{"energy", b.energy},
                     {"mass_intermediate", b.mass_intermediate},
                     {"mass_volume", b.mass_volume},
                     {"q_value", b.q_value}};
    if (b.infinite_m) {
        j["l2_norm_squared"] = b.l2_norm_squared;
        j["entropy"] = b.entropy;
    }
    return j;
}

nlohmann::json to_json(const WReport& r)
{
    return {{"w_value", r.w_value}, {"tau", r.tau}};
}

nlohmann::json to_json(const LiftCheck& c)
{
    return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"gap", c.gap}, {"optimal_tau", c.optimal_tau}};
}

nlohmann::json to_json(const MinimizeReport& r)
{
    return {{"best_value", r.best_value},
            {"el_residual_norm", r.el_residual_norm},
            {"multiplier", r.multiplier},
            {"concentration_flag", r.concentration_flag},
            {"mass_localization", r.mass_localization},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"gradient_norm", r.gradient_norm},
            {"initial_value", r.q_trace.front()},
            {"initial_sup", r.sup_trace.front()},
            {"final_sup", r.sup_trace.back()}};
}

std::string format_number(double x)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows)
{
    for (const auto& line : header)
        out << "# " << line << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

} // namespace smms
