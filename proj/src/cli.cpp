#include "smms/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "smms/bubbles.hpp"
#include "smms/errors.hpp"
#include "smms/functionals.hpp"
#include "smms/lift.hpp"
#include "smms/minimizer.hpp"
#include "smms/report.hpp"
#include "smms/specfun.hpp"

namespace smms::cli {

namespace {

using nlohmann::json;

struct Flags {
    std::string m = "1";
    int n = 3;
    double tau = 0.0; // 0: not given
    int nodes = 512;
    double rmax = 0.0; // 0: automatic truncation starting from 50
    std::uint64_t seed = 0;
    std::string space = "sphere";
    std::string input;
    std::string out;
    bool json = false;
    bool csv = false;
};

DimensionalParameter parse_m(const std::string& text)
{
    if (text == "inf" || text == "infinity")
        return DimensionalParameter::infinity();
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw PreconditionError("--m expects a number or 'inf', got '" + text + "'");
    }
    if (used != text.size())
        throw PreconditionError("--m expects a number or 'inf', got '" + text + "'");
    return DimensionalParameter::finite(value);
}

double finite(const DimensionalParameter& m)
{
    if (m.infinite)
        throw PreconditionError("this command needs finite m");
    return m.value;
}

ModelSpace build_space(const Flags& f, SpaceKind kind, DimensionalParameter m)
{
    if (f.nodes < 8)
        throw PreconditionError("--nodes must be at least 8");
    if (kind == SpaceKind::euclidean && f.rmax > 0.0)
        return make_space_on_grid(make_radial_grid(kind, f.n, f.nodes, f.rmax), f.n, m, DensitySpec::unit());
    return make_space(kind, f.n, m, DensitySpec::unit(), f.nodes);
}

RadialField input_field(const Flags& f, const ModelSpace& space, double bubble_tau)
{
    if (!f.input.empty()) {
        std::ifstream in(f.input);
        if (!in)
            throw PreconditionError("cannot open input file " + f.input);
        return read_field_csv(in, space);
    }
    if (space.kind() == SpaceKind::sphere)
        return space.constant(1.0);
    return sample_bubble(space, Bubble::with_tau(finite(space.m()), space.n(), bubble_tau));
}

std::vector<std::string> echo(const CLI::App& sub)
{
    std::vector<std::string> lines{"smms " + sub.get_name()};
    std::istringstream config(sub.config_to_str(true, false));
    for (std::string line; std::getline(config, line);)
        if (!line.empty() && line[0] != '[')
            lines.push_back(line);
    return lines;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw PreconditionError("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit_json(const Flags& f, const CLI::App& sub, json body)
{
    body["command"] = sub.get_name();
    body["flags"] = echo(sub);
    Output out(f.out);
    out.stream() << body.dump(2) << '\n';
}

void add_common(CLI::App& sub, Flags& f, bool with_grid, bool with_space = true)
{
    sub.add_option("--m", f.m, "dimensional parameter m (number or inf)")->capture_default_str();
    sub.add_option("--n", f.n, "dimension n")->capture_default_str()->check(CLI::Range(3, 100000));
    sub.add_option("--out", f.out, "output path (default stdout)");
    if (with_space && with_grid)
        sub.add_option("--space", f.space, "sphere|euclidean")->capture_default_str();
    if (with_grid) {
        sub.add_option("--nodes", f.nodes, "quadrature nodes")->capture_default_str();
        sub.add_option("--rmax", f.rmax, "euclidean truncation radius (default: automatic from 50)")
            ->capture_default_str();
    }
}

int run_constants(const Flags& f, const CLI::App& sub)
{
    const double m = finite(parse_m(f.m));
    const double lambda = specfun::lambda_euclidean(m, f.n);
    const double q1 = specfun::sphere_constant(m, f.n);
    json body{{"m", m},
              {"n", f.n},
              {"lambda_mn", lambda},
              {"V", specfun::bubble_volume(m, f.n)},
              {"Q1_sphere", q1},
              {"F", specfun::ratio_F(m, f.n)},
              {"nu_euclidean", nu_lambda_convert(lambda, m, f.n, ConvertDirection::lambda_to_nu)},
              {"nu_sphere", nu_lambda_convert(q1, m, f.n, ConvertDirection::lambda_to_nu)}};
    emit_json(f, sub, std::move(body));
    return success;
}

int run_f_table(const Flags& f, const CLI::App& sub, const std::string& m_list, const std::string& n_list)
{
    const std::vector<double> ms = parse_real_list(m_list);
    const std::vector<int> ns = parse_int_list(n_list);
    std::vector<std::vector<double>> rows;
    for (int n : ns) {
        for (double m : ms) {
            const double log_f = specfun::log_ratio_F(m, n);
            const double sign = std::abs(log_f) <= 1e-12 ? 0.0 : (log_f > 0.0 ? 1.0 : -1.0);
            const double expected = (m == 0.0 || m == 1.0) ? 0.0 : (m < 1.0 ? 1.0 : -1.0);
            rows.push_back({m, double(n), std::exp(log_f), log_f, sign, expected, sign == expected ? 1.0 : 0.0});
        }
    }
    Output out(f.out);
    write_csv(out.stream(), echo(sub), {"m", "n", "F", "log_F", "sign", "lemma_sign", "match"}, rows);
    return success;
}

int run_bubble_check(Flags f, const CLI::App& sub)
{
    const double m = finite(parse_m(f.m));
    const double tau = f.tau > 0.0 ? f.tau : 1.0;
    const ModelSpace space = build_space(f, SpaceKind::euclidean, DimensionalParameter::finite(m));
    const Bubble b = Bubble::with_tau(m, f.n, tau);
    const RadialField w = sample_bubble(space, b);
    const double pde = bubble_pde_residual(b, space);
    const double vol_closed = specfun::bubble_volume(m, f.n);
    const double vol = integrate(space, w.values.array().pow(critical_exponents(m, f.n).volume).matrix());
    const double lambda = specfun::lambda_euclidean(m, f.n);
    const double q = quotient_Q(space, w).q_value;
    const double q_moments = assembled_quotient(bubble_moments_closed_form(b), m, f.n);
    json body{{"m", m},
              {"n", f.n},
              {"tau", tau},
              {"truncation_radius", space.grid().truncation_radius},
              {"pde_residual", pde},
              {"volume_gap", std::abs(vol - vol_closed) / vol_closed},
              {"q_gap", std::abs(q - lambda) / lambda},
              {"q_moment_gap", std::abs(q_moments - lambda) / lambda},
              {"lambda_mn", lambda},
              {"q_value", q}};
    body["pass"] = body["pde_residual"].get<double>() <= 1e-8 && body["volume_gap"].get<double>() <= 1e-8
        && body["q_gap"].get<double>() <= 1e-6 && body["q_moment_gap"].get<double>() <= 1e-10;
    emit_json(f, sub, std::move(body));
    return success;
}

int run_quotient(const Flags& f, const CLI::App& sub, double bubble_tau)
{
    const ModelSpace space = build_space(f, parse_space_kind(f.space), parse_m(f.m));
    const RadialField w = input_field(f, space, bubble_tau);
    json body = to_json(quotient_Q(space, w));
    if (f.tau > 0.0)
        body.update(to_json(w_functional(space, w, f.tau)));
    emit_json(f, sub, std::move(body));
    return success;
}

int run_minimize(const Flags& f, const CLI::App& sub, MinimizeConfig cfg, const std::string& init)
{
    const ModelSpace space = build_space(f, parse_space_kind(f.space), parse_m(f.m));
    cfg.initial = parse_initial_field(init);
    cfg.rng_seed = f.seed;
    if (!f.input.empty())
        cfg.initial_values = input_field(f, space, cfg.bubble_tau).values;
    const MinimizeReport r = f.tau > 0.0 ? minimize_w_at_tau(space, f.tau, cfg) : minimize_quotient(space, cfg);
    if (f.csv) {
        Output out(f.out);
        write_trace_csv(out.stream(), r, echo(sub));
    } else {
        json body = to_json(r);
        if (f.tau > 0.0) {
            body["w_value"] = r.best_value;
            body["tau"] = f.tau;
        } else {
            body["q_value"] = r.best_value;
        }
        emit_json(f, sub, std::move(body));
    }
    return r.converged ? success : non_convergence;
}

int run_nu_sweep(const Flags& f, const CLI::App& sub, MinimizeConfig cfg, double tau_max, double tau_min, int points,
                 double cutoff_radius)
{
    const double m = finite(parse_m(f.m));
    const ModelSpace space = build_space(f, parse_space_kind(f.space), DimensionalParameter::finite(m));
    if (points < 2 || !(tau_max > tau_min) || !(tau_min > 0.0))
        throw PreconditionError("nu-sweep needs tau-max > tau-min > 0 and at least 2 points");
    std::vector<double> grid;
    for (int i = 0; i < points; ++i)
        grid.push_back(tau_max * std::pow(tau_min / tau_max, double(i) / (points - 1)));
    cfg.rng_seed = f.seed;
    const std::vector<NuPoint> sweep = nu_sweep(space, grid, cfg);
    std::vector<std::vector<double>> rows;
    for (const NuPoint& p : sweep) {
        const double probe = space.kind() == SpaceKind::sphere ? bubble_probe(space, p.tau, cutoff_radius)
                                                               : std::numeric_limits<double>::quiet_NaN();
        rows.push_back({p.tau, p.nu, p.el_w_residual, p.sup, p.converged ? 1.0 : 0.0, probe});
    }
    std::vector<std::string> header = echo(sub);
    header.push_back("nu_euclidean=" + format_number(nu_lambda_convert(specfun::lambda_euclidean(m, f.n), m, f.n,
                                                                      ConvertDirection::lambda_to_nu)));
    Output out(f.out);
    write_csv(out.stream(), header, {"tau", "nu", "el_w_residual", "sup", "converged", "probe"}, rows);
    return success;
}

int run_lift_check(const Flags& f, const CLI::App& sub, int fiber_nodes, const std::string& lift_csv,
                   double bubble_tau)
{
    const ModelSpace space = build_space(f, parse_space_kind(f.space), parse_m(f.m));
    const RadialField w = input_field(f, space, bubble_tau);
    const double tau = f.tau > 0.0 ? f.tau : optimal_lift_tau(space, w);
    json body = to_json(lift_quotient_check(space, w, tau, fiber_nodes));
    body["tau"] = tau;
    const LiftField lifted = lift(space, w, tau, fiber_nodes);
    body["volume_gap"] = lift_volume(space, lifted) / lift_volume_closed_form(space, w, tau) - 1.0;
    const double nn = space.n() + 2.0 * finite(space.m());
    if (std::abs(nn - std::round(nn)) < 1e-12)
        body["lambda_product"] = specfun::lambda_euclidean(0.0, static_cast<int>(std::round(nn)));
    if (!lift_csv.empty()) {
        std::ofstream out(lift_csv);
        if (!out)
            throw PreconditionError("cannot open " + lift_csv);
        write_lift_csv(out, lifted, echo(sub));
    }
    emit_json(f, sub, std::move(body));
    return success;
}

} // namespace

std::vector<double> parse_real_list(const std::string& text)
{
    std::vector<std::string> tokens;
    std::stringstream ss(text);
    for (std::string t; std::getline(ss, t, ',');)
        tokens.push_back(CLI::detail::trim_copy(t));
    std::vector<double> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == "...") {
            if (out.size() < 2 || i + 1 >= tokens.size())
                throw PreconditionError("'...' needs two values before it and one after: " + text);
            const double step = out[out.size() - 1] - out[out.size() - 2];
            const double end = std::stod(tokens[i + 1]);
            if (!(step != 0.0) || (end - out.back()) / step < 0.0)
                throw PreconditionError("'...' does not reach the final value: " + text);
            const double start = out.back();
            const long count = std::lround((end - start) / step);
            for (long k = 1; k < count; ++k)
                out.push_back(start + k * step);
            continue;
        }
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(tokens[i], &used);
        } catch (const std::exception&) {
            throw PreconditionError("not a number: '" + tokens[i] + "'");
        }
        if (used != tokens[i].size())
            throw PreconditionError("not a number: '" + tokens[i] + "'");
        if (!out.empty() && i > 0 && tokens[i - 1] == "..." && std::abs(out.back() - value) < 1e-9 * (1.0 + std::abs(value)))
            out.back() = value;
        else
            out.push_back(value);
    }
    if (out.empty())
        throw PreconditionError("empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text)
{
    const auto dots = text.find("..");
    if (dots != std::string::npos && text.find("...") == std::string::npos) {
        int lo = 0, hi = 0;
        try {
            lo = std::stoi(text.substr(0, dots));
            hi = std::stoi(text.substr(dots + 2));
        } catch (const std::exception&) {
            throw PreconditionError("bad integer range: " + text);
        }
        if (hi < lo)
            throw PreconditionError("empty integer range: " + text);
        std::vector<int> out;
        for (int k = lo; k <= hi; ++k)
            out.push_back(k);
        return out;
    }
    std::vector<int> out;
    for (double x : parse_real_list(text)) {
        if (x != std::round(x))
            throw PreconditionError("not an integer: " + format_number(x));
        out.push_back(static_cast<int>(x));
    }
    return out;
}

int dispatch(int argc, char** argv)
{
    CLI::App app{"Numerics for weighted Yamabe quotients of smooth metric measure spaces", "smms"};
    app.require_subcommand(1);
    Flags f;

    auto* constants = app.add_subcommand("constants", "closed-form constants for (m, n)");
    add_common(*constants, f, false);
    constants->add_flag("--json", f.json, "JSON output (the default)");

    std::string m_list = "0,0.25,...,3", n_list = "3..10";
    auto* ftable = app.add_subcommand("f-table", "CSV table of F(m, n) with its sign");
    ftable->add_option("--m", m_list, "m values, e.g. 0,0.25,...,3")->capture_default_str();
    ftable->add_option("--n", n_list, "n values, e.g. 3..10")->capture_default_str();
    ftable->add_option("--out", f.out, "output path (default stdout)");
    ftable->add_flag("--csv", f.csv, "CSV output (the default)");

    auto* bcheck = app.add_subcommand("bubble-check", "PDE, volume and quotient checks of the extremal function");
    add_common(*bcheck, f, true, false);
    bcheck->add_option("--tau", f.tau, "bubble scale (default 1)");

    double bubble_tau = 1.0;
    auto* quotient = app.add_subcommand("quotient", "weighted Yamabe quotient of a field (and W when --tau is set)");
    add_common(*quotient, f, true);
    quotient->add_option("--input", f.input, "field CSV (node,value); default constant (sphere) or bubble");
    quotient->add_option("--tau", f.tau, "also evaluate W(w, tau)");
    quotient->add_option("--bubble-tau", bubble_tau, "scale of the default euclidean bubble")->capture_default_str();

    MinimizeConfig cfg;
    std::string init = "constant";
    auto* minimize = app.add_subcommand("minimize", "descent on Q, or on W(., tau) when --tau is set");
    add_common(*minimize, f, true);
    minimize->add_option("--tau", f.tau, "minimize W(., tau) instead of Q");
    minimize->add_option("--init", init, "constant|bubble|random")->capture_default_str();
    minimize->add_option("--bubble-tau", cfg.bubble_tau, "scale of the bubble seed")->capture_default_str();
    minimize->add_option("--input", f.input, "initial field CSV (overrides --init)");
    minimize->add_option("--max-iter", cfg.max_iterations, "iteration cap")->capture_default_str();
    minimize->add_option("--tol", cfg.gradient_tolerance, "gradient tolerance")->capture_default_str();
    minimize->add_option("--seed", f.seed, "seed of the random initial field")->capture_default_str();
    minimize->add_flag("--json", f.json, "JSON report (the default)");
    minimize->add_flag("--csv", f.csv, "CSV trace instead of the JSON report");

    double tau_max = 1.0, tau_min = 0.01, cutoff_radius = 1.0;
    int points = 9;
    auto* nusweep = app.add_subcommand("nu-sweep", "nu(tau) along a geometric tau grid");
    add_common(*nusweep, f, true);
    nusweep->add_option("--tau-max", tau_max, "largest tau")->capture_default_str();
    nusweep->add_option("--tau-min", tau_min, "smallest tau")->capture_default_str();
    nusweep->add_option("--points", points, "grid points")->capture_default_str();
    nusweep->add_option("--cutoff", cutoff_radius, "cutoff radius of the bubble probe")->capture_default_str();
    nusweep->add_option("--max-iter", cfg.max_iterations, "iteration cap per point")->capture_default_str();
    nusweep->add_option("--seed", f.seed, "seed")->capture_default_str();
    nusweep->add_flag("--csv", f.csv, "CSV output (the default)");

    int fiber_nodes = 96;
    std::string lift_csv;
    auto* liftcheck = app.add_subcommand("lift-check", "quotient of the dimensional lift against its lower bound");
    add_common(*liftcheck, f, true);
    liftcheck->add_option("--tau", f.tau, "lift parameter (default: the optimal one)");
    liftcheck->add_option("--input", f.input, "field CSV; default constant (sphere) or bubble");
    liftcheck->add_option("--bubble-tau", bubble_tau, "scale of the default euclidean bubble")->capture_default_str();
    liftcheck->add_option("--fiber-nodes", fiber_nodes, "fiber quadrature nodes")->capture_default_str();
    liftcheck->add_option("--lift-csv", lift_csv, "also write the lifted samples to this CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return argument_error;
    }

    try {
        if (f.json && f.csv)
            throw PreconditionError("--json and --csv are exclusive");
        if (*constants)
            return run_constants(f, *constants);
        if (*ftable)
            return run_f_table(f, *ftable, m_list, n_list);
        if (*bcheck)
            return run_bubble_check(f, *bcheck);
        if (*quotient)
            return run_quotient(f, *quotient, bubble_tau);
        if (*minimize)
            return run_minimize(f, *minimize, cfg, init);
        if (*nusweep)
            return run_nu_sweep(f, *nusweep, cfg, tau_max, tau_min, points, cutoff_radius);
        if (*liftcheck)
            return run_lift_check(f, *liftcheck, fiber_nodes, lift_csv, bubble_tau);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return argument_error;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return argument_error;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return non_convergence;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return invariant_violation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return invariant_violation;
    }
    return argument_error;
}

} // namespace smms::cli
