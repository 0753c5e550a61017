// Runs the acceptance suite and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "smms/bubbles.hpp"
#include "smms/errors.hpp"
#include "smms/functionals.hpp"
#include "smms/lift.hpp"
#include "smms/minimizer.hpp"
#include "smms/specfun.hpp"
#include "support.hpp"

using namespace smms;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty())
                detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0)
{
    char buffer[256];
    std::snprintf(buffer, sizeof buffer, format, a, b, c);
    return buffer;
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

DimensionalParameter fm(double m)
{
    return DimensionalParameter::finite(m);
}

ModelSpace flat(double m, int n, int nodes = 512)
{
    return make_space(SpaceKind::euclidean, n, fm(m), DensitySpec::unit(), nodes);
}

ModelSpace round_sphere(double m, int n, int nodes)
{
    return make_space(SpaceKind::sphere, n, fm(m), DensitySpec::unit(), nodes);
}

// 1: sharp constants
Outcome sharp_constants()
{
    Outcome o;
    double worst_quad = 0.0, worst_moment = 0.0, slowest = 0.0;
    for (double m : {0.0, 0.5, 1.0, 2.0})
        for (int n : {3, 4, 5})
            for (double tau : {0.5, 1.0, 2.0}) {
                const auto start = Clock::now();
                const double lambda = specfun::lambda_euclidean(m, n);
                const ModelSpace s = flat(m, n);
                const Bubble b = Bubble::with_tau(m, n, tau);
                worst_quad = std::max(worst_quad, oracle::rel(quotient_Q(s, sample_bubble(s, b)).q_value, lambda));
                worst_moment = std::max(worst_moment, oracle::rel(assembled_quotient(bubble_moments_closed_form(b), m, n), lambda));
                slowest = std::max(slowest, seconds_since(start));
            }
    o.require(worst_quad <= 1e-6, "quadrature");
    o.require(worst_moment <= 1e-10, "moments");
    o.require(slowest < 1.0, "runtime");
    o.detail = fmt("max rel quadrature %.2e, moments %.2e, slowest case %.3f s", worst_quad, worst_moment, slowest)
               + (o.detail.empty() ? "" : " (" + o.detail + ")");
    return o;
}

// 2: bubble PDE residual
Outcome pde_residual()
{
    Outcome o;
    double worst = 0.0;
    for (double m : {0.0, 0.5, 1.0, 2.0})
        for (int n : {3, 4, 5}) {
            const ModelSpace s = flat(m, n);
            for (double tau : {0.5, 1.0, 2.0})
                worst = std::max(worst, bubble_pde_residual(Bubble::with_tau(m, n, tau), s));
        }
    o.require(worst <= 1e-8, "residual");
    o.detail = fmt("max sup-norm residual %.2e", worst);
    return o;
}

// 3: volume identity
Outcome volume_identity()
{
    Outcome o;
    double worst = 0.0, spread = 0.0;
    for (double m : {0.0, 0.5, 1.0, 2.0})
        for (int n : {3, 4, 5}) {
            const ModelSpace s = flat(m, n);
            const double v = specfun::bubble_volume(m, n);
            double lo = 1e300, hi = 0.0;
            for (double tau : {0.5, 1.0, 2.0}) {
                const double mass = quotient_Q(s, sample_bubble(s, Bubble::with_tau(m, n, tau))).mass_volume;
                worst = std::max(worst, oracle::rel(mass, v));
                lo = std::min(lo, mass);
                hi = std::max(hi, mass);
            }
            spread = std::max(spread, (hi - lo) / hi);
        }
    o.require(worst <= 1e-8, "closed form");
    o.require(spread <= 1e-8, "tau dependence");
    o.detail = fmt("max rel gap to V %.2e, tau spread %.2e", worst, spread);
    return o;
}

// 4: sphere constant
Outcome sphere_constant()
{
    Outcome o;
    double worst = 0.0, worst_ratio = 0.0;
    for (double m : {0.0, 0.5, 1.0, 2.0})
        for (int n : {3, 4, 5}) {
            const ModelSpace s = round_sphere(m, n, 64);
            const double q = quotient_Q(s, s.constant(1.0)).q_value;
            worst = std::max(worst, oracle::rel(q, specfun::sphere_constant(m, n)));
            worst_ratio = std::max(worst_ratio, oracle::rel(q / specfun::lambda_euclidean(m, n), specfun::ratio_F(m, n)));
        }
    o.require(worst <= 1e-6, "Q(1)");
    o.require(worst_ratio <= 1e-10, "ratio");
    o.detail = fmt("max rel gap %.2e, ratio gap %.2e", worst, worst_ratio);
    return o;
}

// 5: F sign pattern, recursion and asymptotics
Outcome f_suite()
{
    Outcome o;
    double fixed = 0.0, step = 0.0, growth = 0.0;
    for (int n = 3; n <= 12; ++n) {
        fixed = std::max({fixed, std::abs(specfun::ratio_F(0.0, n) - 1.0), std::abs(specfun::ratio_F(1.0, n) - 1.0)});
        for (double m : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9})
            o.require(specfun::ratio_F(m, n) > 1.0, fmt("F(%g,%g) <= 1", m, n));
        for (double m : {1.1, 1.5, 2.0, 5.0, 10.0})
            o.require(specfun::ratio_F(m, n) < 1.0, fmt("F(%g,%g) >= 1", m, n));
    }
    for (double m = 0.0; m <= 5.0; m += 0.25)
        for (double n = 3.0; n <= 40.0; n += 1.0)
            step = std::max(step, std::abs(specfun::h_step_residual(m, n)));
    for (double m : {0.5, 2.0, 3.0}) {
        const double ref = specfun::f_asymptotic_gap(m, 50.0);
        for (double n = 50.0; n <= 200.0; n += 10.0)
            growth = std::max(growth, specfun::f_asymptotic_gap(m, n) / ref);
    }
    o.require(fixed <= 1e-12, "F(0,n), F(1,n)");
    o.require(step <= 1e-10, "h step");
    o.require(growth <= 10.0, "asymptotic gap");
    o.detail = fmt("|F-1| at m=0,1 %.2e, h step %.2e, gap growth %.2f", fixed, step, growth);
    return o;
}

// 6: Gagliardo-Nirenberg inequality on random fields
Outcome gn_inequality()
{
    Outcome o;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> extra(0.0, 2.0);
    double worst = 1e300;
    int count = 0;
    for (double m : {0.5, 1.0, 2.0})
        for (int n : {3, 4}) {
            const ModelSpace s = flat(m, n);
            const double lambda = specfun::lambda_euclidean(m, n);
            for (int k = 0; k < 50; ++k, ++count) {
                const oracle::RandomDecaying f(rng, m + n - 2.0 + extra(rng));
                worst = std::min(worst, quotient_Q(s, s.sample(f)).q_value - lambda);
            }
        }
    o.require(worst >= -1e-9, "Q below Lambda");
    o.detail = fmt("%g fields, min Q - Lambda %.3e", count, worst);
    return o;
}

// 7: conformal and scale invariance
Outcome invariance()
{
    Outcome o;
    std::mt19937_64 rng(7);
    double conformal = 0.0, scale = 0.0, homogeneity = 0.0;
    for (SpaceKind kind : {SpaceKind::sphere, SpaceKind::euclidean})
        for (double m : {0.5, 1.0, 2.0}) {
            const int n = 3;
            const ModelSpace s = kind == SpaceKind::sphere ? round_sphere(m, n, 128) : flat(m, n);
            const RadialField w = kind == SpaceKind::sphere ? s.sample(oracle::RandomSphere(rng))
                                                            : s.sample(oracle::RandomDecaying(rng, m + n - 1.0));
            for (int k = 0; k < 10; ++k) {
                const RadialField sigma = s.sample(oracle::random_sigma(rng, kind));
                const double moved = quotient_Q(conformal_change(s, sigma), w).q_value;
                const double pulled = quotient_Q(s, s.field((0.5 * sigma.values.array()).exp() * w.values.array())).q_value;
                conformal = std::max(conformal, oracle::rel(moved, pulled));
            }
            const double q = quotient_Q(s, w).q_value;
            for (double c : {1e-3, 0.37, 5.0, 1e3})
                homogeneity = std::max(homogeneity, oracle::rel(quotient_Q(s, s.field(c * w.values)).q_value, q));
            for (double c : {0.5, 2.0, 7.0}) {
                const double tau = 0.7;
                const double lhs = w_functional(scale_metric(s, c), w, tau).w_value;
                const double rhs = w_functional(s, s.field(std::pow(c, n * (m + n - 2.0) / (4.0 * (m + n))) * w.values), tau / c).w_value;
                scale = std::max(scale, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
            }
        }
    o.require(conformal <= 1e-6, "conformal");
    o.require(scale <= 1e-8, "W scale");
    o.require(homogeneity <= 1e-12, "homogeneity");
    o.detail = fmt("conformal gap %.2e, W scale residual %.2e, homogeneity %.2e", conformal, scale, homogeneity);
    return o;
}

// 8: energy bridge
Outcome energy_bridge()
{
    Outcome o;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> logu(std::log(1e-3), std::log(1e3));
    std::uniform_real_distribution<double> mu(0.2, 3.0);
    double worst = 0.0, trip = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double a = std::exp(logu(rng)), b = std::exp(logu(rng)), m = mu(rng);
        const int n = 3 + k % 5;
        auto f = [&](double x) { return a * std::pow(x, 2.0 * m) + m * b * std::pow(x, -double(n)); };
        const double t = oracle::golden_min([&](double s) { return f(std::exp(s)); }, -30.0, 30.0);
        worst = std::max(worst, oracle::rel(optimize_scaling(a, b, m, n).infimum, f(std::exp(t))));
        const double lambda = std::exp(logu(rng));
        const double nu = nu_lambda_convert(lambda, m, n, ConvertDirection::lambda_to_nu);
        trip = std::max(trip, oracle::rel(nu_lambda_convert(nu, m, n, ConvertDirection::nu_to_lambda), lambda));
    }
    o.require(worst <= 1e-8, "optimize_scaling");
    o.require(trip <= 1e-12, "round trip");
    o.detail = fmt("closed form vs golden section %.2e, nu/Lambda round trip %.2e", worst, trip);
    return o;
}

// 9: increment-m identity and the Phi bound
Outcome increment_m()
{
    Outcome o;
    std::mt19937_64 rng(9);
    double worst = 0.0, phi = 0.0;
    for (SpaceKind kind : {SpaceKind::sphere, SpaceKind::euclidean})
        for (double m : {0.0, 1.0, 2.0}) {
            const int n = 3;
            const ModelSpace s = kind == SpaceKind::sphere ? round_sphere(m, n, 96) : flat(m, n);
            const ModelSpace s1 = with_parameter(s, fm(m + 1.0), true);
            for (int k = 0; k < 20; ++k) {
                const RadialField w = kind == SpaceKind::sphere ? s.sample(oracle::RandomSphere(rng))
                                                                : s.sample(oracle::RandomDecaying(rng, m + n - 1.0));
                worst = std::max(worst, std::abs(increment_m_gap(s, s1, w)));
            }
        }
    for (double m : {0.25, 1.0, 2.0, 5.0})
        for (int n : {3, 4, 8}) {
            const PhiBound p = phi_bound(1.0, m, n);
            const auto [x, negmax] = boost::math::tools::brent_find_minima(
                [&](double t) { return -phi_bound(t, m, n).value; }, 1e-3, 100.0, 60);
            phi = std::max(phi, std::abs(-negmax - p.max_value) / p.max_value);
        }
    o.require(worst <= 1e-8, "increment gap");
    o.require(phi <= 1e-10, "Phi maximum");
    o.detail = fmt("max |gap| %.2e over 120 fields, Phi max rel gap %.2e", worst, phi);
    return o;
}

// 10: lift suite
Outcome lift_suite()
{
    Outcome o;
    double bubble = 0.0, worst_gap = 1e300, worst_tau = 0.0, gamma = 0.0;
    for (auto [m, n] : {std::pair{0.5, 3}, std::pair{1.0, 3}, std::pair{1.0, 4}}) {
        const ModelSpace s = flat(m, n);
        const RadialField w = sample_bubble(s, Bubble::with_tau(m, n, 1.0));
        const double q = lift_quotient(s, lift(s, w, optimal_lift_tau(s, w)));
        bubble = std::max(bubble, oracle::rel(q, specfun::lambda_euclidean(0.0, n + static_cast<int>(2.0 * m))));
    }
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> extra(0.0, 1.0);
    int k = 0;
    for (auto [m, n] : {std::pair{0.5, 3}, std::pair{1.0, 3}, std::pair{1.0, 4}, std::pair{1.5, 3}})
        for (int j = 0; j < 5; ++j, ++k) {
            const ModelSpace s = flat(m, n, 256);
            const RadialField w = s.sample(oracle::RandomDecaying(rng, m + n - 2.0 + extra(rng)));
            const double tau = optimal_lift_tau(s, w);
            for (double factor : {0.2, 1.0, 3.0})
                worst_gap = std::min(worst_gap, lift_quotient_check(s, w, factor * tau).gap);
            auto lhs = [&](double lt) { return lift_quotient(s, lift(s, w, std::exp(lt))); };
            double best = 0.0, value = 1e300;
            for (int g = -20; g <= 20; ++g) {
                const double lt = std::log(tau) + 0.1 * g, v = lhs(lt);
                if (v < value) {
                    value = v;
                    best = lt;
                }
            }
            const double argmin = std::exp(oracle::golden_min(lhs, best - 0.1, best + 0.1, 1e-9));
            worst_tau = std::max(worst_tau, std::abs(argmin / tau - 1.0));
        }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const double m2 = 0.5 * (1 + t % 4), l = 2.0 * u(rng), kk = l + 0.3 + 2.0 * u(rng);
        const double a = 0.5 + 2.0 * u(rng), tau = 0.2 + 3.0 * u(rng);
        const double quad = specfun::unit_sphere_area(2.0 * m2) * oracle::half_line([=](double r) {
            return std::pow(r, 2.0 * l + 2.0 * m2 - 1.0) * std::pow(a + r * r / tau, -(2.0 * m2 + kk));
        });
        gamma = std::max(gamma, oracle::rel(gamma_moment(m2, kk, l, a, tau), quad));
    }
    o.require(bubble <= 1e-5, "bubble lift");
    o.require(worst_gap >= -1e-8, "gap");
    o.require(worst_tau <= 0.01, "optimal tau");
    o.require(gamma <= 1e-8, "gamma moment");
    o.detail = fmt("bubble lift rel gap %.2e, min gap %.2e, ", bubble, worst_gap)
               + fmt("optimal tau mismatch %.2e over %g fields, gamma moment %.2e", worst_tau, k, gamma);
    return o;
}

// 11: minimization dichotomy
Outcome dichotomy()
{
    Outcome o;
    const int n = 3;
    auto start = Clock::now();
    const ModelSpace s2 = round_sphere(2.0, n, 128);
    MinimizeConfig cfg;
    cfg.max_iterations = 2000;
    const MinimizeReport a = minimize_quotient(s2, cfg);
    const double t2 = seconds_since(start);
    o.require(a.converged, "m=2 not converged");
    o.require(a.el_residual_norm <= 1e-4, "m=2 residual");
    o.require(a.best_value < specfun::lambda_euclidean(2.0, n), "m=2 Q");
    o.require(t2 <= 60.0, "m=2 runtime");

    start = Clock::now();
    const ModelSpace s05 = round_sphere(0.5, n, 512);
    cfg.initial = InitialField::bubble;
    cfg.bubble_tau = 1.0;
    cfg.max_iterations = 5000;
    const MinimizeReport b = minimize_quotient(s05, cfg);
    const double t05 = seconds_since(start);
    const double growth = b.sup_trace.back() / b.sup_trace.front();
    o.require(b.concentration_flag, "m=0.5 flag");
    o.require(growth >= 10.0, "m=0.5 sup growth");
    o.require(b.best_value > specfun::lambda_euclidean(0.5, n) && b.best_value < specfun::sphere_constant(0.5, n),
              "m=0.5 Q window");
    o.require(t05 <= 60.0, "m=0.5 runtime");
    const std::string d = fmt("m=2: Q %.10g vs Lambda %.10g, residual %.2e; ", a.best_value,
                              specfun::lambda_euclidean(2.0, n), a.el_residual_norm)
                          + fmt("m=0.5: sup growth %.1fx, Q %.10g in (Lambda, Q(1)) = ", growth, b.best_value)
                          + fmt("(%.10g, %.10g), ", specfun::lambda_euclidean(0.5, n), specfun::sphere_constant(0.5, n))
                          + fmt("mass localization %.2f; %.1f s / %.1f s", b.mass_localization, t2, t05);
    o.detail = d + (o.detail.empty() ? "" : " (" + o.detail + ")");
    return o;
}

// 12: nu sweep
Outcome nu_sweep_limit()
{
    Outcome o;
    const double m = 1.0;
    const int n = 3;
    const ModelSpace s = round_sphere(m, n, 256);
    std::vector<double> grid;
    for (int k = 0; k < 9; ++k)
        grid.push_back(std::pow(10.0, -2.0 * k / 8.0));
    MinimizeConfig cfg;
    cfg.max_iterations = 3000;
    const std::vector<NuPoint> sweep = nu_sweep(s, grid, cfg);
    const double nu_e = nu_lambda_convert(specfun::lambda_euclidean(m, n), m, n, ConvertDirection::lambda_to_nu);
    const double last = sweep.back().nu;
    double margin = 1e300;
    for (const NuPoint& p : sweep)
        margin = std::min(margin, bubble_probe(s, p.tau, 1.0) - p.nu);
    o.require(std::abs(last / nu_e - 1.0) <= 0.05, "limit");
    o.require(margin >= 0.0, "probe");
    o.detail = fmt("nu(0.01) = %.8g, nu_Euclidean = %.8g, min probe - nu %.3e", last, nu_e, margin);
    return o;
}

// 13: continuity in m
Outcome continuity()
{
    Outcome o;
    const ModelSpace inf = make_space(SpaceKind::sphere, 3, DimensionalParameter::infinity(),
                                      DensitySpec::from_function([](double t) { return std::exp(-std::cos(t)); }), 96);
    const RadialField w = inf.sample([](double t) { return 1.0 + 0.3 * std::cos(t) + 0.1 * std::cos(2.0 * t); });
    const double d100 = continuity_in_m(with_parameter(inf, fm(100.0), false), inf, w);
    const double d200 = continuity_in_m(with_parameter(inf, fm(200.0), false), inf, w);
    const double ratio = d100 / d200;
    o.require(ratio >= 1.6 && ratio <= 2.4, "ratio");
    o.detail = fmt("|Q_100 - Q_inf| = %.3e, |Q_200 - Q_inf| = %.3e, ratio %.3f", d100, d200, ratio);
    return o;
}

// 14: monotonicity inequality
Outcome monotonicity()
{
    Outcome o;
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> mk(0.1, 4.0), amp(-0.4, 0.4);
    double worst = 1e300;
    for (int k = 0; k < 20; ++k) {
        const double m = mk(rng), kk = mk(rng), a1 = amp(rng), a2 = 0.5 * amp(rng);
        const ModelSpace v = make_space(SpaceKind::sphere, 3, fm(m), DensitySpec::from_function([=](double t) {
                                            return 1.0 + a1 * std::cos(t) + a2 * std::cos(2.0 * t);
                                        }), 96);
        const ModelSpace vk = with_parameter(v, fm(m + kk), true);
        worst = std::min(worst, wcl_monotonicity_gap(v, vk, v.sample(oracle::RandomSphere(rng)), kk));
    }
    o.require(worst >= -1e-10, "gap");
    o.detail = fmt("min gap %.3e over 20 draws", worst);
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"sharp constant reproduction", sharp_constants},
        {"bubble PDE residual", pde_residual},
        {"volume identity", volume_identity},
        {"sphere constant", sphere_constant},
        {"F(m, n) suite", f_suite},
        {"Gagliardo-Nirenberg inequality on random fields", gn_inequality},
        {"conformal and scale invariance", invariance},
        {"energy bridge", energy_bridge},
        {"increment-m identity and Phi bound", increment_m},
        {"dimensional lift", lift_suite},
        {"minimization dichotomy on S^3", dichotomy},
        {"nu(tau) sweep on S^3", nu_sweep_limit},
        {"continuity in m", continuity},
        {"monotonicity in m", monotonicity},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = Clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                    seconds_since(start));
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
