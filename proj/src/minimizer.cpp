#include "smms/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include "smms/bubbles.hpp"
#include "smms/errors.hpp"
#include "smms/functionals.hpp"

namespace smms {

namespace {

struct Evaluation {
    double value = 0.0;
    Eigen::VectorXd gradient;
};

using Objective = std::function<Evaluation(const Eigen::VectorXd&)>;

double finite_m(const ModelSpace& space, const char* what)
{
    if (space.m().infinite)
        throw DomainError(std::string(what) + " needs finite m");
    return space.m().value;
}

// Pieces of the discrete functionals and their gradients.
struct Pieces {
    double energy, inter, volume;
    Eigen::VectorXd d_energy, d_inter, d_volume;
};

class Discretization {
public:
    explicit Discretization(const ModelSpace& space)
        : space_(space), m_(finite_m(space, "the minimizer")), e_(critical_exponents(m_, space.n()))
    {
        const Eigen::VectorXd& mu = space.measure();
        stiffness_weight_ = mu.cwiseProduct(space.gradient_metric());
        potential_ = conformal_coefficient(space.m(), space.n()) * mu.cwiseProduct(space.weighted_curvature());
        inter_weight_ = mu.array() * (-space.log_density()).array().exp();
    }

    Pieces operator()(const Eigen::VectorXd& w) const
    {
        const Eigen::MatrixXd& d1 = space_.grid().d1;
        const Eigen::VectorXd wy = d1 * w;
        Pieces p;
        const Eigen::VectorXd flux = stiffness_weight_.cwiseProduct(wy);
        p.energy = flux.dot(wy) + potential_.dot(w.cwiseProduct(w));
        p.d_energy = 2.0 * (d1.transpose() * flux + potential_.cwiseProduct(w));
        const Eigen::ArrayXd a = w.array().abs();
        const Eigen::ArrayXd sgn = w.array().sign();
        const Eigen::ArrayXd ai = a.pow(e_.intermediate - 1.0);
        const Eigen::ArrayXd av = a.pow(e_.volume - 1.0);
        p.inter = (inter_weight_ * ai * a).sum();
        p.d_inter = (e_.intermediate * inter_weight_ * ai * sgn).matrix();
        p.volume = (space_.measure().array() * av * a).sum();
        p.d_volume = (e_.volume * space_.measure().array() * av * sgn).matrix();
        return p;
    }

    double m() const { return m_; }
    const CriticalExponents& exponents() const { return e_; }

private:
    const ModelSpace& space_;
    double m_;
    CriticalExponents e_;
    Eigen::VectorXd stiffness_weight_;
    Eigen::VectorXd potential_;
    Eigen::ArrayXd inter_weight_;
};

Objective quotient_objective(const Discretization& disc, int n)
{
    const double alpha = 2.0 * disc.m() / n;
    const double beta = (2.0 * disc.m() + n - 2.0) / n;
    return [&disc, alpha, beta](const Eigen::VectorXd& w) {
        const Pieces p = disc(w);
        Evaluation out;
        const double inter_factor = alpha == 0.0 ? 1.0 : std::pow(p.inter, alpha);
        out.value = p.energy * inter_factor / std::pow(p.volume, beta);
        // d Q = I^alpha V^{-beta} dE + Q (alpha dI / I - beta dV / V), fine when E is near 0
        out.gradient = p.d_energy * (inter_factor / std::pow(p.volume, beta)) - (out.value * beta / p.volume) * p.d_volume;
        if (alpha != 0.0)
            out.gradient += (out.value * alpha / p.inter) * p.d_inter;
        return out;
    };
}

// W(s w, tau) with s = V(w)^{-1/p}, so that V(s w) = 1.
Objective w_objective(const Discretization& disc, int n, double tau)
{
    const double m = disc.m();
    const double p_vol = disc.exponents().volume;
    const double p_int = disc.exponents().intermediate;
    const double ce = std::pow(tau, m / (m + n));
    const double ci = m * std::pow(tau, -n / (2.0 * (m + n)));
    return [&disc, p_vol, p_int, ce, ci, m](const Eigen::VectorXd& w) {
        const Pieces p = disc(w);
        const double s = std::pow(p.volume, -1.0 / p_vol);
        const Eigen::VectorXd ds = (-s / (p_vol * p.volume)) * p.d_volume;
        const double s_int = std::pow(s, p_int);
        Evaluation out;
        out.value = ce * s * s * p.energy + ci * s_int * p.inter - m;
        out.gradient = ce * (s * s * p.d_energy + 2.0 * s * p.energy * ds)
            + ci * (s_int * p.d_inter + p_int * s_int / s * p.inter * ds);
        return out;
    };
}

// H^1 Riesz map K + M of the space, in a diagonally scaled Cholesky form.
class Preconditioner {
public:
    explicit Preconditioner(const ModelSpace& space)
    {
        const Eigen::MatrixXd& d1 = space.grid().d1;
        const Eigen::VectorXd& mu = space.measure();
        Eigen::MatrixXd k = d1.transpose() * (mu.cwiseProduct(space.gradient_metric())).asDiagonal() * d1;
        k.diagonal() += mu;
        scale_ = k.diagonal().cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd scaled = scale_.asDiagonal() * k * scale_.asDiagonal();
        ldlt_.compute(scaled);
        if (ldlt_.info() != Eigen::Success)
            throw InvariantViolation("the H^1 preconditioner is not positive definite");
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& g) const
    {
        return scale_.cwiseProduct(ldlt_.solve(scale_.cwiseProduct(g)));
    }

private:
    Eigen::VectorXd scale_;
    Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

Eigen::VectorXd normalized(const ModelSpace& space, Eigen::VectorXd w, double floor)
{
    w = w.cwiseAbs().cwiseMax(floor);
    return volume_normalize(space, space.field(std::move(w))).values;
}

MinimizeReport descend(const ModelSpace& space, const MinimizeConfig& cfg, const Objective& objective)
{
    cfg.validate();
    const Preconditioner precond(space);
    Eigen::VectorXd w = normalized(space, initial_field(space, cfg).values, cfg.positivity_floor);
    Evaluation current = objective(w);
    if (!std::isfinite(current.value))
        throw NonConvergence("the objective is not finite at the initial field");

    MinimizeReport report;
    auto record = [&](const Eigen::VectorXd& x, double value) {
        report.q_trace.push_back(value);
        report.sup_trace.push_back(x.maxCoeff());
        report.mass_trace.push_back(mass_localization(space, space.field(x)));
    };
    record(w, current.value);

    double step = cfg.initial_step;
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        const Eigen::VectorXd direction = precond.apply(current.gradient);
        const double slope = current.gradient.dot(direction);
        report.gradient_norm = std::sqrt(std::max(slope, 0.0));
        if (report.gradient_norm <= cfg.gradient_tolerance * std::max(1.0, std::abs(current.value))) {
            report.converged = true;
            break;
        }
        bool accepted = false;
        for (int k = 0; k < cfg.max_backtracks; ++k) {
            Eigen::VectorXd trial = normalized(space, w - step * direction, cfg.positivity_floor);
            Evaluation next = objective(trial);
            if (std::isfinite(next.value) && next.value <= current.value - cfg.armijo * step * slope) {
                w = std::move(trial);
                current = std::move(next);
                accepted = true;
                break;
            }
            step *= cfg.backtrack;
        }
        if (!accepted)
            break; // no decrease along the preconditioned gradient at any tried step
        record(w, current.value);
        step = std::min(step / cfg.backtrack, 1e6 * cfg.initial_step);
    }
    report.iterations = it;
    report.best_field = space.field(w);
    report.best_value = current.value;
    report.mass_localization = report.mass_trace.back();
    report.concentration_flag = report.sup_trace.back() >= 10.0 * report.sup_trace.front();
    return report;
}

// Smooth step: 1 on [0, 1/2], 0 on [1, inf).
double cutoff(double x)
{
    if (x <= 0.5)
        return 1.0;
    if (x >= 1.0)
        return 0.0;
    auto bump = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    const double t = 2.0 * (x - 0.5);
    return bump(1.0 - t) / (bump(1.0 - t) + bump(t));
}

} // namespace

std::string to_string(InitialField kind)
{
    switch (kind) {
    case InitialField::constant:
        return "constant";
    case InitialField::bubble:
        return "bubble";
    case InitialField::random_smooth:
        return "random";
    }
    return "?";
}

InitialField parse_initial_field(const std::string& text)
{
    if (text == "constant")
        return InitialField::constant;
    if (text == "bubble")
        return InitialField::bubble;
    if (text == "random" || text == "random_smooth")
        return InitialField::random_smooth;
    throw PreconditionError("unknown initial field '" + text + "' (constant|bubble|random)");
}

void MinimizeConfig::validate() const
{
    if (max_iterations < 1)
        throw PreconditionError("max_iterations must be at least 1");
    if (!(gradient_tolerance > 0.0))
        throw PreconditionError("gradient_tolerance must be positive");
    if (!(positivity_floor > 0.0) || positivity_floor > 1e-8)
        throw PreconditionError("positivity_floor must lie in (0, 1e-8]");
    if (!(armijo > 0.0 && armijo < 1.0) || !(backtrack > 0.0 && backtrack < 1.0))
        throw PreconditionError("line search parameters must lie in (0, 1)");
    if (max_backtracks < 1 || !(initial_step > 0.0))
        throw PreconditionError("line search needs max_backtracks >= 1 and a positive initial step");
    if (!(bubble_tau > 0.0))
        throw PreconditionError("bubble_tau must be positive");
}

RadialField bubble_seed(const ModelSpace& space, double tau)
{
    const double m = finite_m(space, "bubble_seed");
    const int n = space.n();
    if (space.kind() == SpaceKind::euclidean)
        return sample_bubble(space, Bubble::with_tau(m, n, tau));
    const double d = m + n - 2.0;
    // stereographic chart r = tan(theta/2): (1 + b r^2)^{-d/2} (1 + r^2)^{d/2} is
    // proportional to (1 - lambda cos theta)^{-d/2}
    const double b = (m + n - 1.0) / (d * d * tau);
    const double lambda = (b - 1.0) / (b + 1.0);
    return space.sample([=](double theta) { return std::pow(1.0 - lambda * std::cos(theta), -0.5 * d); });
}

RadialField initial_field(const ModelSpace& space, const MinimizeConfig& cfg)
{
    if (cfg.initial_values) {
        if (cfg.initial_values->size() != space.size())
            throw PreconditionError("initial field has the wrong number of nodes");
        return space.field(*cfg.initial_values);
    }
    switch (cfg.initial) {
    case InitialField::constant:
        return space.constant(1.0);
    case InitialField::bubble:
        return bubble_seed(space, cfg.bubble_tau);
    case InitialField::random_smooth: {
        std::mt19937_64 rng(cfg.rng_seed);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        double a[4];
        for (double& c : a)
            c = coef(rng);
        const RadialField base =
            space.kind() == SpaceKind::sphere ? space.constant(1.0) : bubble_seed(space, cfg.bubble_tau);
        const double scale = space.kind() == SpaceKind::sphere ? 1.0 : std::sqrt(cfg.bubble_tau);
        const RadialField mod = space.sample([&](double x) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k)
                s += a[k] * std::cos((k + 1) * (space.kind() == SpaceKind::sphere ? x : std::atan(x / scale))) / (k + 1);
            return 1.0 + 0.2 * s;
        });
        return space.field(base.values.cwiseProduct(mod.values));
    }
    }
    throw PreconditionError("unknown initial field");
}

double mass_localization(const ModelSpace& space, const RadialField& w)
{
    space.require_aligned(w);
    const double m = finite_m(space, "mass_localization");
    const Eigen::ArrayXd mass = space.measure().array() * w.values.array().abs().pow(critical_exponents(m, space.n()).volume);
    Eigen::Index peak = 0;
    w.values.maxCoeff(&peak);
    const Eigen::VectorXd& x = space.nodes();
    std::vector<Eigen::Index> order(x.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return std::abs(x(i) - x(peak)) < std::abs(x(j) - x(peak));
    });
    const auto count = static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(x.size())));
    double near = 0.0;
    for (std::size_t k = 0; k < count; ++k)
        near += mass(order[k]);
    return near / mass.sum();
}

double descent_objective(const ModelSpace& space, const Eigen::VectorXd& w, std::optional<double> tau,
                         Eigen::VectorXd* gradient)
{
    if (w.size() != space.size())
        throw PreconditionError("field has the wrong number of nodes");
    const Discretization disc(space);
    const Objective f = tau ? w_objective(disc, space.n(), *tau) : quotient_objective(disc, space.n());
    Evaluation e = f(w);
    if (gradient)
        *gradient = std::move(e.gradient);
    return e.value;
}

MinimizeReport minimize_quotient(const ModelSpace& space, const MinimizeConfig& cfg)
{
    const Discretization disc(space);
    MinimizeReport report = descend(space, cfg, quotient_objective(disc, space.n()));
    report.multiplier = report.best_value;
    report.el_residual_norm = el_residual(space, report.best_field, report.best_value).norm;
    return report;
}

MinimizeReport minimize_w_at_tau(const ModelSpace& space, double tau, const MinimizeConfig& cfg)
{
    if (!(finite_m(space, "minimize_w_at_tau") > 0.0))
        throw DomainError("minimize_w_at_tau needs m > 0");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw DomainError("tau must be positive and finite");
    const Discretization disc(space);
    MinimizeReport report = descend(space, cfg, w_objective(disc, space.n(), tau));
    report.multiplier = el_w_multiplier(space, report.best_field, tau);
    report.el_residual_norm = el_w_residual(space, report.best_field, tau, report.multiplier);
    return report;
}

std::vector<NuPoint> nu_sweep(const ModelSpace& space, const std::vector<double>& tau_grid, const MinimizeConfig& cfg)
{
    if (!(finite_m(space, "nu_sweep") > 0.0))
        throw DomainError("nu_sweep needs m > 0");
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] > 0.0))
            throw DomainError("tau grid must be positive");
        if (i > 0 && !(tau_grid[i] < tau_grid[i - 1]))
            throw PreconditionError("tau grid must be decreasing");
    }
    std::vector<NuPoint> out;
    std::optional<Eigen::VectorXd> previous;
    for (double tau : tau_grid) {
        MinimizeConfig seeded = cfg;
        seeded.initial = InitialField::bubble;
        seeded.bubble_tau = tau;
        seeded.initial_values.reset();
        MinimizeReport best = minimize_w_at_tau(space, tau, seeded);
        if (previous) {
            MinimizeConfig warm = cfg;
            warm.initial_values = previous;
            MinimizeReport other = minimize_w_at_tau(space, tau, warm);
            if (other.best_value < best.best_value)
                best = std::move(other);
        }
        previous = best.best_field.values;
        out.push_back({tau, best.best_value, best.el_residual_norm, best.best_field.values.maxCoeff(), best.converged});
    }
    return out;
}

double bubble_probe(const ModelSpace& space, double tau, double cutoff_radius)
{
    if (space.kind() != SpaceKind::sphere)
        throw PreconditionError("bubble_probe works on the sphere");
    const double m = finite_m(space, "bubble_probe");
    if (!(tau > 0.0))
        throw DomainError("tau must be positive");
    if (!(cutoff_radius > 0.0))
        throw DomainError("cutoff radius must be positive");
    if (cutoff_radius > std::numbers::pi)
        throw DomainError("cutoff radius exceeds the polar-angle interval [0, pi]");
    const Bubble b = critical_bubble(m, space.n(), tau).bubble;
    const RadialField f = space.sample([&](double theta) { return cutoff(theta / cutoff_radius) * b.value(theta); });
    return w_functional(space, volume_normalize(space, f), tau).w_value;
}

void write_trace_csv(std::ostream& out, const MinimizeReport& report, const std::vector<std::string>& header)
{
    for (const auto& line : header)
        out << "# " << line << '\n';
    out << "iteration,q_value,sup,mass_localization\n";
    char buffer[128];
    for (std::size_t i = 0; i < report.q_trace.size(); ++i) {
        std::snprintf(buffer, sizeof buffer, "%zu,%.17g,%.17g,%.17g\n", i, report.q_trace[i], report.sup_trace[i],
                      report.mass_trace[i]);
        out << buffer;
    }
}

} // namespace smms
