#include "smms/bubbles.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <numbers>

#include "smms/errors.hpp"
#include "smms/specfun.hpp"

namespace smms {

namespace {

void require_parameters(double m, int n)
{
    if (!(m >= 0.0) || !std::isfinite(m))
        throw DomainError("bubble needs finite m >= 0");
    if (n < 3)
        throw DomainError("bubble needs n >= 3");
}

std::string format_double(double x)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3g", x);
    return buffer;
}

double relative_gap(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace

Bubble Bubble::with_tau(double m, int n, double tau)
{
    require_parameters(m, n);
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw DomainError("bubble scale tau must be positive");
    return Bubble(m, n, tau);
}

Bubble Bubble::with_epsilon(double m, int n, double epsilon)
{
    require_parameters(m, n);
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw DomainError("bubble scale epsilon must be positive");
    const double d = m + n - 2.0;
    return Bubble(m, n, epsilon * epsilon * (m + n - 1.0) / (d * d));
}

double Bubble::epsilon() const
{
    const double d = m_ + n_ - 2.0;
    return std::sqrt(d * d * tau_ / (m_ + n_ - 1.0));
}

double Bubble::value(double r) const
{
    const double d = m_ + n_ - 2.0;
    const double b = (m_ + n_ - 1.0) / (d * d * tau_);
    return std::pow(tau_, -n_ * d / (4.0 * (m_ + n_))) * std::pow(1.0 + b * r * r, -0.5 * d);
}

double Bubble::derivative(double r) const
{
    const double d = m_ + n_ - 2.0;
    const double b = (m_ + n_ - 1.0) / (d * d * tau_);
    return -d * b * r * std::pow(tau_, -n_ * d / (4.0 * (m_ + n_))) * std::pow(1.0 + b * r * r, -0.5 * d - 1.0);
}

double Bubble::laplacian(double r) const
{
    // w = A (1 + b r^2)^{-d/2}; w'' + (n-1) w'/r
    const double d = m_ + n_ - 2.0;
    const double b = (m_ + n_ - 1.0) / (d * d * tau_);
    const double amp = std::pow(tau_, -n_ * d / (4.0 * (m_ + n_)));
    const double q = 1.0 + b * r * r;
    return amp * (-d * b * n_ * std::pow(q, -0.5 * d - 1.0) + d * (d + 2.0) * b * b * r * r * std::pow(q, -0.5 * d - 2.0));
}

double Bubble::epsilon_value(double r) const
{
    const double eps = epsilon();
    return std::pow(2.0 * eps / (eps * eps + r * r), 0.5 * (m_ + n_ - 2.0));
}

double bubble_profile(const Bubble& b, double r)
{
    if (!(r >= 0.0))
        throw DomainError("bubble_profile needs r >= 0");
    return b.value(r);
}

RadialField sample_bubble(const ModelSpace& space, const Bubble& b)
{
    if (space.kind() != SpaceKind::euclidean)
        throw PreconditionError("bubbles are sampled on euclidean spaces");
    return space.sample([&](double r) { return b.value(r); });
}

double model_equation_residual(const ModelSpace& space, const RadialField& w, double m, double tau)
{
    space.require_aligned(w);
    const double n = space.n();
    const double d = m + n - 2.0;
    const double a = m * (m + n - 1.0) / d;
    const double k = (m + n) * (m + n - 1.0) / d;
    const Eigen::VectorXd lap = space.laplacian(w.values);
    const Eigen::ArrayXd res = -std::pow(tau, m / (m + n)) * lap.array()
        + a * std::pow(tau, -n / (2.0 * (m + n))) * w.values.array().abs().pow((m + n) / d)
        - k * w.values.array().abs().pow((m + n + 2.0) / d);
    return res.abs().maxCoeff();
}

double bubble_pde_residual(const Bubble& b, const ModelSpace& space)
{
    if (space.kind() != SpaceKind::euclidean)
        throw PreconditionError("bubble_pde_residual needs a euclidean space");
    if (space.n() != b.n())
        throw PreconditionError("bubble and space dimensions differ");
    if (space.log_density().cwiseAbs().maxCoeff() > 0.0 || space.log_conformal().cwiseAbs().maxCoeff() > 0.0)
        throw PreconditionError("bubble_pde_residual needs the flat metric with v = 1");
    return model_equation_residual(space, sample_bubble(space, b), b.m(), b.tau());
}

double radial_moment(double d, double l, double e, double a, double tau)
{
    if (!(d > 0.0) || !(l >= 0.0) || !(a > 0.0) || !(tau > 0.0))
        throw DomainError("radial_moment needs d > 0, l >= 0, a > 0, tau > 0");
    const double tail = e - 0.5 * d - l;
    if (!(tail > 0.0))
        throw DomainError("radial moment diverges: need e > d/2 + l");
    using specfun::log_gamma;
    const double log_value = 0.5 * d * std::log(std::numbers::pi) + log_gamma(0.5 * d + l) + log_gamma(tail)
        + (0.5 * d + l) * std::log(tau) - log_gamma(0.5 * d) - log_gamma(e) - tail * std::log(a);
    return std::exp(log_value);
}

double gamma_moment(double m2, double k, double l, double a, double tau)
{
    if (!(m2 > 0.0))
        throw DomainError("gamma_moment needs m2 > 0");
    if (!(k >= 0.0))
        throw DomainError("gamma_moment needs k >= 0");
    if (!(m2 + k > l))
        throw DomainError("gamma_moment diverges: need m2 + k > l");
    return radial_moment(2.0 * m2, l, 2.0 * m2 + k, a, tau);
}

BubbleMoments bubble_moments_closed_form(const Bubble& b)
{
    const double m = b.m();
    const double n = b.n();
    const double d = m + n - 2.0;
    const double tau = b.tau();
    const double inv_b = d * d * tau / (m + n - 1.0); // 1/b in (1 + b r^2)
    const double amp_log = -n * d / (4.0 * (m + n)) * std::log(tau);

    BubbleMoments out{};
    const double pv = 2.0 * (m + n) / d;
    const double pi = 2.0 * (m + n - 1.0) / d;
    out.volume = std::exp(pv * amp_log) * radial_moment(n, 0.0, m + n, 1.0, inv_b);
    out.intermediate_mass = std::exp(pi * amp_log) * radial_moment(n, 0.0, m + n - 1.0, 1.0, inv_b);
    // |w'|^2 = A^2 d^2 b^2 r^2 (1 + b r^2)^{-(m+n)}
    out.dirichlet = std::exp(2.0 * amp_log) * d * d / (inv_b * inv_b) * radial_moment(n, 1.0, m + n, 1.0, inv_b);
    return out;
}

BubbleMoments bubble_moments(const Bubble& b, int node_count)
{
    const BubbleMoments closed = bubble_moments_closed_form(b);
    const double m = b.m();
    const int n = b.n();
    // scale the truncation with the bubble's width
    const double width = std::sqrt(b.tau());
    const double radius = width * euclidean_truncation_radius(DimensionalParameter::finite(m), n);
    const ModelSpace space = make_space_on_grid(make_radial_grid(SpaceKind::euclidean, n, node_count, radius, 0.5 * width),
                                                n, DimensionalParameter::finite(m), DensitySpec::unit());
    const RadialField w = sample_bubble(space, b);
    const double d = m + n - 2.0;
    const double volume = integrate(space, w.values.array().pow(2.0 * (m + n) / d).matrix());
    const double inter = space.volume().dot(w.values.array().pow(2.0 * (m + n - 1.0) / d).matrix());
    const Eigen::VectorXd dr = differentiate(space, w).values;
    const double dirichlet = space.volume().dot(dr.cwiseProduct(dr));
    const double worst = std::max({relative_gap(volume, closed.volume), relative_gap(inter, closed.intermediate_mass),
                                   relative_gap(dirichlet, closed.dirichlet)});
    if (worst > 1e-8)
        throw NonConvergence("bubble moments: quadrature disagrees with the closed form (relative gap "
                             + format_double(worst) + "); the grid is misconfigured");
    return closed;
}

double assembled_quotient(const BubbleMoments& moments, double m, int n)
{
    return moments.dirichlet * std::pow(moments.intermediate_mass, 2.0 * m / n)
        / std::pow(moments.volume, (2.0 * m + n - 2.0) / n);
}

CriticalBubble critical_bubble(double m, int n, double tau)
{
    require_parameters(m, n);
    const double volume = specfun::bubble_volume(m, n);
    const double stretch = std::pow(volume, 2.0 / (2.0 * m + n));
    const double d = m + n - 2.0;
    return {Bubble::with_tau(m, n, tau * stretch), std::pow(volume, -d / (2.0 * (m + n))),
            (m + n) * (m + n - 1.0) / d * stretch};
}

} // namespace smms
