#include "smms/lift.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "smms/errors.hpp"
#include "smms/functionals.hpp"
#include "smms/specfun.hpp"

namespace smms {

namespace {

double require_liftable(const ModelSpace& space)
{
    if (space.m().infinite)
        throw DomainError("the lift needs finite m");
    const double m = space.m().value;
    const double twice = 2.0 * m;
    if (!(m > 0.0) || std::abs(twice - std::round(twice)) > 1e-12)
        throw DomainError("the lift needs 2m to be a positive integer");
    if (space.log_density().cwiseAbs().maxCoeff() > 1e-14)
        throw PreconditionError("the lift needs v = 1 on the base; normalize conformally first");
    return m;
}

// Fiber radius in t beyond which every fiber integrand has relative tail
// below 1e-14. The slowest integrand is f^2 ~ t^{-2(2m+n-2)}.
double fiber_truncation(double m, int n)
{
    const double decay = 2.0 * (n + m) - 4.0; // tail ~ T^{-decay} / decay
    double radius = 50.0;
    while (std::pow(radius, -decay) / decay > 1e-14 && radius < 1e15)
        radius *= 10.0;
    return radius;
}

} // namespace

double LiftField::reconstruct(Eigen::Index i, Eigen::Index j) const
{
    const double m = fiber_half_dimension;
    const double d = m + base_dimension - 2.0;
    const double s = fiber_radius(i, j);
    return std::pow(std::pow(base_values(i), -2.0 / d) + s * s / tau, -0.5 * (2.0 * m + base_dimension - 2.0));
}

LiftField lift(const ModelSpace& space, const RadialField& w, double tau, int fiber_nodes)
{
    const double m = require_liftable(space);
    space.require_aligned(w);
    if (!(w.values.minCoeff() > 0.0))
        throw DomainError("the lift needs w > 0");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw DomainError("tau must be positive and finite");
    const int n = space.n();
    const double d = m + n - 2.0;

    LiftField out;
    out.base_grid = space.grid_ptr();
    out.fiber_grid = make_radial_grid(SpaceKind::euclidean, 2.0 * m, fiber_nodes, fiber_truncation(m, n));
    out.fiber_half_dimension = m;
    out.base_dimension = n;
    out.tau = tau;
    out.base_values = w.values;

    const Eigen::ArrayXd a = w.values.array().pow(-2.0 / d);
    const Eigen::ArrayXd& t = out.fiber_grid->coord.array();
    out.fiber_radius = ((tau * a).sqrt().matrix() * t.matrix().transpose());
    // q = a (1 + t^2)
    const Eigen::ArrayXXd q = a.matrix() * (1.0 + t.square()).matrix().transpose();
    out.values = q.pow(-0.5 * (2.0 * m + n - 2.0)).matrix();
    return out;
}

double lift_volume(const ModelSpace& space, const LiftField& f)
{
    const double m = require_liftable(space);
    const double big_n = 2.0 * m + space.n();
    const Eigen::ArrayXd a = f.base_values.array().pow(-2.0 / (m + space.n() - 2.0));
    // fiber integral at node i, in t, times the Jacobian (tau a_i)^m
    const Eigen::VectorXd fiber = f.values.array().pow(2.0 * big_n / (big_n - 2.0)).matrix() * f.fiber_grid->weights;
    return space.volume().dot(((f.tau * a).pow(m) * fiber.array()).matrix());
}

double lift_volume_closed_form(const ModelSpace& space, const RadialField& w, double tau)
{
    const double m = require_liftable(space);
    const int n = space.n();
    using specfun::log_gamma;
    const double factor = std::exp(m * std::log(std::numbers::pi * tau) + log_gamma(m + n) - log_gamma(2.0 * m + n));
    const double p = critical_exponents(m, n).volume;
    return factor * space.volume().dot(w.values.array().pow(p).matrix());
}

double lift_quotient(const ModelSpace& space, const LiftField& f)
{
    const double m = require_liftable(space);
    if (!space.grid().same_nodes(*f.base_grid))
        throw PreconditionError("lift and space live on different base grids");
    const int n = space.n();
    const double big_n = 2.0 * m + n;
    const RadialGrid& fg = *f.fiber_grid;
    const Eigen::VectorXd a = f.base_values.array().pow(-2.0 / (m + n - 2.0)).matrix();
    const Eigen::ArrayXd jac = (f.tau * a.array()).pow(m);
    // grad a = -(2/d) w^{-2/d-1} grad w; differentiating w keeps the dynamic range small
    const double d = m + n - 2.0;
    const Eigen::ArrayXd grad_a2 = space.gradient_inner(f.base_values, f.base_values).array()
        * (2.0 / d * f.base_values.array().pow(-2.0 / d - 1.0)).square();
    const double c = (big_n - 2.0) / (4.0 * (big_n - 1.0));

    // d f / d s along each fiber, from the fiber grid: df/dt / sqrt(tau a)
    const Eigen::MatrixXd df_dt =
        (f.values * fg.d1.transpose()).array().rowwise() * fg.coord_deriv.transpose().array();
    const Eigen::ArrayXXd df_ds = df_dt.array().colwise() / (f.tau * a.array()).sqrt();
    // d f / d x at fixed s = -(N-2)/2 q^{-N/2} da/dx, q = f^{-2/(N-2)}
    const Eigen::ArrayXXd q_pow = f.values.array().pow(2.0 * big_n / (big_n - 2.0)); // q^{-N}
    const double half = 0.5 * (big_n - 2.0);
    const Eigen::ArrayXXd grad_x2 = half * half * (q_pow.colwise() * grad_a2);

    const Eigen::ArrayXXd energy_density =
        grad_x2 + df_ds.square() + c * (f.values.array().square().colwise() * space.scalar_curvature().array());
    const Eigen::VectorXd energy_fiber = energy_density.matrix() * fg.weights;
    const Eigen::VectorXd volume_fiber = q_pow.matrix() * fg.weights;
    const double energy = space.volume().dot((jac * energy_fiber.array()).matrix());
    const double volume = space.volume().dot((jac * volume_fiber.array()).matrix());
    return energy / std::pow(volume, (big_n - 2.0) / big_n);
}

double lift_constant(double m, int n)
{
    if (!(m >= 0.0))
        throw DomainError("lift_constant needs m >= 0");
    const double nn = n;
    const double big_n = 2.0 * m + nn;
    using specfun::log_gamma;
    const double log_c = 2.0 / big_n * (m * std::log(std::numbers::pi) + log_gamma(m + nn) - log_gamma(big_n))
        + 2.0 * m / big_n * std::log((big_n - 2.0) / (2.0 * (m + nn - 1.0)));
    return big_n * (big_n - 2.0) * std::exp(log_c);
}

double optimal_lift_tau(const ModelSpace& space, const RadialField& w)
{
    const double m = require_liftable(space);
    const int n = space.n();
    const double energy = conformal_pairing(space, w.values, w.values);
    if (!(energy > 0.0))
        throw DomainError("the lift bound needs (L_phi^m w, w) > 0");
    const double d = m + n - 2.0;
    const double inter = space.volume().dot(w.values.array().pow(critical_exponents(m, n).intermediate).matrix());
    return n * d * d * inter / (2.0 * (m + n - 1.0) * energy);
}

LiftCheck lift_quotient_check(const ModelSpace& space, const RadialField& w, double tau, int fiber_nodes)
{
    const double m = require_liftable(space);
    const int n = space.n();
    LiftCheck out;
    out.optimal_tau = optimal_lift_tau(space, w);
    const double q = quotient_Q(space, w).q_value;
    const double d = m + n - 2.0;
    out.rhs = lift_constant(m, n) * std::pow((2.0 * m + n - 2.0) / (n * d * d) * q, n / (2.0 * m + n));
    out.lhs = lift_quotient(space, lift(space, w, tau, fiber_nodes));
    out.gap = out.lhs - out.rhs;
    return out;
}

void write_lift_csv(std::ostream& out, const LiftField& f, const std::vector<std::string>& header)
{
    for (const auto& line : header)
        out << "# " << line << '\n';
    out << "# tau=" << f.tau << " m=" << f.fiber_half_dimension << " n=" << f.base_dimension << '\n';
    out << "base_node,fiber_node,value\n";
    char buffer[96];
    for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
            std::snprintf(buffer, sizeof buffer, "%.17g,%.17g,%.17g\n", f.base_grid->coord(i), f.fiber_radius(i, j),
                          f.values(i, j));
            out << buffer;
        }
    }
}

} // namespace smms
