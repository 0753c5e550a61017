#include "smms/functionals.hpp"

#include <cmath>
#include <limits>

#include "smms/errors.hpp"

namespace smms {

namespace {

void require_nonzero(const RadialField& w)
{
    if (w.values.cwiseAbs().maxCoeff() == 0.0)
        throw PreconditionError("w is identically zero");
}

double require_finite_m(const ModelSpace& space, const char* what)
{
    if (space.m().infinite)
        throw PreconditionError(std::string(what) + " requires finite m");
    return space.m().value;
}

void require_positive(const RadialField& w, const char* what)
{
    if (!(w.values.minCoeff() > 0.0))
        throw PreconditionError(std::string(what) + " requires w > 0 at every node");
}

double weighted_l2(const ModelSpace& space, const Eigen::VectorXd& f)
{
    return std::sqrt(space.measure().dot(f.cwiseProduct(f)));
}

Eigen::ArrayXd abs_pow(const Eigen::VectorXd& w, double p)
{
    return w.array().abs().pow(p);
}

void require_volume_normalized(const ModelSpace& space, const RadialField& w)
{
    const double p = critical_exponents(space.m().value, space.n()).volume;
    const double mass = space.measure().dot(abs_pow(w.values, p).matrix());
    if (std::abs(mass - 1.0) > 1e-8)
        throw PreconditionError("w must be volume-normalized (int w^{2(m+n)/(m+n-2)} = "
                                + std::to_string(mass) + ")");
}

void require_same_geometry(const ModelSpace& a, const ModelSpace& b)
{
    if (!same_geometry(a, b))
        throw PreconditionError("spaces do not share metric and grid");
}

bool m_is_density_shared(const ModelSpace& a, const ModelSpace& b)
{
    return (a.log_density() - b.log_density()).cwiseAbs().maxCoeff() <= 1e-12;
}

// The space with the same metric conformally normalized so that v = 1:
// ghat = v^{-2} g, reached with sigma = -(m+n-2) log v.
ModelSpace unit_density(const ModelSpace& space)
{
    if (space.m().is_zero())
        return space;
    const double scale = space.m().value + space.n() - 2.0;
    return conformal_change(space, space.field(-scale * space.log_density()));
}

} // namespace

CriticalExponents critical_exponents(double m, int n)
{
    if (!(m >= 0.0) || !std::isfinite(m))
        throw DomainError("critical exponents need finite m >= 0");
    const double d = m + n - 2.0;
    return {2.0 * (m + n) / d, 2.0 * (m + n - 1.0) / d, (m + n) / d, (m + n + 2.0) / d, d / (4.0 * (m + n - 1.0))};
}

double conformal_coefficient(DimensionalParameter m, int n)
{
    if (m.infinite)
        return 0.25;
    return critical_exponents(m.value, n).energy;
}

Eigen::VectorXd apply_conformal_laplacian(const ModelSpace& space, const Eigen::VectorXd& f)
{
    const double c = conformal_coefficient(space.m(), space.n());
    Eigen::VectorXd out = -weighted_laplacian(space, space.field(f)).values;
    out.array() += c * space.weighted_curvature().array() * f.array();
    return out;
}

double conformal_pairing(const ModelSpace& space, const Eigen::VectorXd& f, const Eigen::VectorXd& h)
{
    const double c = conformal_coefficient(space.m(), space.n());
    const Eigen::ArrayXd integrand =
        space.gradient_inner(f, h).array() + c * space.weighted_curvature().array() * f.array() * h.array();
    return space.measure().dot(integrand.matrix());
}

double dirichlet_energy(const ModelSpace& space, const RadialField& w)
{
    space.require_aligned(w);
    require_nonzero(w);
    return conformal_pairing(space, w.values, w.values);
}

double reassemble_quotient(const QuotientBreakdown& b, DimensionalParameter m, int n)
{
    if (m.infinite)
        return b.energy / b.l2_norm_squared * std::exp(b.entropy);
    const double mm = m.value;
    // grouped so that large m does not overflow the separate powers
    const double ratio = mm == 0.0 ? 1.0 : std::exp(2.0 * mm / n * std::log(b.mass_intermediate / b.mass_volume));
    return b.energy * ratio / std::pow(b.mass_volume, (n - 2.0) / n);
}

QuotientBreakdown quotient_Q(const ModelSpace& space, const RadialField& w)
{
    space.require_aligned(w);
    require_nonzero(w);
    QuotientBreakdown b;
    b.energy = conformal_pairing(space, w.values, w.values);
    const Eigen::VectorXd& mu = space.measure();
    const int n = space.n();
    if (space.m().infinite) {
        b.infinite_m = true;
        const Eigen::ArrayXd sq = w.values.array().square();
        const double norm2 = mu.dot(sq.matrix());
        Eigen::ArrayXd integrand(sq.size());
        for (Eigen::Index i = 0; i < sq.size(); ++i) {
            // log(w^2 e^{-phi} / ||w||^2), with 0 log 0 = 0
            integrand(i) = sq(i) == 0.0
                ? 0.0
                : sq(i) / norm2 * (std::log(sq(i) / norm2) + space.log_density()(i));
        }
        b.l2_norm_squared = norm2;
        b.mass_intermediate = norm2;
        b.mass_volume = norm2;
        b.entropy = -(2.0 / n) * mu.dot(integrand.matrix());
    } else {
        const auto e = critical_exponents(space.m().value, n);
        b.mass_intermediate = mu.dot((abs_pow(w.values, e.intermediate) * (-space.log_density()).array().exp()).matrix());
        b.mass_volume = mu.dot(abs_pow(w.values, e.volume).matrix());
    }
    b.q_value = reassemble_quotient(b, space.m(), n);
    return b;
}

WReport w_functional(const ModelSpace& space, const RadialField& w, double tau)
{
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw DomainError("tau must be positive and finite");
    space.require_aligned(w);
    const double energy = conformal_pairing(space, w.values, w.values);
    const Eigen::VectorXd& mu = space.measure();
    const int n = space.n();
    WReport r{0.0, tau};
    if (space.m().infinite) {
        const double log_scale = 0.5 * n * std::log(tau);
        double entropy = 0.0;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            const double sq = w[i] * w[i];
            if (sq > 0.0)
                entropy += mu(i) * sq * (log_scale + std::log(sq) + space.log_density()(i));
        }
        r.w_value = tau * energy - entropy;
    } else {
        const double m = space.m().value;
        const auto e = critical_exponents(m, n);
        double rest = 0.0;
        if (m > 0.0) {
            const double inter =
                mu.dot((abs_pow(w.values, e.intermediate) * (-space.log_density()).array().exp()).matrix());
            const double vol = mu.dot(abs_pow(w.values, e.volume).matrix());
            rest = m * (std::pow(tau, -n / (2.0 * (m + n))) * inter - vol);
        }
        r.w_value = std::pow(tau, m / (m + n)) * energy + rest;
    }
    if (!std::isfinite(r.w_value))
        throw NonConvergence("W evaluated to a non-finite value");
    return r;
}

ScalingOptimum optimize_scaling(double A, double B, double m, int n)
{
    if (!(A >= 0.0) || !(B >= 0.0))
        throw DomainError("optimize_scaling needs A, B >= 0");
    if (!(m > 0.0))
        throw DomainError("optimize_scaling needs m > 0");
    if (n < 1)
        throw DomainError("optimize_scaling needs n >= 1");
    if (A == 0.0)
        return {0.0, std::numeric_limits<double>::infinity(), true};
    if (B == 0.0)
        return {0.0, 0.0, true};
    const double nn = n;
    const double infimum = (2.0 * m + nn) / 2.0
        * std::exp(nn / (2.0 * m + nn) * (std::log(2.0 * A / nn) + (2.0 * m / nn) * std::log(B)));
    const double argmin = std::exp((std::log(nn * B) - std::log(2.0 * A)) / (2.0 * m + nn));
    return {infimum, argmin, false};
}

double nu_lambda_convert(double value, double m, int n, ConvertDirection direction)
{
    if (!(m >= 0.0) || !std::isfinite(m))
        throw DomainError("nu_lambda_convert needs finite m >= 0");
    const double nn = n;
    const double q = 2.0 * m + nn;
    if (direction == ConvertDirection::lambda_to_nu) {
        if (!(value > 0.0))
            throw DomainError("Lambda <= 0: the energy is -m (Lambda = 0) or -infinity (Lambda < 0)");
        return q / 2.0 * std::pow(2.0 * value / nn, nn / q) - m;
    }
    if (!(value > -m))
        throw DomainError("nu <= -m has no positive Lambda");
    return nn / 2.0 * std::pow(2.0 * (value + m) / q, q / nn);
}

Residual el_residual(const ModelSpace& space, const RadialField& w, double lambda)
{
    const double m = require_finite_m(space, "el_residual");
    space.require_aligned(w);
    require_positive(w, "el_residual");
    require_volume_normalized(space, w);
    const int n = space.n();
    const double nn = n;
    const auto e = critical_exponents(m, n);
    const Eigen::ArrayXd inv_v = (-space.log_density()).array().exp();
    const double inter = space.measure().dot((abs_pow(w.values, e.intermediate) * inv_v).matrix());
    const double d = m + nn - 2.0;
    const double c1 = 2.0 * m * (m + nn - 1.0) * lambda / (nn * d) * std::pow(inter, -(2.0 * m + nn) / nn);
    const double c2 = (2.0 * m + nn - 2.0) * (m + nn) * lambda / (nn * d) * std::pow(inter, -2.0 * m / nn);

    Eigen::VectorXd field = apply_conformal_laplacian(space, w.values);
    field.array() += c1 * w.values.array().pow(e.el_low) * inv_v - c2 * w.values.array().pow(e.el_high);
    const double norm = weighted_l2(space, field);
    return {space.field(std::move(field)), norm};
}

double el_w_multiplier(const ModelSpace& space, const RadialField& w, double tau)
{
    const double m = require_finite_m(space, "el_w_multiplier");
    space.require_aligned(w);
    const int n = space.n();
    const auto e = critical_exponents(m, n);
    const Eigen::ArrayXd inv_v = (-space.log_density()).array().exp();
    const double energy = conformal_pairing(space, w.values, w.values);
    const double inter = space.measure().dot((abs_pow(w.values, e.intermediate) * inv_v).matrix());
    const double vol = space.measure().dot(abs_pow(w.values, e.volume).matrix());
    const double a = m * (m + n - 1.0) / (m + n - 2.0);
    return (std::pow(tau, m / (m + n)) * energy + a * std::pow(tau, -n / (2.0 * (m + n))) * inter) / vol;
}

double el_w_residual(const ModelSpace& space, const RadialField& w, double tau, double c1)
{
    const double m = require_finite_m(space, "el_w_residual");
    if (!(tau > 0.0))
        throw DomainError("tau must be positive");
    space.require_aligned(w);
    require_positive(w, "el_w_residual");
    require_volume_normalized(space, w);
    const int n = space.n();
    const auto e = critical_exponents(m, n);
    const Eigen::ArrayXd inv_v = (-space.log_density()).array().exp();
    const double a = m * (m + n - 1.0) / (m + n - 2.0);

    Eigen::VectorXd field = std::pow(tau, m / (m + n)) * apply_conformal_laplacian(space, w.values);
    field.array() += a * std::pow(tau, -n / (2.0 * (m + n))) * w.values.array().pow(e.el_low) * inv_v
        - c1 * w.values.array().pow(e.el_high);
    return weighted_l2(space, field);
}

double increment_m_gap(const ModelSpace& space_m, const ModelSpace& space_m_plus_1, const RadialField& w)
{
    const double m = require_finite_m(space_m, "increment_m_gap");
    require_finite_m(space_m_plus_1, "increment_m_gap");
    require_same_geometry(space_m, space_m_plus_1);
    if (space_m_plus_1.m().value != m + 1.0)
        throw PreconditionError("increment_m_gap needs parameters m and m + 1");
    if (!m_is_density_shared(space_m, space_m_plus_1))
        throw PreconditionError("increment_m_gap needs both spaces to share the density v");
    space_m.require_aligned(w);
    require_positive(w, "increment_m_gap");
    const double n = space_m.n();
    const double d = m + n - 2.0;
    const Eigen::VectorXd lifted = w.values.array().pow((m + n - 1.0) / d).matrix();
    const double lhs = conformal_pairing(space_m_plus_1, lifted, lifted);
    const Eigen::VectorXd partner =
        (w.values.array().pow((m + n) / d) * space_m.log_density().array().exp()).matrix();
    const double rhs = (m + n - 1.0) * (m + n - 1.0) / ((m + n) * d) * conformal_pairing(space_m, w.values, partner);
    return lhs - rhs;
}

PhiBound phi_bound(double x, double m, int n)
{
    if (!(x > 0.0))
        throw DomainError("phi_bound needs x > 0");
    if (!(m > 0.0))
        throw DomainError("phi_bound needs m > 0");
    const double nn = n;
    const double a = (2.0 * m + nn - 2.0) * (m + nn);
    const double b = 2.0 * m * (m + nn - 1.0);
    const double value = a * std::pow(x, -2.0 * m / nn) - b * std::pow(x, -(2.0 * m + nn) / nn);
    const double argmax = (2.0 * m + nn) * (m + nn - 1.0) / a;
    const double max_value = a * nn / (2.0 * m + nn) * std::pow(a / ((2.0 * m + nn) * (m + nn - 1.0)), 2.0 * m / nn);
    return {value, max_value, argmax};
}

double wcl_monotonicity_gap(const ModelSpace& space_m, const ModelSpace& space_m_plus_k, const RadialField& w,
                            double k)
{
    const double m = require_finite_m(space_m, "wcl_monotonicity_gap");
    require_finite_m(space_m_plus_k, "wcl_monotonicity_gap");
    if (!(k > 0.0))
        throw DomainError("k must be positive");
    require_same_geometry(space_m, space_m_plus_k);
    if (std::abs(space_m_plus_k.m().value - (m + k)) > 1e-12 * (1.0 + m + k))
        throw PreconditionError("wcl_monotonicity_gap needs parameters m and m + k");
    if (!m_is_density_shared(space_m, space_m_plus_k))
        throw PreconditionError("wcl_monotonicity_gap needs both spaces to share the density v");
    space_m.require_aligned(w);
    require_nonzero(w);
    const double n = space_m.n();
    const double kappa = (m + k + n - 1.0) * (m + n - 2.0) / ((m + k + n - 2.0) * (m + n - 1.0));
    const ModelSpace low = unit_density(space_m);
    const ModelSpace high = unit_density(space_m_plus_k);
    return conformal_pairing(low, w.values, w.values) - kappa * conformal_pairing(high, w.values, w.values);
}

double continuity_in_m(const ModelSpace& space_k, const ModelSpace& space_infinity, const RadialField& w)
{
    require_finite_m(space_k, "continuity_in_m");
    if (!space_infinity.m().infinite)
        throw PreconditionError("continuity_in_m compares against an m = infinity space");
    require_same_geometry(space_k, space_infinity);
    if ((space_k.phi() - space_infinity.phi()).cwiseAbs().maxCoeff() > 1e-12)
        throw PreconditionError("continuity_in_m needs both spaces to share phi");
    return std::abs(quotient_Q(space_k, w).q_value - quotient_Q(space_infinity, w).q_value);
}

double w_continuity_in_m(const ModelSpace& space_k, const ModelSpace& space_infinity, const RadialField& w,
                         double tau)
{
    require_finite_m(space_k, "w_continuity_in_m");
    if (!space_infinity.m().infinite)
        throw PreconditionError("w_continuity_in_m compares against an m = infinity space");
    require_same_geometry(space_k, space_infinity);
    if ((space_k.phi() - space_infinity.phi()).cwiseAbs().maxCoeff() > 1e-12)
        throw PreconditionError("w_continuity_in_m needs both spaces to share phi");
    return std::abs(w_functional(space_k, w, tau).w_value - w_functional(space_infinity, w, tau).w_value);
}

RadialField volume_normalize(const ModelSpace& space, const RadialField& w)
{
    space.require_aligned(w);
    require_nonzero(w);
    if (space.m().infinite) {
        const double norm2 = space.measure().dot(w.values.cwiseProduct(w.values));
        return space.field(w.values / std::sqrt(norm2));
    }
    const double p = critical_exponents(space.m().value, space.n()).volume;
    const double mass = space.measure().dot(abs_pow(w.values, p).matrix());
    return space.field(w.values * std::pow(mass, -1.0 / p));
}

} // namespace smms
