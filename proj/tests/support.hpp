#pragma once

// Oracles and random fields shared by the tests. Nothing here uses the
// library's quadrature: integrals go through Boost's double-exponential rules.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "smms/geometry.hpp"

namespace oracle {

/// int_0^inf f(r) dr for f decaying at infinity. Samples at overflowing r
/// (where products like r^a (1 + r^2)^{-b} turn into inf * 0) count as 0.
inline double half_line(const std::function<double(double)>& f)
{
    boost::math::quadrature::exp_sinh<double> rule;
    return rule.integrate(
        [&](double r) {
            const double v = f(r);
            return std::isnan(v) && r > 1e20 ? 0.0 : v;
        },
        1e-14);
}

/// int_a^b f(x) dx.
inline double interval(const std::function<double(double)>& f, double a, double b)
{
    boost::math::quadrature::tanh_sinh<double> rule;
    return rule.integrate(f, a, b, 1e-14);
}

/// int_{-1}^1 (1-x)^a (1+x)^b g(x) dx, with the endpoint distances taken
/// from the rule's complement argument so singular weights stay accurate.
inline double jacobi_integral(const std::function<double(double)>& g, double a, double b)
{
    boost::math::quadrature::tanh_sinh<double> rule;
    return rule.integrate(
        [&](double x, double xc) {
            const double right = x > 0.0 ? xc : 1.0 - x;
            const double left = x < 0.0 ? -xc : 1.0 + x;
            return std::pow(right, a) * std::pow(left, b) * g(x);
        },
        -1.0, 1.0, 1e-14);
}

/// Golden-section search for the minimum of a unimodal f on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-14)
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (std::abs(b - a) > tol * (std::abs(c) + std::abs(d))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Positive radial profile on R^n decaying like r^{-decay}: a random
/// combination of (1 + r^2/s_k)^{-decay/2} with random widths.
struct RandomDecaying {
    std::vector<double> coef, width;
    double decay;

    RandomDecaying(std::mt19937_64& rng, double decay_rate) : decay(decay_rate)
    {
        std::uniform_real_distribution<double> c(0.2, 1.0), s(0.3, 4.0);
        for (int k = 0; k < 3; ++k) {
            coef.push_back(c(rng));
            width.push_back(s(rng));
        }
    }

    double operator()(double r) const
    {
        double out = 0.0;
        for (std::size_t k = 0; k < coef.size(); ++k)
            out += coef[k] * std::pow(1.0 + r * r / width[k], -0.5 * decay);
        return out;
    }
};

/// Random smooth positive function of the polar angle on the sphere.
struct RandomSphere {
    double a[4];

    explicit RandomSphere(std::mt19937_64& rng)
    {
        std::uniform_real_distribution<double> c(-0.3, 0.3);
        for (double& x : a)
            x = c(rng);
    }

    double operator()(double theta) const
    {
        double out = 1.0;
        for (int k = 0; k < 4; ++k)
            out += a[k] * std::cos((k + 1) * theta) / (k + 1);
        return out;
    }
};

/// Smooth bounded function: random on the sphere, decaying on R^n.
inline std::function<double(double)> random_sigma(std::mt19937_64& rng, smms::SpaceKind kind)
{
    std::uniform_real_distribution<double> c(-0.5, 0.5), s(0.5, 3.0);
    const double a0 = c(rng), a1 = c(rng), a2 = c(rng), w = s(rng);
    if (kind == smms::SpaceKind::sphere)
        return [=](double t) { return a0 + a1 * std::cos(t) + a2 * std::cos(2.0 * t); };
    return [=](double r) { return a0 / (1.0 + r * r / w) + a1 * std::exp(-r * r / w) + a2 / (1.0 + r * r); };
}

inline double rel(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace oracle
