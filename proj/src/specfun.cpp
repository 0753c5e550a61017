#include "smms/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "smms/errors.hpp"

namespace smms {

DimensionalParameter DimensionalParameter::finite(double m)
{
    if (!(m >= 0.0) || !std::isfinite(m))
        throw DomainError("dimensional parameter must be a finite nonnegative number, got " + std::to_string(m));
    return {m, false};
}

namespace specfun {

namespace {

// B_{2k} / (2k (2k-1)) for k = 1..10.
constexpr std::array<double, 10> kStirlingCoefficients = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

constexpr double kShiftThreshold = 10.0;

double stirling(double x)
{
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 0.0;
    double power = inv;
    for (double c : kStirlingCoefficients) {
        series += c * power;
        power *= inv2;
    }
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

void require_n(int n)
{
    if (n < 3)
        throw DomainError("dimension n must be at least 3, got " + std::to_string(n));
}

void require_m(double m)
{
    if (!(m >= 0.0) || !std::isfinite(m))
        throw DomainError("m must be finite and nonnegative, got " + std::to_string(m));
}

} // namespace

double log_gamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("log_gamma requires a positive finite argument, got " + std::to_string(x));
    if (x >= kShiftThreshold)
        return stirling(x);
    // Gamma(x) = Gamma(x + k) / (x (x+1) ... (x+k-1))
    double product = 1.0;
    double shifted = x;
    while (shifted < kShiftThreshold) {
        product *= shifted;
        shifted += 1.0;
    }
    return stirling(shifted) - std::log(product);
}

double lambda_euclidean(DimensionalParameter m, int n)
{
    if (m.infinite)
        throw DomainError("lambda_euclidean is defined only for finite m");
    return lambda_euclidean(m.value, n);
}

double lambda_euclidean(double m, int n)
{
    require_m(m);
    require_n(n);
    const double nn = n;
    const double log_value = std::log(nn * std::numbers::pi) + 2.0 * std::log(m + nn - 2.0)
        - std::log(2.0 * m + nn - 2.0)
        + (2.0 * m / nn) * (std::log(2.0 * (m + nn - 1.0)) - std::log(2.0 * m + nn - 2.0))
        + (2.0 / nn) * (log_gamma((2.0 * m + nn) / 2.0) - log_gamma(m + nn));
    return std::exp(log_value);
}

double bubble_volume(double m, int n)
{
    require_m(m);
    require_n(n);
    const double nn = n;
    const double log_value = 0.5 * nn * std::log(std::numbers::pi)
        + 0.5 * nn * (2.0 * std::log(m + nn - 2.0) - std::log(m + nn - 1.0))
        + log_gamma((2.0 * m + nn) / 2.0) - log_gamma(m + nn);
    return std::exp(log_value);
}

double sphere_constant(double m, int n)
{
    require_m(m);
    require_n(n);
    const double nn = n;
    const double log_value = std::log(nn * (nn - 1.0) * (m + nn - 2.0) * std::numbers::pi / (m + nn - 1.0))
        + (2.0 / nn) * (log_gamma(nn / 2.0) - log_gamma(nn));
    return std::exp(log_value);
}

double log_ratio_F(double m, double n)
{
    require_m(m);
    if (!(n > 2.0))
        throw DomainError("ratio_F requires n > 2");
    const double rational = std::log((n - 1.0) * (2.0 * m + n - 2.0)) - std::log((m + n - 1.0) * (m + n - 2.0));
    const double power = (2.0 * m / n) * (std::log(2.0 * m + n - 2.0) - std::log(2.0 * (m + n - 1.0)));
    const double gammas = (2.0 / n)
        * ((log_gamma(m + n) - log_gamma(n)) + (log_gamma(n / 2.0) - log_gamma((2.0 * m + n) / 2.0)));
    return rational + power + gammas;
}

double ratio_F(double m, double n)
{
    return std::exp(log_ratio_F(m, n));
}

double h_step_residual(double m, double n)
{
    const double log_h_next = 0.5 * (n + 2.0) * log_ratio_F(m, n + 2.0);
    const double log_h = 0.5 * n * log_ratio_F(m, n);
    const double closed_form = 0.5 * n
            * std::log(((n + 1.0) * (2.0 * m + n) * (m + n - 1.0) * (m + n - 2.0))
                / ((m + n + 1.0) * (m + n) * (n - 1.0) * (2.0 * m + n - 2.0)))
        + m * std::log(((2.0 * m + n) * (m + n - 1.0)) / ((m + n + 1.0) * (2.0 * m + n - 2.0)));
    return (log_h_next - log_h) - closed_form;
}

double f_asymptotic_gap(double m, double n)
{
    const double n3 = n * n * n;
    return n3 * n * std::abs(log_ratio_F(m, n) + m * (m - 1.0) / (2.0 * n3));
}

double unit_sphere_area(double d)
{
    if (!(d > 0.0))
        throw DomainError("unit_sphere_area requires d > 0");
    return 2.0 * std::exp(0.5 * d * std::log(std::numbers::pi) - log_gamma(0.5 * d));
}

double sphere_volume(int n)
{
    return unit_sphere_area(n + 1.0);
}

} // namespace specfun
} // namespace smms
