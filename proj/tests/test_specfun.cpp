#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "smms/errors.hpp"
#include "smms/specfun.hpp"
#include "support.hpp"

using namespace smms;
using namespace smms::specfun;

TEST_CASE("log_gamma agrees with lgamma")
{
    for (double x : {1e-6, 1e-3, 0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 9.99, 10.0, 10.01, 50.5, 171.3, 1e3, 1e6}) {
        const double ref = boost::math::lgamma(x);
        CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
        CHECK(std::abs(log_gamma(x) - std::lgamma(x)) <= 1e-13 * std::max(1.0, std::abs(ref)));
    }
    CHECK(std::abs(log_gamma(0.5) - 0.5 * std::log(std::numbers::pi)) < 1e-14);
}

TEST_CASE("log_gamma rejects x <= 0")
{
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
    CHECK_THROWS_AS(log_gamma(std::nan("")), DomainError);
}

TEST_CASE("Lambda at m = 0 is the Yamabe constant of the round sphere")
{
    for (int n = 3; n <= 12; ++n) {
        const double expected = n * (n - 2.0) / 4.0 * std::pow(sphere_volume(n), 2.0 / n);
        CHECK(oracle::rel(lambda_euclidean(0.0, n), expected) < 1e-13);
        CHECK(oracle::rel(sphere_constant(0.0, n), expected) < 1e-13);
    }
}

TEST_CASE("Lambda equals Q of the extremal profile by independent quadrature")
{
    for (double m : {0.0, 0.5, 1.0, 2.0, 3.5}) {
        for (int n : {3, 4, 5, 7}) {
            const double d = m + n - 2.0;
            const double b = (m + n - 1.0) / (d * d);
            auto w = [=](double r) { return std::pow(1.0 + b * r * r, -0.5 * d); };
            auto dw = [=](double r) { return -d * b * r * std::pow(1.0 + b * r * r, -0.5 * d - 1.0); };
            const double area = unit_sphere_area(n);
            const double energy = area * oracle::half_line([&](double r) { return dw(r) * dw(r) * std::pow(r, n - 1); });
            const double inter = area * oracle::half_line([&](double r) { return std::pow(w(r), 2.0 * (m + n - 1.0) / d) * std::pow(r, n - 1); });
            const double vol = area * oracle::half_line([&](double r) { return std::pow(w(r), 2.0 * (m + n) / d) * std::pow(r, n - 1); });
            const double q = energy * std::pow(inter, 2.0 * m / n) / std::pow(vol, (2.0 * m + n - 2.0) / n);
            CHECK(oracle::rel(lambda_euclidean(m, n), q) < 1e-11);
            CHECK(oracle::rel(bubble_volume(m, n), vol) < 1e-11);
        }
    }
}

TEST_CASE("Q of the constant function on the round sphere")
{
    for (double m : {0.0, 0.3, 1.0, 4.0})
        for (int n : {3, 6, 9}) {
            const double c = (m + n - 2.0) / (4.0 * (m + n - 1.0));
            CHECK(oracle::rel(sphere_constant(m, n), c * n * (n - 1.0) * std::pow(sphere_volume(n), 2.0 / n)) < 1e-13);
            CHECK(oracle::rel(ratio_F(m, n), sphere_constant(m, n) / lambda_euclidean(m, n)) < 1e-12);
        }
}

TEST_CASE("F sign pattern")
{
    for (int n = 3; n <= 12; ++n) {
        CHECK(std::abs(ratio_F(0.0, n) - 1.0) <= 1e-12);
        CHECK(std::abs(ratio_F(1.0, n) - 1.0) <= 1e-12);
        for (double m : {0.1, 0.3, 0.5, 0.7, 0.9})
            CHECK(ratio_F(m, n) > 1.0);
        for (double m : {1.1, 1.5, 2.0, 5.0, 10.0})
            CHECK(ratio_F(m, n) < 1.0);
    }
}

TEST_CASE("F recursion and asymptotics")
{
    for (double m = 0.0; m <= 5.0; m += 0.25)
        for (double n = 3.0; n <= 40.0; n += 1.0)
            CHECK(std::abs(h_step_residual(m, n)) <= 1e-10);
    for (double m : {0.5, 2.0, 3.0}) {
        const double ref = f_asymptotic_gap(m, 50.0);
        for (double n = 50.0; n <= 200.0; n += 10.0)
            CHECK(f_asymptotic_gap(m, n) <= 10.0 * ref);
    }
}

TEST_CASE("unit sphere areas")
{
    CHECK(oracle::rel(unit_sphere_area(1.0), 2.0) < 1e-14);
    CHECK(oracle::rel(unit_sphere_area(2.0), 2.0 * std::numbers::pi) < 1e-14);
    CHECK(oracle::rel(unit_sphere_area(3.0), 4.0 * std::numbers::pi) < 1e-14);
    CHECK(std::abs(sphere_volume(3) - 2.0 * std::numbers::pi * std::numbers::pi) < 1e-13);
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(lambda_euclidean(-0.1, 3), DomainError);
    CHECK_THROWS_AS(lambda_euclidean(1.0, 2), DomainError);
    CHECK_THROWS_AS(lambda_euclidean(DimensionalParameter::infinity(), 3), DomainError);
    CHECK_THROWS_AS(ratio_F(1.0, 2.0), DomainError);
    CHECK_THROWS_AS(DimensionalParameter::finite(-1.0), DomainError);
}
