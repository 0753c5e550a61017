#pragma once

// Closed-form constants built from the gamma function.
//
// Every constant is assembled in log space and exponentiated at the end so
// that arguments of Gamma beyond ~170 do not overflow.

#include <limits>

namespace smms {

/// Dimensional parameter m in [0, infinity].
struct DimensionalParameter {
    double value = 0.0;
    bool infinite = false;

    static DimensionalParameter finite(double m);
    static DimensionalParameter infinity() { return {std::numeric_limits<double>::infinity(), true}; }

    bool is_zero() const { return !infinite && value == 0.0; }
    bool operator==(const DimensionalParameter&) const = default;
};

namespace specfun {

/// ln Gamma(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Sharp Gagliardo-Nirenberg constant Lambda_{m,n} on Euclidean space.
double lambda_euclidean(DimensionalParameter m, int n);
double lambda_euclidean(double m, int n);

/// Volume of the extremal function at unit scale:
/// V = pi^{n/2} ((m+n-2)^2/(m+n-1))^{n/2} Gamma((2m+n)/2) / Gamma(m+n).
double bubble_volume(double m, int n);

/// Weighted Yamabe quotient of the constant function on the round sphere.
double sphere_constant(double m, int n);

/// Ratio of sphere_constant to lambda_euclidean, defined for real n > 2.
double ratio_F(double m, double n);
double log_ratio_F(double m, double n);

/// log H(m,n+2) - log H(m,n) minus its closed-form expression, H = F^{n/2}.
double h_step_residual(double m, double n);

/// n^4 |log F(m,n) + m(m-1)/(2n^3)|.
double f_asymptotic_gap(double m, double n);

/// Volume of the unit (d-1)-sphere in R^d, d > 0 real.
double unit_sphere_area(double d);

/// Volume of the unit n-sphere S^n (the boundary of the unit ball in R^{n+1}).
double sphere_volume(int n);

} // namespace specfun
} // namespace smms
