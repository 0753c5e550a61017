#pragma once

// Gauss-Jacobi rules on (-1, 1) and barycentric differentiation matrices
// on the same nodes.

#include <Eigen/Dense>

namespace smms::quadrature {

struct GaussJacobiRule {
    Eigen::VectorXd nodes;   // strictly increasing, interior to (-1, 1)
    Eigen::VectorXd weights; // integrate f(x) (1-x)^alpha (1+x)^beta dx
};

/// N-point Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1. Exact for polynomials of degree < 2N.
GaussJacobiRule gauss_jacobi(int count, double alpha, double beta);

/// Barycentric weights for polynomial interpolation on arbitrary distinct
/// nodes, scaled so that max |weight| = 1.
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes);

/// First and second derivative matrices of the interpolating polynomial.
struct DifferentiationMatrices {
    Eigen::MatrixXd first;
    Eigen::MatrixXd second;
};

DifferentiationMatrices differentiation_matrices(const Eigen::VectorXd& nodes);
DifferentiationMatrices differentiation_matrices(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary);

/// Evaluates the interpolating polynomial through (nodes, values) at x.
double barycentric_interpolate(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary,
                               const Eigen::VectorXd& values, double x);

} // namespace smms::quadrature
