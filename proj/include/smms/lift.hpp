#pragma once

// Dimensional lift of a positive radial w on (M^n, g, 1^m dvol) to
//   f(x, s) = (w(x)^{-2/(m+n-2)} + s^2/tau)^{-(2m+n-2)/2}
// on M x R^{2m}, and the classical (m = 0) Yamabe quotient of f.
//
// The fiber integral at base node x is taken in the scaled variable
// t = s / sqrt(tau a(x)), a = w^{-2/(m+n-2)}, so one fiber grid serves every
// base node; the fiber radius of sample (i, j) is sqrt(tau a_i) t_j.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smms/geometry.hpp"

namespace smms {

struct LiftField {
    std::shared_ptr<const RadialGrid> base_grid;
    std::shared_ptr<const RadialGrid> fiber_grid; // euclidean grid of dimension 2m in t
    double fiber_half_dimension = 0.0;           // m
    int base_dimension = 0;                      // n
    double tau = 0.0;
    Eigen::VectorXd base_values;   // w at the base nodes
    Eigen::MatrixXd fiber_radius;  // s at (base node, fiber node)
    Eigen::MatrixXd values;        // f at (base node, fiber node)

    /// f at sample (i, j) recomputed from w and tau.
    double reconstruct(Eigen::Index i, Eigen::Index j) const;
};

/// Requires v = 1 on the base, 2m a positive integer and w > 0.
LiftField lift(const ModelSpace& space, const RadialField& w, double tau, int fiber_nodes = 96);

/// Yamabe quotient of the lift on M x R^{2m} with the product metric.
double lift_quotient(const ModelSpace& space, const LiftField& f);

/// int f^{2(2m+n)/(2m+n-2)} over the product by quadrature.
double lift_volume(const ModelSpace& space, const LiftField& f);

/// pi^m tau^m Gamma(m+n)/Gamma(2m+n) int_M w^{2(m+n)/(m+n-2)}.
double lift_volume_closed_form(const ModelSpace& space, const RadialField& w, double tau);

/// C in Q(f) >= C ((2m+n-2)/(n(m+n-2)^2) Q(w))^{n/(2m+n)}.
double lift_constant(double m, int n);

/// The tau at which the lower bound is attained:
/// n (m+n-2)^2 int w^{2(m+n-1)/(m+n-2)} / (2 (m+n-1) (L_phi^m w, w)).
double optimal_lift_tau(const ModelSpace& space, const RadialField& w);

struct LiftCheck {
    double lhs = 0.0; // Q(f)
    double rhs = 0.0;
    double gap = 0.0; // lhs - rhs
    double optimal_tau = 0.0;
};

/// Throws DomainError when (L_phi^m w, w) <= 0.
LiftCheck lift_quotient_check(const ModelSpace& space, const RadialField& w, double tau, int fiber_nodes = 96);

/// CSV with columns base_node, fiber_node, value and '#' header lines.
void write_lift_csv(std::ostream& out, const LiftField& f, const std::vector<std::string>& header = {});

} // namespace smms
