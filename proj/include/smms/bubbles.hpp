#pragma once

// Extremal functions of the sharp Gagliardo-Nirenberg inequalities on R^n,
//   w_tau(r) = tau^{-n(m+n-2)/(4(m+n))} (1 + (m+n-1) r^2 / ((m+n-2)^2 tau))^{-(m+n-2)/2},
// and the equivalent form (2 eps / (eps^2 + r^2))^{(m+n-2)/2} with
// eps^2 = (m+n-2)^2 tau / (m+n-1). Centered at the origin.

#include "smms/geometry.hpp"

namespace smms {

class Bubble {
public:
    static Bubble with_tau(double m, int n, double tau);
    static Bubble with_epsilon(double m, int n, double epsilon);

    double m() const { return m_; }
    int n() const { return n_; }
    double tau() const { return tau_; }
    double epsilon() const;

    /// w_tau(r).
    double value(double r) const;
    /// d w_tau / dr.
    double derivative(double r) const;
    /// Flat Laplacian of w_tau at radius r.
    double laplacian(double r) const;
    /// (2 eps / (eps^2 + r^2))^{(m+n-2)/2}.
    double epsilon_value(double r) const;
    /// w_tau(0), the supremum.
    double sup() const { return value(0.0); }

private:
    Bubble(double m, int n, double tau) : m_(m), n_(n), tau_(tau) {}
    double m_;
    int n_;
    double tau_;
};

double bubble_profile(const Bubble& b, double r);

RadialField sample_bubble(const ModelSpace& space, const Bubble& b);

/// Sup over nodes of
///   -tau^{m/(m+n)} Delta w + (m(m+n-1)/(m+n-2)) tau^{-n/(2(m+n))} w^{(m+n)/(m+n-2)}
///     - ((m+n)(m+n-1)/(m+n-2)) w^{(m+n+2)/(m+n-2)}
/// for the field w on the space, with the Laplacian of the space's metric.
double model_equation_residual(const ModelSpace& space, const RadialField& w, double m, double tau);

/// model_equation_residual of the sampled bubble. The space must be
/// euclidean with v = 1 and the bubble's n.
double bubble_pde_residual(const Bubble& b, const ModelSpace& space);

/// int_{R^d} |y|^{2l} (a + |y|^2/tau)^{-e} dy, finite when e > d/2 + l.
double radial_moment(double d, double l, double e, double a, double tau);

/// int_{R^{2 m2}} |y|^{2l} (a + |y|^2/tau)^{-(2 m2 + k)} dy, finite when m2 + k > l.
double gamma_moment(double m2, double k, double l, double a, double tau);

struct BubbleMoments {
    double volume;            // int w^{2(m+n)/(m+n-2)}
    double intermediate_mass; // int w^{2(m+n-1)/(m+n-2)}
    double dirichlet;         // int |grad w|^2
};

/// Closed-form moments, cross-checked against quadrature on a euclidean
/// grid; a mismatch beyond 1e-8 relative throws NonConvergence.
BubbleMoments bubble_moments(const Bubble& b, int node_count = 512);

/// Closed-form moments only.
BubbleMoments bubble_moments_closed_form(const Bubble& b);

/// Q assembled from the moments (flat space, v = 1).
double assembled_quotient(const BubbleMoments& moments, double m, int n);

/// The volume-normalized critical point of W(., tau) on flat R^n with v = 1:
/// s w_{tau'} with tau' = tau V^{2/(2m+n)}, s = V^{-(m+n-2)/(2(m+n))}, and
/// multiplier c1 = ((m+n)(m+n-1)/(m+n-2)) V^{2/(2m+n)}, V = bubble_volume(m, n).
struct CriticalBubble {
    Bubble bubble;
    double amplitude;
    double multiplier;
};

CriticalBubble critical_bubble(double m, int n, double tau);

} // namespace smms
