#pragma once

// Descent on the weighted Yamabe quotient and on W(., tau) over positive
// volume-normalized radial fields.
//
// Both objectives are made scale invariant (Q already is; W is evaluated at
// the volume-normalized rescaling of its argument), so every iterate is
// simply renormalized. Gradients are the exact gradients of the discretized
// objectives, preconditioned by the H^1 Riesz map of the space.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smms/geometry.hpp"

namespace smms {

enum class InitialField { constant, bubble, random_smooth };

std::string to_string(InitialField kind);
InitialField parse_initial_field(const std::string& text);

struct MinimizeConfig {
    int max_iterations = 2000;
    double gradient_tolerance = 1e-8;  // on the preconditioned gradient norm, relative to |objective|
    InitialField initial = InitialField::constant;
    double bubble_tau = 1.0;           // scale of the bubble seed
    std::optional<Eigen::VectorXd> initial_values; // overrides `initial` when set (warm starts)
    double armijo = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 60;
    double initial_step = 1.0;
    double positivity_floor = 1e-14;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct MinimizeReport {
    RadialField best_field;
    double best_value = 0.0;     // Q, or W(., tau) for minimize_w_at_tau
    std::vector<double> q_trace; // objective after each accepted step (index 0: initial field)
    std::vector<double> sup_trace;
    std::vector<double> mass_trace;
    double el_residual_norm = 0.0;
    double multiplier = 0.0;     // lambda = Q for Q runs, c1 for W runs
    bool concentration_flag = false; // sup grew >= 10x over the run
    double mass_localization = 0.0;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;
};

/// The field a config starts from (before normalization).
RadialField initial_field(const ModelSpace& space, const MinimizeConfig& cfg);

/// Seed concentrating at the sphere's north pole:
/// (1 - lambda cos theta)^{-(m+n-2)/2}, the stereographic image of a bubble
/// of scale tau. On euclidean spaces, the bubble w_tau itself.
RadialField bubble_seed(const ModelSpace& space, double tau);

/// Value of the discrete objective the descent works on, Q(w) or (with tau)
/// W(s w, tau) with s chosen so that s w is volume-normalized; writes its
/// exact gradient with respect to the nodal values when `gradient` is set.
double descent_objective(const ModelSpace& space, const Eigen::VectorXd& w, std::optional<double> tau,
                         Eigen::VectorXd* gradient = nullptr);

/// Fraction of int w^{2(m+n)/(m+n-2)} v^m dvol carried by the 1% of nodes
/// nearest (in the radial coordinate) to the node where w peaks.
double mass_localization(const ModelSpace& space, const RadialField& w);

MinimizeReport minimize_quotient(const ModelSpace& space, const MinimizeConfig& cfg);

MinimizeReport minimize_w_at_tau(const ModelSpace& space, double tau, const MinimizeConfig& cfg);

struct NuPoint {
    double tau = 0.0;
    double nu = 0.0;
    double el_w_residual = 0.0;
    double sup = 0.0;
    bool converged = false;
};

/// nu(tau) along a decreasing tau grid. Each point takes the better of a
/// warm start from the previous minimizer and a bubble seed of scale tau.
std::vector<NuPoint> nu_sweep(const ModelSpace& space, const std::vector<double>& tau_grid,
                              const MinimizeConfig& cfg);

/// W(., tau) of the volume-normalized cutoff bubble eta * w centered at the
/// north pole of the sphere, with w the flat critical bubble at tau written in
/// geodesic distance and eta a smooth cutoff equal to 1 below half the radius.
double bubble_probe(const ModelSpace& space, double tau, double cutoff_radius);

/// CSV with columns iteration, q_value, sup, mass_localization.
void write_trace_csv(std::ostream& out, const MinimizeReport& report, const std::vector<std::string>& header = {});

} // namespace smms
