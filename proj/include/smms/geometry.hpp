#pragma once

// Rotationally symmetric model smooth metric measure spaces.
//
// A ModelSpace is either the round unit sphere S^n (radial coordinate: polar
// angle theta) or Euclidean R^n truncated at a radius R (radial coordinate r).
// Every field on a space is a function of the radial coordinate only and is
// stored by its values at the quadrature nodes.
//
// Internally each grid works in a computational coordinate y in (-1, 1) in
// which radial functions are analytic up to the endpoints:
//   sphere:     y = cos(theta)
//   euclidean:  r = L sinh(sqrt(xi)),  xi = U^2 (1 + y) / 2,  U = asinh(R / L)
// Nodes are Gauss-Jacobi points in y. The area factor sin^{n-1} / r^{n-1}
// is a Jacobi weight in y; its integer part goes into the quadrature weights
// and the nodes use the remaining exponent (0 or -1/2), because interpolation
// on Gauss-Jacobi points with large exponents is badly conditioned. The rule
// is exact for polynomials in y of degree below 2 * node_count minus the
// degree of the factor moved into the weights.
//
// The metric of a space is e^{2c} times the model metric (c = 0 unless the
// space came out of conformal_change or scale_metric) and the measure is
// v^m dvol. The density is stored as log v for finite m and as -phi for
// m = infinity; phi = -m log v covers both, and nothing else in the library
// does that bookkeeping.

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smms/specfun.hpp"

namespace smms {

enum class SpaceKind { sphere, euclidean };

std::string to_string(SpaceKind kind);
SpaceKind parse_space_kind(const std::string& text);

/// Nodes, quadrature and differentiation for one radial coordinate system.
/// Shared (immutable) between all spaces built over the same nodes.
struct RadialGrid {
    SpaceKind kind;
    double dimension;          // n, or the fiber dimension for product lifts
    double truncation_radius;  // euclidean only; +inf on the sphere
    double length_scale;       // L of the euclidean map (0.5 suits extremals of unit scale)
    double map_extent;         // U of the euclidean map

    Eigen::VectorXd y;         // computational coordinate
    Eigen::VectorXd coord;     // theta or r, strictly increasing
    Eigen::VectorXd weights;   // quadrature weights of the model area measure
    Eigen::VectorXd bary;      // barycentric weights in y
    Eigen::MatrixXd d1;        // d/dy
    Eigen::MatrixXd d2;        // d^2/dy^2

    // Model-metric coefficients at the nodes:
    //   df/dcoord = coord_deriv * f_y
    //   <grad f, grad h> = grad_coef * f_y * h_y
    //   Laplacian f = lap_second * f_yy + lap_first * f_y
    Eigen::VectorXd coord_deriv;
    Eigen::VectorXd grad_coef;
    Eigen::VectorXd lap_second;
    Eigen::VectorXd lap_first;

    Eigen::Index size() const { return y.size(); }
    bool same_nodes(const RadialGrid& other) const;
    double y_of(double coordinate) const;
};

std::shared_ptr<const RadialGrid> make_radial_grid(SpaceKind kind, double dimension, int node_count,
                                                   double truncation_radius = 50.0, double length_scale = 0.5);

/// Sampled values of a radial function, tagged with the grid it lives on.
struct RadialField {
    Eigen::VectorXd values;
    std::shared_ptr<const RadialGrid> grid;

    Eigen::Index size() const { return values.size(); }
    double operator[](Eigen::Index i) const { return values(i); }
};

/// Positive density v (finite m) or e^{-phi} (m = infinity), either as a
/// closed form of the radial coordinate or as samples on the nodes.
struct DensitySpec {
    std::function<double(double)> closed_form;
    std::vector<double> samples;

    static DensitySpec unit() { return {}; }
    static DensitySpec from_function(std::function<double(double)> f) { return {std::move(f), {}}; }
    static DensitySpec from_samples(std::vector<double> s) { return {{}, std::move(s)}; }
};

class ModelSpace {
public:
    SpaceKind kind() const { return grid_->kind; }
    int n() const { return n_; }
    DimensionalParameter m() const { return m_; }
    const RadialGrid& grid() const { return *grid_; }
    const std::shared_ptr<const RadialGrid>& grid_ptr() const { return grid_; }
    Eigen::Index size() const { return grid_->size(); }

    /// Radial coordinate (theta or r) of each node.
    const Eigen::VectorXd& nodes() const { return grid_->coord; }

    /// log v for finite m, -phi for m = infinity.
    const Eigen::VectorXd& log_density() const { return log_density_; }
    const Eigen::VectorXd& log_conformal() const { return log_conformal_; }
    /// Scalar curvature R of the metric.
    const Eigen::VectorXd& scalar_curvature() const { return scalar_curvature_; }
    /// R_phi^m, the weighted scalar curvature.
    const Eigen::VectorXd& weighted_curvature() const { return weighted_curvature_; }

    /// Quadrature weights of v^m dvol (e^{-phi} dvol when m = infinity).
    const Eigen::VectorXd& measure() const { return measure_; }
    /// Quadrature weights of dvol.
    const Eigen::VectorXd& volume() const { return volume_; }
    /// Node-wise factor with <grad f, grad h> = gradient_metric * f_y * h_y.
    const Eigen::VectorXd& gradient_metric() const { return gradient_metric_; }

    /// v for finite m, e^{-phi} for m = infinity.
    Eigen::VectorXd density() const;
    Eigen::VectorXd phi() const;
    /// Coefficient multiplying log_density inside phi: m, or 1 when m = infinity.
    double phi_scale() const { return m_.infinite ? 1.0 : m_.value; }

    Eigen::VectorXd derivative_y(const Eigen::VectorXd& f) const { return grid_->d1 * f; }
    /// Unweighted Laplace-Beltrami operator of the metric.
    Eigen::VectorXd laplacian(const Eigen::VectorXd& f) const;
    Eigen::VectorXd gradient_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& h) const;

    RadialField field(Eigen::VectorXd values) const;
    RadialField sample(const std::function<double(double)>& f) const;
    RadialField constant(double c) const;
    void require_aligned(const RadialField& f) const;

private:
    friend ModelSpace make_space(SpaceKind, int, DimensionalParameter, const DensitySpec&, int, double);
    friend ModelSpace conformal_change(const ModelSpace&, const RadialField&);
    friend ModelSpace scale_metric(const ModelSpace&, double);
    friend ModelSpace with_parameter(const ModelSpace&, DimensionalParameter, bool);
    friend ModelSpace make_space_on_grid(std::shared_ptr<const RadialGrid>, int, DimensionalParameter,
                                         const DensitySpec&);

    ModelSpace() = default;
    void finalize();

    std::shared_ptr<const RadialGrid> grid_;
    int n_ = 0;
    DimensionalParameter m_;
    Eigen::VectorXd log_density_;
    Eigen::VectorXd log_conformal_;
    Eigen::VectorXd log_conformal_y_;
    Eigen::VectorXd scalar_curvature_;

    Eigen::VectorXd weighted_curvature_;
    Eigen::VectorXd measure_;
    Eigen::VectorXd volume_;
    Eigen::VectorXd gradient_metric_;
};

/// Builds a model space. The euclidean truncation radius is enlarged by
/// factors of 10 until the closed-form tail of the unit-scale extremal
/// function's integrands is below 1e-12.
ModelSpace make_space(SpaceKind kind, int n, DimensionalParameter m, const DensitySpec& density,
                      int node_count, double truncation_radius = 50.0);

/// Same, over an existing grid (no truncation adjustment).
ModelSpace make_space_on_grid(std::shared_ptr<const RadialGrid> grid, int n, DimensionalParameter m,
                              const DensitySpec& density);

/// Truncation radius make_space settles on for (m, n).
double euclidean_truncation_radius(DimensionalParameter m, int n, double start = 50.0);

/// Closed-form tail bound used to pick the truncation radius.
double euclidean_tail_bound(DimensionalParameter m, int n, double radius);

/// Integral of f against v^m dvol.
double integrate(const ModelSpace& space, const RadialField& f);
double integrate(const ModelSpace& space, const Eigen::VectorXd& f);

/// df/dtheta or df/dr.
RadialField differentiate(const ModelSpace& space, const RadialField& f);

/// Delta_phi f = Delta f - <grad phi, grad f>.
RadialField weighted_laplacian(const ModelSpace& space, const RadialField& f);

/// R_phi^m = R + 2 Delta phi - (m+1)/m |grad phi|^2 (R + 2 Delta phi - |grad phi|^2 at m = infinity).
RadialField weighted_scalar_curvature(const ModelSpace& space);

/// (g, v^m dvol) -> (e^{2 sigma/(m+n-2)} g, e^{(m+n) sigma/(m+n-2)} v^m dvol). Finite m only.
ModelSpace conformal_change(const ModelSpace& space, const RadialField& sigma);

/// (g, v^m dvol_g) -> (c g, v^m dvol_{c g}): a constant rescaling of the
/// metric with the density v held fixed.
ModelSpace scale_metric(const ModelSpace& space, double factor);

/// The same metric with a different dimensional parameter. With
/// keep_density the density v is shared (measure v^{m'} dvol); otherwise phi
/// is shared (measure e^{-phi} dvol) and v is recomputed.
ModelSpace with_parameter(const ModelSpace& space, DimensionalParameter m, bool keep_density);

/// Spaces sharing grid, metric and density (parameters may differ).
bool same_geometry(const ModelSpace& a, const ModelSpace& b);

/// Two-column CSV (node, value) with '#' header lines.
void write_field_csv(std::ostream& out, const RadialField& f, const std::vector<std::string>& header = {});
RadialField read_field_csv(std::istream& in, const ModelSpace& space);

} // namespace smms
