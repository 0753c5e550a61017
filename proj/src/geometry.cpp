#include "smms/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "smms/errors.hpp"
#include "smms/quadrature.hpp"

namespace smms {

namespace {

constexpr double kTailTarget = 1e-12;
constexpr double kMaxTruncation = 1e15;

// u coth(u), with the removable singularity at 0 handled by its series.
double u_coth_u(double u)
{
    if (std::abs(u) < 1e-4)
        return 1.0 + u * u / 3.0;
    return u / std::tanh(u);
}

// Nodes for the weight (1-y)^alpha (1+y)^beta. Gauss-Jacobi points for the
// full exponents interpolate badly once they exceed 1/2, so the integer part
// of each exponent is moved into the weights and the nodes use the remainder
// (0 or -1/2), keeping the weights positive and the Lebesgue constant <= sqrt(N).
struct NodeSet {
    Eigen::VectorXd y;
    Eigen::VectorXd bary;
    Eigen::VectorXd weights;
};

NodeSet reduced_jacobi_nodes(int count, double alpha, double beta)
{
    const double alpha_int = std::ceil(alpha - 1e-12);
    const double beta_int = std::ceil(beta - 1e-12);
    const auto rule = quadrature::gauss_jacobi(count, alpha - alpha_int, beta - beta_int);
    NodeSet out{rule.nodes, Eigen::VectorXd(count), Eigen::VectorXd(count)};
    for (int j = 0; j < count; ++j) {
        const double x = rule.nodes(j);
        const double one_minus = 1.0 - x;
        const double one_plus = 1.0 + x;
        out.weights(j) = rule.weights(j) * std::pow(one_minus, alpha_int) * std::pow(one_plus, beta_int);
        out.bary(j) = (j % 2 == 0 ? 1.0 : -1.0) * std::sqrt(one_minus * one_plus * rule.weights(j));
    }
    out.bary /= out.bary.cwiseAbs().maxCoeff();
    return out;
}

void fill_sphere(RadialGrid& g, int count)
{
    const double d = g.dimension;
    const double half = 0.5 * (d - 2.0);
    const NodeSet nodes = reduced_jacobi_nodes(count, half, half);
    const double area = specfun::unit_sphere_area(d);

    // theta increasing means y = cos(theta) decreasing
    g.y = nodes.y.reverse();
    g.bary = nodes.bary.reverse();
    g.weights = area * nodes.weights.reverse();
    g.coord.resize(count);
    g.coord_deriv.resize(count);
    g.grad_coef.resize(count);
    g.lap_second.resize(count);
    g.lap_first.resize(count);
    for (int i = 0; i < count; ++i) {
        const double y = g.y(i);
        const double one_minus = 1.0 - y;
        const double one_plus = 1.0 + y;
        const double sin_theta = std::sqrt(one_minus * one_plus);
        g.coord(i) = 2.0 * std::atan2(std::sqrt(one_minus), std::sqrt(one_plus));
        g.coord_deriv(i) = -sin_theta;
        g.grad_coef(i) = one_minus * one_plus;
        g.lap_second(i) = one_minus * one_plus;
        g.lap_first(i) = -d * y;
    }
}

void fill_euclidean(RadialGrid& g, int count)
{
    const double d = g.dimension;
    const double L = g.length_scale;
    const double U = std::asinh(g.truncation_radius / L);
    g.map_extent = U;
    const double s = 0.5 * U * U;
    const NodeSet nodes = reduced_jacobi_nodes(count, 0.0, 0.5 * (d - 2.0));
    const double log_area = std::log(specfun::unit_sphere_area(d));

    g.y = nodes.y;
    g.bary = nodes.bary;
    g.weights.resize(count);
    g.coord.resize(count);
    g.coord_deriv.resize(count);
    g.grad_coef.resize(count);
    g.lap_second.resize(count);
    g.lap_first.resize(count);
    for (int i = 0; i < count; ++i) {
        const double xi = s * (1.0 + g.y(i));
        const double u = std::sqrt(xi);
        const double sh = std::sinh(u);
        const double ch = std::cosh(u);
        const double log_sinc = u < 1e-8 ? u * u / 6.0 : std::log(sh / u);
        g.coord(i) = L * sh;
        g.weights(i) = std::exp(log_area + d * std::log(L) + (d - 1.0) * log_sinc + std::log(ch)
                                + 0.5 * d * std::log(s) - std::log(2.0))
            * nodes.weights(i);
        const double scale = L * L * ch * ch;
        g.coord_deriv(i) = 2.0 * u / (s * L * ch);
        g.grad_coef(i) = g.coord_deriv(i) * g.coord_deriv(i);
        g.lap_second(i) = 4.0 * xi / (s * s * scale);
        g.lap_first(i) = (2.0 - 2.0 * u * std::tanh(u) + 2.0 * (d - 1.0) * u_coth_u(u)) / (s * scale);
    }
}

Eigen::VectorXd log_density_from(const RadialGrid& grid, const DensitySpec& spec)
{
    const Eigen::Index count = grid.size();
    Eigen::VectorXd values(count);
    if (spec.closed_form) {
        for (Eigen::Index i = 0; i < count; ++i)
            values(i) = spec.closed_form(grid.coord(i));
    } else if (!spec.samples.empty()) {
        if (static_cast<Eigen::Index>(spec.samples.size()) != count)
            throw PreconditionError("density samples: expected " + std::to_string(count) + " values, got "
                                    + std::to_string(spec.samples.size()));
        for (Eigen::Index i = 0; i < count; ++i)
            values(i) = spec.samples[static_cast<size_t>(i)];
    } else {
        return Eigen::VectorXd::Zero(count);
    }
    for (Eigen::Index i = 0; i < count; ++i) {
        if (!(values(i) > 0.0) || !std::isfinite(values(i)))
            throw DomainError("density must be positive and finite at every node (node "
                              + std::to_string(i) + ")");
    }
    return values.array().log().matrix();
}

bool is_identically_zero(const Eigen::VectorXd& v)
{
    return v.size() == 0 || v.cwiseAbs().maxCoeff() <= 1e-13;
}

} // namespace

std::string to_string(SpaceKind kind)
{
    return kind == SpaceKind::sphere ? "sphere" : "euclidean";
}

SpaceKind parse_space_kind(const std::string& text)
{
    if (text == "sphere")
        return SpaceKind::sphere;
    if (text == "euclidean" || text == "euclidean_ball")
        return SpaceKind::euclidean;
    throw PreconditionError("unknown space kind '" + text + "' (expected sphere or euclidean)");
}

bool RadialGrid::same_nodes(const RadialGrid& other) const
{
    if (this == &other)
        return true;
    return kind == other.kind && dimension == other.dimension && size() == other.size() && y == other.y
        && coord == other.coord;
}

double RadialGrid::y_of(double coordinate) const
{
    if (kind == SpaceKind::sphere)
        return std::cos(coordinate);
    const double u = std::asinh(coordinate / length_scale);
    return 2.0 * u * u / (map_extent * map_extent) - 1.0;
}

std::shared_ptr<const RadialGrid> make_radial_grid(SpaceKind kind, double dimension, int node_count,
                                                   double truncation_radius, double length_scale)
{
    if (node_count < 2)
        throw PreconditionError("a radial grid needs at least two nodes");
    if (!(dimension > 0.0))
        throw DomainError("grid dimension must be positive");
    auto grid = std::make_shared<RadialGrid>();
    grid->kind = kind;
    grid->dimension = dimension;
    grid->length_scale = length_scale;
    if (kind == SpaceKind::sphere) {
        grid->truncation_radius = std::numeric_limits<double>::infinity();
        grid->map_extent = 0.0;
        fill_sphere(*grid, node_count);
    } else {
        if (!(truncation_radius > 0.0) || !std::isfinite(truncation_radius))
            throw PreconditionError("truncation radius must be positive and finite");
        if (!(length_scale > 0.0))
            throw PreconditionError("length scale must be positive");
        grid->truncation_radius = truncation_radius;
        fill_euclidean(*grid, node_count);
    }
    auto d = quadrature::differentiation_matrices(grid->y, grid->bary);
    grid->d1 = std::move(d.first);
    grid->d2 = std::move(d.second);
    return grid;
}

Eigen::VectorXd ModelSpace::density() const
{
    return log_density_.array().exp().matrix();
}

Eigen::VectorXd ModelSpace::phi() const
{
    return -phi_scale() * log_density_;
}

Eigen::VectorXd ModelSpace::laplacian(const Eigen::VectorXd& f) const
{
    const RadialGrid& g = *grid_;
    const Eigen::VectorXd fy = g.d1 * f;
    const Eigen::VectorXd fyy = g.d2 * f;
    Eigen::ArrayXd out = g.lap_second.array() * fyy.array() + g.lap_first.array() * fy.array();
    out += (n_ - 2.0) * g.grad_coef.array() * log_conformal_y_.array() * fy.array();
    return ((-2.0 * log_conformal_).array().exp() * out).matrix();
}

Eigen::VectorXd ModelSpace::gradient_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& h) const
{
    return (gradient_metric_.array() * (grid_->d1 * f).array() * (grid_->d1 * h).array()).matrix();
}

RadialField ModelSpace::field(Eigen::VectorXd values) const
{
    if (values.size() != size())
        throw PreconditionError("field has " + std::to_string(values.size()) + " values but the space has "
                                + std::to_string(size()) + " nodes");
    return RadialField{std::move(values), grid_};
}

RadialField ModelSpace::sample(const std::function<double(double)>& f) const
{
    Eigen::VectorXd values(size());
    for (Eigen::Index i = 0; i < size(); ++i)
        values(i) = f(grid_->coord(i));
    return field(std::move(values));
}

RadialField ModelSpace::constant(double c) const
{
    return field(Eigen::VectorXd::Constant(size(), c));
}

void ModelSpace::require_aligned(const RadialField& f) const
{
    if (!f.grid || f.values.size() != size() || !(f.grid == grid_ || f.grid->same_nodes(*grid_)))
        throw PreconditionError("field is not aligned to the space's nodes");
    if (!f.values.allFinite())
        throw PreconditionError("field has non-finite values");
}

void ModelSpace::finalize()
{
    const RadialGrid& g = *grid_;
    if (log_conformal_.size() == 0) {
        log_conformal_ = Eigen::VectorXd::Zero(g.size());
        log_conformal_y_ = Eigen::VectorXd::Zero(g.size());
    }
    gradient_metric_ = ((-2.0 * log_conformal_).array().exp() * g.grad_coef.array()).matrix();
    volume_ = ((n_ * log_conformal_).array().exp() * g.weights.array()).matrix();
    const double k = phi_scale();
    if (k == 0.0)
        measure_ = volume_;
    else
        measure_ = ((k * log_density_).array().exp() * volume_.array()).matrix();

    // R_phi^m = R - 2k Delta l - k(k+1)|grad l|^2 with l = log v, k = m;
    // at m = infinity l = -phi and the last coefficient becomes 1.
    if (m_.is_zero() || is_identically_zero(log_density_)) {
        weighted_curvature_ = scalar_curvature_;
    } else {
        const double quad = m_.infinite ? 1.0 : k * (k + 1.0);
        weighted_curvature_ = scalar_curvature_ - 2.0 * k * laplacian(log_density_)
            - quad * gradient_inner(log_density_, log_density_);
    }
}

double euclidean_tail_bound(DimensionalParameter m, int n, double radius)
{
    if (m.infinite)
        return 0.0;
    const double mm = m.value;
    const double nn = n;
    const double a = (mm + nn - 1.0) / ((mm + nn - 2.0) * (mm + nn - 2.0));
    const double log_area = std::log(specfun::unit_sphere_area(nn));
    const double log_r = std::log(radius);

    double worst = log_area - (mm + nn) * std::log(a) - (2.0 * mm + nn) * log_r - std::log(2.0 * mm + nn);
    const double low = 2.0 * mm + nn - 2.0;
    const double gradient = log_area + 2.0 * std::log(mm + nn - 2.0) + (2.0 - mm - nn) * std::log(a)
        - low * log_r - std::log(low);
    worst = std::max(worst, gradient);
    if (mm > 0.0) {
        const double intermediate = log_area - (mm + nn - 1.0) * std::log(a) - low * log_r - std::log(low);
        worst = std::max(worst, intermediate);
    }
    return std::exp(worst);
}

double euclidean_truncation_radius(DimensionalParameter m, int n, double start)
{
    if (!(start > 0.0))
        throw PreconditionError("truncation radius must be positive");
    double radius = start;
    while (radius < kMaxTruncation && euclidean_tail_bound(m, n, radius) > kTailTarget)
        radius *= 10.0;
    return radius;
}

ModelSpace make_space_on_grid(std::shared_ptr<const RadialGrid> grid, int n, DimensionalParameter m,
                              const DensitySpec& density)
{
    if (n < 3)
        throw DomainError("dimension n must be at least 3, got " + std::to_string(n));
    if (!grid || grid->dimension != n)
        throw PreconditionError("grid dimension does not match n");
    ModelSpace space;
    space.grid_ = std::move(grid);
    space.n_ = n;
    space.m_ = m;
    space.log_density_ = log_density_from(*space.grid_, density);
    if (m.is_zero() && !is_identically_zero(space.log_density_))
        throw DomainError("m = 0 requires the density to be identically 1");
    if (m.is_zero())
        space.log_density_.setZero();
    const double curvature = space.grid_->kind == SpaceKind::sphere ? n * (n - 1.0) : 0.0;
    space.scalar_curvature_ = Eigen::VectorXd::Constant(space.grid_->size(), curvature);
    space.finalize();
    return space;
}

ModelSpace make_space(SpaceKind kind, int n, DimensionalParameter m, const DensitySpec& density, int node_count,
                      double truncation_radius)
{
    if (n < 3)
        throw DomainError("dimension n must be at least 3, got " + std::to_string(n));
    if (node_count < 16)
        throw PreconditionError("node_count must be at least 16, got " + std::to_string(node_count));
    double radius = truncation_radius;
    if (kind == SpaceKind::euclidean)
        radius = euclidean_truncation_radius(m, n, truncation_radius);
    return make_space_on_grid(make_radial_grid(kind, n, node_count, radius), n, m, density);
}

double integrate(const ModelSpace& space, const RadialField& f)
{
    space.require_aligned(f);
    return space.measure().dot(f.values);
}

double integrate(const ModelSpace& space, const Eigen::VectorXd& f)
{
    if (f.size() != space.size())
        throw PreconditionError("integrand length does not match the node count");
    return space.measure().dot(f);
}

RadialField differentiate(const ModelSpace& space, const RadialField& f)
{
    space.require_aligned(f);
    const RadialGrid& g = space.grid();
    return space.field((g.coord_deriv.array() * (g.d1 * f.values).array()).matrix());
}

RadialField weighted_laplacian(const ModelSpace& space, const RadialField& f)
{
    space.require_aligned(f);
    Eigen::VectorXd out = space.laplacian(f.values);
    if (!space.m().is_zero())
        out += space.phi_scale() * space.gradient_inner(space.log_density(), f.values);
    return space.field(std::move(out));
}

RadialField weighted_scalar_curvature(const ModelSpace& space)
{
    return space.field(space.weighted_curvature());
}

ModelSpace conformal_change(const ModelSpace& space, const RadialField& sigma)
{
    if (space.m().infinite)
        throw PreconditionError("conformal_change requires finite m");
    space.require_aligned(sigma);
    const double scale = space.m().value + space.n() - 2.0;
    const Eigen::VectorXd u = sigma.values / scale;
    const double n = space.n();

    ModelSpace out = space;
    const Eigen::ArrayXd bracket = space.scalar_curvature().array()
        - 2.0 * (n - 1.0) * space.laplacian(u).array() - (n - 1.0) * (n - 2.0) * space.gradient_inner(u, u).array();
    out.scalar_curvature_ = ((-2.0 * u).array().exp() * bracket).matrix();
    out.log_conformal_ = space.log_conformal_ + u;
    out.log_conformal_y_ = space.log_conformal_y_ + space.derivative_y(u);
    if (!space.m().is_zero())
        out.log_density_ = space.log_density_ + u;
    out.finalize();
    return out;
}

ModelSpace scale_metric(const ModelSpace& space, double factor)
{
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw PreconditionError("metric scale factor must be positive and finite");
    ModelSpace out = space;
    out.log_conformal_ = space.log_conformal_.array() + 0.5 * std::log(factor);
    out.scalar_curvature_ = space.scalar_curvature_ / factor;
    out.finalize();
    return out;
}

ModelSpace with_parameter(const ModelSpace& space, DimensionalParameter m, bool keep_density)
{
    ModelSpace out = space;
    out.m_ = m;
    if (keep_density) {
        if (space.m().infinite || m.infinite)
            throw PreconditionError("keeping the density v requires finite m on both sides");
        out.log_density_ = space.m().is_zero() ? Eigen::VectorXd::Zero(space.size()) : space.log_density_;
    } else {
        const Eigen::VectorXd minus_phi = space.phi_scale() * space.log_density_;
        if (m.infinite)
            out.log_density_ = minus_phi;
        else if (m.is_zero())
            out.log_density_ = Eigen::VectorXd::Zero(space.size());
        else
            out.log_density_ = minus_phi / m.value;
    }
    if (m.is_zero() && !is_identically_zero(space.phi_scale() * space.log_density_))
        throw DomainError("m = 0 requires the density to be identically 1");
    out.finalize();
    return out;
}

bool same_geometry(const ModelSpace& a, const ModelSpace& b)
{
    return a.grid().same_nodes(b.grid()) && a.n() == b.n() && a.log_conformal() == b.log_conformal()
        && a.scalar_curvature() == b.scalar_curvature();
}

void write_field_csv(std::ostream& out, const RadialField& f, const std::vector<std::string>& header)
{
    if (!f.grid || f.grid->size() != f.values.size())
        throw PreconditionError("field has no grid attached");
    for (const auto& line : header)
        out << "# " << line << '\n';
    out << "node,value\n";
    char buffer[64];
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        std::snprintf(buffer, sizeof buffer, "%.17g", f.grid->coord(i));
        out << buffer << ',';
        std::snprintf(buffer, sizeof buffer, "%.17g", f.values(i));
        out << buffer << '\n';
    }
}

RadialField read_field_csv(std::istream& in, const ModelSpace& space)
{
    std::vector<double> nodes;
    std::vector<double> values;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line[0] == '#')
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw PreconditionError("CSV line " + std::to_string(line_number) + ": expected two columns");
        try {
            size_t used = 0;
            const double node = std::stod(line.substr(0, comma), &used);
            const double value = std::stod(line.substr(comma + 1));
            nodes.push_back(node);
            values.push_back(value);
        } catch (const std::invalid_argument&) {
            if (nodes.empty())
                continue; // column header
            throw PreconditionError("CSV line " + std::to_string(line_number) + ": not a number");
        } catch (const std::out_of_range&) {
            throw PreconditionError("CSV line " + std::to_string(line_number) + ": value out of range");
        }
    }
    if (static_cast<Eigen::Index>(nodes.size()) != space.size())
        throw PreconditionError("CSV has " + std::to_string(nodes.size()) + " rows but the space has "
                                + std::to_string(space.size()) + " nodes");
    Eigen::VectorXd v(space.size());
    for (Eigen::Index i = 0; i < space.size(); ++i) {
        const double expected = space.nodes()(i);
        if (std::abs(nodes[static_cast<size_t>(i)] - expected) > 1e-12 * std::max(1.0, std::abs(expected)))
            throw PreconditionError("CSV node " + std::to_string(i) + " does not match the space's grid");
        v(i) = values[static_cast<size_t>(i)];
    }
    if (!v.allFinite())
        throw PreconditionError("CSV field has non-finite values");
    return space.field(std::move(v));
}

} // namespace smms
