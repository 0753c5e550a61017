#include "smms/quadrature.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "smms/errors.hpp"
#include "smms/specfun.hpp"

namespace smms::quadrature {

namespace {

struct JacobiValues {
    double p;      // P_N^{(a,b)}(x)
    double p_prev; // P_{N-1}^{(a,b)}(x)
};

JacobiValues jacobi(int count, double a, double b, double x)
{
    double p_prev = 1.0;
    double p = 0.5 * (a - b + (a + b + 2.0) * x);
    for (int k = 1; k < count; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * (k + 1) * (k + a + b + 1.0) * s;
        const double c2 = (s + 1.0) * (s * (s + 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        const double next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = next;
    }
    return {p, p_prev};
}

// dP_N/dx from (2N+a+b)(1-x^2) P_N' = N[(a-b) - (2N+a+b)x] P_N + 2(N+a)(N+b) P_{N-1}
double jacobi_derivative(int count, double a, double b, double x, const JacobiValues& v)
{
    const double s = 2.0 * count + a + b;
    return (count * ((a - b) - s * x) * v.p + 2.0 * (count + a) * (count + b) * v.p_prev)
        / (s * (1.0 - x * x));
}

Eigen::VectorXd golub_welsch_nodes(int count, double a, double b)
{
    Eigen::VectorXd diag(count);
    Eigen::VectorXd sub(count > 1 ? count - 1 : 1);
    diag(0) = (b - a) / (a + b + 2.0);
    for (int k = 1; k < count; ++k) {
        const double s = 2.0 * k + a + b;
        diag(k) = (b * b - a * a) / (s * (s + 2.0));
        if (k == 1) {
            // the general formula is 0/0 when a + b = -1
            const double t = a + b + 2.0;
            sub(0) = std::sqrt(4.0 * (1.0 + a) * (1.0 + b) / (t * t * (t + 1.0)));
            continue;
        }
        const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
        const double den = s * s * (s + 1.0) * (s - 1.0);
        sub(k - 1) = std::sqrt(num / den);
    }
    if (count == 1)
        return diag;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(count - 1), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

} // namespace

GaussJacobiRule gauss_jacobi(int count, double alpha, double beta)
{
    if (count < 1)
        throw DomainError("Gauss-Jacobi rule needs at least one node");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw DomainError("Gauss-Jacobi exponents must exceed -1");

    GaussJacobiRule rule;
    rule.nodes = golub_welsch_nodes(count, alpha, beta);
    rule.weights.resize(count);

    const double log_constant = specfun::log_gamma(count + alpha + 1.0) + specfun::log_gamma(count + beta + 1.0)
        - specfun::log_gamma(count + alpha + beta + 1.0) - specfun::log_gamma(count + 1.0)
        + (alpha + beta + 1.0) * std::log(2.0);

    for (int i = 0; i < count; ++i) {
        double x = rule.nodes(i);
        for (int iter = 0; iter < 3; ++iter) {
            const JacobiValues v = jacobi(count, alpha, beta, x);
            const double dp = jacobi_derivative(count, alpha, beta, x, v);
            const double step = v.p / dp;
            x -= step;
            if (std::abs(step) < 1e-17)
                break;
        }
        rule.nodes(i) = x;
        const JacobiValues v = jacobi(count, alpha, beta, x);
        const double dp = jacobi_derivative(count, alpha, beta, x, v);
        rule.weights(i) = std::exp(log_constant - std::log1p(-x * x) - 2.0 * std::log(std::abs(dp)));
    }
    return rule;
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes)
{
    const Eigen::Index count = nodes.size();
    Eigen::VectorXd log_mag(count);
    Eigen::VectorXd sign(count);
    for (Eigen::Index j = 0; j < count; ++j) {
        double acc = 0.0;
        double s = 1.0;
        for (Eigen::Index k = 0; k < count; ++k) {
            if (k == j)
                continue;
            const double diff = nodes(j) - nodes(k);
            acc -= std::log(std::abs(diff));
            if (diff < 0.0)
                s = -s;
        }
        log_mag(j) = acc;
        sign(j) = s;
    }
    const double top = log_mag.maxCoeff();
    Eigen::VectorXd weights(count);
    for (Eigen::Index j = 0; j < count; ++j)
        weights(j) = sign(j) * std::exp(log_mag(j) - top);
    return weights;
}

DifferentiationMatrices differentiation_matrices(const Eigen::VectorXd& nodes)
{
    return differentiation_matrices(nodes, barycentric_weights(nodes));
}

DifferentiationMatrices differentiation_matrices(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary)
{
    const Eigen::Index count = nodes.size();
    DifferentiationMatrices d{Eigen::MatrixXd::Zero(count, count), Eigen::MatrixXd::Zero(count, count)};

    for (Eigen::Index i = 0; i < count; ++i) {
        double diag = 0.0;
        for (Eigen::Index j = 0; j < count; ++j) {
            if (j == i)
                continue;
            const double value = (bary(j) / bary(i)) / (nodes(i) - nodes(j));
            d.first(i, j) = value;
            diag -= value;
        }
        d.first(i, i) = diag;
    }
    for (Eigen::Index i = 0; i < count; ++i) {
        double diag = 0.0;
        for (Eigen::Index j = 0; j < count; ++j) {
            if (j == i)
                continue;
            const double value = 2.0 * d.first(i, j) * (d.first(i, i) - 1.0 / (nodes(i) - nodes(j)));
            d.second(i, j) = value;
            diag -= value;
        }
        d.second(i, i) = diag;
    }
    return d;
}

double barycentric_interpolate(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary,
                               const Eigen::VectorXd& values, double x)
{
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index j = 0; j < nodes.size(); ++j) {
        const double diff = x - nodes(j);
        if (diff == 0.0)
            return values(j);
        const double t = bary(j) / diff;
        num += t * values(j);
        den += t;
    }
    return num / den;
}

} // namespace smms::quadrature
