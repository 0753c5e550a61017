#pragma once

// The weighted Yamabe quotient, the W-functional and their satellites.
//
// All integrals are against the measure of the space (v^m dvol, or
// e^{-phi} dvol when m = infinity). Fractional powers act on |w|.

#include "smms/geometry.hpp"

namespace smms {

/// Exponents and coefficients that depend only on (m, n), finite m.
struct CriticalExponents {
    double volume;       // 2(m+n)/(m+n-2)
    double intermediate; // 2(m+n-1)/(m+n-2)
    double el_low;       // (m+n)/(m+n-2)
    double el_high;      // (m+n+2)/(m+n-2)
    double energy;       // (m+n-2)/(4(m+n-1)), the coefficient of R_phi^m in L_phi^m
};

CriticalExponents critical_exponents(double m, int n);

/// Coefficient of R_phi^m in L_phi^m; 1/4 when m = infinity.
double conformal_coefficient(DimensionalParameter m, int n);

struct QuotientBreakdown {
    double energy = 0.0;            // (L_phi^m w, w)
    double mass_intermediate = 0.0; // int |w|^{2(m+n-1)/(m+n-2)} v^{-1}; ||w||^2 when m = infinity
    double mass_volume = 0.0;       // int |w|^{2(m+n)/(m+n-2)};          ||w||^2 when m = infinity
    double q_value = 0.0;
    bool infinite_m = false;
    double l2_norm_squared = 0.0;   // m = infinity only
    double entropy = 0.0;           // m = infinity only: -(2/n) int (w^2/||w||^2) log(w^2 e^{-phi}/||w||^2)
};

/// Rebuilds q_value from the other fields.
double reassemble_quotient(const QuotientBreakdown& b, DimensionalParameter m, int n);

struct WReport {
    double w_value = 0.0;
    double tau = 0.0;
};

/// (L_phi^m w, w) = int |grad w|^2 + c R_phi^m w^2.
double dirichlet_energy(const ModelSpace& space, const RadialField& w);

/// Weak pairing (L_phi^m f, h) = int <grad f, grad h> + c R_phi^m f h.
double conformal_pairing(const ModelSpace& space, const Eigen::VectorXd& f, const Eigen::VectorXd& h);

/// L_phi^m f = -Delta_phi f + c R_phi^m f, node-wise.
Eigen::VectorXd apply_conformal_laplacian(const ModelSpace& space, const Eigen::VectorXd& f);

QuotientBreakdown quotient_Q(const ModelSpace& space, const RadialField& w);

WReport w_functional(const ModelSpace& space, const RadialField& w, double tau);

struct ScalingOptimum {
    double infimum = 0.0;
    double argmin = 0.0;
    bool degenerate = false; // A = 0 (argmin at +inf) or B = 0 (argmin at 0)
};

/// inf_{x>0} A x^{2m} + m B x^{-n}.
ScalingOptimum optimize_scaling(double A, double B, double m, int n);

enum class ConvertDirection { lambda_to_nu, nu_to_lambda };

/// nu = (2m+n)/2 (2 Lambda/n)^{n/(2m+n)} - m and its inverse.
double nu_lambda_convert(double value, double m, int n, ConvertDirection direction);

struct Residual {
    RadialField field;
    double norm = 0.0; // weighted L^2
};

/// Strong-form residual of the Euler-Lagrange equation of Q at a
/// volume-normalized w with constant lambda.
Residual el_residual(const ModelSpace& space, const RadialField& w, double lambda);

/// Weighted L^2 norm of the Euler-Lagrange residual of W(., tau) at a
/// volume-normalized w with multiplier c1.
double el_w_residual(const ModelSpace& space, const RadialField& w, double tau, double c1);

/// The multiplier obtained by pairing the W Euler-Lagrange equation with w.
double el_w_multiplier(const ModelSpace& space, const RadialField& w, double tau);

/// (L^{m+1} W, W) - (m+n-1)^2/((m+n)(m+n-2)) (L^m w, w^{(m+n)/(m+n-2)} v),
/// W = w^{(m+n-1)/(m+n-2)}.
double increment_m_gap(const ModelSpace& space_m, const ModelSpace& space_m_plus_1, const RadialField& w);

struct PhiBound {
    double value;
    double max_value;
    double argmax;
};

/// Phi(x) = (2m+n-2)(m+n) x^{-2m/n} - 2m(m+n-1) x^{-(2m+n)/n} and its maximum.
PhiBound phi_bound(double x, double m, int n);

/// (L^m w, w) - kappa (L^{m+k} w, w) on the spaces conformally normalized to
/// v = 1, kappa = (m+k+n-1)(m+n-2)/((m+k+n-2)(m+n-1)).
double wcl_monotonicity_gap(const ModelSpace& space_m, const ModelSpace& space_m_plus_k, const RadialField& w,
                            double k);

/// |Q_k(w) - Q_inf(w)| for two spaces with the same metric and phi.
double continuity_in_m(const ModelSpace& space_k, const ModelSpace& space_infinity, const RadialField& w);

/// |W_k(w, tau) - W_inf(w, tau)|, same requirements.
double w_continuity_in_m(const ModelSpace& space_k, const ModelSpace& space_infinity, const RadialField& w,
                         double tau);

/// Scales w so that int |w|^{2(m+n)/(m+n-2)} = 1 (int w^2 = 1 when m = infinity).
RadialField volume_normalize(const ModelSpace& space, const RadialField& w);

} // namespace smms
