#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sp4/symplectic.hpp"

namespace sp4 {

// Haar quadrature on K = U(2): uniform central angle on [0, pi), Euler
// angles for the SU(2) factor with Gauss-Legendre in cos(beta). The node
// list is indexed rather than materialized (level 40 holds ~10^7 nodes);
// node(i) returns the 2x2 unitary, weight(i) its positive weight, and the
// weights sum to 1.
struct QuadratureRule {
    int level = 0;
    int n_phi = 0, n_alpha = 0, n_u = 0, n_gamma = 0;
    std::vector<cplx> z_phi;    // e^{i phi}
    std::vector<cplx> z_alpha;  // e^{-i alpha/2}
    std::vector<cplx> z_gamma;  // e^{-i gamma/2}
    std::vector<double> cos_half_beta, sin_half_beta, u_weights;

    size_t size() const { return size_t(n_phi) * n_alpha * n_u * n_gamma; }
    Mat2cd node(size_t i) const;
    double weight(size_t i) const;
    Mat4d embed(size_t i) const;  // (B C; -C B) for U = B + iC
};

QuadratureRule haar_quadrature(int level);
// shared, memoized rules for internal consumers
std::shared_ptr<const QuadratureRule> shared_rule(int level);

struct PhiResult {
    cplx value{0, 0};
    double quad_error = 0.0;  // |level - previous level|
    bool flagged = false;     // error estimate above 1e-6
};

// phi_lambda(exp H) = int_K e^{(rho + i lambda) H(exp(H) k)} dk
PhiResult phi(const SpectralParameter& lambda, const CartanVector& H, const QuadratureRule& rule);
// picks the level from the phase lambda.H, escalating at most twice
PhiResult phi_auto(const SpectralParameter& lambda, const CartanVector& H, double tol = 1e-8);
int phi_level_hint(const SpectralParameter& lambda, const CartanVector& H);

// ---- c-function ---------------------------------------------------------------

struct CFunctionValue {
    double product_formula;  // |c(lambda)|^-2 via the Gamma product
    double closed_form;      // (pi/4)^2 gamma(l1) gamma(l2) gamma(l1+l2) gamma(l1-l2)
    double rel_diff;
    bool pole_adjacent;      // some Gamma argument within 1e-12 of a pole
};
CFunctionValue c_function_inv_sq(double lambda1, double lambda2);
double c_closed_form(double lambda1, double lambda2);

// ---- decay scan ---------------------------------------------------------------

struct DecayRow {
    double lambda1, lambda2, t1, t2;
    double abs_phi;
    double stat;  // (1 + ||lambda|| ||H||)^{1/2} |phi|
    double quad_error;
    bool flagged;
};

struct DecayScanConfig {
    std::vector<double> lambda_norms{5, 10, 20, 40, 60};
    std::vector<double> lambda_angles_deg{0, 11.25, 22.5, 33.75, 45};  // 0 and 45 are walls
    std::vector<double> h_norms{0.0, 0.01, 0.03, 0.1, 0.3, 1.0};
    std::vector<double> h_angles_deg{0, 22.5, 45};
    double quad_tol = 1e-8;
    bool walls_only = false;
};

struct DecayScanResult {
    std::vector<DecayRow> rows;
    double c_emp = 0.0;          // max statistic over the grid
    double far_slope = 0.0;      // log|phi| vs log(||l|| ||H||), far region
    int far_points = 0;
};
DecayScanResult decay_scan(const DecayScanConfig& cfg);
std::string decay_rows_csv(const std::vector<DecayRow>& rows);

// ---- phase probe ----------------------------------------------------------------

struct PhaseProbe {
    CartanVector X;  // unit Killing norm
    CartanVector Y;
    int k_grid = 6;                     // per Euler angle
    std::vector<double> deltas{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
};

struct PhaseProbeReport {
    double fitted_exponent = 0.0;       // remainder ~ delta^2
    double max_crit_gradient = 0.0;     // |grad f| at sampled critical points
    double min_grid_max_derivative = 0.0;  // min over grid of max(|grad|, |hess|)
    double f_at_identity = 0.0;         // <X, Y>
    bool pass = false;
};
PhaseProbeReport phase_probe(const PhaseProbe& probe);

// f_{X,Y}(k) = <X, Ad_k Y> (Killing form, = 6 tr(X k Y k^-1))
double phase_f(const CartanVector& X, const CartanVector& Y, const Mat4d& k);

// ---- test function ---------------------------------------------------------------

// psi(l) = c_psi sum_w h((w.l)_1) h((w.l)_2), h(z) = (sin(eps z)/(eps z))^M;
// eps = 1/(5M) keeps the exponential type at most 1 in the Killing-dual
// norm, so ftilde = (sum_w psi(mu - w.l))^2 has type 2 and the inverse
// transform is supported in the Killing ball of radius 2.
struct TestFunctionSpec {
    SpectralParameter mu;  // real
    int M = 8;             // even decay order
    double eps = 1.0 / 40.0;
    double c_psi = 1.0;    // calibrated so Re psi >= 1 on the sqrt(5/2) ball

    double psi_type() const { return 2.0 * std::sqrt(6.0) * M * eps; }
    double support_radius() const { return 2.0 * psi_type(); }
};

TestFunctionSpec make_test_function_spec(double mu1, double mu2, int M = 8);
cplx psi_value(const TestFunctionSpec& spec, const SpectralParameter& lambda);
cplx test_function(const TestFunctionSpec& spec, const SpectralParameter& lambda);

// ---- inverse spherical transform ---------------------------------------------------

struct InverseTransformConfig {
    TestFunctionSpec spec;
    std::vector<double> h_norms{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.25};
    double h_angle_deg = 30.0;
    double lambda_cutoff = 0.0;   // 0 = automatic from the integrand tail
    double lambda_step = 0.7;
    int quad_level = 0;           // 0 = automatic
};

struct InverseTransformResult {
    std::vector<double> h_norms;
    std::vector<cplx> values;
    double peak_abs = 0.0;
    double imag_residual = 0.0;   // max |Im| / peak
    double tail_ratio = 0.0;      // max |f| at ||H|| >= 3 over peak
    double truncation_estimate = 0.0;
    bool truncation_flagged = false;
};
InverseTransformResult inverse_transform_sample(const InverseTransformConfig& cfg);

}  // namespace sp4
