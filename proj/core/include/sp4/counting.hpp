#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sp4/mat4.hpp"
#include "sp4/symplectic.hpp"

namespace sp4 {

// P(x, y) = a x^2 + b xy + c y^2 + d x + e y + f
struct QuadPoly2 {
    double a = 1, b = 0, c = 1, d = 0, e = 0, f = 0;

    double eval(double x, double y) const {
        return a * x * x + b * x * y + c * y * y + d * x + e * y + f;
    }
    double discriminant() const { return b * b - 4.0 * a * c; }
    double height() const;
    bool positive_definite_part() const { return a > 0 && discriminant() < 0; }

    // completed-square data: P = ((2a(x+xi) + b(y+eta))^2 - D (y+eta)^2)/(4a) + P(-xi,-eta)
    void completed_square(double& xi, double& eta, double& p0) const;
    // box |x| <= bx, |y| <= by guaranteed to contain all |P| <= delta points
    void solution_box(double delta, double& bx, double& by) const;
};

struct IntQuadPoly2 {
    i64 a = 1, b = 0, c = 1, d = 0, e = 0, f = 0;
    QuadPoly2 real() const { return {double(a), double(b), double(c), double(d), double(e), double(f)}; }
    __int128 eval(i64 x, i64 y) const {
        return (__int128)a * x * x + (__int128)b * x * y + (__int128)c * y * y + (__int128)d * x +
               (__int128)e * y + f;
    }
};

// Dirichlet simultaneous approximation: smallest q <= T with
// |xi_j - p_j/q| < 1/(q T^{1/n}) for all j (the lemma guarantees existence
// with <=; the strict form also always has a solution and pins q uniquely).
struct DirichletResult {
    i64 q = 1;
    std::vector<i64> p;
};
DirichletResult dirichlet_approx(const std::vector<double>& xi, double T);

// all integer points with P = 0 (exhaustive inside the completed-square box)
std::vector<std::pair<i64, i64>> solve_quadratic_integer(const IntQuadPoly2& P);

// exact #{|P| < delta} together with the approximation-pipeline upper bound
struct NearZeroCount {
    i64 count = 0;
    i64 pipeline_bound = 0;
    i64 q_used = 1;
};
NearZeroCount count_near_zero(const QuadPoly2& P, double delta, double dirichlet_T = 40.0);

// ---- the symplectic counting engine -----------------------------------------

struct CountingContext {
    GroupElement g;
    Mat4d Q;            // (g g^T)^{-1}
    Mat4d Q1, Q2;       // column split, Q = Q1 + Q2
    Mat4d A11, A12, A21, A22;
    Mat4d B11, B12, B21, B22;
    Mat2d X;            // point decomposition g = (I X; 0 I)(V 0; 0 V^{-1})
    Mat2d V, Vinv;
    double entry_bound; // per-entry bound C_g for matrices of S(m), scaled by sqrt(m)
    double q_min_eig;
};
CountingContext make_counting_context(const GroupElement& g);

struct ScanConfig {
    std::vector<i64> m_values;
    std::vector<double> deltas{1e-3};
    double theta = 0.25;       // branch threshold r^T Q_i r >= theta m q11
    i64 budget = 200'000'000;  // candidate (r, s) pairs
    double kappa = 6.0;        // residual box half-width kappa delta sqrt(m)
    double delta_ceiling = 0.3;
};

// { gamma in S(m) : ||C(g^-1 (m^{-1/2} gamma) g)|| <= delta }, exact set.
// Floating point only prunes; membership is the exact symplectic test plus
// the Cartan-projection criterion.
std::vector<Mat4> enumerate_S(const CountingContext& ctx, double delta, i64 m,
                              const ScanConfig& cfg = ScanConfig{});

// brute-force oracle for g = id: all (r, s) entry combinations completed to
// candidate matrices, final exact test; small m only
std::vector<Mat4> enumerate_S_oracle_id(double delta, i64 m);

struct ResidualReport {
    double rQr = 0, sQs = 0, rJs = 0, rQs = 0;   // scaled residuals (divided by m)
    double recon_error = 0;                       // (mat4a)/(mat5a) error / sqrt(m)
    double entry_ratio = 0;                       // max entry / sqrt(m)
    double bound_constant = 0;                    // max residual / delta
    double dist_to_gKg = -1;                      // grid-refined distance, small m only
    bool pass = false;
};
ResidualReport residual_check(const Mat4& gamma, const CountingContext& ctx, double delta, i64 m,
                              bool with_distance = false);

struct ScanRow {
    i64 m;
    double delta;
    i64 count;
    double seconds;
    bool budget_hit;
};
struct Prop1Scan {
    std::vector<ScanRow> rows;
    double slope = 0.0;         // log count vs log m at the smallest delta (odd m)
    double min_disc_guard = 0;  // smallest |disc| of the (s2,s4) quadratic seen
    bool lower_bound_ok = true; // count >= 8 sigma(m) on odd rows
};
Prop1Scan prop1_scan(const CountingContext& ctx, const ScanConfig& cfg);
std::string scan_rows_csv(const std::vector<ScanRow>& rows);

i64 sigma_divisor_sum(i64 m);

}  // namespace sp4
