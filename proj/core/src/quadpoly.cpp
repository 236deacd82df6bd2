#include <algorithm>
#include <cmath>

#include "sp4/counting.hpp"

namespace sp4 {

double QuadPoly2::height() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), std::abs(e), std::abs(f)});
}

void QuadPoly2::completed_square(double& xi, double& eta, double& p0) const {
    double D = discriminant();
    xi = (b * e - 2.0 * c * d) / D;
    eta = (b * d - 2.0 * a * e) / D;
    p0 = eval(-xi, -eta);
}

void QuadPoly2::solution_box(double delta, double& bx, double& by) const {
    // |P| <= delta and P = ((2a(x+xi)+b(y+eta))^2 - D(y+eta)^2)/(4a) + p0
    // give |y+eta| <= sqrt(4a(delta+|p0|)/|D|) and
    // |2a(x+xi)+b(y+eta)| <= 2 sqrt(a(delta+|p0|))
    double xi, eta, p0;
    completed_square(xi, eta, p0);
    double D = std::abs(discriminant());
    double m = delta + std::abs(p0);
    double ey = std::sqrt(4.0 * a * m / D);
    by = ey + std::abs(eta);
    double lin = 2.0 * std::sqrt(a * m) + std::abs(b) * ey;
    bx = lin / (2.0 * a) + std::abs(xi);
}

DirichletResult dirichlet_approx(const std::vector<double>& xi, double T) {
    if (xi.empty() || T <= 1.0) throw std::invalid_argument("dirichlet_approx: need n >= 1, T > 1");
    const double root = std::pow(T, 1.0 / double(xi.size()));
    for (i64 q = 1; q <= (i64)std::floor(T); ++q) {
        bool ok = true;
        std::vector<i64> p(xi.size());
        for (size_t j = 0; j < xi.size() && ok; ++j) {
            p[j] = (i64)std::llround(xi[j] * double(q));
            if (!(std::abs(xi[j] - double(p[j]) / double(q)) < 1.0 / (double(q) * root))) ok = false;
        }
        if (ok) return {q, p};
    }
    // the boxed-pigeonhole argument guarantees some q <= T works
    throw std::logic_error("dirichlet_approx: no denominator found (should be impossible)");
}

std::vector<std::pair<i64, i64>> solve_quadratic_integer(const IntQuadPoly2& P) {
    QuadPoly2 rp = P.real();
    if (!rp.positive_definite_part())
        throw std::invalid_argument("solve_quadratic_integer: quadratic part not positive definite");
    double bx, by;
    rp.solution_box(0.5, bx, by);
    std::vector<std::pair<i64, i64>> out;
    for (i64 x = -(i64)std::ceil(bx); x <= (i64)std::ceil(bx); ++x)
        for (i64 y = -(i64)std::ceil(by); y <= (i64)std::ceil(by); ++y)
            if (P.eval(x, y) == 0) out.emplace_back(x, y);
    return out;
}

NearZeroCount count_near_zero(const QuadPoly2& P, double delta, double dirichlet_T) {
    if (!P.positive_definite_part())
        throw std::invalid_argument("count_near_zero: quadratic part not positive definite");
    NearZeroCount out;
    double bx, by;
    P.solution_box(delta, bx, by);
    for (i64 x = -(i64)std::ceil(bx); x <= (i64)std::ceil(bx); ++x)
        for (i64 y = -(i64)std::ceil(by); y <= (i64)std::ceil(by); ++y)
            if (std::abs(P.eval(x, y)) < delta) out.count += 1;

    // pipeline bound: rational approximation with common denominator q, then
    // integral level sets |P~ - r| = 0 summed over |r| <= R
    DirichletResult ap = dirichlet_approx({P.a, P.b, P.c, P.d, P.e, P.f}, dirichlet_T);
    out.q_used = ap.q;
    IntQuadPoly2 ip{ap.p[0], ap.p[1], ap.p[2], ap.p[3], ap.p[4], ap.p[5]};
    if (!ip.real().positive_definite_part()) {
        // approximation too coarse to stay definite; retry with a larger T
        ap = dirichlet_approx({P.a, P.b, P.c, P.d, P.e, P.f}, dirichlet_T * dirichlet_T);
        out.q_used = ap.q;
        ip = IntQuadPoly2{ap.p[0], ap.p[1], ap.p[2], ap.p[3], ap.p[4], ap.p[5]};
    }
    const double q = double(ap.q);
    double coeff_err = 0.0;  // max_j |q xi_j - p_j|, taken from the achieved approximation
    const double coeffs[6] = {P.a, P.b, P.c, P.d, P.e, P.f};
    for (int j = 0; j < 6; ++j)
        coeff_err = std::max(coeff_err, std::abs(q * coeffs[j] - double(ap.p[j])));
    double big = std::max({std::abs(bx) + 1.0, std::abs(by) + 1.0});
    double R = q * delta + 6.0 * coeff_err * big * big;
    for (i64 r = -(i64)std::ceil(R); r <= (i64)std::ceil(R); ++r) {
        IntQuadPoly2 shifted = ip;
        shifted.f -= r;
        out.pipeline_bound += (i64)solve_quadratic_integer(shifted).size();
    }
    return out;
}

i64 sigma_divisor_sum(i64 m) {
    i64 s = 0;
    for (i64 d = 1; d <= m; ++d)
        if (m % d == 0) s += d;
    return s;
}

}  // namespace sp4
