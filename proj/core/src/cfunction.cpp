#include <cmath>

#include "sp4/spherical.hpp"

namespace sp4 {

namespace {

// log sin(pi z) without overflow for large |Im z|
cplx log_sin_pi(cplx z) {
    cplx w = M_PI * z;
    double im = w.imag();
    if (im > 30.0) {
        // sin w ~ -e^{-iw}/(2i)
        return cplx(0, -1) * w + std::log(cplx(0, 0.5)) + std::log(1.0 - std::exp(cplx(0, 2) * w));
    }
    if (im < -30.0) {
        return cplx(0, 1) * w + std::log(cplx(0, -0.5)) + std::log(1.0 - std::exp(cplx(0, -2) * w));
    }
    return std::log(std::sin(w));
}

// Lanczos g=7 n=9; reflection for Re z < 0.5.
cplx clgamma(cplx z) {
    static const double g = 7.0;
    static const double coef[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                                   771.32342877765313,   -176.61502916214059, 12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) return std::log(cplx(M_PI, 0)) - log_sin_pi(z) - clgamma(1.0 - z);
    z -= 1.0;
    cplx x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + double(i));
    cplx t = z + g + 0.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// c_alpha(lambda) = 2^{-i la} Gamma(i la) / (Gamma(i la/2 + 3/4) Gamma(i la/2 + 1/4));
// every positive root of C2 has multiplicity one.
cplx log_c_alpha_at(cplx ila) {
    return -ila * std::log(2.0) + clgamma(ila) - clgamma(0.5 * ila + 0.75) -
           clgamma(0.5 * ila + 0.25);
}

double log_c0() {
    // normalization c(-i rho) = 1, rho = 2 e1 + e2; there i*lambda_alpha
    // takes the values rho_alpha = 1/2, 3/2, 1, 1/2 over the positive roots
    static const double value = [] {
        double s = 0.0;
        for (double a : {0.5, 1.5, 1.0, 0.5}) s += log_c_alpha_at(cplx(a, 0.0)).real();
        return -s;
    }();
    return value;
}

}  // namespace

double c_closed_form(double l1, double l2) {
    auto gam = [](double x) { return x * std::tanh(M_PI * x / 2.0); };
    double f = M_PI / 4.0;
    return f * f * gam(l1) * gam(l2) * gam(l1 + l2) * gam(l1 - l2);
}

CFunctionValue c_function_inv_sq(double l1, double l2) {
    CFunctionValue out{};
    out.closed_form = c_closed_form(l1, l2);
    // lambda_alpha = <lambda, alpha>/<alpha, alpha>, roots e1-e2, e1+e2, 2e1, 2e2
    double largs[4] = {0.5 * (l1 - l2), 0.5 * (l1 + l2), 0.5 * l1, 0.5 * l2};
    for (double la : largs)
        if (std::abs(la) < 1e-12) out.pole_adjacent = true;
    if (out.pole_adjacent) {
        out.product_formula = 0.0;  // Gamma pole; the closed form is total
        out.rel_diff = std::abs(out.closed_form) > 0 ? 1.0 : 0.0;
        return out;
    }
    double log_abs_c = log_c0();
    for (double la : largs) log_abs_c += log_c_alpha_at(cplx(0.0, la)).real();
    out.product_formula = std::exp(-2.0 * log_abs_c);
    double denom = std::max(std::abs(out.closed_form), 1e-300);
    out.rel_diff = std::abs(out.product_formula - out.closed_form) / denom;
    return out;
}

}  // namespace sp4
