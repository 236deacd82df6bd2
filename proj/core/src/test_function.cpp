#include <algorithm>
#include <cmath>

#include "sp4/spherical.hpp"

namespace sp4 {

namespace {

// (sin(eps z) / (eps z))^M, entire, nonnegative on R for even M,
// exponential type M*eps per coordinate.
cplx sinc_pow(cplx z, double eps, int M) {
    cplx w = eps * z;
    cplx s;
    double a = std::abs(w);
    if (a < 1e-4) {
        cplx w2 = w * w;
        s = 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
    } else {
        s = std::sin(w) / w;
    }
    cplx r = 1.0;
    cplx base = s;
    int e = M;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

double calibrate_c_psi(int M, double eps) {
    // smallest Re of the unnormalized psi on the boundary sphere of the
    // Killing ball of radius sqrt(5/2) in a*_C (Euclidean radius sqrt(30)
    // in the (Re l1, Re l2, Im l1, Im l2) coordinates); Re psi is harmonic
    // so the minimum sits on the boundary
    const double R = std::sqrt(30.0);
    double min_re = 1e300;
    const int n1 = 14, n2 = 14, n3 = 28;
    for (int i = 0; i <= n1; ++i)
        for (int j = 0; j <= n2; ++j)
            for (int k = 0; k < n3; ++k) {
                double a = M_PI * i / n1, b = M_PI * j / n2, c = 2.0 * M_PI * k / n3;
                double x0 = R * std::cos(a);
                double x1 = R * std::sin(a) * std::cos(b);
                double x2 = R * std::sin(a) * std::sin(b) * std::cos(c);
                double x3 = R * std::sin(a) * std::sin(b) * std::sin(c);
                SpectralParameter l(cplx(x0, x2), cplx(x1, x3));
                double re = 0.0;
                for (int w = 0; w < 8; ++w) {
                    SpectralParameter wl = weyl_image(l, w);
                    re += (sinc_pow(wl.l1, eps, M) * sinc_pow(wl.l2, eps, M)).real();
                }
                min_re = std::min(min_re, re);
            }
    if (!(min_re > 0.0))
        throw std::logic_error("test function: psi not positive on the calibration ball");
    return 1.0 / min_re;
}

}  // namespace

TestFunctionSpec make_test_function_spec(double mu1, double mu2, int M) {
    if (M < 8 || M % 2 != 0) throw std::invalid_argument("test function: M must be even and >= 8");
    TestFunctionSpec spec;
    spec.mu = SpectralParameter(mu1, mu2);
    spec.M = M;
    // eps <= 1/(2 sqrt(6) M) keeps type(psi) <= 1 in the Killing-dual norm
    spec.eps = 1.0 / (5.0 * M);
    spec.c_psi = calibrate_c_psi(M, spec.eps);
    if (spec.psi_type() > 1.0) throw std::logic_error("test function: type exceeds 1");
    return spec;
}

cplx psi_value(const TestFunctionSpec& spec, const SpectralParameter& lambda) {
    // sort the Weyl addends before summing: the value is then bit-identical
    // across Weyl images of the argument
    std::array<cplx, 8> terms;
    for (int w = 0; w < 8; ++w) {
        SpectralParameter wl = weyl_image(lambda, w);
        terms[w] = sinc_pow(wl.l1, spec.eps, spec.M) * sinc_pow(wl.l2, spec.eps, spec.M);
    }
    std::sort(terms.begin(), terms.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    cplx acc = 0.0;
    for (const cplx& t : terms) acc += t;
    return spec.c_psi * acc;
}

cplx test_function(const TestFunctionSpec& spec, const SpectralParameter& lambda) {
    std::array<cplx, 8> terms;
    for (int w = 0; w < 8; ++w) {
        SpectralParameter wl = weyl_image(lambda, w);
        SpectralParameter arg(spec.mu.l1 - wl.l1, spec.mu.l2 - wl.l2);
        terms[w] = psi_value(spec, arg);
    }
    std::sort(terms.begin(), terms.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    cplx acc = 0.0;
    for (const cplx& t : terms) acc += t;
    return acc * acc;
}

}  // namespace sp4
