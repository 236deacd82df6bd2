#pragma once

#include <cmath>
#include <complex>

// Internal: Iwasawa coordinates of k^{-1}.(i diag(d1, d2)) for a quadrature
// node k given by its Euler factors. Shared by the spherical integrand and
// the inverse-transform kernel.

namespace sp4::detail {

using cplx = std::complex<double>;

inline void node_iwasawa(cplx zc, cplx za, cplx zg, double ch, double sh, double d1, double d2,
                         double& h1, double& h2) {
    const cplx e1 = za * zg, e2 = za * std::conj(zg);
    const cplx a00 = zc * std::conj(e1) * ch;
    const cplx a01 = zc * e2 * sh;
    const cplx a10 = -zc * std::conj(e2) * sh;
    const cplx a11 = zc * e1 * ch;
    const double b00 = a00.real(), b01 = a01.real(), b10 = a10.real(), b11 = a11.real();
    const double q00 = a00.imag(), q01 = a01.imag(), q10 = a10.imag(), q11 = a11.imag();
    const cplx n00(q00, b00 * d1), n01(q01, b01 * d2);
    const cplx n10(q10, b10 * d1), n11(q11, b11 * d2);
    const cplx m00(b00, -q00 * d1), m01(b01, -q01 * d2);
    const cplx m10(b10, -q10 * d1), m11(b11, -q11 * d2);
    const cplx inv = 1.0 / (m00 * m11 - m01 * m10);
    const cplx w00 = (n00 * m11 - n01 * m10) * inv;
    const cplx w01 = (-n00 * m01 + n01 * m00) * inv;
    const cplx w11 = (-n10 * m01 + n11 * m00) * inv;
    const double y00 = w00.imag(), y01 = w01.imag(), y11 = w11.imag();
    h1 = -0.5 * std::log(y00 - y01 * y01 / y11);
    h2 = -0.5 * std::log(y11);
}

}  // namespace sp4::detail
