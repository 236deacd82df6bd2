#include "sp4/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace sp4 {

namespace {
Mat4d J4() {
    Mat4d j = Mat4d::Zero();
    j(0, 2) = 1;
    j(1, 3) = 1;
    j(2, 0) = -1;
    j(3, 1) = -1;
    return j;
}
}  // namespace

SpectralParameter weyl_image(const SpectralParameter& l, int w) {
    cplx a = l.l1, b = l.l2;
    switch (w & 7) {
        case 0: return {a, b};
        case 1: return {b, a};
        case 2: return {-a, b};
        case 3: return {b, -a};
        case 4: return {a, -b};
        case 5: return {-b, a};
        case 6: return {-a, -b};
        default: return {-b, -a};
    }
}

std::array<std::pair<double, double>, 8> weyl_orbit(double x, double y) {
    return {{{x, y}, {y, x}, {-x, y}, {y, -x}, {x, -y}, {-y, x}, {-x, -y}, {-y, -x}}};
}

bool siegel_point_valid(const SiegelPoint& z, double tol) {
    if ((z.X - z.X.transpose()).norm() > 1e-9 || (z.Y - z.Y.transpose()).norm() > 1e-9)
        return false;
    // leading minors of Y positive
    return z.Y(0, 0) > tol && z.Y.determinant() > tol;
}

double symplectic_defect(const Mat4d& g) {
    return (g.transpose() * J4() * g - J4()).norm();
}

GroupElement make_group_element(const Mat4d& g, double tol) {
    if (symplectic_defect(g) > tol)
        throw std::invalid_argument("make_group_element: matrix not symplectic within tolerance");
    return GroupElement{g, tol};
}

Mat4d group_inverse(const Mat4d& g) {
    Mat4d j = J4();
    return -j * g.transpose() * j;  // J^-1 = -J
}

Mat4d exp_a(const CartanVector& h) {
    Mat4d m = Mat4d::Zero();
    m(0, 0) = std::exp(h.t1);
    m(1, 1) = std::exp(h.t2);
    m(2, 2) = std::exp(-h.t1);
    m(3, 3) = std::exp(-h.t2);
    return m;
}

Mat4d to_mat4d(const Mat4& m) {
    Mat4d r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = double(m(i, j));
    return r;
}

Mat2cd moebius_apply(const Mat4d& g, const Mat2cd& z) {
    Mat2cd A = g.block<2, 2>(0, 0).cast<cplx>();
    Mat2cd B = g.block<2, 2>(0, 2).cast<cplx>();
    Mat2cd C = g.block<2, 2>(2, 0).cast<cplx>();
    Mat2cd D = g.block<2, 2>(2, 2).cast<cplx>();
    Mat2cd den = C * z + D;
    cplx det = den(0, 0) * den(1, 1) - den(0, 1) * den(1, 0);
    if (std::abs(det) < 1e-14) throw std::domain_error("moebius: CZ + D singular");
    Mat2cd inv;
    inv << den(1, 1), -den(0, 1), -den(1, 0), den(0, 0);
    inv /= det;
    Mat2cd w = (A * z + B) * inv;
    return 0.5 * (w + w.transpose());  // symmetrize against rounding
}

CartanVector iwasawa_H(const GroupElement& g) {
    Mat2cd zi = Mat2cd::Zero();
    zi(0, 0) = cplx(0, 1);
    zi(1, 1) = cplx(0, 1);
    Mat2cd zp = moebius_apply(group_inverse(g.g), zi);
    double y11 = zp(0, 0).imag(), y12 = zp(0, 1).imag(), y22 = zp(1, 1).imag();
    double d2 = y22;
    double d1 = y11 - y12 * y12 / y22;
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::domain_error("iwasawa_H: image point not in the Siegel domain");
    return CartanVector{-0.5 * std::log(d1), -0.5 * std::log(d2)};
}

CartanVector cartan_C(const GroupElement& g) {
    Eigen::SelfAdjointEigenSolver<Mat4d> es(g.g.transpose() * g.g);
    auto ev = es.eigenvalues();  // ascending
    for (int i = 0; i < 4; ++i)
        if (!(ev(i) > 0.0)) throw std::domain_error("cartan_C: g^T g not positive definite");
    double t1 = 0.5 * std::log(ev(3));
    double t2 = 0.5 * std::log(ev(2));
    if (t1 < 0 || t2 < -1e-12) throw std::domain_error("cartan_C: singular value pattern invalid");
    return CartanVector{t1, std::max(t2, 0.0)};
}

SiegelPoint moebius(const GroupElement& g, const SiegelPoint& z) {
    Mat2cd zc = z.X.cast<cplx>() + cplx(0, 1) * z.Y.cast<cplx>();
    Mat2cd w = moebius_apply(g.g, zc);
    SiegelPoint out;
    out.X = w.real();
    out.Y = w.imag();
    if (!siegel_point_valid(out)) throw std::domain_error("moebius: image Y-part not positive definite");
    return out;
}

GroupElement point_to_group(const SiegelPoint& z) {
    if (!siegel_point_valid(z)) throw std::invalid_argument("point_to_group: invalid Siegel point");
    // symmetric positive definite square root of Y (2x2 closed form)
    double tr = z.Y.trace();
    double det = z.Y.determinant();
    double s = std::sqrt(det);
    double t = std::sqrt(tr + 2.0 * s);
    Mat2d V = (z.Y + s * Mat2d::Identity()) / t;
    Mat4d gm = Mat4d::Zero();
    gm.block<2, 2>(0, 0) = V;
    gm.block<2, 2>(2, 2) = V.inverse();
    gm.block<2, 2>(0, 2) = z.X * V.inverse();
    return GroupElement{gm, 1e-9};
}

bool SpectrumRegion::member(const SpectralParameter& mu, double tol) {
    if (mu.is_real(tol)) return true;
    double imx = mu.l1.imag(), imy = mu.l2.imag();
    double im_norm = std::sqrt((imx * imx + imy * imy) / 12.0);
    if (im_norm > im_norm_bound() + tol) return false;
    // mu1 = -conj(mu2)
    if (std::abs(mu.l1.real() + mu.l2.real()) <= tol && std::abs(imx - imy) <= tol) return true;
    // mu1 in R or iR, mu2 in iR
    bool mu2_imag = std::abs(mu.l2.real()) <= tol;
    bool mu1_axis = std::abs(mu.l1.real()) <= tol || std::abs(imx) <= tol;
    return mu2_imag && mu1_axis;
}

SpectralParameter SpectrumRegion::conjugate_pair_family(double x, double y) {
    return SpectralParameter(cplx(x, y), cplx(-x, y));
}

SpectralParameter SpectrumRegion::imaginary_axis_family(double x, double y) {
    return SpectralParameter(cplx(0, y), cplx(x, 0));
}

}  // namespace sp4
