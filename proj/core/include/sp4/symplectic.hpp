#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <utility>

#include "sp4/mat4.hpp"
#include "sp4/rational.hpp"

namespace sp4 {

using Mat4d = Eigen::Matrix4d;
using Mat2d = Eigen::Matrix2d;
using Mat2cd = Eigen::Matrix2cd;
using cplx = std::complex<double>;

// H in the Cartan subalgebra, coordinates dual to (e1, e2):
// H = diag(t1, t2, -t1, -t2).
struct CartanVector {
    double t1 = 0.0;
    double t2 = 0.0;

    // Killing norm on sp4: <H,H> = 12 (t1^2 + t2^2).
    double killing_norm() const { return std::sqrt(12.0 * (t1 * t1 + t2 * t2)); }
};

// Spectral parameter lambda = lambda1 e1 + lambda2 e2, complex coordinates.
struct SpectralParameter {
    cplx l1{0.0, 0.0};
    cplx l2{0.0, 0.0};

    SpectralParameter() = default;
    SpectralParameter(cplx a, cplx b) : l1(a), l2(b) {}
    SpectralParameter(double a, double b) : l1(a, 0), l2(b, 0) {}

    bool is_real(double tol = 0.0) const {
        return std::abs(l1.imag()) <= tol && std::abs(l2.imag()) <= tol;
    }
    // ||lambda||^2 := ||Re||^2 + ||Im||^2 with the dual Killing norm
    // ||v||^2 = (v1^2 + v2^2)/12 on real forms.
    double norm() const {
        double re = l1.real() * l1.real() + l2.real() * l2.real();
        double im = l1.imag() * l1.imag() + l2.imag() * l2.imag();
        return std::sqrt((re + im) / 12.0);
    }
};

SpectralParameter weyl_image(const SpectralParameter& l, int w);  // w in 0..7
std::array<std::pair<double, double>, 8> weyl_orbit(double x, double y);

// Z = X + iY with Y positive definite.
struct SiegelPoint {
    Mat2d X = Mat2d::Zero();
    Mat2d Y = Mat2d::Identity();
};
bool siegel_point_valid(const SiegelPoint& z, double tol = 1e-12);

struct GroupElement {
    Mat4d g = Mat4d::Identity();
    double tolerance = 1e-9;
};

// Frobenius defect ||g^T J g - J||_F; make() rejects matrices beyond tol.
double symplectic_defect(const Mat4d& g);
GroupElement make_group_element(const Mat4d& g, double tol = 1e-9);
Mat4d group_inverse(const Mat4d& g);  // J^-1 g^T J for symplectic g

Mat4d exp_a(const CartanVector& h);
Mat4d to_mat4d(const Mat4& m);

// Iwasawa projection H(g) with g in K exp(H(g)) N, computed through the
// Siegel point g^-1.(i I2): Y' = B diag(d1,d2) B^T with B unit upper
// triangular, H = -(log d1, log d2)/2.
CartanVector iwasawa_H(const GroupElement& g);

// Cartan projection, dominant representative t1 >= t2 >= 0 from the
// singular values e^{t1} >= e^{t2} >= 1 of g.
CartanVector cartan_C(const GroupElement& g);

SiegelPoint moebius(const GroupElement& g, const SiegelPoint& z);
GroupElement point_to_group(const SiegelPoint& z);

// Action of g on 2x2 complex symmetric Z; shared by moebius and the
// spherical-function integrand.
Mat2cd moebius_apply(const Mat4d& g, const Mat2cd& z);

// C2 root data with exact rational pairings. Positive roots e1 +- e2, 2e1,
// 2e2 (multiplicity one each), rho = 2 e1 + e2, <l,m> = (l.m)/12 on a*.
struct RootSystemData {
    std::array<std::pair<int, int>, 4> positive_roots{{{1, -1}, {1, 1}, {2, 0}, {0, 2}}};
    std::pair<int, int> rho{2, 1};

    static Rational dual_pairing(std::pair<int, int> a, std::pair<int, int> b) {
        return Rational((__int128)a.first * b.first + (__int128)a.second * b.second, 12);
    }
    Rational rho_norm_sq() const { return dual_pairing(rho, rho); }  // 5/12 exactly

    // C_rho = convex hull of W.rho = {|x|<=2, |y|<=2, |x|+|y|<=3}.
    static bool in_C_rho(double x, double y, double tol = 1e-12) {
        double ax = std::abs(x), ay = std::abs(y);
        return ax <= 2 + tol && ay <= 2 + tol && ax + ay <= 3 + tol;
    }
};

// Membership descriptors for the unitary-spectrum region Lambda: the real
// plane plus two exceptional families with ||Im mu|| <= sqrt(5/2).
struct SpectrumRegion {
    static constexpr double im_norm_bound() { return 1.5811388300841898; }  // sqrt(5/2)

    static bool member(const SpectralParameter& mu, double tol = 1e-9);
    // family A: mu = (x+iy) e1 + (-x+iy) e2
    static SpectralParameter conjugate_pair_family(double x, double y);
    // family B: mu = iy e1 + x e2
    static SpectralParameter imaginary_axis_family(double x, double y);
};

}  // namespace sp4
