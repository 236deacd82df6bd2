#include <algorithm>
#include <cmath>
#include <vector>

#include "sp4/spherical.hpp"

namespace sp4 {

namespace {

Mat4d diag_a(double t1, double t2) {
    Mat4d m = Mat4d::Zero();
    m(0, 0) = t1;
    m(1, 1) = t2;
    m(2, 2) = -t1;
    m(3, 3) = -t2;
    return m;
}

// basis of k = Lie(U(2)) inside sp4; each element squares to -I, so
// exp(tV) = cos(t) I + sin(t) V exactly
std::vector<Mat4d> k_basis() {
    auto emb = [](const Mat2d& re, const Mat2d& im) {
        Mat4d m = Mat4d::Zero();
        m.block<2, 2>(0, 0) = re;
        m.block<2, 2>(0, 2) = im;
        m.block<2, 2>(2, 0) = -im;
        m.block<2, 2>(2, 2) = re;
        return m;
    };
    Mat2d zero = Mat2d::Zero(), id = Mat2d::Identity();
    Mat2d s1, s3, rot;
    s1 << 0, 1, 1, 0;
    s3 << 1, 0, 0, -1;
    rot << 0, 1, -1, 0;
    return {emb(zero, id), emb(zero, s1), emb(zero, s3), emb(rot, zero)};
}

Mat4d k_exp(const Mat4d& v, double t) { return std::cos(t) * Mat4d::Identity() + std::sin(t) * v; }

double grad_component(const CartanVector& X, const CartanVector& Y, const Mat4d& k, const Mat4d& v,
                      double h = 1e-5) {
    return (phase_f(X, Y, k * k_exp(v, h)) - phase_f(X, Y, k * k_exp(v, -h))) / (2.0 * h);
}

double hess_component(const CartanVector& X, const CartanVector& Y, const Mat4d& k, const Mat4d& v1,
                      const Mat4d& v2, double h = 1e-4) {
    double fpp = phase_f(X, Y, k * k_exp(v1, h) * k_exp(v2, h));
    double fpm = phase_f(X, Y, k * k_exp(v1, h) * k_exp(v2, -h));
    double fmp = phase_f(X, Y, k * k_exp(v1, -h) * k_exp(v2, h));
    double fmm = phase_f(X, Y, k * k_exp(v1, -h) * k_exp(v2, -h));
    return (fpp - fpm - fmp + fmm) / (4.0 * h * h);
}

std::vector<Mat4d> weyl_reps_in_K() {
    auto emb = [](const Mat2d& re, const Mat2d& im) {
        Mat4d m = Mat4d::Zero();
        m.block<2, 2>(0, 0) = re;
        m.block<2, 2>(0, 2) = im;
        m.block<2, 2>(2, 0) = -im;
        m.block<2, 2>(2, 2) = re;
        return m;
    };
    Mat2d zero = Mat2d::Zero();
    Mat2d swap;
    swap << 0, 1, 1, 0;
    Mat2d f1r, f1i;  // diag(i, 1)
    f1r << 0, 0, 0, 1;
    f1i << 1, 0, 0, 0;
    Mat2d f2r, f2i;  // diag(1, i)
    f2r << 1, 0, 0, 0;
    f2i << 0, 0, 0, 1;
    Mat4d e = Mat4d::Identity();
    Mat4d s = emb(swap, zero), a = emb(f1r, f1i), b = emb(f2r, f2i);
    return {e, s, a, b, a * b, s * a, s * b, s * a * b};
}

}  // namespace

double phase_f(const CartanVector& X, const CartanVector& Y, const Mat4d& k) {
    // <X, Ad_k Y> with the sp4 Killing form 6 tr(AB)
    Mat4d xy = diag_a(X.t1, X.t2) * k * diag_a(Y.t1, Y.t2) * k.transpose();
    return 6.0 * xy.trace();
}

PhaseProbeReport phase_probe(const PhaseProbe& probe) {
    PhaseProbeReport rep;
    const CartanVector& X = probe.X;
    const CartanVector& Y = probe.Y;
    rep.f_at_identity = phase_f(X, Y, Mat4d::Identity());

    auto basis = k_basis();

    // linearization: F_{exp(dX),Y}(k) - d f_{X,Y}(k) should be O(d^2)
    {
        auto rule = shared_rule(3);
        std::vector<double> lx, ly;
        for (double d : probe.deltas) {
            double worst = 0.0;
            for (size_t i = 0; i < rule->size(); i += 7) {
                Mat4d k = rule->embed(i);
                GroupElement g{exp_a(CartanVector{d * X.t1, d * X.t2}) * k, 1e-6};
                CartanVector h = iwasawa_H(g);
                double F = 12.0 * (h.t1 * Y.t1 + h.t2 * Y.t2);  // Killing pairing on a
                double rem = std::abs(F - d * phase_f(X, Y, k));
                worst = std::max(worst, rem);
            }
            if (worst > 1e-14) {
                lx.push_back(std::log(d));
                ly.push_back(std::log(worst));
            }
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        double num = lx.size() * sxy - sx * sy;
        double den = lx.size() * sxx - sx * sx;
        rep.fitted_exponent = den != 0 ? num / den : 0.0;
    }

    // first derivative vanishes on the critical set K_X W K_Y
    {
        double worst = 0.0;
        auto weyl = weyl_reps_in_K();
        auto torus = [&](double a, double b) {
            Mat4d m = Mat4d::Zero();
            m(0, 0) = std::cos(a);
            m(0, 2) = std::sin(a);
            m(2, 0) = -std::sin(a);
            m(2, 2) = std::cos(a);
            m(1, 1) = std::cos(b);
            m(1, 3) = std::sin(b);
            m(3, 1) = -std::sin(b);
            m(3, 3) = std::cos(b);
            return m;
        };
        for (const Mat4d& w : weyl)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    Mat4d k = torus(i * M_PI / 2.4, j * 0.9) * w * torus(j * M_PI / 3.1, i * 1.1);
                    for (const auto& v : basis)
                        worst = std::max(worst, std::abs(grad_component(X, Y, k, v)));
                }
        rep.max_crit_gradient = worst;
    }

    // van-der-Corput cover: everywhere on K some first or second derivative
    // stays away from zero
    {
        auto rule = shared_rule(probe.k_grid);
        double min_max = 1e300;
        for (size_t i = 0; i < rule->size(); i += 3) {
            Mat4d k = rule->embed(i);
            double big = 0.0;
            for (const auto& v : basis) big = std::max(big, std::abs(grad_component(X, Y, k, v)));
            if (big < 0.5) {
                for (size_t b1 = 0; b1 < basis.size(); ++b1)
                    for (size_t b2 = b1; b2 < basis.size(); ++b2)
                        big = std::max(big, std::abs(hess_component(X, Y, k, basis[b1], basis[b2])));
            }
            min_max = std::min(min_max, big);
        }
        rep.min_grid_max_derivative = min_max;
    }

    rep.pass = rep.fitted_exponent >= 1.8 && rep.fitted_exponent <= 2.2 &&
               rep.max_crit_gradient <= 1e-6 && rep.min_grid_max_derivative > 1e-3;
    return rep;
}

}  // namespace sp4
