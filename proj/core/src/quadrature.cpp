#include <cmath>
#include <map>
#include <mutex>

#include "sp4/spherical.hpp"

namespace sp4 {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on Legendre polynomials.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

Mat2cd QuadratureRule::node(size_t i) const {
    size_t ig = i % n_gamma;
    size_t iu = (i / n_gamma) % n_u;
    size_t ia = (i / (size_t(n_gamma) * n_u)) % n_alpha;
    size_t ip = i / (size_t(n_gamma) * n_u * n_alpha);
    cplx e1 = z_alpha[ia] * z_gamma[ig];
    cplx e2 = z_alpha[ia] * std::conj(z_gamma[ig]);
    double ch = cos_half_beta[iu], sh = sin_half_beta[iu];
    Mat2cd v;
    v(0, 0) = e1 * ch;
    v(0, 1) = -e2 * sh;
    v(1, 0) = std::conj(e2) * sh;
    v(1, 1) = std::conj(e1) * ch;
    return z_phi[ip] * v;
}

double QuadratureRule::weight(size_t i) const {
    size_t iu = (i / n_gamma) % n_u;
    return u_weights[iu] * 0.5 / (double(n_phi) * n_alpha * n_gamma);
}

Mat4d QuadratureRule::embed(size_t i) const {
    Mat2cd u = node(i);
    Mat2d B = u.real(), C = u.imag();
    Mat4d k;
    k.block<2, 2>(0, 0) = B;
    k.block<2, 2>(0, 2) = C;
    k.block<2, 2>(2, 0) = -C;
    k.block<2, 2>(2, 2) = B;
    return k;
}

QuadratureRule haar_quadrature(int level) {
    if (level < 2) throw std::invalid_argument("haar_quadrature: level must be >= 2");
    QuadratureRule rule;
    rule.level = level;
    rule.n_phi = level;
    rule.n_alpha = 2 * level;
    rule.n_u = level;
    rule.n_gamma = 2 * level;

    rule.z_phi.resize(rule.n_phi);
    for (int i = 0; i < rule.n_phi; ++i) {
        double phi = M_PI * i / rule.n_phi;
        rule.z_phi[i] = cplx(std::cos(phi), std::sin(phi));
    }
    rule.z_alpha.resize(rule.n_alpha);
    for (int i = 0; i < rule.n_alpha; ++i) {
        double half = M_PI * i / rule.n_alpha;  // alpha/2, alpha on [0, 2 pi)
        rule.z_alpha[i] = cplx(std::cos(half), -std::sin(half));
    }
    rule.z_gamma.resize(rule.n_gamma);
    for (int i = 0; i < rule.n_gamma; ++i) {
        double half = 2.0 * M_PI * i / rule.n_gamma;  // gamma/2, gamma on [0, 4 pi)
        rule.z_gamma[i] = cplx(std::cos(half), -std::sin(half));
    }
    std::vector<double> gx;
    gauss_legendre(rule.n_u, gx, rule.u_weights);
    rule.cos_half_beta.resize(rule.n_u);
    rule.sin_half_beta.resize(rule.n_u);
    for (int i = 0; i < rule.n_u; ++i) {
        rule.cos_half_beta[i] = std::sqrt(0.5 * (1.0 + gx[i]));
        rule.sin_half_beta[i] = std::sqrt(0.5 * (1.0 - gx[i]));
    }
    return rule;
}

std::shared_ptr<const QuadratureRule> shared_rule(int level) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(level);
    if (it != cache.end()) return it->second;
    auto rule = std::make_shared<const QuadratureRule>(haar_quadrature(level));
    cache[level] = rule;
    return rule;
}

}  // namespace sp4
