#include <algorithm>
#include <cmath>
#include <vector>

#include "iwasawa_node.h"
#include "sp4/spherical.hpp"

namespace sp4 {

namespace {

// power-of-two in-place complex FFT, sign +1 (synthesis convention)
void fft_inplace(std::vector<cplx>& a, size_t n, size_t stride, size_t offset) {
    // bit reversal
    size_t j = 0;
    for (size_t i = 0; i < n; ++i) {
        if (i < j) std::swap(a[offset + i * stride], a[offset + j * stride]);
        size_t m = n >> 1;
        while (m >= 1 && j >= m) {
            j -= m;
            m >>= 1;
        }
        j += m;
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * M_PI / double(len);
        cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                cplx u = a[offset + (i + k) * stride];
                cplx v = a[offset + (i + k + len / 2) * stride] * w;
                a[offset + (i + k) * stride] = u + v;
                a[offset + (i + k + len / 2) * stride] = u - v;
                w *= wl;
            }
        }
    }
}

void fft2d(std::vector<cplx>& a, size_t n) {
    for (size_t r = 0; r < n; ++r) fft_inplace(a, n, 1, r * n);
    for (size_t c = 0; c < n; ++c) fft_inplace(a, n, n, c);
}

struct FTable {
    std::vector<cplx> f;  // F on a centered v-grid
    int half = 0;         // indices -half..half
    double v_step = 0.0;

    cplx at(int i, int j) const { return f[size_t(i + half) * (2 * half + 1) + (j + half)]; }

    cplx interp(double v1, double v2) const {
        double x = v1 / v_step, y = v2 / v_step;
        int i0 = (int)std::floor(x), j0 = (int)std::floor(y);
        if (i0 < -half + 1 || i0 > half - 3 || j0 < -half + 1 || j0 > half - 3)
            throw std::domain_error("inverse transform: interpolation out of range");
        double fx = x - i0, fy = y - j0;
        auto cr = [](cplx p0, cplx p1, cplx p2, cplx p3, double t) {
            // Catmull-Rom
            return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                                  t * (3.0 * (p1 - p2) + p3 - p0)));
        };
        cplx rows[4];
        for (int di = -1; di <= 2; ++di)
            rows[di + 1] = cr(at(i0 + di, j0 - 1), at(i0 + di, j0), at(i0 + di, j0 + 1),
                              at(i0 + di, j0 + 2), fy);
        return cr(rows[0], rows[1], rows[2], rows[3], fx);
    }
};

// F(v) = int G(lambda) e^{i lambda . v} d lambda on a centered v-grid via FFT
FTable transform_table(const std::vector<double>& g, size_t n, double h_lambda, double vmax) {
    std::vector<cplx> a(n * n);
    for (size_t m = 0; m < n; ++m)
        for (size_t k = 0; k < n; ++k) a[m * n + k] = g[m * n + k];
    fft2d(a, n);
    FTable tab;
    tab.v_step = 2.0 * M_PI / (double(n) * h_lambda);
    tab.half = (int)std::floor(vmax / tab.v_step);
    int side = 2 * tab.half + 1;
    tab.f.resize(size_t(side) * side);
    double scale = h_lambda * h_lambda;
    for (int i = -tab.half; i <= tab.half; ++i)
        for (int j = -tab.half; j <= tab.half; ++j) {
            size_t ki = (i >= 0) ? size_t(i) : n + i;
            size_t kj = (j >= 0) ? size_t(j) : n + j;
            double sgn = (((i + j) % 2) == 0) ? 1.0 : -1.0;  // e^{-i pi (k1+k2)} shift
            tab.f[size_t(i + tab.half) * side + (j + tab.half)] = scale * sgn * a[ki * n + kj];
        }
    return tab;
}

cplx k_integral(const FTable& tab, const CartanVector& H, int level) {
    auto rule = shared_rule(level);
    const double d1 = std::exp(-2.0 * H.t1), d2 = std::exp(-2.0 * H.t2);
    const int n_phi = rule->n_phi, n_alpha = rule->n_alpha, n_u = rule->n_u, n_gamma = rule->n_gamma;
    const double w_angles = 0.5 / (double(n_phi) * n_alpha * n_gamma);
    cplx total(0, 0), comp(0, 0);
    for (int ip = 0; ip < n_phi; ++ip) {
        const cplx zc = std::conj(rule->z_phi[ip]);
        for (int ia = 0; ia < n_alpha; ++ia) {
            const cplx za = rule->z_alpha[ia];
            for (int iu = 0; iu < n_u; ++iu) {
                const double ch = rule->cos_half_beta[iu], sh = rule->sin_half_beta[iu];
                const double wu = rule->u_weights[iu] * w_angles;
                for (int ig = 0; ig < n_gamma; ++ig) {
                    double h1, h2;
                    detail::node_iwasawa(zc, za, rule->z_gamma[ig], ch, sh, d1, d2, h1, h2);
                    const cplx term = wu * std::exp(2.0 * h1 + h2) * tab.interp(h1, h2);
                    const cplx y = term - comp;
                    const cplx t = total + y;
                    comp = (t - total) - y;
                    total = t;
                }
            }
        }
    }
    return total / 8.0;  // 1/|W|
}

}  // namespace

InverseTransformResult inverse_transform_sample(const InverseTransformConfig& cfg) {
    InverseTransformResult out;
    const TestFunctionSpec& spec = cfg.spec;

    // integrand G = ftilde * |c|^-2 and its radial mass profile
    auto G = [&](double l1, double l2) {
        cplx ft = test_function(spec, SpectralParameter(l1, l2));
        return ft.real() * c_closed_form(l1, l2);
    };
    double cutoff = cfg.lambda_cutoff;
    double l_eff = 20.0;
    {
        // shell masses on coarse rings fix both the cutoff and the
        // effective bandwidth (99.5% radius) used for quadrature levels
        std::vector<double> shell;
        double total = 0.0;
        const double dr = 4.0;
        for (int s = 0; s < 100; ++s) {
            double r0 = s * dr + dr / 2.0;
            double mass = 0.0;
            int na = 24;
            for (int a = 0; a < na; ++a) {
                double th = 2.0 * M_PI * a / na;
                mass += std::abs(G(r0 * std::cos(th), r0 * std::sin(th)));
            }
            mass *= r0 * dr * 2.0 * M_PI / na;
            shell.push_back(mass);
            total += mass;
            if (s > 8 && shell[s] + shell[s - 1] < 1e-4 * total) break;
        }
        double acc = 0.0;
        for (size_t s = 0; s < shell.size(); ++s) {
            acc += shell[s];
            if (acc >= 0.995 * total) {
                l_eff = (s + 1) * dr;
                break;
            }
            l_eff = (s + 1) * dr;
        }
        if (cutoff <= 0.0) cutoff = std::min(320.0, shell.size() * dr);
    }

    const double h_lambda = cfg.lambda_step;
    size_t n = 1;
    while (double(n) * h_lambda < 2.2 * cutoff || 2.0 * M_PI / (double(n) * h_lambda) > 0.005)
        n <<= 1;

    std::vector<double> grid(n * n, 0.0);
    auto fill = [&](double radius) {
        for (size_t m = 0; m < n; ++m) {
            double l1 = (double(m) - double(n) / 2) * h_lambda;
            for (size_t k = 0; k < n; ++k) {
                double l2 = (double(k) - double(n) / 2) * h_lambda;
                double r = std::hypot(l1, l2);
                grid[m * n + k] = (r <= radius) ? G(l1, l2) : 0.0;
            }
        }
    };

    const double vmax = 1.08;
    fill(cutoff);
    FTable table = transform_table(grid, n, h_lambda, vmax);

    const double s12 = std::sqrt(12.0);
    const double b = cfg.h_angle_deg * M_PI / 180.0;
    out.h_norms = cfg.h_norms;
    out.values.resize(cfg.h_norms.size());
    std::vector<int> levels(cfg.h_norms.size());
    for (size_t i = 0; i < cfg.h_norms.size(); ++i) {
        double t = cfg.h_norms[i] / s12;
        CartanVector H{t * std::cos(b), t * std::sin(b)};
        int level = cfg.quad_level > 0
                        ? cfg.quad_level
                        : std::min(96, 10 + (int)std::ceil(0.17 * l_eff * std::hypot(H.t1, H.t2) *
                                                           std::sqrt(2.0)));
        levels[i] = level;
        out.values[i] = k_integral(table, H, level);
    }

    for (size_t i = 0; i < out.values.size(); ++i)
        out.peak_abs = std::max(out.peak_abs, std::abs(out.values[i]));
    for (size_t i = 0; i < out.values.size(); ++i) {
        out.imag_residual = std::max(out.imag_residual, std::abs(out.values[i].imag()) / out.peak_abs);
        if (cfg.h_norms[i] >= 3.0)
            out.tail_ratio = std::max(out.tail_ratio, std::abs(out.values[i]) / out.peak_abs);
    }

    // truncation estimate: repeat with a smaller cutoff
    fill(0.8 * cutoff);
    FTable table2 = transform_table(grid, n, h_lambda, vmax);
    double max_diff = 0.0;
    for (size_t i = 0; i < cfg.h_norms.size(); ++i) {
        double t = cfg.h_norms[i] / s12;
        CartanVector H{t * std::cos(b), t * std::sin(b)};
        max_diff = std::max(max_diff, std::abs(out.values[i] - k_integral(table2, H, levels[i])));
    }
    out.truncation_estimate = max_diff / out.peak_abs;
    out.truncation_flagged = out.truncation_estimate > 0.10;
    return out;
}

}  // namespace sp4
