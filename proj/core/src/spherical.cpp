#include <algorithm>
#include <cmath>
#include <sstream>

#include "iwasawa_node.h"
#include "sp4/parallel.hpp"
#include "sp4/spherical.hpp"

namespace sp4 {

namespace {

// One quadrature pass of the spherical integral. The integrand at node k is
// e^{(rho + i lambda) H(a k)} where H(a k) is read off the Siegel point
// (a k)^{-1}.(i I) = k^{-1}.(i diag(e^{-2t1}, e^{-2t2})).
cplx phi_sum(const SpectralParameter& lambda, const CartanVector& H, const QuadratureRule& rule) {
    const double d1 = std::exp(-2.0 * H.t1);
    const double d2 = std::exp(-2.0 * H.t2);
    const cplx c1 = cplx(2.0, 0.0) + cplx(0, 1) * lambda.l1;  // rho = 2 e1 + e2
    const cplx c2 = cplx(1.0, 0.0) + cplx(0, 1) * lambda.l2;

    const int n_phi = rule.n_phi, n_alpha = rule.n_alpha, n_u = rule.n_u, n_gamma = rule.n_gamma;
    const double w_angles = 0.5 / (double(n_phi) * n_alpha * n_gamma);

    cplx total(0, 0);
    cplx comp(0, 0);  // Kahan
    for (int ip = 0; ip < n_phi; ++ip) {
        const cplx zc = std::conj(rule.z_phi[ip]);
        for (int ia = 0; ia < n_alpha; ++ia) {
            const cplx za = rule.z_alpha[ia];
            for (int iu = 0; iu < n_u; ++iu) {
                const double ch = rule.cos_half_beta[iu], sh = rule.sin_half_beta[iu];
                const double wu = rule.u_weights[iu] * w_angles;
                for (int ig = 0; ig < n_gamma; ++ig) {
                    double h1, h2;
                    detail::node_iwasawa(zc, za, rule.z_gamma[ig], ch, sh, d1, d2, h1, h2);
                    const cplx term = wu * std::exp(c1 * h1 + c2 * h2);
                    const cplx y = term - comp;
                    const cplx t = total + y;
                    comp = (t - total) - y;
                    total = t;
                }
            }
        }
    }
    return total;
}

}  // namespace

int phi_level_hint(const SpectralParameter& lambda, const CartanVector& H) {
    double le = std::hypot(lambda.l1.real(), lambda.l2.real());
    double te = std::hypot(H.t1, H.t2);
    double phase = le * te;
    int level = 10 + (int)std::ceil(0.17 * phase);
    return std::min(level, 96);
}

PhiResult phi(const SpectralParameter& lambda, const CartanVector& H, const QuadratureRule& rule) {
    PhiResult res;
    res.value = phi_sum(lambda, H, rule);
    int prev = std::max(4, (3 * rule.level) / 4);
    cplx coarse = phi_sum(lambda, H, *shared_rule(prev));
    res.quad_error = std::abs(res.value - coarse);
    res.flagged = res.quad_error > 1e-6;
    return res;
}

PhiResult phi_auto(const SpectralParameter& lambda, const CartanVector& H, double tol) {
    int level = phi_level_hint(lambda, H);
    PhiResult res;
    for (int attempt = 0; attempt < 3; ++attempt) {
        res = phi(lambda, H, *shared_rule(level));
        if (res.quad_error <= tol || level >= 96) break;
        level = std::min(96, (3 * level) / 2);
    }
    res.flagged = res.quad_error > 1e-6;
    return res;
}

// ---- decay scan -----------------------------------------------------------------

DecayScanResult decay_scan(const DecayScanConfig& cfg) {
    DecayScanResult out;
    const double s12 = std::sqrt(12.0);
    std::vector<double> lambda_angles = cfg.lambda_angles_deg;
    if (cfg.walls_only) lambda_angles = {0.0, 45.0};

    struct Task {
        double l1, l2, t1, t2, ln, hn;
    };
    std::vector<Task> tasks;
    for (double ln : cfg.lambda_norms)
        for (double ang : lambda_angles)
            for (double hn : cfg.h_norms)
                for (double hang : cfg.h_angles_deg) {
                    double a = ang * M_PI / 180.0, b = hang * M_PI / 180.0;
                    Task t;
                    t.ln = ln;
                    t.hn = hn;
                    t.l1 = ln * s12 * std::cos(a);
                    t.l2 = ln * s12 * std::sin(a);
                    t.t1 = hn / s12 * std::cos(b);
                    t.t2 = hn / s12 * std::sin(b);
                    tasks.push_back(t);
                    if (hn == 0.0) break;  // H = 0 once per lambda
                }

    out.rows.resize(tasks.size());
    parallel_chunks(tasks.size(), 8, [&](size_t b, size_t e, size_t) {
        for (size_t i = b; i < e; ++i) {
            const Task& t = tasks[i];
            PhiResult pr = phi_auto(SpectralParameter(t.l1, t.l2), CartanVector{t.t1, t.t2},
                                    cfg.quad_tol);
            DecayRow row;
            row.lambda1 = t.l1;
            row.lambda2 = t.l2;
            row.t1 = t.t1;
            row.t2 = t.t2;
            row.abs_phi = std::abs(pr.value);
            row.stat = std::sqrt(1.0 + t.ln * t.hn) * row.abs_phi;
            row.quad_error = pr.quad_error;
            row.flagged = pr.flagged;
            out.rows[i] = row;
        }
    });

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < tasks.size(); ++i) {
        out.c_emp = std::max(out.c_emp, out.rows[i].stat);
        double prod = tasks[i].ln * tasks[i].hn;
        if (prod >= 10.0 && out.rows[i].abs_phi > 1e-12) {
            double x = std::log(prod), y = std::log(out.rows[i].abs_phi);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    out.far_points = n;
    if (n >= 2) out.far_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}

std::string decay_rows_csv(const std::vector<DecayRow>& rows) {
    std::ostringstream os;
    os << "lambda1,lambda2,t1,t2,abs_phi,stat,quad_error,flagged\n";
    os.setf(std::ios::scientific);
    os.precision(12);
    for (const auto& r : rows)
        os << r.lambda1 << ',' << r.lambda2 << ',' << r.t1 << ',' << r.t2 << ',' << r.abs_phi << ','
           << r.stat << ',' << r.quad_error << ',' << (r.flagged ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace sp4
