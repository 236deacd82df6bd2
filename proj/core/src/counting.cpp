#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "sp4/counting.hpp"
#include "sp4/spherical.hpp"

namespace sp4 {

namespace {

Mat4d column_split(const Mat4d& q, int c1, int c2) {
    Mat4d m = Mat4d::Zero();
    m.col(c1) = q.col(c1);
    m.col(c2) = q.col(c2);
    return m;
}

Mat4d signed_columns(const Mat4d& q, int to0, int s0, int to1, int s1, int to2, int s2, int to3,
                     int s3) {
    Mat4d m = Mat4d::Zero();
    int idx[4] = {to0, to1, to2, to3};
    int sg[4] = {s0, s1, s2, s3};
    for (int c = 0; c < 4; ++c)
        if (idx[c] >= 0) m.col(c) = double(sg[c]) * q.col(idx[c]);
    return m;
}

double quad_form(const Mat4d& q, const Eigen::Vector4d& v) { return v.dot(q * v); }

bool exact_similitude(const Mat4& gamma, i64 m) {
    auto s = similitude_of(gamma);
    return s.has_value() && *s == m;
}

bool cartan_within(const CountingContext& ctx, const Mat4& gamma, double delta, i64 m) {
    Mat4d gd = to_mat4d(gamma) / std::sqrt(double(m));
    Mat4d conj = ctx.g.g.inverse() * gd * ctx.g.g;
    Eigen::SelfAdjointEigenSolver<Mat4d> es(conj.transpose() * conj);
    auto ev = es.eigenvalues();
    if (!(ev(0) > 0)) return false;
    double t1 = 0.5 * std::log(ev(3));
    double t2 = 0.5 * std::log(std::max(ev(2), 1e-300));
    double norm = std::sqrt(12.0 * (t1 * t1 + t2 * t2));
    return norm <= delta;
}

struct EnumStats {
    double min_s2_disc = 1e300;
    i64 candidates = 0;
};

// Complete the left half (columns r, s) to full candidate matrices: the two
// linear relations per missing column (from gamma^T J gamma = m J) determine
// the lower pair of entries once the upper pair is fixed, so only the upper
// pairs scan their prediction boxes. Exact arithmetic throughout.
template <typename Emit>
void complete_right_half(const i64 rcol[4], const i64 scol[4], const double pred[8], double wbox,
                         i64 m, const Emit& emit) {
    const i64 r1 = rcol[0], r2 = rcol[1], r3 = rcol[2], r4 = rcol[3];
    const i64 s1 = scol[0], s2 = scol[1], s3 = scol[2], s4 = scol[3];
    const i64 D = r1 * s2 - s1 * r2;

    auto box_lo = [&](double c) { return (i64)std::ceil(c - wbox); };
    auto box_hi = [&](double c) { return (i64)std::floor(c + wbox); };

    // c1^T J c3 = m, c2^T J c3 = 0 ; c1^T J c4 = 0, c2^T J c4 = m
    auto solve_pair = [&](i64 u1, i64 u2, i64 t1, i64 t2, i64& z3, i64& z4) {
        // r1 z3 + r2 z4 = t1 + r3 u1 + r4 u2 ; s1 z3 + s2 z4 = t2 + s3 u1 + s4 u2
        __int128 b1 = (__int128)t1 + (__int128)r3 * u1 + (__int128)r4 * u2;
        __int128 b2 = (__int128)t2 + (__int128)s3 * u1 + (__int128)s4 * u2;
        __int128 n3 = b1 * s2 - b2 * r2;
        __int128 n4 = (__int128)r1 * b2 - (__int128)s1 * b1;
        if (n3 % D != 0 || n4 % D != 0) return false;
        z3 = (i64)(n3 / D);
        z4 = (i64)(n4 / D);
        return true;
    };

    if (D != 0) {
        for (i64 x1 = box_lo(pred[0]); x1 <= box_hi(pred[0]); ++x1)
            for (i64 x2 = box_lo(pred[2]); x2 <= box_hi(pred[2]); ++x2) {
                i64 x3, x4;
                if (!solve_pair(x1, x2, m, 0, x3, x4)) continue;
                for (i64 y1 = box_lo(pred[1]); y1 <= box_hi(pred[1]); ++y1)
                    for (i64 y2 = box_lo(pred[3]); y2 <= box_hi(pred[3]); ++y2) {
                        i64 y3, y4;
                        if (!solve_pair(y1, y2, 0, m, y3, y4)) continue;
                        emit(x1, x2, x3, x4, y1, y2, y3, y4);
                    }
            }
        return;
    }
    // degenerate upper-left 2x2: scan the solved entries' boxes as well and
    // keep only exact solutions of the linear relations
    for (i64 x1 = box_lo(pred[0]); x1 <= box_hi(pred[0]); ++x1)
        for (i64 x2 = box_lo(pred[2]); x2 <= box_hi(pred[2]); ++x2)
            for (i64 x3 = box_lo(pred[4]); x3 <= box_hi(pred[4]); ++x3)
                for (i64 x4 = box_lo(pred[6]); x4 <= box_hi(pred[6]); ++x4) {
                    if (r1 * x3 + r2 * x4 - r3 * x1 - r4 * x2 != m) continue;
                    if (s1 * x3 + s2 * x4 - s3 * x1 - s4 * x2 != 0) continue;
                    for (i64 y1 = box_lo(pred[1]); y1 <= box_hi(pred[1]); ++y1)
                        for (i64 y2 = box_lo(pred[3]); y2 <= box_hi(pred[3]); ++y2)
                            for (i64 y3 = box_lo(pred[5]); y3 <= box_hi(pred[5]); ++y3)
                                for (i64 y4 = box_lo(pred[7]); y4 <= box_hi(pred[7]); ++y4) {
                                    if (r1 * y3 + r2 * y4 - r3 * y1 - r4 * y2 != 0) continue;
                                    if (s1 * y3 + s2 * y4 - s3 * y1 - s4 * y2 != m) continue;
                                    emit(x1, x2, x3, x4, y1, y2, y3, y4);
                                }
                }
}

Mat4 assemble(const i64 rcol[4], const i64 scol[4], i64 x1, i64 x2, i64 x3, i64 x4, i64 y1, i64 y2,
              i64 y3, i64 y4) {
    Mat4 g;
    for (int i = 0; i < 4; ++i) {
        g(i, 0) = rcol[i];
        g(i, 1) = scol[i];
    }
    g(0, 2) = x1;
    g(1, 2) = x2;
    g(2, 2) = x3;
    g(3, 2) = x4;
    g(0, 3) = y1;
    g(1, 3) = y2;
    g(2, 3) = y3;
    g(3, 3) = y4;
    return g;
}

std::vector<Mat4> enumerate_S_impl(const CountingContext& ctx, double delta, i64 m,
                                   const ScanConfig& cfg, EnumStats* stats) {
    if (m < 1) throw std::invalid_argument("enumerate_S: m must be positive");
    if (delta > cfg.delta_ceiling)
        throw std::invalid_argument("enumerate_S: delta above configured ceiling");
    const double sm = std::sqrt(double(m));
    const double bound = ctx.entry_bound * (1.0 + delta) * sm;
    const i64 box = (i64)std::floor(bound + 1e-9);
    const double q11 = ctx.Q(0, 0), q22 = ctx.Q(1, 1), q12 = ctx.Q(0, 1);

    const double c_quad = 4.0 * ctx.Q.norm() * ctx.entry_bound * ctx.entry_bound;
    const double wbox = cfg.kappa * delta * sm + 0.5;

    std::set<Mat4> found;
    i64 candidates = 0;
    auto charge = [&](i64 n) {
        candidates += n;
        if (candidates > cfg.budget) throw BudgetExceeded("enumerate_S: budget exceeded");
        if (stats) stats->candidates = candidates;
    };

    Eigen::Vector4d r;
    for (i64 r1 = -box; r1 <= box; ++r1)
        for (i64 r2 = -box; r2 <= box; ++r2) {
            QuadPoly2 P;
            P.a = ctx.Q(2, 2);
            P.b = 2.0 * ctx.Q(2, 3);
            P.c = ctx.Q(3, 3);
            P.d = 2.0 * (ctx.Q(0, 2) * r1 + ctx.Q(1, 2) * r2);
            P.e = 2.0 * (ctx.Q(0, 3) * r1 + ctx.Q(1, 3) * r2);
            P.f = ctx.Q(0, 0) * r1 * r1 + 2.0 * ctx.Q(0, 1) * r1 * r2 + ctx.Q(1, 1) * r2 * r2 -
                  double(m) * q11;
            double bx, by;
            P.solution_box(c_quad * delta * double(m), bx, by);
            i64 r3lo = std::max(-box, -(i64)std::ceil(bx)), r3hi = std::min(box, (i64)std::ceil(bx));
            i64 r4lo = std::max(-box, -(i64)std::ceil(by)), r4hi = std::min(box, (i64)std::ceil(by));
            for (i64 r3 = r3lo; r3 <= r3hi; ++r3)
                for (i64 r4 = r4lo; r4 <= r4hi; ++r4) {
                    if (std::abs(P.eval(double(r3), double(r4))) > c_quad * delta * double(m))
                        continue;
                    charge(1);
                    r << double(r1), double(r2), double(r3), double(r4);
                    double t_q1 = quad_form(ctx.Q1, r), t_q2 = quad_form(ctx.Q2, r);
                    bool use1 = t_q1 >= cfg.theta * double(m) * q11;
                    bool use2 = t_q2 >= cfg.theta * double(m) * q11;
                    if (use1 && use2) {
                        if (t_q1 >= t_q2)
                            use2 = false;
                        else
                            use1 = false;
                    }
                    if (!use1 && !use2) continue;

                    double den = use1 ? t_q1 : t_q2;
                    double ca, cb, cc, cd, ce, cf;
                    if (use1) {
                        ca = quad_form(ctx.A11, r) / den;
                        cb = quad_form(ctx.A12, r) / den;
                        cc = double(m) * double(r1) * q12 / den;
                        cd = quad_form(ctx.A21, r) / den;
                        ce = quad_form(ctx.A22, r) / den;
                        cf = double(m) * double(r3) * q12 / den;
                    } else {
                        ca = quad_form(ctx.B11, r) / den;
                        cb = quad_form(ctx.B12, r) / den;
                        cc = double(m) * double(r2) * q12 / den;
                        cd = quad_form(ctx.B21, r) / den;
                        ce = quad_form(ctx.B22, r) / den;
                        cf = double(m) * double(r4) * q12 / den;
                    }
                    auto idx = use1 ? std::array<int, 4>{0, 1, 2, 3} : std::array<int, 4>{1, 0, 3, 2};
                    Eigen::Vector4d e_b = Eigen::Vector4d::Zero(), e_d = Eigen::Vector4d::Zero(),
                                    e_0 = Eigen::Vector4d::Zero();
                    e_b(idx[0]) = ca;
                    e_b(idx[1]) = 1.0;
                    e_b(idx[2]) = cd;
                    e_d(idx[0]) = cb;
                    e_d(idx[2]) = ce;
                    e_d(idx[3]) = 1.0;
                    e_0(idx[0]) = cc;
                    e_0(idx[2]) = cf;
                    QuadPoly2 S2;
                    S2.a = quad_form(ctx.Q, e_b);
                    S2.c = quad_form(ctx.Q, e_d);
                    S2.b = 2.0 * e_b.dot(ctx.Q * e_d);
                    S2.d = 2.0 * e_b.dot(ctx.Q * e_0);
                    S2.e = 2.0 * e_d.dot(ctx.Q * e_0);
                    S2.f = quad_form(ctx.Q, e_0) - double(m) * q22;
                    if (stats) stats->min_s2_disc = std::min(stats->min_s2_disc, -S2.discriminant());
                    double sbx, sby;
                    double s_slack = c_quad * delta * double(m) * (1.0 + cfg.kappa);
                    S2.solution_box(s_slack, sbx, sby);
                    i64 blo = std::max(-box, -(i64)std::ceil(sbx)),
                        bhi = std::min(box, (i64)std::ceil(sbx));
                    i64 dlo = std::max(-box, -(i64)std::ceil(sby)),
                        dhi = std::min(box, (i64)std::ceil(sby));
                    i64 rcol[4] = {r1, r2, r3, r4};
                    for (i64 sb = blo; sb <= bhi; ++sb)
                        for (i64 sd = dlo; sd <= dhi; ++sd) {
                            if (std::abs(S2.eval(double(sb), double(sd))) > s_slack) continue;
                            charge(1);
                            double l1 = ca * sb + cb * sd + cc;
                            double l3 = cd * sb + ce * sd + cf;
                            for (i64 sa = (i64)std::ceil(l1 - wbox); sa <= (i64)std::floor(l1 + wbox);
                                 ++sa)
                                for (i64 sc = (i64)std::ceil(l3 - wbox);
                                     sc <= (i64)std::floor(l3 + wbox); ++sc) {
                                    i64 scol[4];
                                    scol[idx[0]] = sa;
                                    scol[idx[1]] = sb;
                                    scol[idx[2]] = sc;
                                    scol[idx[3]] = sd;
                                    // columns 1, 2 of any member of S(m) are J-orthogonal
                                    if (rcol[0] * scol[2] - rcol[2] * scol[0] + rcol[1] * scol[3] -
                                            rcol[3] * scol[1] !=
                                        0)
                                        continue;
                                    Mat2d UL, LL;
                                    UL << rcol[0] / sm, scol[0] / sm, rcol[1] / sm, scol[1] / sm;
                                    LL << rcol[2] / sm, scol[2] / sm, rcol[3] / sm, scol[3] / sm;
                                    Mat2d C = -ctx.V * LL * ctx.V;
                                    Mat2d B = ctx.Vinv * (UL - ctx.X * LL) * ctx.V;
                                    Mat2d UR = -UL * ctx.X + ctx.V * C * ctx.V +
                                               ctx.X * ctx.Vinv * B * ctx.V;
                                    Mat2d LR = -LL * ctx.X + ctx.Vinv * B * ctx.V;
                                    double pred[8] = {sm * UR(0, 0), sm * UR(0, 1), sm * UR(1, 0),
                                                      sm * UR(1, 1), sm * LR(0, 0), sm * LR(0, 1),
                                                      sm * LR(1, 0), sm * LR(1, 1)};
                                    // reorder to column layout: c3 upper pair = pred[0], pred[2]
                                    double predc[8] = {pred[0], pred[1], pred[2], pred[3],
                                                       pred[4], pred[5], pred[6], pred[7]};
                                    charge(1);
                                    complete_right_half(
                                        rcol, scol, predc, wbox, m,
                                        [&](i64 x1, i64 x2, i64 x3, i64 x4, i64 y1, i64 y2, i64 y3,
                                            i64 y4) {
                                            Mat4 gamma =
                                                assemble(rcol, scol, x1, x2, x3, x4, y1, y2, y3, y4);
                                            if (!exact_similitude(gamma, m)) return;
                                            if (!cartan_within(ctx, gamma, delta, m)) return;
                                            found.insert(gamma);
                                        });
                                }
                        }
                }
        }
    return std::vector<Mat4>(found.begin(), found.end());
}

}  // namespace

CountingContext make_counting_context(const GroupElement& g) {
    CountingContext ctx;
    ctx.g = g;
    ctx.Q = (g.g * g.g.transpose()).inverse();
    ctx.Q1 = column_split(ctx.Q, 0, 2);
    ctx.Q2 = column_split(ctx.Q, 1, 3);
    // (mat4a): A11 = (-q2 0 0 -q3), A12 = (-q4 q3 0 0), A21 = (0 0 -q2 q1), A22 = (0 -q1 -q4 0)
    ctx.A11 = signed_columns(ctx.Q, 1, -1, -1, 0, -1, 0, 2, -1);
    ctx.A12 = signed_columns(ctx.Q, 3, -1, 2, 1, -1, 0, -1, 0);
    ctx.A21 = signed_columns(ctx.Q, -1, 0, -1, 0, 1, -1, 0, 1);
    ctx.A22 = signed_columns(ctx.Q, -1, 0, 0, -1, 3, -1, -1, 0);
    // (mat5a): B11 = (0 -q1 -q4 0), B12 = (q4 -q3 0 0), B21 = (0 0 q2 -q1), B22 = (-q2 0 0 -q3)
    ctx.B11 = signed_columns(ctx.Q, -1, 0, 0, -1, 3, -1, -1, 0);
    ctx.B12 = signed_columns(ctx.Q, 3, 1, 2, -1, -1, 0, -1, 0);
    ctx.B21 = signed_columns(ctx.Q, -1, 0, -1, 0, 1, 1, 0, -1);
    ctx.B22 = signed_columns(ctx.Q, 1, -1, -1, 0, -1, 0, 2, -1);

    SiegelPoint z = moebius(g, SiegelPoint{});
    GroupElement rep = point_to_group(z);
    ctx.V = rep.g.block<2, 2>(0, 0);
    ctx.Vinv = ctx.V.inverse();
    ctx.X = rep.g.block<2, 2>(0, 2) * ctx.V;  // rep stores X V^{-1} in the corner

    Eigen::SelfAdjointEigenSolver<Mat4d> es(g.g.transpose() * g.g);
    double smax = std::sqrt(es.eigenvalues()(3));
    ctx.entry_bound = smax * smax;  // sigma_max(g) sigma_max(g^-1) for symplectic g
    Eigen::SelfAdjointEigenSolver<Mat4d> eq(ctx.Q);
    ctx.q_min_eig = eq.eigenvalues()(0);
    return ctx;
}

std::vector<Mat4> enumerate_S(const CountingContext& ctx, double delta, i64 m,
                              const ScanConfig& cfg) {
    return enumerate_S_impl(ctx, delta, m, cfg, nullptr);
}

std::vector<Mat4> enumerate_S_oracle_id(double delta, i64 m) {
    const double sm = std::sqrt(double(m));
    const i64 box = (i64)std::floor((1.0 + delta) * sm + 1e-9);
    CountingContext ctx = make_counting_context(GroupElement{});
    const double wbox = 2.0 * delta * sm + 0.5;
    const double slack = double(m) * std::min(1.0, 2.2 * delta);  // |col.col - m delta_ij| bound
    std::set<Mat4> found;

    i64 rcol[4], scol[4];
    for (rcol[0] = -box; rcol[0] <= box; ++rcol[0])
        for (rcol[1] = -box; rcol[1] <= box; ++rcol[1])
            for (rcol[2] = -box; rcol[2] <= box; ++rcol[2])
                for (rcol[3] = -box; rcol[3] <= box; ++rcol[3]) {
                    i64 rr = rcol[0] * rcol[0] + rcol[1] * rcol[1] + rcol[2] * rcol[2] +
                             rcol[3] * rcol[3];
                    if (std::abs(double(rr - m)) > slack) continue;
                    for (scol[0] = -box; scol[0] <= box; ++scol[0])
                        for (scol[1] = -box; scol[1] <= box; ++scol[1])
                            for (scol[2] = -box; scol[2] <= box; ++scol[2])
                                for (scol[3] = -box; scol[3] <= box; ++scol[3]) {
                                    i64 ss = scol[0] * scol[0] + scol[1] * scol[1] +
                                             scol[2] * scol[2] + scol[3] * scol[3];
                                    if (std::abs(double(ss - m)) > slack) continue;
                                    i64 rs = rcol[0] * scol[0] + rcol[1] * scol[1] +
                                             rcol[2] * scol[2] + rcol[3] * scol[3];
                                    if (std::abs(double(rs)) > slack) continue;
                                    if (rcol[0] * scol[2] - rcol[2] * scol[0] + rcol[1] * scol[3] -
                                            rcol[3] * scol[1] !=
                                        0)
                                        continue;
                                    double pred[8] = {-double(rcol[2]), -double(scol[2]),
                                                      -double(rcol[3]), -double(scol[3]),
                                                      double(rcol[0]),  double(scol[0]),
                                                      double(rcol[1]),  double(scol[1])};
                                    complete_right_half(
                                        rcol, scol, pred, wbox, m,
                                        [&](i64 x1, i64 x2, i64 x3, i64 x4, i64 y1, i64 y2, i64 y3,
                                            i64 y4) {
                                            Mat4 gamma = assemble(rcol, scol, x1, x2, x3, x4, y1,
                                                                  y2, y3, y4);
                                            if (!exact_similitude(gamma, m)) return;
                                            if (!cartan_within(ctx, gamma, delta, m)) return;
                                            found.insert(gamma);
                                        });
                                }
                }
    return std::vector<Mat4>(found.begin(), found.end());
}

ResidualReport residual_check(const Mat4& gamma, const CountingContext& ctx, double delta, i64 m,
                              bool with_distance) {
    ResidualReport rep;
    Eigen::Vector4d r, s;
    for (int i = 0; i < 4; ++i) {
        r(i) = double(gamma(i, 0));
        s(i) = double(gamma(i, 1));
    }
    const double md = double(m);
    rep.rQr = std::abs(quad_form(ctx.Q, r) - md * ctx.Q(0, 0)) / md;
    rep.sQs = std::abs(quad_form(ctx.Q, s) - md * ctx.Q(1, 1)) / md;
    double rjs = r(0) * s(2) - r(2) * s(0) + r(1) * s(3) - r(3) * s(1);
    rep.rJs = std::abs(rjs) / md;
    rep.rQs = std::abs(r.dot(ctx.Q * s) - md * ctx.Q(0, 1)) / md;

    double t1 = quad_form(ctx.Q1, r), t2 = quad_form(ctx.Q2, r);
    double sm = std::sqrt(md);
    if (std::max(t1, t2) > 0.05 * md * ctx.Q(0, 0)) {
        bool use1 = t1 >= t2;
        double den = use1 ? t1 : t2;
        double pa, pb;
        if (use1) {
            pa = (s(1) * quad_form(ctx.A11, r) + s(3) * quad_form(ctx.A12, r) +
                  md * r(0) * ctx.Q(0, 1)) /
                 den;
            pb = (s(1) * quad_form(ctx.A21, r) + s(3) * quad_form(ctx.A22, r) +
                  md * r(2) * ctx.Q(0, 1)) /
                 den;
            rep.recon_error = std::max(std::abs(s(0) - pa), std::abs(s(2) - pb)) / sm;
        } else {
            pa = (s(0) * quad_form(ctx.B11, r) + s(2) * quad_form(ctx.B12, r) +
                  md * r(1) * ctx.Q(0, 1)) /
                 den;
            pb = (s(0) * quad_form(ctx.B21, r) + s(2) * quad_form(ctx.B22, r) +
                  md * r(3) * ctx.Q(0, 1)) /
                 den;
            rep.recon_error = std::max(std::abs(s(1) - pa), std::abs(s(3) - pb)) / sm;
        }
    }
    double maxe = 0;
    for (i64 v : gamma.a) maxe = std::max(maxe, std::abs(double(v)));
    rep.entry_ratio = maxe / sm;

    double worst = std::max({rep.rQr, rep.sQs, rep.rJs, rep.rQs, rep.recon_error});
    rep.bound_constant = delta > 0 ? worst / delta : 0.0;

    if (with_distance) {
        Mat4d gd = to_mat4d(gamma) / sm;
        auto rule = shared_rule(8);
        double best = 1e300;
        size_t best_i = 0;
        for (size_t i = 0; i < rule->size(); ++i) {
            Mat4d cand = ctx.g.g * rule->embed(i) * ctx.g.g.inverse();
            double d = (gd - cand).norm();
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        Mat4d anchor = rule->embed(best_i);
        auto fine = shared_rule(16);
        for (size_t i = 0; i < fine->size(); ++i) {
            Mat4d k = fine->embed(i);
            if ((k - anchor).norm() > 0.8) continue;
            best = std::min(best, (gd - ctx.g.g * k * ctx.g.g.inverse()).norm());
        }
        rep.dist_to_gKg = best;
    }

    rep.pass =
        rep.bound_constant < 64.0 && rep.entry_ratio <= ctx.entry_bound * (1.0 + delta) + 1e-9;
    return rep;
}

Prop1Scan prop1_scan(const CountingContext& ctx, const ScanConfig& cfg) {
    Prop1Scan out;
    double smallest_delta = *std::min_element(cfg.deltas.begin(), cfg.deltas.end());
    std::vector<double> lx, ly;
    EnumStats stats;
    for (i64 m : cfg.m_values)
        for (double delta : cfg.deltas) {
            auto t0 = std::chrono::steady_clock::now();
            ScanRow row{m, delta, 0, 0.0, false};
            try {
                auto set = enumerate_S_impl(ctx, delta, m, cfg, &stats);
                row.count = (i64)set.size();
            } catch (const BudgetExceeded&) {
                row.budget_hit = true;
            }
            row.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (!row.budget_hit && m % 2 == 1 && row.count < 8 * sigma_divisor_sum(m))
                out.lower_bound_ok = false;
            if (!row.budget_hit && delta == smallest_delta && m % 2 == 1 && row.count > 0) {
                lx.push_back(std::log(double(m)));
                ly.push_back(std::log(double(row.count)));
            }
            out.rows.push_back(row);
        }
    if (lx.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        out.slope = (lx.size() * sxy - sx * sy) / (lx.size() * sxx - sx * sx);
    }
    // Minkowski guard: the (s2,s4)-quadratic discriminants observed during
    // the scan must stay above the Gram lower bound 4 lambda_min(Q)^2
    out.min_disc_guard = stats.min_s2_disc;
    if (stats.min_s2_disc < 2.0 * ctx.q_min_eig * ctx.q_min_eig)
        throw std::logic_error("prop1_scan: Minkowski discriminant guard violated");
    return out;
}

std::string scan_rows_csv(const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    os << "m,delta,count,seconds,budget_hit\n";
    for (const auto& r : rows)
        os << r.m << ',' << r.delta << ',' << r.count << ',' << r.seconds << ','
           << (r.budget_hit ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace sp4
