#include <set>
#include <sstream>

#include "sp4/hecke.hpp"

namespace sp4 {

namespace {

Rational P(i64 p, int k) { return Rational::int_pow(p, k); }

CheckResult equal_check(const std::string& name, const HeckeElement& lhs, const HeckeElement& rhs) {
    CheckResult res{name, true, ""};
    auto labels = lhs.terms;
    for (const auto& [l, c] : rhs.terms) labels.emplace(l, c);
    for (const auto& [l, c] : labels) {
        Rational a = lhs.coeff(l), b = rhs.coeff(l);
        if (a != b) {
            res.pass = false;
            res.detail = "label " + l.str() + ": lhs=" + a.str() + " rhs=" + b.str();
            return res;
        }
    }
    return res;
}

CheckResult leq_check(const std::string& name, const HeckeElement& lhs, const HeckeElement& rhs) {
    CheckResult res{name, true, ""};
    for (const auto& [l, c] : lhs.terms) {
        Rational b = rhs.coeff(l);
        if (!(c <= b)) {
            res.pass = false;
            res.detail = "label " + l.str() + ": lhs=" + c.str() + " > rhs=" + b.str();
            return res;
        }
    }
    return res;
}

}  // namespace

bool table1_row_is_erratum(int r, int b) {
    return (r == 4 && b == 1) || (r == 5 && b == 1) || (r == 5 && b == 2);
}

SatakePolynomial table1_reference(i64 p, int r, int b, bool as_printed) {
    auto X = [&](int a1, int a2) { return weyl_orbit_basis(p, r, a1, a2); };
    const Rational q(p);
    const Rational q2 = q * q, q3 = q2 * q, q4 = q3 * q;
    const Rational one(1);
    auto frac = [](Rational num, Rational den) { return num / den; };
    const Rational pm1 = q - one;

    if (r == 1 && b == 0) return X(0, 0);
    if (r == 2 && b == 0)
        return X(0, 0) + X(0, 1).scaled(frac(pm1, q)) + X(1, 1).scaled(frac(Rational(2) * pm1, q));
    if (r == 2 && b == 1)
        return X(0, 1).scaled(frac(one, q)) + X(1, 1).scaled(frac(q2 - one, q3));
    if (r == 3 && b == 0)
        return X(0, 0) + X(0, 1).scaled(frac(pm1, q)) +
               X(1, 1).scaled(frac(pm1 * (Rational(2) * q - one), q2));
    if (r == 3 && b == 1)
        return X(0, 1).scaled(frac(one, q)) +
               X(1, 1).scaled(frac(pm1 * (Rational(2) * q + one), q3));
    if (r == 4 && b == 0)
        return X(0, 0) + X(0, 1).scaled(frac(pm1, q)) + X(0, 2).scaled(frac(pm1, q)) +
               X(1, 1).scaled(frac(pm1 * (Rational(2) * q - one), q2)) +
               X(1, 2).scaled(frac(Rational(2) * pm1 * pm1, q2)) +
               X(2, 2).scaled(frac(pm1 * (Rational(3) * q2 - Rational(2) * q + one), q3));
    if (r == 4 && b == 1)
        // printed x(0,2)-coefficient (p-1)/p violates the Kodama degree
        // count (3205 vs the forced 2880 at p=2); (p-1)/p^2 is consistent
        return X(0, 1).scaled(frac(one, q)) +
               X(0, 2).scaled(as_printed ? frac(pm1, q) : frac(pm1, q2)) +
               X(1, 1).scaled(frac(Rational(2) * pm1, q2)) +
               X(1, 2).scaled(frac(Rational(3) * pm1, q2)) +
               X(2, 2).scaled(frac(pm1 * pm1 * (Rational(3) * q + one), q4));
    if (r == 4 && b == 2)
        return X(0, 2).scaled(frac(one, q2)) + X(1, 1).scaled(frac(pm1, q3)) +
               X(1, 2).scaled(frac(pm1, q3)) + X(2, 2).scaled(frac(Rational(2) * pm1, q3));
    if (r == 5 && b == 0)
        return X(0, 0) + X(0, 1).scaled(frac(pm1, q)) + X(0, 2).scaled(frac(pm1, q)) +
               X(1, 1).scaled(frac(pm1 * (Rational(2) * q - one), q2)) +
               X(1, 2).scaled(frac(Rational(2) * pm1 * pm1, q2)) +
               X(2, 2).scaled(frac(pm1 * (Rational(3) * q2 - Rational(3) * q + one), q3));
    if (r == 5 && b == 1)
        // same erratum pattern as the r = 4 row: x(0,2) coefficient
        return X(0, 1).scaled(frac(one, q)) +
               X(0, 2).scaled(as_printed ? frac(pm1, q) : frac(pm1, q2)) +
               X(1, 1).scaled(frac(Rational(2) * pm1, q2)) +
               X(1, 2).scaled(frac((Rational(3) * q - one) * pm1, q3)) +
               X(2, 2).scaled(frac(pm1 * (Rational(4) * q - Rational(3)), q3));
    if (r == 5 && b == 2)
        // printed x(2,2)-coefficient has denominator p^3; p^4 is consistent
        return X(0, 2).scaled(frac(one, q2)) + X(1, 1).scaled(frac(pm1, q3)) +
               X(1, 2).scaled(frac(Rational(2) * pm1, q3)) +
               X(2, 2).scaled(frac(pm1 * (Rational(3) * q - one), as_printed ? q3 : q4));
    if (r == 6 && b == 0)
        return X(0, 0) + (X(0, 1) + X(0, 2) + X(0, 3)).scaled(frac(pm1, q)) +
               X(1, 1).scaled(frac(pm1 * (Rational(2) * q - one), q2)) +
               (X(1, 2) + X(1, 3)).scaled(frac(Rational(2) * pm1 * pm1, q2)) +
               X(2, 2).scaled(frac(pm1 * (Rational(3) * q2 - Rational(3) * q + one), q3)) +
               X(2, 3).scaled(frac(pm1 * pm1 * (Rational(3) * q - one), q3)) +
               X(3, 3).scaled(frac(Rational(2) * pm1 * (Rational(2) * q2 - Rational(2) * q + one), q3));
    if (r == 6 && b == 1)
        return X(0, 1).scaled(frac(one, q)) + (X(0, 2) + X(0, 3)).scaled(frac(pm1, q2)) +
               X(1, 1).scaled(frac(Rational(2) * pm1, q2)) +
               X(1, 2).scaled(frac(pm1 * (Rational(3) * q - one), q3)) +
               X(1, 3).scaled(frac(pm1 * (Rational(3) * q - Rational(2)), q3)) +
               X(2, 2).scaled(frac(Rational(4) * pm1 * pm1, q3)) +
               X(2, 3).scaled(frac(pm1 * (Rational(5) * q2 - Rational(4) * q + one), q4)) +
               X(3, 3).scaled(frac(pm1 * pm1 * (Rational(5) * q - one), q4));
    throw std::invalid_argument("table1_reference: row not tabulated");
}

std::vector<std::pair<int, int>> table1_rows(int rmax) {
    std::vector<std::pair<int, int>> rows;
    for (int r = 1; r <= rmax && r <= 6; ++r)
        for (int b = 0; 2 * b <= r && (r < 6 || b <= 1); ++b) rows.push_back({r, b});
    return rows;
}

namespace {

SatakePolynomial satake_embed(SatakePolynomial poly, i64 p, int grade) {
    SatakePolynomial scalar(2);
    scalar.add(1, 1, Rational(1, (__int128)p * p * p));
    while (poly.degree() < grade) poly = poly * scalar;
    if (poly.degree() != grade) throw std::logic_error("satake_embed: parity mismatch");
    return poly;
}

// Corrected rows derived from paper-validated data alone: the r <= 3 rows,
// the r = 4 rows with b != 1, and the exactly verified product formulas
// (Kodama at r = 2, 3 and the degree-5 coefficient of the generating
// series). Linear algebra in the polynomial ring then pins the erratum rows.
SatakePolynomial table1_certified(i64 p, int r, int b) {
    const Rational q(p);
    const Rational kod11 = Rational::int_pow(p, 3) + Rational::int_pow(p, 2) + q + 1;
    const Rational kod01 = Rational::int_pow(p, 4) + Rational(2) * Rational::int_pow(p, 3) +
                           Rational::int_pow(p, 2) + q + 1;
    const Rational kodId = Rational::int_pow(p, 6) + Rational::int_pow(p, 5) +
                           Rational(2) * Rational::int_pow(p, 4) +
                           Rational(2) * Rational::int_pow(p, 3) + Rational::int_pow(p, 2) + q + 1;
    auto ref = [&](int rr, int bb) { return table1_reference(p, rr, bb); };
    auto emb = [&](const SatakePolynomial& s, int g) { return satake_embed(s, p, g); };

    SatakePolynomial satT1 = ref(1, 0);
    SatakePolynomial satT2 = ref(2, 0) + ref(2, 1) + emb(SatakePolynomial::one(), 2);

    // Kodama r=2 at the Satake level isolates T^{(4)}_{0,1}.
    SatakePolynomial Q = satT2 * satT2;
    SatakePolynomial known4 = ref(4, 0) + ref(4, 2).scaled(q * q + q + 1) +
                              emb(ref(2, 0), 4).scaled(kod11) + emb(ref(2, 1), 4).scaled(kod01) +
                              emb(SatakePolynomial::one(), 4).scaled(kodId);
    SatakePolynomial S41 = (Q + known4.scaled(Rational(-1))).scaled(Rational(1) / (q + 1));
    if (r == 4 && b == 1) return S41;

    if (r == 5) {
        SatakePolynomial satT3 = ref(3, 0) + ref(3, 1) + emb(satT1, 3);
        SatakePolynomial satT4 = ref(4, 0) + S41 + ref(4, 2) + emb(ref(2, 0), 4) +
                                 emb(ref(2, 1), 4) + emb(SatakePolynomial::one(), 4);
        // X^5 coefficient of the generating series:
        // T(p^5) = T(p^4)T(p) - T(p^3)T(p)^2 + T(p^3)T(p^2) + p^2 T(p^3)
        //        + p^3 T(p^2)T(p) - p^6 T(p)
        SatakePolynomial satT5 = satT4 * satT1 + (satT3 * satT1 * satT1).scaled(Rational(-1)) +
                                 satT3 * satT2 + emb(satT3, 5).scaled(q * q) +
                                 emb(satT2 * satT1, 5).scaled(q * q * q) +
                                 emb(satT1, 5).scaled(-Rational::int_pow(p, 6));
        SatakePolynomial L = satT5 + (ref(5, 0) + emb(ref(3, 0), 5) + emb(ref(3, 1), 5) +
                                      emb(ref(1, 0), 5))
                                         .scaled(Rational(-1));
        // Kodama r=3: T(p^3)T(p^2) = T^{(5)}_{0,0} + (p+1)T^{(5)}_{0,1}
        //   + (p^2+p+1)T^{(5)}_{0,2} + kod11 T^{(5)}_{1,1} + kod01 T^{(3)}_{0,1} + kodId T^{(1)}_{0,0}
        SatakePolynomial K = satT3 * satT2 +
                             (ref(5, 0) + emb(ref(3, 0), 5).scaled(kod11) +
                              emb(ref(3, 1), 5).scaled(kod01) + emb(ref(1, 0), 5).scaled(kodId))
                                 .scaled(Rational(-1));
        SatakePolynomial S52 = (K + L.scaled(-(q + 1))).scaled(Rational(1) / (q * q));
        if (b == 2) return S52;
        return L + S52.scaled(Rational(-1));  // S51
    }
    throw std::invalid_argument("table1_certified: not an erratum row");
}

}  // namespace

CheckResult table1_check(HeckeSession& session, int r, int b) {
    std::string name = "table1_T(" + std::to_string(r) + ")_{0," + std::to_string(b) + "}_p" +
                       std::to_string(session.prime());
    SatakePolynomial computed = session.satake_label({r, 0, b});
    SatakePolynomial expected = table1_reference(session.prime(), r, b);
    if (computed != expected)
        return {name, false, "computed " + computed.str() + " expected " + expected.str()};
    if (!computed.swap_symmetric() || !computed.automorphism_invariant())
        return {name, false, "symmetry/automorphism invariance violated"};
    if (table1_row_is_erratum(r, b)) {
        SatakePolynomial certified = table1_certified(session.prime(), r, b);
        if (computed != certified)
            return {name, false, "erratum certificate disagrees: " + certified.str()};
        return {name, true,
                "printed table coefficient corrected (fails degree bookkeeping); "
                "value certified from the product formulas"};
    }
    return {name, true, ""};
}

std::map<std::pair<int, int>, Rational> squared_eigenvalue_decomposition(HeckeSession& session, int r) {
    HeckeElement sq = session.multiply(HeckeElement::full_T(session.prime(), r),
                                       HeckeElement::full_T(session.prime(), r));
    std::map<std::pair<int, int>, Rational> out;  // (b, s) -> c_{r,b,s}
    for (const auto& [l, c] : sq.terms) {
        auto lc = l.canonical();
        if (lc.r % 2 != 0) throw std::logic_error("squared decomposition: odd canonical grade");
        out[{lc.b, lc.r / 2}] = c;
    }
    return out;
}

CheckResult coprime_smoke_test(i64 m1, i64 m2) {
    CheckResult res{"coprime_T(" + std::to_string(m1) + ")T(" + std::to_string(m2) + ")", true, ""};
    auto a = left_cosets_m(m1);
    auto b = left_cosets_m(m2);
    // products of genuine members, one per coset
    std::vector<Mat4> ma, mb;
    auto member = [](const Mat4& h, i64 m) {
        // for the smoke test primes/prime powers appear; reuse block_reduce
        // when m is a prime power, else fall back to the HNF itself if it is
        // already a member
        for (i64 p = 2; p <= m; ++p) {
            if (m % p) continue;
            i64 q = m;
            int r = 0;
            while (q % p == 0) { q /= p; ++r; }
            if (q == 1) return block_reduce(h, p, r).matrix;
            break;
        }
        auto s = similitude_of(h);
        if (!s || *s != m) throw std::logic_error("coprime smoke test: no member available");
        return h;
    };
    for (const auto& h : a) ma.push_back(member(h, m1));
    for (const auto& h : b) mb.push_back(member(h, m2));

    std::set<Mat4> products;
    for (const auto& x : ma)
        for (const auto& y : mb) {
            Mat4 h = hnf(mat_mul(x, y));
            if (!products.insert(h).second) {
                res.pass = false;
                res.detail = "coincident left cosets in the product (multiplicity > 1)";
                return res;
            }
        }
    auto full = left_cosets_m(m1 * m2);
    std::set<Mat4> expected(full.begin(), full.end());
    if (products != expected) {
        res.pass = false;
        res.detail = "product cosets != left cosets of S(" + std::to_string(m1 * m2) + ") (" +
                     std::to_string(products.size()) + " vs " + std::to_string(expected.size()) + ")";
    }
    return res;
}

IdentityReport verify_identity_suite(HeckeSession& session, int rmax) {
    IdentityReport report;
    const i64 p = session.prime();
    report.p = p;
    report.rmax = rmax;
    auto& checks = report.checks;

    const HeckeElement id = HeckeElement::identity(p);

    // r = 0 edge: T(1) = id
    checks.push_back(equal_check("T(1)_is_identity", HeckeElement::full_T(p, 0), id));

    if (rmax >= 2) {
        HeckeElement T1 = HeckeElement::full_T(p, 1);
        HeckeElement T1sq = session.multiply(T1, T1);
        // scalar coset squares to the identity operator
        checks.push_back(equal_check(
            "scalar_coset_squares_to_identity",
            session.multiply(HeckeElement::single(p, {2, 1, 1}), HeckeElement::single(p, {2, 1, 1})), id));
        // T(p)^2 = T20 + (p+1) T21 + (p^3+p^2+p+1) T11
        HeckeElement square_rhs = HeckeElement::single(p, {2, 0, 0});
        square_rhs.add({2, 0, 1}, Rational(p) + 1);
        square_rhs.add({2, 1, 1}, P(p, 3) + P(p, 2) + Rational(p) + 1);
        checks.push_back(equal_check("square_relation", T1sq, square_rhs));
        checks.push_back(equal_check("T_times_identity", session.multiply(T1, id), T1));
    }

    if (rmax >= 4) {
        HeckeElement T1 = HeckeElement::full_T(p, 1);
        HeckeElement T2 = HeckeElement::full_T(p, 2);
        HeckeElement T3 = HeckeElement::full_T(p, 3);
        HeckeElement T4 = HeckeElement::full_T(p, 4);
        HeckeElement T1sq = session.multiply(T1, T1);
        HeckeElement T2sq = session.multiply(T2, T2);
        HeckeElement T1T2 = session.multiply(T1, T2);

        // Kodama product formula at r = 2:
        // T(p^2)^2 = T^{(4)}_{0,0} + (p+1)T^{(4)}_{0,1} + (p^2+p+1)T^{(4)}_{0,2}
        //          + (p^3+p^2+p+1)T^{(4)}_{1,1} + (p^4+2p^3+p^2+p+1)T^{(2)}_{0,1}
        //          + (p^6+p^5+2p^4+2p^3+p^2+p+1) id
        HeckeElement kodama = HeckeElement::single(p, {4, 0, 0});
        kodama.add({4, 0, 1}, Rational(p) + 1);
        kodama.add({4, 0, 2}, P(p, 2) + Rational(p) + 1);
        kodama.add({4, 1, 1}, P(p, 3) + P(p, 2) + Rational(p) + 1);
        kodama.add({2, 0, 1}, P(p, 4) + Rational(2) * P(p, 3) + P(p, 2) + Rational(p) + 1);
        kodama.add({0, 0, 0}, P(p, 6) + P(p, 5) + Rational(2) * P(p, 4) + Rational(2) * P(p, 3) +
                                   P(p, 2) + Rational(p) + 1);
        checks.push_back(equal_check("kodama_r2", T2sq, kodama));

        // generating series, X^3 coefficient:
        // T(p^3) = 2 T(p) T(p^2) - T(p)^3 + (p^2 + p^3) T(p)
        HeckeElement x3_rhs =
            T1T2.scaled(Rational(2)) - session.multiply(T1, T1sq) + T1.scaled(P(p, 2) + P(p, 3));
        checks.push_back(equal_check("generating_series_X3", T3, x3_rhs));

        // generating series, X^4 coefficient (the displayed T(p^4) relation):
        // T(p^4) = (p^2+2p^3)T(p)^2 - T(p)^4 + p^2 T(p^2) + T(p^2)T(p)^2 + T(p^2)^2 - p^6 id
        HeckeElement T1p4 = session.multiply(T1sq, T1sq);
        HeckeElement x4_rhs = T1sq.scaled(P(p, 2) + Rational(2) * P(p, 3)) - T1p4 +
                              T2.scaled(P(p, 2)) + session.multiply(T2, T1sq) + T2sq -
                              id.scaled(P(p, 6));
        checks.push_back(equal_check("generating_series_X4_Tp4", T4, x4_rhs));

        // coefficientwise majorations (kodamanew) for r = 0, 1
        for (int rr = 0; rr <= 1; ++rr) {
            HeckeElement lhs = HeckeElement::full_T(p, 2 * rr + 2);
            HeckeElement mid = session.multiply(HeckeElement::full_T(p, 2 * rr), T2);
            std::string tag = "kodamanew_r" + std::to_string(rr);
            checks.push_back(leq_check(tag + "_lhs", lhs, mid));
            // middle bound: 3p^2 sum_{b<=r+1} T^{(2r+2)}_{0,b} + 6p^4 sum_{b<=r} T^{(2r)}_{0,b}
            //              + 9p^6 sum_{1<=a<=r} sum_{b<=r-a} T^{(2r-2a)}_{0,b}
            HeckeElement middle;
            middle.p = p;
            for (int b = 0; b <= rr + 1 && 2 * b <= 2 * rr + 2; ++b)
                middle.add({2 * rr + 2, 0, b}, Rational(3) * P(p, 2));
            for (int b = 0; b <= rr && 2 * b <= 2 * rr; ++b)
                middle.add({2 * rr, 0, b}, Rational(6) * P(p, 4));
            for (int a = 1; a <= rr; ++a)
                for (int b = 0; b <= rr - a && 2 * b <= 2 * rr - 2 * a; ++b)
                    middle.add({2 * rr - 2 * a, 0, b}, Rational(9) * P(p, 6));
            checks.push_back(leq_check(tag + "_mid", mid, middle));
            // final bound: 10 sum_{s<=r+1} p^{2r+4-2s} sum_{b<=s} T^{(2s)}_{0,b}
            HeckeElement fin;
            fin.p = p;
            for (int s = 0; s <= rr + 1; ++s)
                for (int b = 0; b <= s; ++b)
                    fin.add({2 * s, 0, b}, Rational(10) * P(p, 2 * rr + 4 - 2 * s));
            checks.push_back(leq_check(tag + "_final", middle, fin));
        }
    }

    // squared eigenvalue decompositions and their coefficient bounds,
    // |c_{r,b,s}| <= C p^{3r-2s}; square4 gives C <= 400 when r = 4 runs.
    std::vector<int> rs{1};
    if (rmax >= 4) rs.push_back(2);
    bool include_r4 = rmax >= 4 && p == 2;  // r = 4 squares only at the small prime
    if (include_r4) rs.push_back(4);
    for (int rr : rs) {
        auto dec = squared_eigenvalue_decomposition(session, rr);
        Rational worst(0);
        bool ok = true;
        std::ostringstream detail;
        for (const auto& [bs, c] : dec) {
            auto [b, s] = bs;
            Rational bound = P(p, 3 * rr - 2 * s);
            Rational ratio = (c.is_negative() ? -c : c) / bound;
            if (worst < ratio) worst = ratio;
            if (Rational(400) < ratio) ok = false;
        }
        detail << "max |c_{r,b,s}| / p^{3r-2s} = " << worst.str();
        checks.push_back({"squarefinal_bounds_r" + std::to_string(rr), ok, detail.str()});
        if (rr == 4) {
            // square4: T(p^4)^2 <= 400 sum_{tau<=4} p^{12-2tau} sum_{b<=tau} T^{(2tau)}_{0,b}
            HeckeElement lhs;
            lhs.p = p;
            for (const auto& [bs, c] : dec) lhs.add({2 * bs.second, 0, bs.first}, c);
            HeckeElement rhs;
            rhs.p = p;
            for (int tau = 0; tau <= 4; ++tau)
                for (int b = 0; b <= tau; ++b)
                    rhs.add({2 * tau, 0, b}, Rational(400) * P(p, 12 - 2 * tau));
            checks.push_back(leq_check("square4_constant400", lhs, rhs));
        }
    }

    // two-prime multiplicativity smoke test (prime-independent statement)
    checks.push_back(coprime_smoke_test(2, 3));
    checks.push_back(coprime_smoke_test(2, 9));

    return report;
}

}  // namespace sp4
