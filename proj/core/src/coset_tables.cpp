#include <algorithm>
#include <numeric>

#include "sp4/hecke.hpp"

namespace sp4 {

namespace {

// residues coprime to p in [0, p^k)
i64 mod_inverse(i64 a, i64 m) {
    i64 t = 0, newt = 1, r = m, newr = a % m;
    while (newr != 0) {
        i64 q = r / newr;
        t -= q * newt;
        std::swap(t, newt);
        r -= q * newr;
        std::swap(r, newr);
    }
    if (r != 1) throw std::domain_error("mod_inverse: not invertible");
    return ((t % m) + m) % m;
}

struct DiagonalCase {
    int a1, a2, a3, a4;
};

}  // namespace

CosetTable left_cosets(i64 p, int r, const HeckeBudgets& budgets) {
    CosetTable table;
    table.p = p;
    table.r = r;

    // p^{3r} is the scale of the answer; refuse upfront if it cannot fit.
    double scale = std::pow(double(p), 3 * r);
    if (scale > 16.0 * double(budgets.max_candidates))
        throw BudgetExceeded("left_cosets: p^{3r} beyond candidate budget");

    if (r == 0) {
        table.reps.push_back(identity4());
        return table;
    }

    std::vector<DiagonalCase> diagonals;
    for (int a1 = 0; a1 <= r; ++a1)
        for (int a2 = 0; a2 <= r; ++a2)
            for (int a3 = 0; a3 <= r; ++a3) {
                int a4 = 2 * r - a1 - a2 - a3;
                if (a4 < 0 || a4 > r) continue;
                if (a2 + a4 < r) continue;  // B(2,4) = d2 d4 must vanish mod p^r
                diagonals.push_back({a1, a2, a3, a4});
            }

    i64 candidates = 0;
    auto charge = [&](i64 n) {
        candidates += n;
        if (candidates > budgets.max_candidates)
            throw BudgetExceeded("left_cosets: candidate budget exceeded");
    };

    // For H = (d1 h12 h13 h14; 0 d2 h23 h24; 0 0 d3 h34; 0 0 0 d4) the
    // congruence H J H^T == 0 (mod p^r) is exactly:
    //   (C1) d2 h34 == 0,   (C3) d1 d3 + h12 h34 == 0,
    //   (C4) h12 d4 == 0,   (C5) d1 h23 + h12 h24 - d2 h14 == 0,
    // all mod p^r; h13 is unconstrained. (C3) pins the valuations of h12 and
    // h34 and couples their unit parts, so only solutions are visited.
    const i64 pr = ipow(p, r);
    for (const auto& dc : diagonals) {
        const i64 d1 = ipow(p, dc.a1), d2 = ipow(p, dc.a2), d3 = ipow(p, dc.a3), d4 = ipow(p, dc.a4);
        const int e = dc.a2 + dc.a4 - r;
        const int nu = dc.a1 + dc.a3;  // = r - e

        std::vector<std::pair<i64, i64>> h12_h34;
        if (e == 0) {
            h12_h34.emplace_back(0, 0);
        } else {
            const i64 pe = ipow(p, e);
            int lo1 = std::max(0, r - dc.a4);
            for (int v1 = lo1; v1 < dc.a2; ++v1) {
                int v2 = nu - v1;
                if (v2 < std::max(0, r - dc.a2) || v2 >= dc.a4) continue;
                const i64 p_v1 = ipow(p, v1), p_v2 = ipow(p, v2);
                const i64 u_mod = ipow(p, dc.a2 - v1);
                const i64 t_count = ipow(p, dc.a4 - v2 - e);
                for (i64 u = 1; u < u_mod; ++u) {
                    if (u % p == 0) continue;
                    i64 v0 = (pe - mod_inverse(u % pe, pe)) % pe;  // unit residue in [1, pe)
                    for (i64 t = 0; t < t_count; ++t)
                        h12_h34.emplace_back(p_v1 * u, p_v2 * (v0 + t * pe));
                }
            }
        }

        const i64 hi14 = (dc.a2 >= r) ? d4 : ipow(p, e);
        const i64 step14 = (dc.a2 >= r) ? 1 : ipow(p, r - dc.a2);

        for (auto [h12, h34] : h12_h34) {
            for (i64 h23 = 0; h23 < d3; ++h23) {
                for (i64 h24 = 0; h24 < d4; ++h24) {
                    charge(1);
                    i64 c = (d1 % pr * (h23 % pr) + h12 % pr * (h24 % pr)) % pr;
                    i64 base14;
                    if (dc.a2 >= r) {
                        if (c % pr != 0) continue;
                        base14 = 0;
                    } else {
                        if (c % d2 != 0) continue;
                        base14 = (c / d2) % step14;
                    }
                    charge(hi14 * d3);
                    for (i64 k14 = 0; k14 < hi14; ++k14) {
                        i64 h14 = (dc.a2 >= r) ? k14 : base14 + k14 * step14;
                        if (h14 >= d4) break;
                        for (i64 h13 = 0; h13 < d3; ++h13) {
                            Mat4 h;
                            h(0, 0) = d1; h(0, 1) = h12; h(0, 2) = h13; h(0, 3) = h14;
                            h(1, 1) = d2; h(1, 2) = h23; h(1, 3) = h24;
                            h(2, 2) = d3; h(2, 3) = h34;
                            h(3, 3) = d4;
                            table.reps.push_back(h);
                        }
                    }
                }
            }
        }
    }

    std::sort(table.reps.begin(), table.reps.end());
    return table;
}

std::vector<Mat4> left_cosets_m(i64 m, i64 budget) {
    std::vector<Mat4> out;
    if (m == 1) {
        out.push_back(identity4());
        return out;
    }
    std::vector<i64> divisors;
    for (i64 d = 1; d <= m; ++d)
        if (m % d == 0) divisors.push_back(d);

    i64 candidates = 0;
    auto charge = [&](i64 n) {
        candidates += n;
        if (candidates > budget) throw BudgetExceeded("left_cosets_m: budget exceeded");
    };
    auto gcd = [](i64 a, i64 b) { return std::gcd(a, b); };

    const __int128 m2 = (__int128)m * m;
    for (i64 d1 : divisors)
        for (i64 d2 : divisors)
            for (i64 d3 : divisors)
                for (i64 d4 : divisors) {
                    if ((__int128)d1 * d2 * d3 * d4 != m2) continue;
                    if ((d2 * d4) % m != 0) continue;
                    i64 step12 = m / gcd(d4, m);
                    i64 step34 = m / gcd(d2, m);
                    for (i64 h12 = 0; h12 < d2; h12 += step12)
                        for (i64 h34 = 0; h34 < d4; h34 += step34) {
                            if (((__int128)d1 * d3 + (__int128)h12 * h34) % m != 0) continue;
                            for (i64 h23 = 0; h23 < d3; ++h23)
                                for (i64 h24 = 0; h24 < d4; ++h24) {
                                    charge(1);
                                    i64 c = (i64)(((__int128)d1 * h23 + (__int128)h12 * h24) % m);
                                    i64 g = gcd(d2, m);
                                    if (c % g != 0) continue;
                                    i64 mg = m / g;
                                    i64 base = ((__int128)(c / g) * mod_inverse((d2 / g) % mg == 0 ? 1 : (d2 / g) % mg, mg)) % mg;
                                    if (mg == 1) base = 0;
                                    for (i64 h14 = base; h14 < d4; h14 += mg)
                                        for (i64 h13 = 0; h13 < d3; ++h13) {
                                            Mat4 h;
                                            h(0, 0) = d1; h(0, 1) = h12; h(0, 2) = h13; h(0, 3) = h14;
                                            h(1, 1) = d2; h(1, 2) = h23; h(1, 3) = h24;
                                            h(2, 2) = d3; h(2, 3) = h34;
                                            h(3, 3) = d4;
                                            out.push_back(h);
                                        }
                                }
                        }
                }
    std::sort(out.begin(), out.end());
    return out;
}

std::map<std::pair<int, int>, CosetTable> double_coset_split(const CosetTable& table) {
    if (table.label) throw std::invalid_argument("double_coset_split: table must cover all of S(p^r)");
    std::map<std::pair<int, int>, CosetTable> parts;
    for (const auto& rep : table.reps) {
        auto ab = snf_exponents(rep, table.p, table.r);
        auto& part = parts[ab];
        if (part.reps.empty()) {
            part.p = table.p;
            part.r = table.r;
            part.label = ab;
        }
        part.reps.push_back(rep);
    }
    return parts;
}

}  // namespace sp4
