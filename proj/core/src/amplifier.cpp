#include <cmath>
#include <sstream>

#include "sp4/hecke.hpp"

namespace sp4 {

// Expand the square of each amplifier linear form
//   ( sum_l s_r(l) l^{-3(r-1)/2} lambda(l^r) )^2 ,  r in {1, 2, 4},
// over the two primes l1, l2. Cross terms are multiplicative
// (lambda(l1^r) lambda(l2^r) = lambda((l1 l2)^r)); diagonal terms use the
// exact decompositions lambda(l^r)^2 = sum c_{r,b,s}(l) lambda^{(2s)}_{0,b}(l).
// Diagonal exponents r are limited by what the prime's tables afford:
// {1,2,4} at l = 2, {1,2} otherwise.
AmplifierExpandReport amplifier_expand(HeckeSession& s1, HeckeSession& s2,
                                       const std::array<int, 6>& signs) {
    AmplifierExpandReport rep;
    rep.l1 = s1.prime();
    rep.l2 = s2.prime();
    for (int s : signs)
        if (s != 1 && s != -1) throw std::invalid_argument("amplifier_expand: signs must be +-1");

    auto r_set = [](i64 p) {
        return p == 2 ? std::vector<int>{1, 2, 4} : std::vector<int>{1, 2};
    };

    // cross terms: coefficient of lambda((l1 l2)^r) is 2 s_r(l1) s_r(l2) / (l1 l2)^{3(r-1)/2};
    // multiplicativity itself is certified by the coprime smoke test
    {
        auto smoke1 = coprime_smoke_test(rep.l1, rep.l2);
        auto smoke2 = coprime_smoke_test(rep.l1 * rep.l1, rep.l2 * rep.l2);
        rep.shape_ok = smoke1.pass && smoke2.pass;
        rep.lines.push_back(smoke1.name + (smoke1.pass ? ": ok" : ": FAIL " + smoke1.detail));
        rep.lines.push_back(smoke2.name + (smoke2.pass ? ": ok" : ": FAIL " + smoke2.detail));
        for (int r : r_set(rep.l1)) {
            std::ostringstream os;
            os << "cross term lambda((l1 l2)^" << r << ") coefficient: 2 * " << signs[0] << "*"
               << signs[1] << " / (l1 l2)^{3(r-1)/2}";
            rep.lines.push_back(os.str());
        }
    }

    // diagonal terms: xi_{b,s}(l) = sum_r c_{r,b,s}(l) / l^{3(r-1)}  (signs square away)
    double worst = 0.0;
    for (HeckeSession* sess : {&s1, &s2}) {
        i64 l = sess->prime();
        std::map<std::pair<int, int>, Rational> xi;
        for (int r : r_set(l)) {
            auto dec = squared_eigenvalue_decomposition(*sess, r);
            for (const auto& [bs, c] : dec) xi[bs] += c / Rational::int_pow(l, 3 * (r - 1));
        }
        for (const auto& [bs, v] : xi) {
            auto [b, s] = bs;
            double bound = std::pow((double)l, 3.0 - 2.0 * s);
            double ratio = std::abs(v.to_double()) / bound;
            worst = std::max(worst, ratio);
            std::ostringstream os;
            os << "xi_{" << b << "," << s << "}(" << l << ") = " << v.str() << "  (|xi|/l^{3-2s} = "
               << ratio << ")";
            rep.lines.push_back(os.str());
        }
    }
    rep.xi_constant = worst;
    // the exact decompositions obey c_{r,b,s} <= 400 p^{3r-2s}; summing the
    // three r-contributions can at most triple that
    if (worst > 1200.0) rep.shape_ok = false;
    return rep;
}

}  // namespace sp4
