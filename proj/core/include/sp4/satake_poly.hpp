#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "sp4/rational.hpp"

namespace sp4 {

// Element of the Satake image: x0^r * sum coeff(c1,c2) x1^c1 x2^c2 with
// exact rational coefficients. The grade r is the x0-power; products add
// grades and convolve coefficient maps.
class SatakePolynomial {
public:
    using Key = std::pair<int, int>;

    SatakePolynomial() : degree_(0) {}
    explicit SatakePolynomial(int degree) : degree_(degree) {}

    static SatakePolynomial one() {
        SatakePolynomial p(0);
        p.add(0, 0, Rational(1));
        return p;
    }

    int degree() const { return degree_; }
    const std::map<Key, Rational>& coeffs() const { return coeffs_; }

    void add(int c1, int c2, const Rational& v) {
        if (v.is_zero()) return;
        auto it = coeffs_.find({c1, c2});
        if (it == coeffs_.end()) {
            coeffs_.emplace(Key{c1, c2}, v);
        } else {
            it->second += v;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    Rational coeff(int c1, int c2) const {
        auto it = coeffs_.find({c1, c2});
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    SatakePolynomial operator+(const SatakePolynomial& o) const {
        if (degree_ != o.degree_)
            throw std::invalid_argument("SatakePolynomial: mixed grades in sum");
        SatakePolynomial r = *this;
        for (const auto& [k, v] : o.coeffs_) r.add(k.first, k.second, v);
        return r;
    }

    SatakePolynomial operator*(const SatakePolynomial& o) const {
        SatakePolynomial r(degree_ + o.degree_);
        for (const auto& [k1, v1] : coeffs_)
            for (const auto& [k2, v2] : o.coeffs_)
                r.add(k1.first + k2.first, k1.second + k2.second, v1 * v2);
        return r;
    }

    SatakePolynomial scaled(const Rational& s) const {
        SatakePolynomial r(degree_);
        for (const auto& [k, v] : coeffs_) r.add(k.first, k.second, v * s);
        return r;
    }

    bool operator==(const SatakePolynomial& o) const {
        return degree_ == o.degree_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const SatakePolynomial& o) const { return !(*this == o); }

    // Symmetry in x1 <-> x2.
    bool swap_symmetric() const {
        for (const auto& [k, v] : coeffs_)
            if (coeff(k.second, k.first) != v) return false;
        return true;
    }
    // (x0,x1,x2) -> (x0 x1, 1/x1, x2) maps the monomial (c1,c2) of grade r
    // to (r-c1, c2); the second automorphism gives (c1, r-c2).
    bool automorphism_invariant() const {
        for (const auto& [k, v] : coeffs_) {
            if (coeff(degree_ - k.first, k.second) != v) return false;
            if (coeff(k.first, degree_ - k.second) != v) return false;
        }
        return true;
    }

    std::string str() const {
        std::string s = "x0^" + std::to_string(degree_) + " * (";
        bool first = true;
        for (const auto& [k, v] : coeffs_) {
            if (!first) s += " + ";
            first = false;
            s += v.str() + "*x1^" + std::to_string(k.first) + "*x2^" + std::to_string(k.second);
        }
        return s + (first ? "0)" : ")");
    }

private:
    int degree_;
    std::map<Key, Rational> coeffs_;
};

}  // namespace sp4
