#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sp4 {

using int128 = __int128;

// Exact rational on 128-bit integers, always stored reduced with den > 0.
// Every coefficient in this project is (integer coset count) / p^k, so 128
// bits leave orders of magnitude of headroom; overflow throws instead of
// wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(int128 n, int128 d) : num_(n), den_(d) { normalize(); }

    static Rational int_pow(long long base, int exp) {
        if (exp < 0) { Rational r = int_pow(base, -exp); return Rational(r.den_, r.num_); }
        int128 v = 1;
        for (int i = 0; i < exp; ++i) v = checked_mul(v, base);
        return Rational(v, 1);
    }

    int128 num() const { return num_; }
    int128 den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    Rational operator-() const { return Rational(-num_, den_); }
    Rational operator+(const Rational& o) const {
        int128 g = gcd128(den_, o.den_);
        int128 l = checked_mul(den_ / g, o.den_);
        int128 n = checked_add(checked_mul(num_, o.den_ / g), checked_mul(o.num_, den_ / g));
        return Rational(n, l);
    }
    Rational operator-(const Rational& o) const { return *this + (-o); }
    Rational operator*(const Rational& o) const {
        int128 g1 = gcd128(num_ < 0 ? -num_ : num_, o.den_);
        int128 g2 = gcd128(o.num_ < 0 ? -o.num_ : o.num_, den_);
        return Rational(checked_mul(num_ / g1, o.num_ / g2),
                        checked_mul(den_ / g2, o.den_ / g1));
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        return *this * Rational(o.den_, o.num_);
    }
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
    }
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return int128_str(num_);
        return int128_str(num_) + "/" + int128_str(den_);
    }
    std::string num_str() const { return int128_str(num_); }
    std::string den_str() const { return int128_str(den_); }

    static std::string int128_str(int128 v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        // -2^127 negation would overflow; unreachable for our magnitudes.
        if (neg) v = -v;
        std::string s;
        while (v > 0) { s += char('0' + int(v % 10)); v /= 10; }
        if (neg) s += '-';
        return std::string(s.rbegin(), s.rend());
    }

    static int128 gcd128(int128 a, int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) { int128 t = a % b; a = b; b = t; }
        return a;
    }

private:
    static int128 checked_mul(int128 a, int128 b) {
        int128 r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: 128-bit overflow");
        return r;
    }
    static int128 checked_add(int128 a, int128 b) {
        int128 r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: 128-bit overflow");
        return r;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) { den_ = -den_; num_ = -num_; }
        if (num_ == 0) { den_ = 1; return; }
        int128 g = gcd128(num_, den_);
        num_ /= g;
        den_ /= g;
    }

    int128 num_;
    int128 den_;
};

inline Rational operator*(long long a, const Rational& r) { return Rational(a) * r; }

}  // namespace sp4
