#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sp4 {

// Integer 4x4 matrices, row-major. All exact arithmetic for the Hecke and
// counting layers goes through this header; no floating point here.

using i64 = long long;
struct Mat4 {
    std::array<i64, 16> a{};

    i64& operator()(int i, int j) { return a[4 * i + j]; }
    i64 operator()(int i, int j) const { return a[4 * i + j]; }
    bool operator==(const Mat4& o) const { return a == o.a; }
    bool operator!=(const Mat4& o) const { return a != o.a; }
    bool operator<(const Mat4& o) const { return a < o.a; }
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

Mat4 identity4();
Mat4 standard_J();  // ( 0  I2 ; -I2  0 )
Mat4 mat_mul(const Mat4& x, const Mat4& y);
Mat4 mat_transpose(const Mat4& x);
Mat4 mat_scale(const Mat4& x, i64 s);
__int128 mat_det(const Mat4& x);

// m with M^T J M = m J, if one exists (total function, empty otherwise).
std::optional<i64> similitude_of(const Mat4& m);

// Row-style Hermite normal form U*M (U unimodular): upper triangular,
// positive diagonal, entries above each pivot reduced into [0, pivot).
// Throws std::invalid_argument on singular input.
Mat4 hnf(const Mat4& m);

// Diagonal of the Smith normal form, divisibility-ordered d1 | d2 | d3 | d4.
std::array<i64, 4> smith_diagonal(const Mat4& m);

// Double-coset label (a, b) of M in S(p^r): Smith form diag(p^a, p^b,
// p^(r-b), p^(r-a)), 0 <= a <= b <= r/2. Throws std::domain_error when the
// divisor pattern is not of that symmetric shape.
std::pair<int, int> snf_exponents(const Mat4& m, i64 p, int r);

int valuation(i64 v, i64 p);
i64 ipow(i64 base, int exp);

// Row-major CSV (one row per line). Used for matrix import/export.
std::string mat_to_csv(const Mat4& m);
Mat4 mat_from_csv(const std::string& text);

// Generators of Sp4(Z) and pseudo-random words in them (for property tests
// and sampled double-coset representatives).
std::vector<Mat4> symplectic_generators();
Mat4 random_gamma(std::uint64_t seed, int word_len);

bool is_in_gamma(const Mat4& m);  // integral symplectic, similitude 1

}  // namespace sp4
