#include "sp4/mat4.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>

namespace sp4 {

Mat4 identity4() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1;
    return m;
}

Mat4 standard_J() {
    Mat4 j;
    j(0, 2) = 1;
    j(1, 3) = 1;
    j(2, 0) = -1;
    j(3, 1) = -1;
    return j;
}

Mat4 mat_mul(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            i64 v = x(i, k);
            if (v == 0) continue;
            for (int j = 0; j < 4; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

Mat4 mat_transpose(const Mat4& x) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = x(j, i);
    return r;
}

Mat4 mat_scale(const Mat4& x, i64 s) {
    Mat4 r = x;
    for (auto& v : r.a) v *= s;
    return r;
}

__int128 mat_det(const Mat4& x) {
    // Laplace along the first row with 3x3 cofactors; entries stay well
    // inside 128 bits for everything this library produces.
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) -> __int128 {
        __int128 a = x(r0, c0), b = x(r0, c1), c = x(r0, c2);
        __int128 d = x(r1, c0), e = x(r1, c1), f = x(r1, c2);
        __int128 g = x(r2, c0), h = x(r2, c1), i = x(r2, c2);
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    };
    __int128 det = 0;
    int cols[4] = {0, 1, 2, 3};
    for (int j = 0; j < 4; ++j) {
        int cc[3], t = 0;
        for (int k = 0; k < 4; ++k)
            if (k != j) cc[t++] = cols[k];
        __int128 minor = det3(1, 2, 3, cc[0], cc[1], cc[2]);
        __int128 term = (__int128)x(0, j) * minor;
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

std::optional<i64> similitude_of(const Mat4& m) {
    Mat4 j = standard_J();
    Mat4 s = mat_mul(mat_mul(mat_transpose(m), j), m);
    i64 factor = s(0, 2);
    if (factor <= 0) return std::nullopt;
    Mat4 target = mat_scale(j, factor);
    if (s != target) return std::nullopt;
    return factor;
}

namespace {

void swap_rows(Mat4& m, int i, int j) {
    for (int c = 0; c < 4; ++c) std::swap(m(i, c), m(j, c));
}

void add_row(Mat4& m, int dst, int src, i64 mult) {
    for (int c = 0; c < 4; ++c) m(dst, c) += mult * m(src, c);
}

}  // namespace

Mat4 hnf(const Mat4& input) {
    if (mat_det(input) == 0) throw std::invalid_argument("hnf: singular matrix");
    Mat4 m = input;
    for (int col = 0; col < 4; ++col) {
        // Euclid on rows col..3 until a single nonzero pivot remains.
        while (true) {
            int piv = -1;
            for (int r = col; r < 4; ++r)
                if (m(r, col) != 0 && (piv == -1 || std::llabs(m(r, col)) < std::llabs(m(piv, col))))
                    piv = r;
            if (piv == -1) throw std::invalid_argument("hnf: singular matrix");
            if (piv != col) swap_rows(m, piv, col);
            bool clean = true;
            for (int r = col + 1; r < 4; ++r) {
                if (m(r, col) != 0) {
                    add_row(m, r, col, -(m(r, col) / m(col, col)));
                    if (m(r, col) != 0) clean = false;
                }
            }
            if (clean) break;
        }
        if (m(col, col) < 0)
            for (int c = 0; c < 4; ++c) m(col, c) = -m(col, c);
        for (int r = 0; r < col; ++r) {
            i64 q = m(r, col) / m(col, col);
            if (m(r, col) - q * m(col, col) < 0) q -= 1;
            if (q != 0) add_row(m, r, col, -q);
        }
    }
    return m;
}

std::array<i64, 4> smith_diagonal(const Mat4& input) {
    Mat4 m = input;
    auto abs64 = [](i64 v) { return v < 0 ? -v : v; };
    for (int k = 0; k < 4; ++k) {
        while (true) {
            int pi = -1, pj = -1;
            for (int i = k; i < 4; ++i)
                for (int j = k; j < 4; ++j)
                    if (m(i, j) != 0 && (pi == -1 || abs64(m(i, j)) < abs64(m(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == -1) break;  // zero block
            if (pi != k) swap_rows(m, pi, k);
            if (pj != k)
                for (int r = 0; r < 4; ++r) std::swap(m(r, pj), m(r, k));
            bool again = false;
            for (int i = k + 1; i < 4; ++i)
                if (m(i, k) != 0) {
                    add_row(m, i, k, -(m(i, k) / m(k, k)));
                    if (m(i, k) != 0) again = true;
                }
            for (int j = k + 1; j < 4; ++j)
                if (m(k, j) != 0) {
                    i64 q = m(k, j) / m(k, k);
                    for (int r = 0; r < 4; ++r) m(r, j) -= q * m(r, k);
                    if (m(k, j) != 0) again = true;
                }
            if (again) continue;
            // pivot must divide the rest of the block
            bool fixed = true;
            for (int i = k + 1; i < 4 && fixed; ++i)
                for (int j = k + 1; j < 4 && fixed; ++j)
                    if (m(i, j) % m(k, k) != 0) {
                        add_row(m, k, i, 1);
                        fixed = false;
                    }
            if (fixed) break;
        }
    }
    std::array<i64, 4> d{};
    for (int i = 0; i < 4; ++i) d[i] = abs64(m(i, i));
    std::sort(d.begin(), d.end(), [](i64 x, i64 y) {
        if (x == 0) return false;
        if (y == 0) return true;
        return x < y;
    });
    return d;
}

int valuation(i64 v, i64 p) {
    if (v == 0) throw std::domain_error("valuation of zero");
    if (v < 0) v = -v;
    int k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return v == 1 ? k : -1;  // -1 marks "not a pure power of p"
}

i64 ipow(i64 base, int exp) {
    i64 r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::pair<int, int> snf_exponents(const Mat4& m, i64 p, int r) {
    auto d = smith_diagonal(m);
    int e[4];
    for (int i = 0; i < 4; ++i) {
        if (d[i] == 0) throw std::domain_error("snf_exponents: singular matrix");
        e[i] = valuation(d[i], p);
        if (e[i] < 0) throw std::domain_error("snf_exponents: elementary divisor not a power of p");
    }
    int a = e[0], b = e[1];
    if (!(e[2] == r - b && e[3] == r - a && 0 <= a && a <= b && 2 * b <= r))
        throw std::domain_error("snf_exponents: divisor pattern not of symplectic shape");
    return {a, b};
}

std::string mat_to_csv(const Mat4& m) {
    std::ostringstream os;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (j) os << ',';
            os << m(i, j);
        }
        os << '\n';
    }
    return os.str();
}

Mat4 mat_from_csv(const std::string& text) {
    Mat4 m;
    std::istringstream is(text);
    std::string line;
    int i = 0;
    while (std::getline(is, line) && i < 4) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        int j = 0;
        while (std::getline(ls, cell, ',') && j < 4) m(i, j++) = std::stoll(cell);
        if (j != 4) throw std::invalid_argument("mat_from_csv: expected 4 columns");
        ++i;
    }
    if (i != 4) throw std::invalid_argument("mat_from_csv: expected 4 rows");
    return m;
}

std::vector<Mat4> symplectic_generators() {
    std::vector<Mat4> gens;
    gens.push_back(standard_J());
    // (I S; 0 I) for the three elementary symmetric S
    auto transvection = [&](int i, int j) {
        Mat4 m = identity4();
        m(i, 2 + j) = 1;
        m(j, 2 + i) = 1;
        return m;
    };
    gens.push_back(transvection(0, 0));
    gens.push_back(transvection(1, 1));
    gens.push_back(transvection(0, 1));
    // (U 0; 0 U^-T) for elementary U in GL2(Z)
    auto gl_embed = [&](i64 u00, i64 u01, i64 u10, i64 u11) {
        Mat4 m;
        m(0, 0) = u00; m(0, 1) = u01; m(1, 0) = u10; m(1, 1) = u11;
        i64 det = u00 * u11 - u01 * u10;  // +-1
        // U^-T = adj(U)^T / det
        m(2, 2) = u11 * det;  m(2, 3) = -u10 * det;
        m(3, 2) = -u01 * det; m(3, 3) = u00 * det;
        return m;
    };
    gens.push_back(gl_embed(1, 1, 0, 1));
    gens.push_back(gl_embed(0, 1, -1, 0));
    return gens;
}

Mat4 random_gamma(std::uint64_t seed, int word_len) {
    static const std::vector<Mat4> gens = symplectic_generators();
    std::mt19937_64 rng(seed);
    Mat4 g = identity4();
    std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
    for (int i = 0; i < word_len; ++i) g = mat_mul(g, gens[pick(rng)]);
    return g;
}

bool is_in_gamma(const Mat4& m) {
    auto s = similitude_of(m);
    return s.has_value() && *s == 1;
}

}  // namespace sp4
