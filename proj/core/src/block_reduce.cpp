#include <array>
#include <cstdlib>

#include "sp4/hecke.hpp"

namespace sp4 {

namespace {

using W128 = std::array<__int128, 16>;  // row-major 4x4
using V128 = std::array<__int128, 4>;

__int128& at(W128& m, int i, int j) { return m[4 * i + j]; }
__int128 at(const W128& m, int i, int j) { return m[4 * i + j]; }

W128 to128(const Mat4& m) {
    W128 r{};
    for (int i = 0; i < 16; ++i) r[i] = m.a[i];
    return r;
}

Mat4 to64_checked(const W128& m) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) {
        if (m[i] > (__int128)9e17 || m[i] < -(__int128)9e17)
            throw std::logic_error("block_reduce: entry exceeds 64-bit range");
        r.a[i] = (i64)m[i];
    }
    return r;
}

W128 mul128(const W128& x, const W128& y) {
    W128 r{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            __int128 v = at(x, i, k);
            if (v == 0) continue;
            for (int j = 0; j < 4; ++j) at(r, i, j) += v * at(y, k, j);
        }
    return r;
}

// x J y^T for row vectors
__int128 jpair(const V128& x, const V128& y) {
    return x[0] * y[2] - x[2] * y[0] + x[1] * y[3] - x[3] * y[1];
}

__int128 dot(const V128& x, const V128& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a;
}

// Kernel of the 2x4 integer map x -> (x.c1, x.c2): column-style reduction of
// the stacked matrix with a tracked unimodular transform; returns a basis of
// the rank-2 saturated kernel lattice.
std::pair<V128, V128> kernel_basis(const V128& c1, const V128& c2) {
    // rows of K are c1, c2; columns get combined by V in GL4(Z)
    __int128 K[2][4] = {{c1[0], c1[1], c1[2], c1[3]}, {c2[0], c2[1], c2[2], c2[3]}};
    W128 V{};
    for (int i = 0; i < 4; ++i) at(V, i, i) = 1;
    auto colop = [&](int dst, int src, __int128 mult) {
        for (int r = 0; r < 2; ++r) K[r][dst] += mult * K[r][src];
        for (int r = 0; r < 4; ++r) at(V, r, dst) += mult * at(V, r, src);
    };
    auto colswap = [&](int a, int b) {
        for (int r = 0; r < 2; ++r) std::swap(K[r][a], K[r][b]);
        for (int r = 0; r < 4; ++r) std::swap(at(V, r, a), at(V, r, b));
    };
    int lead = 0;
    for (int row = 0; row < 2; ++row) {
        while (true) {
            int piv = -1;
            for (int c = lead; c < 4; ++c)
                if (K[row][c] != 0) {
                    __int128 a = K[row][c] < 0 ? -K[row][c] : K[row][c];
                    if (piv == -1) piv = c;
                    else {
                        __int128 b = K[row][piv] < 0 ? -K[row][piv] : K[row][piv];
                        if (a < b) piv = c;
                    }
                }
            if (piv == -1) throw std::logic_error("block_reduce: first columns not rank 2");
            if (piv != lead) colswap(piv, lead);
            bool clean = true;
            for (int c = lead + 1; c < 4; ++c)
                if (K[row][c] != 0) {
                    colop(c, lead, -(K[row][c] / K[row][lead]));
                    if (K[row][c] != 0) clean = false;
                }
            if (clean) break;
        }
        ++lead;
    }
    // columns 2,3 of V span the kernel
    V128 w1{at(V, 0, 2), at(V, 1, 2), at(V, 2, 2), at(V, 3, 2)};
    V128 w2{at(V, 0, 3), at(V, 1, 3), at(V, 2, 3), at(V, 3, 3)};
    return {w1, w2};
}

// Solve x J w1^T = t1, x J w2^T = t2 over Z (the pairing is surjective for a
// primitive isotropic pair).
V128 solve_pairing(const V128& w1, const V128& w2, __int128 t1, __int128 t2) {
    // A x^T = t with A rows (J w1)^T-ish; build A = [ (w J)-form ]
    // x J w^T = sum_i x_i (Jw)_i with (Jw) = (w3, w4, -w1, -w2) pattern:
    // x J w^T = x0 w2' ... just expand jpair coefficients.
    __int128 A[2][4] = {{w1[2], w1[3], -w1[0], -w1[1]}, {w2[2], w2[3], -w2[0], -w2[1]}};
    __int128 t[2] = {t1, t2};
    // column-HNF with transform, then back-substitute
    W128 V{};
    for (int i = 0; i < 4; ++i) at(V, i, i) = 1;
    auto colop = [&](int dst, int src, __int128 mult) {
        for (int r = 0; r < 2; ++r) A[r][dst] += mult * A[r][src];
        for (int r = 0; r < 4; ++r) at(V, r, dst) += mult * at(V, r, src);
    };
    auto colswap = [&](int a, int b) {
        for (int r = 0; r < 2; ++r) std::swap(A[r][a], A[r][b]);
        for (int r = 0; r < 4; ++r) std::swap(at(V, r, a), at(V, r, b));
    };
    int lead = 0;
    for (int row = 0; row < 2; ++row) {
        while (true) {
            int piv = -1;
            for (int c = lead; c < 4; ++c)
                if (A[row][c] != 0) {
                    __int128 a = A[row][c] < 0 ? -A[row][c] : A[row][c];
                    if (piv == -1) piv = c;
                    else {
                        __int128 b = A[row][piv] < 0 ? -A[row][piv] : A[row][piv];
                        if (a < b) piv = c;
                    }
                }
            if (piv == -1) throw std::logic_error("block_reduce: degenerate pairing");
            if (piv != lead) colswap(piv, lead);
            bool clean = true;
            for (int c = lead + 1; c < 4; ++c)
                if (A[row][c] != 0) {
                    colop(c, lead, -(A[row][c] / A[row][lead]));
                    if (A[row][c] != 0) clean = false;
                }
            if (clean) break;
        }
        ++lead;
    }
    // lower-triangular 2x2 solve: y0 A[0][0] = t0; A[1][0] y0 + A[1][1] y1 = t1
    if (t[0] % A[0][0] != 0) throw std::logic_error("block_reduce: pairing not surjective");
    __int128 y0 = t[0] / A[0][0];
    __int128 rem = t[1] - A[1][0] * y0;
    if (rem % A[1][1] != 0) throw std::logic_error("block_reduce: pairing not surjective");
    __int128 y1 = rem / A[1][1];
    V128 x{};
    for (int i = 0; i < 4; ++i) x[i] = at(V, i, 0) * y0 + at(V, i, 1) * y1;
    return x;
}

void size_reduce(V128& u, const V128& w) {
    __int128 ww = dot(w, w);
    if (ww == 0) return;
    __int128 q = dot(u, w) / ww;  // truncation is fine, this only tames growth
    for (int i = 0; i < 4; ++i) u[i] -= q * w[i];
}

}  // namespace

std::pair<int, int> satake_exponents_of_hnf(const Mat4& h, i64 p) {
    int a3 = valuation(h(2, 2), p);
    int a4 = valuation(h(3, 3), p);
    if (a3 < 0 || a4 < 0) throw std::domain_error("satake_exponents_of_hnf: diagonal not p-power");
    return {a3, a4};
}

BlockReduced block_reduce(const Mat4& input, i64 p, int r) {
    const i64 pr = ipow(p, r);
    const Mat4 Jm = standard_J();

    // Actual member of S(p^r) in the coset of `input`: either the input
    // itself, or V * input where V normalizes the unimodular alternating
    // form (1/p^r) H J H^T back to J.
    Mat4 m = input;
    if (!similitude_of(input).has_value() || *similitude_of(input) != pr) {
        Mat4 s = mat_mul(mat_mul(input, Jm), mat_transpose(input));
        for (auto& v : s.a) {
            if (v % pr != 0) throw std::invalid_argument("block_reduce: input not a coset of S(p^r)");
            v /= pr;
        }
        // symplectic basis (rows of V) for the form s: v_i s v_j^T = J_ij
        auto spair = [&](const V128& x, const V128& y) {
            __int128 acc = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) acc += x[i] * (__int128)s(i, j) * y[j];
            return acc;
        };
        V128 v1{1, 0, 0, 0};
        // v3 with v1 s v3^T = 1: first row of s has gcd 1
        {
            __int128 row[4] = {s(0, 0), s(0, 1), s(0, 2), s(0, 3)};
            // extended gcd over the row
            V128 v3{};
            __int128 g = 0;
            for (int i = 0; i < 4; ++i) {
                if (row[i] == 0) continue;
                if (g == 0) {
                    g = row[i] < 0 ? -row[i] : row[i];
                    v3[i] = row[i] < 0 ? -1 : 1;
                    continue;
                }
                // gcd(g, row[i]) = a*g + b*row[i]
                __int128 a0 = g, b0 = row[i] < 0 ? -row[i] : row[i];
                __int128 x0 = 1, x1 = 0, y0 = 0, y1 = 1;
                while (b0) {
                    __int128 q = a0 / b0;
                    a0 -= q * b0; std::swap(a0, b0);
                    x0 -= q * x1; std::swap(x0, x1);
                    y0 -= q * y1; std::swap(y0, y1);
                }
                for (int k = 0; k < 4; ++k) v3[k] *= x0;
                v3[i] += (row[i] < 0 ? -y0 : y0);
                g = a0;
            }
            if (g != 1) throw std::logic_error("block_reduce: alternating form not unimodular");
            // project e-basis into the s-orthogonal complement of (v1, v3)
            V128 basis[4];
            int n = 0;
            for (int i = 0; i < 4; ++i) {
                V128 u{};
                u[i] = 1;
                __int128 a = spair(v1, u), b = spair(v3, u);
                for (int k = 0; k < 4; ++k) u[k] += b * v1[k] - a * v3[k];
                basis[n++] = u;
            }
            // rank-2 lattice spanned by the projections: column-reduce
            __int128 G[4][4];
            for (int c = 0; c < 4; ++c)
                for (int i = 0; i < 4; ++i) G[i][c] = basis[c][i];
            // bring to column echelon (first two independent columns)
            int lead = 0;
            for (int row = 0; row < 4 && lead < 4; ++row) {
                while (true) {
                    int piv = -1;
                    for (int c = lead; c < 4; ++c)
                        if (G[row][c] != 0) {
                            __int128 a = G[row][c] < 0 ? -G[row][c] : G[row][c];
                            if (piv == -1) piv = c;
                            else {
                                __int128 bb = G[row][piv] < 0 ? -G[row][piv] : G[row][piv];
                                if (a < bb) piv = c;
                            }
                        }
                    if (piv == -1) break;
                    if (piv != lead) for (int i = 0; i < 4; ++i) std::swap(G[i][piv], G[i][lead]);
                    bool clean = true;
                    for (int c = lead + 1; c < 4; ++c)
                        if (G[row][c] != 0) {
                            __int128 q = G[row][c] / G[row][lead];
                            for (int i = 0; i < 4; ++i) G[i][c] -= q * G[i][lead];
                            if (G[row][c] != 0) clean = false;
                        }
                    if (clean) { ++lead; break; }
                }
            }
            if (lead < 2) throw std::logic_error("block_reduce: projection rank defect");
            V128 w1{G[0][0], G[1][0], G[2][0], G[3][0]};
            V128 w2{G[0][1], G[1][1], G[2][1], G[3][1]};
            __int128 d = spair(w1, w2);
            if (d < 0) { std::swap(w1, w2); d = -d; }
            if (d != 1) throw std::logic_error("block_reduce: symplectic basis defect");
            W128 V{};
            auto set_row = [&](int i, const V128& v) { for (int k = 0; k < 4; ++k) at(V, i, k) = v[k]; };
            set_row(0, v1); set_row(1, w1); set_row(2, v3); set_row(3, w2);
            W128 mm = mul128(V, to128(input));
            m = to64_checked(mm);
        }
        auto sim = similitude_of(m);
        if (!sim || *sim != pr) throw std::logic_error("block_reduce: normalization failed");
    }

    // rows 3,4 of gamma span R = {x : x^T M has vanishing first two coords}
    V128 c1{m(0, 0), m(1, 0), m(2, 0), m(3, 0)};
    V128 c2{m(0, 1), m(1, 1), m(2, 1), m(3, 1)};
    auto [w1, w2] = kernel_basis(c1, c2);
    if (jpair(w1, w2) != 0) throw std::logic_error("block_reduce: kernel not isotropic");

    V128 u1 = solve_pairing(w1, w2, 1, 0);
    V128 u2 = solve_pairing(w1, w2, 0, 1);
    size_reduce(u1, w1);
    size_reduce(u1, w2);
    size_reduce(u2, w1);
    size_reduce(u2, w2);
    __int128 t = jpair(u1, u2);
    for (int i = 0; i < 4; ++i) u2[i] -= t * w1[i];
    size_reduce(u2, w2);  // adding w2 leaves all pairings intact

    W128 gamma{};
    for (int k = 0; k < 4; ++k) {
        at(gamma, 0, k) = u1[k];
        at(gamma, 1, k) = u2[k];
        at(gamma, 2, k) = w1[k];
        at(gamma, 3, k) = w2[k];
    }
    W128 n128 = mul128(gamma, to128(m));
    Mat4 n = to64_checked(n128);
    if (!is_in_gamma(to64_checked(gamma))) throw std::logic_error("block_reduce: gamma not symplectic");
    if (n(2, 0) != 0 || n(2, 1) != 0 || n(3, 0) != 0 || n(3, 1) != 0)
        throw std::logic_error("block_reduce: lower-left block nonzero");

    // HNF the A block via (U 0; 0 U^-T), then reduce B mod D with (I S; 0 I)
    {
        i64 A[2][2] = {{n(0, 0), n(0, 1)}, {n(1, 0), n(1, 1)}};
        i64 U[2][2] = {{1, 0}, {0, 1}};
        auto rswap = [&]() { std::swap(A[0], A[1]); std::swap(U[0], U[1]); };
        auto radd = [&](int dst, int src, i64 q) {
            A[dst][0] += q * A[src][0]; A[dst][1] += q * A[src][1];
            U[dst][0] += q * U[src][0]; U[dst][1] += q * U[src][1];
        };
        while (A[1][0] != 0) {
            if (A[0][0] == 0 || (A[1][0] != 0 && std::llabs(A[1][0]) < std::llabs(A[0][0]))) rswap();
            if (A[1][0] != 0) radd(1, 0, -(A[1][0] / A[0][0]));
        }
        if (A[0][0] < 0) { A[0][0] = -A[0][0]; A[0][1] = -A[0][1]; U[0][0] = -U[0][0]; U[0][1] = -U[0][1]; }
        if (A[1][1] < 0) { A[1][1] = -A[1][1]; U[1][0] = -U[1][0]; U[1][1] = -U[1][1]; }
        i64 q = A[0][1] / A[1][1];
        if (A[0][1] - q * A[1][1] < 0) q -= 1;
        if (q != 0) radd(0, 1, -q);
        i64 det = U[0][0] * U[1][1] - U[0][1] * U[1][0];
        Mat4 g2;
        g2(0, 0) = U[0][0]; g2(0, 1) = U[0][1]; g2(1, 0) = U[1][0]; g2(1, 1) = U[1][1];
        g2(2, 2) = U[1][1] * det; g2(2, 3) = -U[1][0] * det;
        g2(3, 2) = -U[0][1] * det; g2(3, 3) = U[0][0] * det;
        n = mat_mul(g2, n);
    }
    // B <- B + S D with symmetric S = -round(B D^{-1}) = -round(B A^T / p^r)
    {
        auto round_div = [&](i64 num, i64 den) {
            // nearest integer of num/den, den > 0
            i64 q = num >= 0 ? (num + den / 2) / den : -((-num + den / 2) / den);
            return q;
        };
        i64 S[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                i64 bd = n(i, 2) * n(j, 0 + 0) + n(i, 3) * n(j, 1);  // (B A^T)_{ij}
                S[i][j] = -round_div(bd, pr);
            }
        if (S[0][1] != S[1][0]) throw std::logic_error("block_reduce: B D^-1 not symmetric");
        Mat4 shear = identity4();
        shear(0, 2) = S[0][0]; shear(0, 3) = S[0][1];
        shear(1, 2) = S[1][0]; shear(1, 3) = S[1][1];
        n = mat_mul(shear, n);
    }

    // postconditions
    auto sim = similitude_of(n);
    if (!sim || *sim != pr) throw std::logic_error("block_reduce: output not in S(p^r)");
    Mat4 A{}, D{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            A(i, j) = n(i, j);
            D(i, j) = n(2 + i, 2 + j);
        }
    i64 ad00 = A(0, 0) * D(0, 0) + A(0, 1) * D(0, 1);
    i64 ad01 = A(0, 0) * D(1, 0) + A(0, 1) * D(1, 1);
    i64 ad10 = A(1, 0) * D(0, 0) + A(1, 1) * D(0, 1);
    i64 ad11 = A(1, 0) * D(1, 0) + A(1, 1) * D(1, 1);
    if (!(ad00 == pr && ad11 == pr && ad01 == 0 && ad10 == 0))
        throw std::logic_error("block_reduce: A D^T != p^r I");
    if (n(1, 0) != 0 || valuation(n(0, 0), p) < 0 || valuation(n(1, 1), p) < 0)
        throw std::logic_error("block_reduce: A block not triangular with p-power diagonal");
    if (hnf(n) != hnf(input)) throw std::logic_error("block_reduce: left coset changed");

    auto [alpha, beta] = satake_exponents_of_hnf(hnf(n), p);
    return BlockReduced{n, alpha, beta};
}

}  // namespace sp4
