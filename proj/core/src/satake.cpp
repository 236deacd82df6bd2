#include <algorithm>
#include <map>
#include <set>

#include "sp4/hecke.hpp"

namespace sp4 {

SatakePolynomial HeckeSession::satake_label(DoubleCosetLabel l) {
    auto lc = l.canonical();
    if (lc.r == 0) return SatakePolynomial::one();
    const auto& reps = coset_reps(lc);
    // coset monomial (x1/p)^alpha (x2/p^2)^beta; alpha, beta read from the
    // Hermite diagonal (valuations of the D-block), Table-1 validated
    std::map<std::pair<int, int>, i64> counts;
    for (const auto& h : reps) counts[satake_exponents_of_hnf(h, p_)] += 1;
    SatakePolynomial poly(lc.r);
    for (const auto& [ab, n] : counts)
        poly.add(ab.first, ab.second,
                 Rational(n) / Rational::int_pow(p_, ab.first + 2 * ab.second));
    return poly;
}

SatakePolynomial HeckeSession::satake(const HeckeElement& t) {
    if (t.terms.empty()) return SatakePolynomial(0);
    int grade = 0;
    for (const auto& [l, c] : t.terms) grade = std::max(grade, l.canonical().r);
    // embed lower-grade terms with the scalar-coset monomial x0^2 x1 x2 / p^3
    SatakePolynomial scalar(2);
    scalar.add(1, 1, Rational(1, ipow(p_, 3)));
    SatakePolynomial out(grade);
    for (const auto& [l, c] : t.terms) {
        SatakePolynomial piece = satake_label(l);
        while (piece.degree() < grade) piece = piece * scalar;
        if (piece.degree() != grade)
            throw std::logic_error("satake: grade parity mismatch within element");
        out = out + piece.scaled(c);
    }
    return out;
}

int weyl_orbit_size(int r, int a1, int a2) {
    std::set<std::pair<int, int>> orbit{{a1, a2},         {a2, a1},         {r - a1, a2},
                                        {a2, r - a1},     {a1, r - a2},     {r - a2, a1},
                                        {r - a1, r - a2}, {r - a2, r - a1}};
    return (int)orbit.size();
}

SatakePolynomial weyl_orbit_basis(i64 /*p*/, int r, int a1, int a2) {
    if (!(0 <= a1 && a1 <= a2 && 2 * a2 <= r))
        throw std::invalid_argument("weyl_orbit_basis: need 0 <= a1 <= a2 <= r/2");
    std::set<std::pair<int, int>> orbit{{a1, a2},         {a2, a1},         {r - a1, a2},
                                        {a2, r - a1},     {a1, r - a2},     {r - a2, a1},
                                        {r - a1, r - a2}, {r - a2, r - a1}};
    SatakePolynomial poly(r);
    for (auto [b1, b2] : orbit) poly.add(b1, b2, Rational(1));
    return poly;
}

// ---- eigenvalue specialization ----------------------------------------------

std::complex<double> eigenvalue_specialization(HeckeSession& session, const HeckeElement& t,
                                               std::complex<double> alpha, std::complex<double> beta) {
    if (std::abs(alpha) == 0.0 || std::abs(beta) == 0.0)
        throw std::invalid_argument("eigenvalue_specialization: parameters must be nonzero");
    SatakePolynomial poly = session.satake(t);
    const double p = (double)session.prime();
    // frozen calibration: x0 = p^{3/2} alpha, x1 = beta/alpha, x2 = 1/(alpha beta)
    std::complex<double> x0 = std::pow(p, 1.5) * alpha;
    std::complex<double> x1 = beta / alpha;
    std::complex<double> x2 = 1.0 / (alpha * beta);
    std::complex<double> acc = 0.0;
    for (const auto& [k, c] : poly.coeffs())
        acc += c.to_double() * std::pow(x1, k.first) * std::pow(x2, k.second);
    return acc * std::pow(x0, poly.degree());
}

// ---- XY polynomials (normalized eigenvalues) ---------------------------------

double XYPoly::eval(double x, double y) const {
    double acc = 0.0;
    for (const auto& [k, v] : c) acc += v.to_double() * std::pow(x, k.first) * std::pow(y, k.second);
    return acc;
}

XYPoly XYPoly::operator+(const XYPoly& o) const {
    XYPoly r = *this;
    for (const auto& [k, v] : o.c) {
        auto it = r.c.find(k);
        if (it == r.c.end())
            r.c[k] = v;
        else {
            it->second += v;
            if (it->second.is_zero()) r.c.erase(it);
        }
    }
    return r;
}

XYPoly XYPoly::operator*(const XYPoly& o) const {
    XYPoly r;
    for (const auto& [k1, v1] : c)
        for (const auto& [k2, v2] : o.c) {
            auto key = std::make_pair(k1.first + k2.first, k1.second + k2.second);
            auto it = r.c.find(key);
            if (it == r.c.end())
                r.c[key] = v1 * v2;
            else {
                it->second += v1 * v2;
                if (it->second.is_zero()) r.c.erase(it);
            }
        }
    return r;
}

XYPoly XYPoly::scaled(const Rational& s) const {
    XYPoly r;
    if (s.is_zero()) return r;
    for (const auto& [k, v] : c) r.c[k] = v * s;
    return r;
}

bool XYPoly::symmetric() const {
    for (const auto& [k, v] : c) {
        auto it = c.find({k.second, k.first});
        if (it == c.end() || it->second != v) return false;
    }
    return true;
}

namespace {

// alpha^i + alpha^{-i} as a polynomial in x = alpha + 1/alpha
std::map<int, Rational> power_sum_poly(int i) {
    // m_0 = 2 (treated by caller as constant 1*2), m_1 = x, m_i = x m_{i-1} - m_{i-2}
    std::vector<std::map<int, Rational>> m(std::max(2, i + 1));
    m[0][0] = Rational(2);
    if (i >= 1) m[1][1] = Rational(1);
    for (int k = 2; k <= i; ++k) {
        std::map<int, Rational> next;
        for (const auto& [d, v] : m[k - 1]) next[d + 1] += v;
        for (const auto& [d, v] : m[k - 2]) {
            next[d] -= v;
            if (next[d].is_zero()) next.erase(d);
        }
        m[k] = std::move(next);
    }
    return m[i];
}

}  // namespace

XYPoly normalized_eigenvalue_poly(HeckeSession& session, int r) {
    HeckeElement t = HeckeElement::full_T(session.prime(), r);
    SatakePolynomial poly = session.satake(t);
    const int grade = poly.degree();
    // Laurent coefficients in (alpha, beta): monomial x1^c1 x2^c2 at grade g
    // maps to p^{3g/2} alpha^{g-c1-c2} beta^{c1-c2}; normalization divides
    // the p^{3g/2} away (g == r for full_T).
    if (grade != r) throw std::logic_error("normalized_eigenvalue_poly: unexpected grade");
    std::map<std::pair<int, int>, Rational> laurent;
    for (const auto& [k, c] : poly.coeffs())
        laurent[{grade - k.first - k.second, k.first - k.second}] += c;

    XYPoly out;
    // Peel symmetric Laurent terms with the basis (alpha^i + alpha^-i)(beta^j + beta^-j)
    while (!laurent.empty()) {
        // top |i|, then |j|
        auto top = laurent.begin();
        for (auto it = laurent.begin(); it != laurent.end(); ++it) {
            auto ai = std::abs(it->first.first), aj = std::abs(it->first.second);
            auto bi = std::abs(top->first.first), bj = std::abs(top->first.second);
            if (ai > bi || (ai == bi && aj > bj)) top = it;
        }
        int i = std::abs(top->first.first), j = std::abs(top->first.second);
        Rational c = top->second;
        if (c.is_zero()) {
            laurent.erase(top);
            continue;
        }
        // subtract c * B_i(alpha) B_j(beta), with B_0 = 1
        auto add_laurent = [&](int a, int b, const Rational& v) {
            auto key = std::make_pair(a, b);
            laurent[key] -= v;
            if (laurent[key].is_zero()) laurent.erase(key);
        };
        std::vector<int> ia = (i == 0) ? std::vector<int>{0} : std::vector<int>{i, -i};
        std::vector<int> jb = (j == 0) ? std::vector<int>{0} : std::vector<int>{j, -j};
        for (int aa : ia)
            for (int bb : jb) add_laurent(aa, bb, c);
        // contribute c * m_i(x) m_j(y), with m_0 interpreted as 1
        XYPoly term;
        if (i == 0 && j == 0) {
            term.c[{0, 0}] = c;
        } else if (j == 0) {
            for (const auto& [d, v] : power_sum_poly(i)) term.c[{d, 0}] = v * c;
        } else if (i == 0) {
            for (const auto& [d, v] : power_sum_poly(j)) term.c[{0, d}] = v * c;
        } else {
            for (const auto& [d1, v1] : power_sum_poly(i))
                for (const auto& [d2, v2] : power_sum_poly(j)) {
                    term.c[{d1, d2}] += v1 * v2 * c;
                    if (term.c[{d1, d2}].is_zero()) term.c.erase({d1, d2});
                }
        }
        out = out + term;
    }
    return out;
}

CalibrationRecord calibration_record(HeckeSession& session) {
    CalibrationRecord rec;
    rec.p = session.prime();
    const i64 p = session.prime();
    XYPoly nu1 = normalized_eigenvalue_poly(session, 1);
    XYPoly nu2 = normalized_eigenvalue_poly(session, 2);
    // lambda(p) = p^{3/2} (x + y)
    XYPoly xy;
    xy.c[{1, 0}] = Rational(1);
    xy.c[{0, 1}] = Rational(1);
    rec.lambda_p_exact = (nu1.c == xy.c);
    // section-5 claim lambda(p^2) = p^3 (x^2 + x y + y^2)
    XYPoly claim;
    claim.c[{2, 0}] = Rational(1);
    claim.c[{1, 1}] = Rational(1);
    claim.c[{0, 2}] = Rational(1);
    XYPoly residual = nu2 + claim.scaled(Rational(-1));
    rec.lambda_p2_exact = residual.c.empty();
    if (!rec.lambda_p2_exact) {
        std::string s = "lambda(p^2) - p^3(x^2+xy+y^2) = p^3 * (";
        bool first = true;
        for (const auto& [k, v] : residual.c) {
            if (!first) s += " + ";
            first = false;
            s += v.str();
            if (k.first) s += "*x^" + std::to_string(k.first);
            if (k.second) s += "*y^" + std::to_string(k.second);
        }
        s += ")  [p = " + std::to_string(p) + "]";
        rec.lambda_p2_residual = s;
    }
    return rec;
}

// ---- amplifier scan -----------------------------------------------------------

namespace {

double nu4_from_relation(double p, double nu1, double nu2) {
    // T(p^4) relation divided by p^6
    return (2.0 + 1.0 / p) * nu1 * nu1 - nu1 * nu1 * nu1 * nu1 + nu2 / p + nu1 * nu1 * nu2 +
           nu2 * nu2 - 1.0;
}

}  // namespace

AmplifierScanRow amplifier_scan_prime(HeckeSession& session, double grid_step, double margin) {
    if (grid_step <= 0) throw std::invalid_argument("amplifier_scan: grid_step must be positive");
    const double p = (double)session.prime();
    XYPoly nu1p = normalized_eigenvalue_poly(session, 1);
    XYPoly nu2p = normalized_eigenvalue_poly(session, 2);

    AmplifierScanRow row{session.prime(), 1e300, 0.0, 0.0};
    auto consider = [&](double nu1, double nu2, double x, double y) {
        double obj = std::abs(nu1) + std::abs(nu2) + std::abs(nu4_from_relation(p, nu1, nu2));
        if (obj < row.minimum) {
            row.minimum = obj;
            row.argmin_x = x;
            row.argmin_y = y;
        }
    };

    const double lim = 2.0 + margin;
    for (double x = -lim; x <= lim + 1e-12; x += grid_step)
        for (double y = -lim; y <= lim + 1e-12; y += grid_step)
            consider(nu1p.eval(x, y), nu2p.eval(x, y), x, y);

    // exceptional families of the unitary region, mapped to Satake data:
    // (alpha real positive, beta unit), (beta = conj(alpha)), (both real).
    const double sigma_a = std::sqrt(15.0), sigma_b = std::sqrt(30.0) / 2.0;
    const int n_sigma = 24, n_angle = 48;
    const double lp = std::log(p);
    for (int i = 1; i <= n_sigma; ++i) {
        double s = sigma_a * i / n_sigma;
        double x = 2.0 * std::cosh(s * lp);
        for (int j = 0; j <= n_angle; ++j) {
            double y = -2.0 + 4.0 * j / n_angle;
            consider(x + y, x * x + x * y + y * y - 2.0 - 1.0 / p, x, y);
            consider(-x + y, x * x - x * y + y * y - 2.0 - 1.0 / p, -x, y);
        }
    }
    for (int i = 1; i <= n_sigma; ++i) {
        double s = sigma_b * i / n_sigma;
        for (int j = 0; j <= n_angle; ++j) {
            double th = M_PI * j / n_angle;
            std::complex<double> x(std::cosh(s * lp) * 2.0 * std::cos(th),
                                   2.0 * std::sinh(s * lp) * std::sin(th));
            double nu1 = 2.0 * x.real();
            double nu2 = 2.0 * (x * x).real() + std::norm(x) - 2.0 - 1.0 / p;
            consider(nu1, nu2, x.real(), x.imag());
        }
    }
    for (int i = 0; i <= n_sigma; ++i)
        for (int j = 0; j <= n_sigma; ++j) {
            double s1 = sigma_a * i / n_sigma, s2 = sigma_a * j / n_sigma;
            if (s1 * s1 + s2 * s2 > 15.0) continue;
            double x = 2.0 * std::cosh(s1 * lp), y = 2.0 * std::cosh(s2 * lp);
            consider(nu1p.eval(x, y), nu2p.eval(x, y), x, y);
        }
    return row;
}

}  // namespace sp4
