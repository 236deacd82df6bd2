#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "sp4/hecke.hpp"
#include "sp4/table_cache.hpp"

namespace sp4 {

std::string DoubleCosetLabel::str() const {
    std::ostringstream os;
    os << "T^(" << r << ")_{" << a << "," << b << "}";
    return os.str();
}

HeckeElement HeckeElement::identity(i64 p) {
    HeckeElement t;
    t.p = p;
    t.terms[{0, 0, 0}] = Rational(1);
    return t;
}

HeckeElement HeckeElement::single(i64 p, DoubleCosetLabel l, Rational c) {
    HeckeElement t;
    t.p = p;
    t.add(l, c);
    return t;
}

HeckeElement HeckeElement::full_T(i64 p, int r) {
    HeckeElement t;
    t.p = p;
    for (int a = 0; 2 * a <= r; ++a)
        for (int b = a; 2 * b <= r; ++b) t.add({r, a, b}, Rational(1));
    return t;
}

void HeckeElement::add(DoubleCosetLabel l, const Rational& c) {
    if (c.is_zero()) return;
    auto key = l.canonical();
    auto it = terms.find(key);
    if (it == terms.end()) {
        terms.emplace(key, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

Rational HeckeElement::coeff(DoubleCosetLabel l) const {
    auto it = terms.find(l.canonical());
    return it == terms.end() ? Rational(0) : it->second;
}

HeckeElement HeckeElement::operator+(const HeckeElement& o) const {
    HeckeElement r = *this;
    for (const auto& [l, c] : o.terms) r.add(l, c);
    return r;
}

HeckeElement HeckeElement::operator-(const HeckeElement& o) const {
    HeckeElement r = *this;
    for (const auto& [l, c] : o.terms) r.add(l, -c);
    return r;
}

HeckeElement HeckeElement::scaled(const Rational& s) const {
    HeckeElement r;
    r.p = p;
    if (s.is_zero()) return r;
    for (const auto& [l, c] : terms) r.terms[l] = c * s;
    return r;
}

bool HeckeElement::leq(const HeckeElement& o) const {
    for (const auto& [l, c] : terms)
        if (!(c <= o.coeff(l))) return false;
    return true;
}

std::string HeckeElement::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [l, c] : terms) {
        if (!first) os << " + ";
        first = false;
        os << c.str() << "*" << l.str();
    }
    if (first) os << "0";
    return os.str();
}

std::string HeckeElement::to_csv() const {
    std::ostringstream os;
    os << "p,r,a,b,numerator,denominator\n";
    for (const auto& [l, c] : terms)
        os << p << ',' << l.r << ',' << l.a << ',' << l.b << ',' << c.num_str() << ','
           << c.den_str() << '\n';
    return os.str();
}

// ---- session ----------------------------------------------------------------

namespace {

struct HnfKey {
    std::array<i64, 10> v;  // upper-triangular entries, row-major
    bool operator==(const HnfKey& o) const { return v == o.v; }
};

HnfKey key_of(const Mat4& h) {
    return HnfKey{{h(0, 0), h(0, 1), h(0, 2), h(0, 3), h(1, 1), h(1, 2), h(1, 3), h(2, 2), h(2, 3), h(3, 3)}};
}

struct HnfKeyHash {
    size_t operator()(const HnfKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (i64 x : k.v) {
            h ^= (std::uint64_t)x;
            h *= 1099511628211ull;
        }
        return (size_t)h;
    }
};

Mat4 key_to_mat(const HnfKey& k) {
    Mat4 h;
    h(0, 0) = k.v[0]; h(0, 1) = k.v[1]; h(0, 2) = k.v[2]; h(0, 3) = k.v[3];
    h(1, 1) = k.v[4]; h(1, 2) = k.v[5]; h(1, 3) = k.v[6];
    h(2, 2) = k.v[7]; h(2, 3) = k.v[8];
    h(3, 3) = k.v[9];
    return h;
}

}  // namespace

HeckeSession::HeckeSession(i64 p, HeckeBudgets budgets, std::string cache_dir)
    : p_(p), budgets_(budgets), cache_dir_(std::move(cache_dir)) {}

const CosetTable& HeckeSession::table(int r) {
    auto it = tables_.find(r);
    if (it != tables_.end()) return it->second;
    if (!cache_dir_.empty()) {
        auto cached = load_coset_table(cache_dir_, p_, r);
        if (cached) return tables_.emplace(r, std::move(*cached)).first->second;
    }
    CosetTable t = left_cosets(p_, r, budgets_);
    if (!cache_dir_.empty()) save_coset_table(cache_dir_, t);
    return tables_.emplace(r, std::move(t)).first->second;
}

const std::vector<Mat4>& HeckeSession::coset_reps(DoubleCosetLabel l) {
    auto lc = l.canonical();
    auto key = std::make_tuple(lc.r, lc.a, lc.b);
    auto it = label_reps_.find(key);
    if (it != label_reps_.end()) return it->second;
    const CosetTable& t = table(lc.r);
    // split the whole level at once
    std::map<std::tuple<int, int, int>, std::vector<Mat4>> parts;
    for (int a = 0; 2 * a <= lc.r; ++a)
        for (int b = a; 2 * b <= lc.r; ++b) parts[{lc.r, a, b}];
    for (const auto& rep : t.reps) {
        auto ab = snf_exponents(rep, p_, lc.r);
        parts[{lc.r, ab.first, ab.second}].push_back(rep);
    }
    for (auto& [k, v] : parts) label_reps_[k] = std::move(v);
    return label_reps_.at(key);
}

const std::vector<Mat4>& HeckeSession::coset_members(DoubleCosetLabel l) {
    auto lc = l.canonical();
    auto key = std::make_tuple(lc.r, lc.a, lc.b);
    auto it = label_members_.find(key);
    if (it != label_members_.end()) return it->second;
    const auto& reps = coset_reps(l);
    std::vector<Mat4> members;
    members.reserve(reps.size());
    for (const auto& h : reps) members.push_back(block_reduce(h, p_, lc.r).matrix);
    return label_members_.emplace(key, std::move(members)).first->second;
}

i64 HeckeSession::degree(DoubleCosetLabel l) {
    return (i64)coset_reps(l).size();
}

HeckeElement HeckeSession::multiply(const HeckeElement& t1, const HeckeElement& t2) {
    if (t1.p != p_ || t2.p != p_) throw std::invalid_argument("multiply: prime mismatch");
    HeckeElement out;
    out.p = p_;
    for (const auto& [l1, c1] : t1.terms)
        for (const auto& [l2, c2] : t2.terms) {
            HeckeElement part = multiply_labels(l1, l2);
            for (const auto& [l, c] : part.terms) out.add(l, c * c1 * c2);
        }
    return out;
}

HeckeElement HeckeSession::multiply_labels(DoubleCosetLabel l1, DoubleCosetLabel l2) {
    auto c1 = l1.canonical(), c2 = l2.canonical();
    std::array<int, 6> key{c1.r, c1.a, c1.b, c2.r, c2.a, c2.b};
    auto it = product_memo_.find(key);
    if (it != product_memo_.end()) return it->second;
    HeckeElement r = multiply_labels_uncached(c1, c2);
    product_memo_[key] = r;
    return r;
}

HeckeElement HeckeSession::multiply_labels_uncached(DoubleCosetLabel l1, DoubleCosetLabel l2) {
    if (l1.canonical().r == 0) return HeckeElement::single(p_, l2.canonical());
    if (l2.canonical().r == 0) return HeckeElement::single(p_, l1.canonical());
    const auto& a = coset_members(l1);
    const auto& b = coset_members(l2);
    int r_out = l1.canonical().r + l2.canonical().r;
    i64 pairs = (i64)a.size() * (i64)b.size();
    if (pairs > budgets_.max_products)
        throw BudgetExceeded("hecke multiply: product budget exceeded for " + l1.str() + " * " + l2.str());
    if (pairs <= budgets_.full_bucket_limit) return product_full_bucket(a, b, r_out);
    return product_fixed_reps(a, b, r_out);
}

HeckeElement HeckeSession::product_full_bucket(const std::vector<Mat4>& a, const std::vector<Mat4>& b,
                                               int r_out) {
    std::unordered_map<HnfKey, i64, HnfKeyHash> buckets;
    buckets.reserve(std::min<size_t>(a.size() * b.size(), 1u << 21));
    for (const auto& x : a)
        for (const auto& y : b) buckets[key_of(hnf(mat_mul(x, y)))] += 1;

    // constant multiplicity across every coset of each double coset
    std::map<std::pair<int, int>, std::pair<i64, i64>> label_info;  // (a,b) -> (mult, ncosets)
    for (const auto& [k, count] : buckets) {
        auto ab = snf_exponents(key_to_mat(k), p_, r_out);
        auto it = label_info.find(ab);
        if (it == label_info.end()) {
            label_info[ab] = {count, 1};
        } else {
            if (it->second.first != count)
                throw std::logic_error("hecke multiply: non-constant multiplicity within double coset (" +
                                       std::to_string(ab.first) + "," + std::to_string(ab.second) + ")");
            it->second.second += 1;
        }
    }
    ++constancy_checks_;
    HeckeElement out;
    out.p = p_;
    for (const auto& [ab, info] : label_info)
        out.add({r_out, ab.first, ab.second}, Rational(info.first));
    return out;
}

HeckeElement HeckeSession::product_fixed_reps(const std::vector<Mat4>& a, const std::vector<Mat4>& b,
                                              int r_out) {
    // One reference coset per candidate double coset plus sampled extras;
    // multiplicity constancy is verified on the samples.
    struct Slot {
        std::pair<int, int> label;
        bool reference;
        i64 count = 0;
    };
    std::unordered_map<HnfKey, int, HnfKeyHash> target_index;
    std::vector<Slot> slots;
    const int n_samples = 4;
    for (int aa = 0; 2 * aa <= r_out; ++aa)
        for (int bb = aa; 2 * bb <= r_out; ++bb) {
            Mat4 d;
            d(0, 0) = ipow(p_, aa);
            d(1, 1) = ipow(p_, bb);
            d(2, 2) = ipow(p_, r_out - bb);
            d(3, 3) = ipow(p_, r_out - aa);
            auto insert_target = [&](const Mat4& rep, bool reference) {
                HnfKey k = key_of(hnf(rep));
                if (target_index.count(k)) return;
                target_index[k] = (int)slots.size();
                slots.push_back({{aa, bb}, reference});
            };
            insert_target(d, true);
            for (int s = 0; s < n_samples; ++s)
                insert_target(mat_mul(d, random_gamma(0x5eed0 + 97 * aa + 31 * bb + s, 10)), false);
        }

    for (const auto& x : a)
        for (const auto& y : b) {
            auto it = target_index.find(key_of(hnf(mat_mul(x, y))));
            if (it != target_index.end()) slots[it->second].count += 1;
        }

    std::map<std::pair<int, int>, i64> coeff;
    for (const auto& s : slots)
        if (s.reference) coeff[s.label] = s.count;
    for (const auto& s : slots)
        if (!s.reference && s.count != coeff[s.label])
            throw std::logic_error("hecke multiply: sampled multiplicity mismatch in double coset (" +
                                   std::to_string(s.label.first) + "," + std::to_string(s.label.second) + ")");
    HeckeElement out;
    out.p = p_;
    for (const auto& [ab, c] : coeff)
        if (c != 0) out.add({r_out, ab.first, ab.second}, Rational(c));
    return out;
}

}  // namespace sp4
