#pragma once

#include "rational.hpp"

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycleforge {

// Exact element of Q(i).
struct GaussianRational {
    mpq_class re = 0, im = 0;

    GaussianRational() = default;
    GaussianRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) { re.canonicalize(); im.canonicalize(); }
    GaussianRational(long r) : re(r), im(0) {}
    static GaussianRational I() { return GaussianRational(0, 1); }

    bool is_zero() const { return re == 0 && im == 0; }
    mpq_class norm() const { return re * re + im * im; }
    GaussianRational conj() const { return {re, -im}; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        if (b.is_zero()) throw std::domain_error("GaussianRational: division by zero");
        mpq_class n = b.norm();
        GaussianRational t = a * b.conj();
        return {t.re / n, t.im / n};
    }
    GaussianRational pow(int e) const {
        GaussianRational base = e < 0 ? GaussianRational(1) / *this : *this, r(1);
        for (int k = e < 0 ? -e : e; k; --k) r = r * base;
        return r;
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator<(const GaussianRational& a, const GaussianRational& b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    }

    // "3", "-2i", "1/2+3/4i", "i"
    std::string to_string() const {
        auto im_str = [](const mpq_class& q) {
            if (q == 1) return std::string("i");
            if (q == -1) return std::string("-i");
            return q_to_string(q) + "i";
        };
        if (im == 0) return q_to_string(re);
        if (re == 0) return im_str(im);
        std::string s = im_str(im);
        return q_to_string(re) + (s[0] == '-' ? s : "+" + s);
    }

    static GaussianRational parse(std::string s) {
        std::string t;
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (t.empty()) throw std::invalid_argument("GaussianRational: empty string");
        if (t.back() != 'i') return GaussianRational(q_parse(t), 0);
        t.pop_back();
        std::size_t split = std::string::npos;
        for (std::size_t k = t.size(); k-- > 1;)
            if (t[k] == '+' || t[k] == '-') { split = k; break; }
        std::string rs = split == std::string::npos ? "" : t.substr(0, split);
        std::string is = split == std::string::npos ? t : t.substr(split);
        if (is.empty() || is == "+") is = "1";
        else if (is == "-") is = "-1";
        if (!is.empty() && is[0] == '+') is.erase(0, 1);
        return GaussianRational(rs.empty() ? mpq_class(0) : q_parse(rs), q_parse(is));
    }
};

using GQ = GaussianRational;

// q * c_1^{e_1} c_2^{e_2} with formal constants subject to c_j^4 v_j = 1; exponents kept in [0, 4).
struct FormalValue {
    GQ q;
    std::array<int, 2> c{0, 0};
    bool is_one() const { return c[0] == 0 && c[1] == 0 && q == GQ(1); }
    std::string to_string() const {
        std::string s = q.to_string();
        for (int j = 0; j < 2; ++j)
            if (c[j]) s += "*c" + std::to_string(j + 1) + (c[j] > 1 ? "^" + std::to_string(c[j]) : "");
        return s;
    }
    friend bool operator==(const FormalValue& a, const FormalValue& b) { return a.q == b.q && a.c == b.c; }
    friend bool operator<(const FormalValue& a, const FormalValue& b) {
        if (a.c != b.c) return a.c < b.c;
        return a.q < b.q;
    }
};

// lead * c^{c_exp} * prod (x - root)^mult
struct RationalMap {
    GQ lead = GQ(1);
    std::array<int, 2> c_exp{0, 0};
    std::vector<std::pair<GQ, int>> factors;

    int degree() const {
        int d = 0;
        for (const auto& f : factors) d += f.second;
        return d;
    }
    bool constant() const { return factors.empty(); }
    int ord(const GQ& x) const {
        for (const auto& [r, m] : factors)
            if (r == x) return m;
        return 0;
    }
    // Exact value at a point that is neither zero nor pole (c-exponents not yet normalised).
    FormalValue value(const GQ& x) const {
        GQ v = lead;
        for (const auto& [r, m] : factors) {
            if (r == x) throw std::domain_error("RationalMap: evaluation at a zero or pole");
            v = v * (x - r).pow(m);
        }
        return FormalValue{v, c_exp};
    }
    // Value at infinity for degree-0 maps.
    FormalValue value_at_infinity() const {
        if (degree() != 0) throw std::domain_error("RationalMap: value at infinity needs divisor degree 0");
        return FormalValue{lead, c_exp};
    }
    RationalMap pow(int e) const {
        RationalMap r;
        r.lead = lead.pow(e);
        r.c_exp = {c_exp[0] * e, c_exp[1] * e};
        for (const auto& [x, m] : factors) r.factors.push_back({x, m * e});
        return r;
    }
};

struct CubicalCurve {
    int index = 0;                    // 1..4
    int s = 0;                        // s(i) = -1 for odd i, +1 for even i
    RationalMap alpha;                // coordinate in C^*
    std::array<RationalMap, 3> cube;  // f^s, h_1^{2s}, h_2^{2s}: cubical coordinates 2, 3, 4
};

struct FourConfig {
    GQ a1, a2, b1, b2;
    GQ unit = GQ(1);            // h_1 has roots +-u, h_2 has roots +-iu
    RationalMap f, h1, h2;      // h_j carries the formal constant c_j
    std::array<GQ, 2> v;        // relation c_j^4 v_j = 1, v_j = (R_j(a_1) R_j(a_2))^2, R_j = h_j / c_j
    std::array<CubicalCurve, 4> curves;

    FormalValue normalize(FormalValue x) const {
        for (int j = 0; j < 2; ++j) {
            int e = x.c[j];
            int r = ((e % 4) + 4) % 4;
            int k = (e - r) / 4;  // c^e = c^r (c^4)^k = c^r v^{-k}
            x.q = x.q * v[j].pow(-k);
            x.c[j] = r;
        }
        return x;
    }
};

namespace detail {

inline RationalMap mobius_square(const GQ& r, int cj) {
    RationalMap m;
    m.factors = {{r, 2}, {-r, -2}};
    if (cj >= 0) m.c_exp[cj] = 1;
    return m;
}

}  // namespace detail

inline FourConfig build_config(const GQ& a1, const GQ& a2, const GQ& b1, const GQ& b2, const GQ& unit = GQ(1)) {
    if (unit.is_zero()) throw std::invalid_argument("build_config: unit must be nonzero");
    std::array<GQ, 4> pts{a1, a2, b1, b2};
    std::array<const char*, 4> names{"a1", "a2", "b1", "b2"};
    std::array<GQ, 4> special{unit, -unit, GQ::I() * unit, -(GQ::I() * unit)};
    for (int i = 0; i < 4; ++i) {
        if (pts[i].is_zero()) throw std::invalid_argument(std::string("build_config: ") + names[i] + " must be nonzero");
        for (int j = 0; j < i; ++j)
            if (pts[i] == pts[j])
                throw std::invalid_argument(std::string("build_config: ") + names[j] + " and " + names[i] + " must be distinct");
        for (const auto& sp : special)
            if (pts[i] == sp)
                throw std::invalid_argument(std::string("build_config: ") + names[i] + " must avoid {±1, ±i} (times the unit)");
    }
    if (!(a1 * a2 == -(b1 * b2))) throw std::invalid_argument("build_config: condition a1 a2 = -b1 b2 fails");

    FourConfig F;
    F.a1 = a1; F.a2 = a2; F.b1 = b1; F.b2 = b2; F.unit = unit;
    F.f.factors = {{a1, 2}, {a2, 2}, {b1, -2}, {b2, -2}};
    F.h1 = detail::mobius_square(unit, 0);
    F.h2 = detail::mobius_square(GQ::I() * unit, 1);
    for (int j = 0; j < 2; ++j) {
        RationalMap R = detail::mobius_square(j == 0 ? unit : GQ::I() * unit, -1);
        GQ p = R.value(a1).q * R.value(a2).q;
        F.v[j] = p * p;
    }
    for (int i = 1; i <= 4; ++i) {
        CubicalCurve& K = F.curves[i - 1];
        K.index = i;
        K.s = i % 2 ? -1 : 1;
        RationalMap al;
        if (i == 1) { al.lead = GQ(1) / a1; al.factors = {{GQ(0), 1}}; }          // x / a1
        if (i == 2) { al.lead = a2; al.factors = {{GQ(0), -1}}; }                // a2 / x
        if (i == 3) { al.lead = -(GQ(1) / a1); al.factors = {{GQ(0), 1}}; }      // -x / a1
        if (i == 4) { al.lead = -a2; al.factors = {{GQ(0), -1}}; }               // -a2 / x
        K.alpha = al;
        K.cube = {F.f.pow(K.s), F.h1.pow(2 * K.s), F.h2.pow(2 * K.s)};
    }
    return F;
}

struct ConditionReport {
    bool plus_at_unit = false;   // f(u) = f(-u)
    bool plus_at_i = false;      // f(iu) = f(-iu)
    bool plus = false;
    std::array<bool, 2> star{false, false};  // (h_j(a1) h_j(a2))^2 = (h_j(b1) h_j(b2))^2, c-free
    bool star_all = false;
    GQ f0, finf;
    bool f0_equals_finf = false;
    std::array<GQ, 2> c4;        // c_j^4 = 1 / v_j
    std::array<std::string, 2> relation;
};

inline ConditionReport check_conditions(const FourConfig& F) {
    ConditionReport r;
    GQ u = F.unit, iu = GQ::I() * F.unit;
    r.plus_at_unit = F.f.value(u).q == F.f.value(-u).q;
    r.plus_at_i = F.f.value(iu).q == F.f.value(-iu).q;
    r.plus = r.plus_at_unit && r.plus_at_i;
    for (int j = 0; j < 2; ++j) {
        RationalMap R = detail::mobius_square(j == 0 ? u : iu, -1);
        GQ pa = R.value(F.a1).q * R.value(F.a2).q, pb = R.value(F.b1).q * R.value(F.b2).q;
        r.star[j] = pa * pa == pb * pb;
        r.c4[j] = GQ(1) / F.v[j];
        r.relation[j] = "c" + std::to_string(j + 1) + "^4 * (" + F.v[j].to_string() + ") = 1";
    }
    r.star_all = r.star[0] && r.star[1];
    r.f0 = F.f.value(GQ(0)).q;
    r.finf = F.f.value_at_infinity().q;
    r.f0_equals_finf = r.f0 == r.finf;
    return r;
}

// ---------------------------------------------------------------------------
// Cubical boundary: sum_j (-1)^j (d_j^0 - d_j^inf), j = 2, 3, 4 the cubical coordinates.

struct BoundaryPoint {
    int face = 0;                     // 2, 3, 4
    GQ alpha;                         // coordinate in C^*
    std::array<FormalValue, 2> rest;  // remaining cubical coordinates, in order
    friend bool operator<(const BoundaryPoint& a, const BoundaryPoint& b) {
        if (a.face != b.face) return a.face < b.face;
        if (!(a.alpha == b.alpha)) return a.alpha < b.alpha;
        if (!(a.rest[0] == b.rest[0])) return a.rest[0] < b.rest[0];
        return a.rest[1] < b.rest[1];
    }
    friend bool operator==(const BoundaryPoint& a, const BoundaryPoint& b) {
        return a.face == b.face && a.alpha == b.alpha && a.rest == b.rest;
    }
    std::string to_string() const {
        return "face " + std::to_string(face) + " @ (" + alpha.to_string() + "; " + rest[0].to_string() + ", " +
               rest[1].to_string() + ")";
    }
};

struct Incidence {
    int curve = 0;        // 1..4
    GQ x;                 // parameter value
    BoundaryPoint point;
    int coefficient = 0;  // (-1)^face * ord
    bool dropped = false; // another coordinate equals 1: not a point of the cube
};

struct BoundaryResult {
    std::vector<Incidence> incidences;
    std::vector<std::pair<BoundaryPoint, int>> total;  // nonzero aggregate
    std::size_t skipped_outside = 0;                   // alpha(x) in {0, inf}
    bool zero() const { return total.empty(); }
};

inline BoundaryResult cubical_boundary(const FourConfig& F, const std::vector<int>& which = {1, 2, 3, 4}) {
    BoundaryResult res;
    std::map<BoundaryPoint, int> agg;
    for (int i : which) {
        const CubicalCurve& K = F.curves.at(i - 1);
        for (int j = 0; j < 3; ++j) {
            if (K.cube[j].constant()) throw std::domain_error("cubical_boundary: constant cubical coordinate on K" + std::to_string(i));
            if (K.cube[j].degree() != 0) throw std::domain_error("cubical_boundary: coordinate with a zero or pole at infinity");
            for (const auto& [x, m] : K.cube[j].factors) {
                if (m == 0) continue;
                if (K.alpha.ord(x) != 0) { ++res.skipped_outside; continue; }
                Incidence inc;
                inc.curve = i;
                inc.x = x;
                inc.point.face = j + 2;
                inc.point.alpha = F.normalize(K.alpha.value(x)).q;
                int r = 0;
                for (int o = 0; o < 3; ++o) {
                    if (o == j) continue;
                    if (K.cube[o].ord(x) != 0)
                        throw std::domain_error("cubical_boundary: K" + std::to_string(i) + " meets two faces at x = " + x.to_string());
                    inc.point.rest[r] = F.normalize(K.cube[o].value(x));
                    inc.dropped = inc.dropped || inc.point.rest[r].is_one();
                    ++r;
                }
                inc.coefficient = (inc.point.face % 2 ? -1 : 1) * m;
                if (!inc.dropped) agg[inc.point] += inc.coefficient;
                res.incidences.push_back(inc);
            }
        }
    }
    for (const auto& [p, c] : agg)
        if (c != 0) res.total.push_back({p, c});
    return res;
}

// ---------------------------------------------------------------------------
// Search for data satisfying (+)

struct SearchResult {
    GQ a1, a2, b1, b2;
    int height = 0;
};

namespace detail {

inline std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    mpz_class n = q.get_num(), d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return mpq_class(rn, rd);
}

// Square root in Q(i), if any.
inline std::optional<GQ> gaussian_sqrt(const GQ& z) {
    auto m = rational_sqrt(z.norm());
    if (!m) return std::nullopt;
    auto x = rational_sqrt((*m + z.re) / 2), y = rational_sqrt((*m - z.re) / 2);
    if (!x || !y) return std::nullopt;
    GQ r(*x, z.im < 0 ? -*y : *y);
    if (!(r * r == z)) return std::nullopt;
    return r;
}

// Gaussian rationals (p + q i)/d with max(|p|, |q|, d) == h, in a fixed order.
inline std::vector<GQ> of_height(int h) {
    std::vector<GQ> out;
    for (int d = 1; d <= h; ++d)
        for (int p = -h; p <= h; ++p)
            for (int q = -h; q <= h; ++q) {
                if (std::max({std::abs(p), std::abs(q), d}) != h) continue;
                mpz_class g = gcd(gcd(mpz_class(std::abs(p)), mpz_class(std::abs(q))), mpz_class(d));
                if (g != 1) continue;
                out.push_back(GQ(mpq_class(p, d), mpq_class(q, d)));
            }
    return out;
}

}  // namespace detail

// For fixed a1, a2 both halves of (+) are linear in s_b = b1 + b2 (b1 b2 = -a1 a2 is fixed);
// b1, b2 are then the roots of x^2 - s_b x - a1 a2 when the discriminant is a square in Q(i).
inline std::optional<SearchResult> solve_for_b(const GQ& a1, const GQ& a2) {
    GQ sa = a1 + a2, p = a1 * a2, I = GQ::I();
    // f(1) = f(-1):  (1 - sa + p)(1 + sb - p) = sg (1 + sa + p)(1 - sb - p)
    // f(i) = f(-i):  (p - 1 - i sa)(-1 - p + i sb) = sg' (p - 1 + i sa)(-1 - p - i sb)
    for (int sg : {1, -1})
        for (int sg2 : {1, -1}) {
            GQ A1 = (GQ(1) - sa + p) + (GQ(1) + sa + p) * GQ(sg);
            GQ B1 = (GQ(1) + sa + p) * (GQ(1) - p) * GQ(sg) - (GQ(1) - sa + p) * (GQ(1) - p);
            GQ A2 = (p - GQ(1) - I * sa) * I + (p - GQ(1) + I * sa) * I * GQ(sg2);
            GQ B2 = (p - GQ(1) + I * sa) * (GQ(-1) - p) * GQ(sg2) - (p - GQ(1) - I * sa) * (GQ(-1) - p);
            std::vector<GQ> cands;
            if (!A1.is_zero()) cands.push_back(B1 / A1);
            else if (!A2.is_zero()) { if (B1.is_zero()) cands.push_back(B2 / A2); }
            else if (B1.is_zero() && B2.is_zero()) {
                for (int h = 0; h <= 3; ++h)
                    for (const auto& g : h ? detail::of_height(h) : std::vector<GQ>{GQ(0)}) cands.push_back(g);
            }
            for (const auto& sb : cands) {
                if (!(A1 * sb == B1) || !(A2 * sb == B2)) continue;
                auto r = detail::gaussian_sqrt(sb * sb + GQ(4) * p);
                if (!r) continue;
                GQ b1 = (sb + *r) / GQ(2), b2 = (sb - *r) / GQ(2);
                try {
                    auto F = build_config(a1, a2, b1, b2);
                    if (check_conditions(F).plus) return SearchResult{a1, a2, b1, b2, 0};
                } catch (const std::invalid_argument&) {
                }
            }
        }
    return std::nullopt;
}

inline std::optional<SearchResult> search_plus_config(int max_height = 20) {
    std::vector<GQ> seen;
    for (int h = 1; h <= max_height; ++h) {
        auto fresh = detail::of_height(h);
        std::vector<GQ> all = seen;
        all.insert(all.end(), fresh.begin(), fresh.end());
        for (const auto& a1 : all)
            for (const auto& a2 : fresh) {
                for (const auto& [x, y] : {std::make_pair(a1, a2), std::make_pair(a2, a1)}) {
                    if (x == y) continue;
                    if (auto r = solve_for_b(x, y)) { r->height = h; return r; }
                }
            }
        seen = all;
    }
    return std::nullopt;
}

// First small datum with a1 a2 = -b1 b2 violating (+) and the Weil identity (*).
inline std::optional<SearchResult> search_negative_control(int max_height = 4) {
    std::vector<GQ> vals;
    for (int h = 1; h <= max_height; ++h)
        for (const auto& g : detail::of_height(h)) vals.push_back(g);
    for (const auto& a1 : vals)
        for (const auto& a2 : vals)
            for (const auto& b1 : vals) {
                if (a1 == a2 || b1.is_zero()) continue;
                GQ b2 = -(a1 * a2) / b1;
                try {
                    auto F = build_config(a1, a2, b1, b2);
                    auto c = check_conditions(F);
                    if (!c.plus && !c.star_all) return SearchResult{a1, a2, b1, b2, 0};
                } catch (const std::invalid_argument&) {
                }
            }
    return std::nullopt;
}

}  // namespace cycleforge
