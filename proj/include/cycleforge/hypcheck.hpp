#pragma once

#include "cyclespace.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycleforge {

// Element of Lambda = Z^{n-1} (+) Z/2: coefficients of tau_i = [t_i - w_1] and of eps = [w_2 - w_1].
struct Translation {
    std::vector<int> free;
    int torsion = 0;

    static Translation zero(int n) { return Translation{std::vector<int>(std::max(n - 1, 0), 0), 0}; }
    Translation plus(const Translation& o) const {
        if (o.free.size() != free.size()) throw std::invalid_argument("Translation: rank mismatch");
        Translation t = *this;
        for (std::size_t i = 0; i < free.size(); ++i) t.free[i] += o.free[i];
        t.torsion = (torsion + o.torsion) & 1;
        return t;
    }
    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < free.size(); ++i) {
            if (!free[i]) continue;
            if (!s.empty()) s += "+";
            if (free[i] != 1) s += std::to_string(free[i]);
            s += "t" + std::to_string(i + 1);
        }
        if (torsion) s += s.empty() ? "e" : "+e";
        return s.empty() ? "0" : s;
    }
    friend auto operator<=>(const Translation&, const Translation&) = default;
    friend bool operator==(const Translation&, const Translation&) = default;
};

// G(k)*[c] = [k]_*(W_1 (x) f) translated by c; K*[c]; residual unknowns A(k,c), k odd.
struct KSymbol {
    enum Kind { G = 0, K = 1, A = 2 };
    Kind kind;
    int k = 0;  // unused (0) for K
    Translation c;

    std::string to_string() const {
        switch (kind) {
            case G: return "G(" + std::to_string(k) + ")*[" + c.to_string() + "]";
            case K: return "K*[" + c.to_string() + "]";
            default: return "A(" + std::to_string(k) + "," + c.to_string() + ")";
        }
    }
    friend auto operator<=>(const KSymbol&, const KSymbol&) = default;
    friend bool operator==(const KSymbol&, const KSymbol&) = default;
};

// Normal form: K*[c+eps] = K*[c] (K is the eps-symmetric pair W_1 (x) f + W_2 (x) f),
// A(k,c+eps) = -A(k,c); only torsion-free A and K symbols are stored.
class KSymbolVector {
public:
    using Map = std::map<KSymbol, mpq_class>;

    void add(KSymbol s, const mpq_class& coeff) {
        if (coeff == 0) return;
        mpq_class c = coeff;
        if (s.kind == KSymbol::K) { s.c.torsion = 0; s.k = 0; }
        if (s.kind == KSymbol::A) {
            if (s.k % 2 == 0) throw std::invalid_argument("KSymbolVector: residual A(k,c) needs odd k");
            if (s.c.torsion) { s.c.torsion = 0; c = -c; }
        }
        if (s.kind == KSymbol::G && s.k < 1) throw std::invalid_argument("KSymbolVector: G(k) needs k >= 1");
        auto it = terms_.find(s);
        if (it == terms_.end()) terms_.emplace(std::move(s), c);
        else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    void add(const KSymbolVector& o, const mpq_class& scale = 1) {
        if (scale == 0) return;
        for (const auto& [s, c] : o.terms_) add(s, c * scale);
    }
    mpq_class coeff(KSymbol s) const {
        mpq_class sign = 1;
        if (s.kind == KSymbol::K) s.c.torsion = 0;
        if (s.kind == KSymbol::A && s.c.torsion) { s.c.torsion = 0; sign = -1; }
        auto it = terms_.find(s);
        return it == terms_.end() ? mpq_class(0) : sign * it->second;
    }
    KSymbolVector scaled(const mpq_class& a) const {
        KSymbolVector v;
        v.add(*this, a);
        return v;
    }
    KSymbolVector translated(const Translation& t) const {
        KSymbolVector v;
        for (const auto& [s, c] : terms_) v.add(KSymbol{s.kind, s.k, s.c.plus(t)}, c);
        return v;
    }
    KSymbolVector part(KSymbol::Kind kind) const {
        KSymbolVector v;
        for (const auto& [s, c] : terms_)
            if (s.kind == kind) v.terms_.emplace(s, c);
        return v;
    }
    bool has(KSymbol::Kind kind) const {
        for (const auto& [s, c] : terms_)
            if (s.kind == kind) return true;
        return false;
    }
    const Map& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    friend bool operator==(const KSymbolVector&, const KSymbolVector&) = default;

private:
    Map terms_;
};

// ---------------------------------------------------------------------------
// Specialisation a_1 -> w_1, b_1 -> w_2, a_{i+1}, b_{i+1} -> t_i

namespace detail {

// Distinct letter-multiplicity functions: injective placements of the parts on n letters, modulo equal parts.
inline void assignments(const std::vector<int>& parts, int nletters, std::vector<std::vector<int>>& out) {
    std::map<int, int> avail;
    for (int p : parts) ++avail[p];
    std::vector<int> cur(nletters, 0);
    int left = static_cast<int>(parts.size());
    auto rec = [&](auto& self, int letter) -> void {
        if (left == 0) { out.push_back(cur); return; }
        if (nletters - letter < left) return;
        self(self, letter + 1);
        for (auto& [p, cnt] : avail) {
            if (!cnt) continue;
            --cnt; --left;
            cur[letter] = p;
            self(self, letter + 1);
            cur[letter] = 0;
            ++cnt; ++left;
        }
    };
    rec(rec, 0);
}

inline mpz_class factorial(int m) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m));
    return f;
}

}  // namespace detail

inline KSymbolVector specialize_class(const EmbeddingClass& X) {
    int n = X.n;
    if (n < 1) throw std::invalid_argument("specialize_class: n must be >= 1");
    if (X.pair.weight() > n) throw std::invalid_argument("specialize_class: class does not fit n");
    KSymbolVector out;
    std::vector<std::pair<Partition, Partition>> types{{X.pair.first, X.pair.second}};
    if (!X.pair.symmetric()) types.push_back({X.pair.second, X.pair.first});
    int k = X.k();
    mpz_class top = detail::factorial(n + 1) / detail::factorial(k);
    for (const auto& [x, y] : types) {
        std::vector<std::vector<int>> MA, MB;
        detail::assignments(x.parts, n, MA);
        detail::assignments(y.parts, n, MB);
        for (const auto& ma : MA)
            for (const auto& mb : MB) {
                mpz_class denom = 1;
                for (int v : ma) denom *= detail::factorial(v);
                for (int v : mb) denom *= detail::factorial(v);
                Translation c = Translation::zero(n);
                for (int i = 0; i + 1 < n; ++i) c.free[i] = ma[i + 1] + mb[i + 1];
                c.torsion = mb[0] & 1;
                out.add(KSymbol{KSymbol::G, k, c}, mpq_class(top / denom));
            }
    }
    return out;
}

// (R-even) G(k)*[c] -> (k^2/2) K*[c];  (R-odd) G(k)*[c] -> (1/2)(k^2 K*[c] + A(k,c)).
inline KSymbolVector reduce(const KSymbolVector& v) {
    KSymbolVector out;
    for (const auto& [s, c] : v.terms()) {
        if (s.kind != KSymbol::G) { out.add(s, c); continue; }
        out.add(KSymbol{KSymbol::K, 0, s.c}, c * mpq_class(s.k * s.k) / 2);
        if (s.k % 2) out.add(KSymbol{KSymbol::A, s.k, s.c}, c / 2);
    }
    return out;
}

// sum_{S subset {1..n-1}} (-1)^{n-1-|S|} K*[sum_{i in S} tau_i]
inline KSymbolVector target_vector(int n) {
    if (n < 2) throw std::invalid_argument("target_vector: n must be >= 2");
    KSymbolVector out;
    int m = n - 1;
    for (unsigned S = 0; S < (1u << m); ++S) {
        Translation c = Translation::zero(n);
        int size = 0;
        for (int i = 0; i < m; ++i)
            if (S >> i & 1u) { c.free[i] = 1; ++size; }
        out.add(KSymbol{KSymbol::K, 0, c}, (m - size) % 2 ? -1 : 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Certified relations from tau-invariant cycles on C x C
//
// A curve on C x C is parametrised by t in C with coordinates in {t, sigma(t), w_1, w_2}
// and carries f^{exp}, f the Weierstrass function with div f = 2 w_1 - 2 w_2 (f o sigma = f).
// Pushing a tau = (id, sigma)-invariant combination with vanishing total divisor forward to J(C)
// gives a decomposable element.

enum class Coord { id, sigma, w1, w2 };

struct SurfaceCurve {
    Coord x, y;
    int coeff = 1;
    int f_exp = 1;
};

using SurfaceCycle = std::vector<SurfaceCurve>;

// Delta + Delta' - 2 C x {w_1} - 2 {w_2} x C
inline SurfaceCycle six_curve_cycle() {
    return {{Coord::id, Coord::id, 1, 1},
            {Coord::id, Coord::sigma, 1, 1},
            {Coord::id, Coord::w1, -2, 1},
            {Coord::w2, Coord::id, -2, 1}};
}

namespace detail {

// Weierstrass points are fixed by sigma, so every coordinate lands in {w1, w2} at t = w_i.
inline int at_weierstrass(Coord c, int wi) {
    switch (c) {
        case Coord::w1: return 1;
        case Coord::w2: return 2;
        default: return wi;
    }
}

inline std::pair<Coord, Coord> normal_curve(Coord x, Coord y) {
    auto moving = [](Coord c) { return c == Coord::id || c == Coord::sigma; };
    auto flip = [](Coord c) { return c == Coord::id ? Coord::sigma : c == Coord::sigma ? Coord::id : c; };
    Coord lead = moving(x) ? x : y;
    if (lead == Coord::sigma) return {flip(x), flip(y)};  // reparametrise t -> sigma(t)
    return {x, y};
}

inline std::map<std::pair<Coord, Coord>, int> as_multiset(const SurfaceCycle& z) {
    std::map<std::pair<Coord, Coord>, int> m;
    for (const auto& c : z) {
        auto key = normal_curve(c.x, c.y);
        m[key] += c.coeff * c.f_exp;
        if (m[key] == 0) m.erase(key);
    }
    return m;
}

}  // namespace detail

// Total divisor sum coeff * f_exp * (2 (x(w1),y(w1)) - 2 (x(w2),y(w2))).
inline std::map<std::pair<int, int>, int> cycle_divisor(const SurfaceCycle& z) {
    std::map<std::pair<int, int>, int> div;
    for (const auto& c : z) {
        if ((c.x == Coord::w1 || c.x == Coord::w2) && (c.y == Coord::w1 || c.y == Coord::w2))
            throw std::invalid_argument("cycle_divisor: constant curve");
        for (int wi = 1; wi <= 2; ++wi) {
            auto key = std::make_pair(detail::at_weierstrass(c.x, wi), detail::at_weierstrass(c.y, wi));
            div[key] += c.coeff * c.f_exp * (wi == 1 ? 2 : -2);
        }
    }
    for (auto it = div.begin(); it != div.end();) it = it->second == 0 ? div.erase(it) : std::next(it);
    return div;
}

inline bool tau_invariant(const SurfaceCycle& z) {
    SurfaceCycle t = z;
    for (auto& c : t) c.y = c.y == Coord::id ? Coord::sigma : c.y == Coord::sigma ? Coord::id : c.y;
    return detail::as_multiset(t) == detail::as_multiset(z);
}

// Image under (x, y) -> a [x - w_1] + b [y - w_1] in J(C).
inline KSymbolVector push_forward(const SurfaceCycle& z, int a, int b, int n) {
    KSymbolVector out;
    auto mult = [](Coord c) { return c == Coord::id ? 1 : c == Coord::sigma ? -1 : 0; };
    auto tors = [](Coord c) { return c == Coord::w2 ? 1 : 0; };
    for (const auto& c : z) {
        int m = a * mult(c.x) + b * mult(c.y);
        if (m == 0) continue;  // contracted to a point
        Translation t = Translation::zero(n);
        t.torsion = (a * tors(c.x) + b * tors(c.y)) & 1;
        // [-1]_* fixes W_1 (x) f since -[t - w_1] = [sigma t - w_1] and f o sigma = f.
        out.add(KSymbol{KSymbol::G, m < 0 ? -m : m, t}, c.coeff * c.f_exp);
    }
    return out;
}

struct Certificate {
    int k = 0;                     // push-forward (x, y) -> (k-1)[x - w_1] + [y - w_1]
    SurfaceCycle cycle;
    bool divisor_cancels = false;
    bool tau_invariant = false;
    KSymbolVector image;           // G-symbols, decomposable
    KSymbolVector reduced;         // reduce(image)
    bool valid() const { return divisor_cancels && tau_invariant && !reduced.has(KSymbol::K); }
};

inline Certificate certify(int k, int n) {
    if (k < 2) throw std::invalid_argument("certify: k must be >= 2");
    Certificate c;
    c.k = k;
    c.cycle = six_curve_cycle();
    c.divisor_cancels = cycle_divisor(c.cycle).empty();
    c.tau_invariant = tau_invariant(c.cycle);
    c.image = push_forward(c.cycle, k - 1, 1, n);
    c.reduced = reduce(c.image);
    return c;
}

// Eliminates A(k,c), odd k >= 3, from the top down with the certified relations
// (1/2)(A(k,c) + A(k-2,c)) - A(1,c) == 0 coming from certify(k, n), odd k.
inline KSymbolVector apply_certified_relations(const KSymbolVector& v, int n) {
    int top = 0;
    for (const auto& [s, c] : v.terms())
        if (s.kind == KSymbol::A) top = std::max(top, s.k);
    KSymbolVector out = v;
    for (int k = top; k >= 3; k -= 2) {
        if (k % 2 == 0) continue;
        Certificate cert = certify(k, n);
        if (!cert.valid()) throw std::logic_error("apply_certified_relations: certificate for k=" + std::to_string(k) + " invalid");
        mpq_class lead = cert.reduced.coeff(KSymbol{KSymbol::A, k, Translation::zero(n)});
        if (lead == 0) throw std::logic_error("apply_certified_relations: relation does not involve A(k)");
        std::vector<std::pair<Translation, mpq_class>> hits;
        for (const auto& [s, c] : out.terms())
            if (s.kind == KSymbol::A && s.k == k) hits.push_back({s.c, c});
        for (const auto& [t, c] : hits) out.add(cert.reduced.translated(t), -c / lead);
    }
    return out;
}

// ---------------------------------------------------------------------------

struct SpecializationReport {
    int n = 0;
    std::size_t kernel_dim = 0;
    std::size_t image_dim = 0;
    bool literal_residuals_zero = false;   // spec rules only
    bool residuals_zero = false;           // after certified odd-translate relations
    bool proportional = false;             // every image is a multiple of target_vector(n)
    bool scalar_iff_diagonal = false;      // scalar != 0 exactly when the small-diagonal coefficient != 0
    bool kernel_characterization = false;  // scalar functional is a nonzero multiple of the diagonal coefficient
    std::vector<mpq_class> scalars;
    std::vector<mpq_class> diagonal_coefficients;
    std::vector<std::size_t> literal_residual_terms;
    bool pass = false;
};

struct HypcheckOptions {
    bool allow_large_n = false;
};

inline SpecializationReport hypothesis_check(int n, const std::vector<QVector>& kernel, const HypcheckOptions& opt = {}) {
    if (n < 2) throw std::invalid_argument("hypothesis_check: n must be >= 2");
    if (n > 6 && !opt.allow_large_n) throw std::invalid_argument("hypothesis_check: n > 6 requires allow_large_n");
    if (kernel.empty()) throw std::invalid_argument("hypothesis_check: missing kernel basis");
    auto Es = enumerate_E(n);
    QMatrix M = boundary_matrix(n);
    for (const auto& v : kernel) {
        if (v.size() != Es.size()) throw std::invalid_argument("hypothesis_check: vector has wrong length");
        for (const auto& y : M.apply(v))
            if (y != 0) throw std::invalid_argument("hypothesis_check: vector is not in the kernel of the boundary matrix");
    }
    std::vector<KSymbolVector> spec;
    for (const auto& X : Es) spec.push_back(specialize_class(X));
    std::size_t diag = small_diagonal_index(n);
    KSymbolVector target = target_vector(n);
    KSymbol k0{KSymbol::K, 0, Translation::zero(n)};
    mpq_class t0 = target.coeff(k0);

    SpecializationReport rep;
    rep.n = n;
    rep.kernel_dim = kernel.size();
    rep.literal_residuals_zero = rep.residuals_zero = rep.proportional = rep.scalar_iff_diagonal = true;
    std::vector<KSymbolVector> images;
    for (const auto& v : kernel) {
        KSymbolVector raw;
        for (std::size_t i = 0; i < Es.size(); ++i) raw.add(spec[i], v[i]);
        KSymbolVector lit = reduce(raw);
        std::size_t lit_res = lit.part(KSymbol::A).size();
        rep.literal_residual_terms.push_back(lit_res);
        rep.literal_residuals_zero = rep.literal_residuals_zero && lit_res == 0;
        KSymbolVector img = apply_certified_relations(lit, n);
        rep.residuals_zero = rep.residuals_zero && !img.has(KSymbol::A);
        mpq_class lambda = img.coeff(k0) / t0;
        rep.proportional = rep.proportional && img.part(KSymbol::K) == target.scaled(lambda);
        rep.scalars.push_back(lambda);
        rep.diagonal_coefficients.push_back(v[diag]);
        rep.scalar_iff_diagonal = rep.scalar_iff_diagonal && ((lambda != 0) == (v[diag] != 0));
        images.push_back(std::move(img));
    }
    // Image dimension over the symbols that occur.
    std::map<KSymbol, std::size_t> index;
    for (const auto& img : images)
        for (const auto& [s, c] : img.terms()) index.emplace(s, index.size());
    std::vector<QVector> rows;
    for (const auto& img : images) {
        QVector r(index.size(), 0);
        for (const auto& [s, c] : img.terms()) r[index[s]] = c;
        rows.push_back(std::move(r));
    }
    rep.image_dim = index.empty() ? 0 : rank_of_vectors(rows);
    // scalar(v) = kappa * m_diag(v) for one kappa != 0 on the whole basis.
    std::optional<mpq_class> kappa;
    bool ok = true;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        const auto& d = rep.diagonal_coefficients[i];
        const auto& s = rep.scalars[i];
        if (d == 0) { ok = ok && s == 0; continue; }
        mpq_class q = s / d;
        if (!kappa) kappa = q;
        ok = ok && q == *kappa;
    }
    rep.kernel_characterization = ok && kappa && *kappa != 0;
    rep.pass = rep.residuals_zero && rep.proportional && rep.scalar_iff_diagonal && rep.image_dim == 1 &&
               rep.kernel_characterization;
    return rep;
}

}  // namespace cycleforge
