#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycleforge {

// Permutation of {1..k}, k <= 16. Images are stored 0-based.
// Group law: compose(p, q) acts as "first q, then p", i.e. (p*q)(x) = p(q(x)).
class Perm {
public:
    static constexpr int max_degree = 16;

    Perm() : Perm(1) {}
    explicit Perm(int degree) : deg_(static_cast<std::uint8_t>(degree)) {
        if (degree < 1 || degree > max_degree) throw std::invalid_argument("Perm: degree out of range");
        for (int i = 0; i < max_degree; ++i) img_[i] = static_cast<std::uint8_t>(i);
    }

    // One-line notation, 1-based: images[i-1] = p(i).
    static Perm from_images(const std::vector<int>& images) {
        Perm p(static_cast<int>(images.size()));
        std::array<bool, max_degree> seen{};
        for (std::size_t i = 0; i < images.size(); ++i) {
            int v = images[i];
            if (v < 1 || v > p.degree() || seen[v - 1]) throw std::invalid_argument("Perm: images are not a bijection");
            seen[v - 1] = true;
            p.img_[i] = static_cast<std::uint8_t>(v - 1);
        }
        return p;
    }

    static Perm identity(int degree) { return Perm(degree); }

    static Perm transposition(int degree, int i, int j) {
        Perm p(degree);
        if (i < 1 || j < 1 || i > degree || j > degree || i == j) throw std::invalid_argument("Perm: bad transposition");
        std::swap(p.img_[i - 1], p.img_[j - 1]);
        return p;
    }

    // Parses cycle notation such as "(1 2)(3 4)"; "()" or "" is the identity.
    // Commas are accepted as separators inside a cycle.
    static Perm parse(const std::string& text, int degree) {
        Perm p(degree);
        std::size_t pos = 0;
        std::array<bool, max_degree> used{};
        while (pos < text.size()) {
            char ch = text[pos];
            if (std::isspace(static_cast<unsigned char>(ch))) { ++pos; continue; }
            if (ch != '(') throw std::invalid_argument("Perm: expected '(' in \"" + text + "\"");
            auto close = text.find(')', pos);
            if (close == std::string::npos) throw std::invalid_argument("Perm: unbalanced parenthesis in \"" + text + "\"");
            std::string body = text.substr(pos + 1, close - pos - 1);
            std::replace(body.begin(), body.end(), ',', ' ');
            std::istringstream in(body);
            std::vector<int> cyc;
            int v;
            while (in >> v) {
                if (v < 1 || v > degree || used[v - 1]) throw std::invalid_argument("Perm: bad point in \"" + text + "\"");
                used[v - 1] = true;
                cyc.push_back(v - 1);
            }
            if (!in.eof()) throw std::invalid_argument("Perm: bad token in \"" + text + "\"");
            for (std::size_t i = 0; i < cyc.size(); ++i)
                p.img_[cyc[i]] = static_cast<std::uint8_t>(cyc[(i + 1) % cyc.size()]);
            pos = close + 1;
        }
        return p;
    }

    int degree() const { return deg_; }
    // 1-based application.
    int operator()(int x) const { return img_[x - 1] + 1; }
    int image0(int x) const { return img_[x]; }

    std::vector<int> images() const {
        std::vector<int> out(deg_);
        for (int i = 0; i < deg_; ++i) out[i] = img_[i] + 1;
        return out;
    }

    bool is_identity() const {
        for (int i = 0; i < deg_; ++i)
            if (img_[i] != i) return false;
        return true;
    }

    // Cycle notation; fixed points omitted; identity prints as "()".
    std::string to_string() const {
        std::string out;
        std::array<bool, max_degree> seen{};
        for (int i = 0; i < deg_; ++i) {
            if (seen[i] || img_[i] == i) continue;
            out += '(';
            int j = i;
            bool first = true;
            while (!seen[j]) {
                seen[j] = true;
                if (!first) out += ' ';
                out += std::to_string(j + 1);
                first = false;
                j = img_[j];
            }
            out += ')';
        }
        return out.empty() ? "()" : out;
    }

    friend bool operator==(const Perm& a, const Perm& b) {
        if (a.deg_ != b.deg_) return false;
        for (int i = 0; i < a.deg_; ++i)
            if (a.img_[i] != b.img_[i]) return false;
        return true;
    }
    // Degree first, then lexicographic on one-line notation.
    friend std::strong_ordering operator<=>(const Perm& a, const Perm& b) {
        if (a.deg_ != b.deg_) return a.deg_ <=> b.deg_;
        for (int i = 0; i < a.deg_; ++i)
            if (a.img_[i] != b.img_[i]) return a.img_[i] <=> b.img_[i];
        return std::strong_ordering::equal;
    }

private:
    friend Perm compose(const Perm&, const Perm&);
    friend Perm inverse(const Perm&);
    std::array<std::uint8_t, max_degree> img_{};
    std::uint8_t deg_ = 1;
};

inline Perm compose(const Perm& p, const Perm& q) {
    if (p.degree() != q.degree()) throw std::invalid_argument("compose: degree mismatch");
    Perm r(p.degree());
    for (int i = 0; i < p.degree(); ++i) r.img_[i] = p.img_[q.img_[i]];
    return r;
}

inline Perm inverse(const Perm& p) {
    Perm r(p.degree());
    for (int i = 0; i < p.degree(); ++i) r.img_[p.img_[i]] = static_cast<std::uint8_t>(i);
    return r;
}

// g p g^{-1}
inline Perm conjugate(const Perm& p, const Perm& g) {
    if (p.degree() != g.degree()) throw std::invalid_argument("conjugate: degree mismatch");
    return compose(compose(g, p), inverse(g));
}

inline Perm product(const std::vector<Perm>& xs) {
    if (xs.empty()) throw std::invalid_argument("product: empty sequence");
    Perm r = Perm::identity(xs.front().degree());
    for (const auto& x : xs) r = compose(r, x);
    return r;
}

struct CycleType {
    std::vector<int> parts;  // non-increasing, sums to the degree

    int degree() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    int cycles() const { return static_cast<int>(parts.size()); }
    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
        return s + "]";
    }
    static CycleType from_parts(std::vector<int> parts) {
        for (int v : parts)
            if (v < 1) throw std::invalid_argument("CycleType: parts must be positive");
        std::sort(parts.rbegin(), parts.rend());
        return CycleType{std::move(parts)};
    }
    friend auto operator<=>(const CycleType&, const CycleType&) = default;
    friend bool operator==(const CycleType&, const CycleType&) = default;
};

inline CycleType cycle_type(const Perm& p) {
    std::array<bool, Perm::max_degree> seen{};
    std::vector<int> parts;
    for (int i = 0; i < p.degree(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = p.image0(j)) { seen[j] = true; ++len; }
        parts.push_back(len);
    }
    std::sort(parts.rbegin(), parts.rend());
    return CycleType{parts};
}

inline int sign(const Perm& p) {
    auto ct = cycle_type(p);
    return (p.degree() - ct.cycles()) % 2 ? -1 : 1;
}

// Orbits of <gens> on {0..k-1} via union-find over generator images.
inline std::vector<std::vector<int>> orbits0(const std::vector<Perm>& gens) {
    if (gens.empty()) throw std::invalid_argument("orbits: empty generator set");
    int k = gens.front().degree();
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& g : gens) {
        if (g.degree() != k) throw std::invalid_argument("orbits: degree mismatch");
        for (int i = 0; i < k; ++i) {
            int a = find(i), b = find(g.image0(i));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<std::vector<int>> out;
    std::vector<int> slot(k, -1);
    for (int i = 0; i < k; ++i) {
        int r = find(i);
        if (slot[r] < 0) { slot[r] = static_cast<int>(out.size()); out.emplace_back(); }
        out[slot[r]].push_back(i);
    }
    return out;
}

inline bool is_transitive(const std::vector<Perm>& gens) { return orbits0(gens).size() == 1; }

// All permutations of degree d in lexicographic order of one-line notation.
inline std::vector<Perm> all_perms(int d) {
    std::vector<int> v(d);
    std::iota(v.begin(), v.end(), 1);
    std::vector<Perm> out;
    do out.push_back(Perm::from_images(v));
    while (std::next_permutation(v.begin(), v.end()));
    return out;
}

// Elements of <gens>, sorted.
inline std::vector<Perm> generated_subgroup(const std::vector<Perm>& gens) {
    if (gens.empty()) throw std::invalid_argument("generated_subgroup: no generators");
    std::vector<Perm> out{Perm::identity(gens.front().degree())};
    for (std::size_t h = 0; h < out.size(); ++h)
        for (const auto& g : gens) {
            Perm p = compose(g, out[h]);
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
        }
    std::sort(out.begin(), out.end());
    return out;
}

struct DeckGroup {
    std::size_t order = 0;
    std::vector<Perm> elements;
};

// Centraliser of <gens> in the full symmetric group (deck group of a connected cover).
// For transitive gens an element is fixed by its image of point 1, so at most k candidates.
inline DeckGroup deck_automorphisms(const std::vector<Perm>& gens) {
    if (!is_transitive(gens)) throw std::invalid_argument("deck_automorphisms: generators are not transitive");
    int k = gens.front().degree();
    // Spanning tree: word[x] = generator path from 0 to x.
    std::vector<int> via(k, -1), from(k, -1);
    std::vector<int> order{0};
    std::vector<bool> seen(k, false);
    seen[0] = true;
    for (std::size_t h = 0; h < order.size(); ++h) {
        int x = order[h];
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
            int y = gens[gi].image0(x);
            if (!seen[y]) { seen[y] = true; via[y] = static_cast<int>(gi); from[y] = x; order.push_back(y); }
        }
    }
    DeckGroup out;
    for (int t = 0; t < k; ++t) {
        std::vector<int> c(k, -1);
        c[0] = t;
        for (std::size_t h = 1; h < order.size(); ++h) {
            int y = order[h];
            c[y] = gens[via[y]].image0(c[from[y]]);
        }
        std::vector<int> one(k);
        for (int i = 0; i < k; ++i) one[i] = c[i] + 1;
        std::vector<int> sorted = one;
        std::sort(sorted.begin(), sorted.end());
        bool bij = true;
        for (int i = 0; i < k; ++i) bij = bij && sorted[i] == i + 1;
        if (!bij) continue;
        Perm cand = Perm::from_images(one);
        bool commutes = true;
        for (const auto& g : gens) commutes = commutes && compose(cand, g) == compose(g, cand);
        if (commutes) out.elements.push_back(cand);
    }
    std::sort(out.elements.begin(), out.elements.end());
    out.order = out.elements.size();
    return out;
}

}  // namespace cycleforge
