#pragma once

#include "hurwitz.hpp"  // ResourceError
#include "partitions.hpp"
#include "rational.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycleforge {

// Unordered pair {alpha, beta}, stored with the "major" partition first
// (larger weight, ties broken by larger parts).
struct PartitionPair {
    Partition first, second;

    static PartitionPair make(Partition a, Partition b) {
        if (major(b, a)) std::swap(a, b);
        return PartitionPair{std::move(a), std::move(b)};
    }
    static bool major(const Partition& a, const Partition& b) {
        if (a.weight() != b.weight()) return a.weight() > b.weight();
        return a.parts > b.parts;
    }
    int weight() const { return first.weight() + second.weight(); }
    bool symmetric() const { return first == second; }
    std::string label() const { return "{" + first.to_string() + "|" + second.to_string() + "}"; }
    friend auto operator<=>(const PartitionPair&, const PartitionPair&) = default;
    friend bool operator==(const PartitionPair&, const PartitionPair&) = default;
};

// Orbit of embeddings C -> C^{n+1}: alpha/beta record the multiplicities of the a- and b-letters,
// the remaining k = n+1-|alpha|-|beta| coordinates are the identity.
struct EmbeddingClass {
    PartitionPair pair;
    int n = 0;
    int k() const { return n + 1 - pair.weight(); }
    std::string label() const { return pair.label(); }
    friend bool operator==(const EmbeddingClass&, const EmbeddingClass&) = default;
};

struct PointClass {
    PartitionPair pair;
    std::string label() const { return pair.label(); }
    friend bool operator==(const PointClass&, const PointClass&) = default;
};

namespace detail {

// All unordered pairs of total weight m, in a fixed order.
inline std::vector<PartitionPair> pairs_of_weight(int m) {
    std::vector<PartitionPair> out;
    for (int i = m; 2 * i >= m; --i) {
        auto A = partitions_of(i);
        auto B = partitions_of(m - i);
        for (std::size_t x = 0; x < A.size(); ++x)
            for (std::size_t y = 0; y < B.size(); ++y) {
                if (2 * i == m && y < x) continue;  // same weight: partitions_of order is descending
                out.push_back(PartitionPair{A[x], B[y]});
            }
    }
    return out;
}

inline Partition all_ones(int m) { return Partition{std::vector<int>(m, 1)}; }

}  // namespace detail

inline std::vector<EmbeddingClass> enumerate_E(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_E: n must be >= 1");
    std::vector<EmbeddingClass> out;
    for (int m = 0; m <= n; ++m)
        for (auto& p : detail::pairs_of_weight(m)) out.push_back(EmbeddingClass{p, n});
    return out;
}

inline std::vector<PointClass> enumerate_P(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_P: n must be >= 1");
    std::vector<PointClass> out;
    PartitionPair excluded{detail::all_ones(n + 1), Partition{}};
    for (auto& p : detail::pairs_of_weight(n + 1))
        if (!(p == excluded)) out.push_back(PointClass{p});
    return out;
}

// ---------------------------------------------------------------------------
// Fibre counts for R = { (X, P) : X = {a,b}, P = {a, b + k} or {a + k, b} }

struct FiberReport {
    int n = 0;
    std::vector<int> p2_fiber;   // indexed like enumerate_P
    std::vector<int> p1_fiber;   // indexed like enumerate_E
    std::vector<std::pair<std::size_t, std::size_t>> R;  // (E index, P index)
    std::vector<std::size_t> singleton_p2;               // P indices with |p2^{-1}| = 1
    std::size_t singleton_p1_count = 0;
    std::uint64_t partition_bound = 0;                   // 1 + sum_{i <= n/2} Pi(i)
};

inline FiberReport fiber_counts(int n) {
    auto Es = enumerate_E(n);
    auto Ps = enumerate_P(n);
    std::map<PartitionPair, std::size_t> prow;
    for (std::size_t i = 0; i < Ps.size(); ++i) prow[Ps[i].pair] = i;
    std::set<std::pair<std::size_t, std::size_t>> R;
    for (std::size_t e = 0; e < Es.size(); ++e) {
        const auto& [a, b] = Es[e].pair;
        int k = Es[e].k();
        for (const auto& P : {PartitionPair::make(a, b.with_part(k)), PartitionPair::make(a.with_part(k), b)}) {
            auto it = prow.find(P);
            if (it != prow.end()) R.insert({e, it->second});
        }
    }
    FiberReport rep;
    rep.n = n;
    rep.p1_fiber.assign(Es.size(), 0);
    rep.p2_fiber.assign(Ps.size(), 0);
    for (auto [e, p] : R) {
        ++rep.p1_fiber[e];
        ++rep.p2_fiber[p];
        rep.R.push_back({e, p});
    }
    for (std::size_t p = 0; p < Ps.size(); ++p)
        if (rep.p2_fiber[p] == 1) rep.singleton_p2.push_back(p);
    for (int c : rep.p1_fiber) rep.singleton_p1_count += (c == 1);
    auto Pi = partition_numbers(n / 2);
    rep.partition_bound = 1;
    for (int i = 0; i <= n / 2; ++i) rep.partition_bound += Pi[i];
    return rep;
}

// The two exceptional families: {(d,..,d), ()} with d > 1, d | n+1, and {(d,..,d), (d,..,d)} for n odd.
inline bool in_exceptional_family(const PointClass& P, int n) {
    auto uniform = [](const Partition& p) {
        for (int x : p.parts)
            if (x != p.parts.front()) return false;
        return !p.parts.empty();
    };
    const auto& [a, b] = P.pair;
    if (b.empty()) return uniform(a) && a.parts.front() > 1 && (n + 1) % a.parts.front() == 0;
    return n % 2 == 1 && a == b && uniform(a);
}

// ---------------------------------------------------------------------------
// Boundary matrix

// Entry (P, X): coefficient at the representative point of P (a-letters with multiplicities
// P.first, then b-letters with P.second) of the boundary of the orbit sum of X. Evaluating the
// curve coordinate at a-letter L with part s in P, where j of the s coordinates were the curve,
// gives +2 C(s,j) copies; b-letters give -2. Terms with j = s are "fresh" (letter absent from X),
// terms with j < s "increment" an existing part.
struct BoundarySplit {
    QMatrix fresh, increment;
};

inline BoundarySplit boundary_matrix_split(int n) {
    auto Es = enumerate_E(n);
    auto Ps = enumerate_P(n);
    std::map<PartitionPair, std::size_t> col;
    for (std::size_t i = 0; i < Es.size(); ++i) col[Es[i].pair] = i;
    BoundarySplit out{QMatrix(Ps.size(), Es.size()), QMatrix(Ps.size(), Es.size())};
    for (std::size_t r = 0; r < Ps.size(); ++r) {
        const auto& [a, b] = Ps[r].pair;
        for (int side = 0; side < 2; ++side) {
            const Partition& x = side ? b : a;
            const Partition& y = side ? a : b;
            int w = side ? -2 : 2;
            for (std::size_t idx = 0; idx < x.parts.size(); ++idx) {
                int s = x.parts[idx];
                mpz_class binom = 1;
                for (int j = 1; j <= s; ++j) {
                    binom = binom * (s - j + 1) / j;
                    Partition reduced;
                    for (std::size_t t = 0; t < x.parts.size(); ++t) {
                        int v = t == idx ? x.parts[t] - j : x.parts[t];
                        if (v > 0) reduced = reduced.with_part(v);
                    }
                    std::size_t c = col.at(PartitionPair::make(reduced, y));
                    (j == s ? out.fresh : out.increment).add(r, c, mpq_class(w * binom));
                }
            }
        }
    }
    return out;
}

inline QMatrix boundary_matrix(int n) {
    auto s = boundary_matrix_split(n);
    QMatrix M = s.fresh;
    for (std::size_t r = 0; r < M.rows(); ++r)
        for (const auto& [c, v] : s.increment.row(r)) M.add(r, c, v);
    return M;
}

// Literal oracle: all maps C -> C^{n+1} with coordinates in {id, a_1..a_n, b_1..b_n}, at least one id.
inline QMatrix brute_force_matrix(int n) {
    if (n < 1) throw std::invalid_argument("brute_force_matrix: n must be >= 1");
    if (n > 5) throw ResourceError("brute_force_matrix: n = " + std::to_string(n) + " exceeds the limit 5 ((2n+1)^(n+1) maps)");
    auto Es = enumerate_E(n);
    auto Ps = enumerate_P(n);
    std::map<PartitionPair, std::size_t> col;
    for (std::size_t i = 0; i < Es.size(); ++i) col[Es[i].pair] = i;
    // Letters: 0 = id, 1..n = a_1..a_n, n+1..2n = b_1..b_n.
    std::map<std::vector<int>, std::size_t> rep;
    for (std::size_t r = 0; r < Ps.size(); ++r) {
        std::vector<int> pt;
        const auto& [a, b] = Ps[r].pair;
        for (std::size_t i = 0; i < a.parts.size(); ++i) pt.insert(pt.end(), a.parts[i], 1 + static_cast<int>(i));
        for (std::size_t i = 0; i < b.parts.size(); ++i) pt.insert(pt.end(), b.parts[i], n + 1 + static_cast<int>(i));
        rep[pt] = r;
    }
    QMatrix M(Ps.size(), Es.size());
    int L = 2 * n + 1, m = n + 1;
    std::vector<int> e(m, 0), pt(m);
    std::vector<std::vector<std::int64_t>> acc(Ps.size(), std::vector<std::int64_t>(Es.size(), 0));
    while (true) {
        bool has_id = false;
        std::vector<int> ca(n, 0), cb(n, 0);
        for (int x : e) {
            if (x == 0) has_id = true;
            else if (x <= n) ++ca[x - 1];
            else ++cb[x - n - 1];
        }
        if (has_id) {
            auto to_part = [](std::vector<int> c) {
                Partition p;
                for (int v : c)
                    if (v > 0) p = p.with_part(v);
                return p;
            };
            std::size_t c = col.at(PartitionPair::make(to_part(ca), to_part(cb)));
            for (int letter = 1; letter < L; ++letter) {
                for (int i = 0; i < m; ++i) pt[i] = e[i] == 0 ? letter : e[i];
                auto it = rep.find(pt);
                if (it != rep.end()) acc[it->second][c] += letter <= n ? 2 : -2;
            }
        }
        int i = 0;
        while (i < m && ++e[i] == L) e[i++] = 0;
        if (i == m) break;
    }
    for (std::size_t r = 0; r < Ps.size(); ++r)
        for (std::size_t c = 0; c < Es.size(); ++c)
            if (acc[r][c]) M.set(r, c, mpq_class(acc[r][c]));
    return M;
}

inline std::size_t small_diagonal_index(int n) {
    auto Es = enumerate_E(n);
    for (std::size_t i = 0; i < Es.size(); ++i)
        if (Es[i].pair.weight() == 0) return i;
    throw std::logic_error("small diagonal class missing");
}

}  // namespace cycleforge
