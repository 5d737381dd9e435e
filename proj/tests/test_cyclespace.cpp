#include "cycleforge/cyclespace.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace cycleforge;

namespace {

// Direct count of partitions of m with parts <= k.
std::uint64_t count_partitions(int m, int k) {
    if (m == 0) return 1;
    if (k == 0) return 0;
    std::uint64_t c = 0;
    for (int p = std::min(m, k); p >= 1; --p) c += count_partitions(m - p, p);
    return c;
}

// Ordered pairs of multisets, deduplicated as unordered pairs of sorted vectors.
std::set<std::pair<std::vector<int>, std::vector<int>>> brute_pairs(int lo, int hi) {
    std::vector<std::vector<std::vector<int>>> by_weight(hi + 1);
    // all non-increasing sequences by brute force over compositions
    for (int m = 0; m <= hi; ++m) {
        std::set<std::vector<int>> seen;
        if (m == 0) seen.insert(std::vector<int>{});
        for (unsigned mask = 0; m > 0 && mask < (1u << (m - 1)); ++mask) {
            std::vector<int> parts;
            int cur = 1;
            for (int b = 0; b < m - 1; ++b) {
                if (mask >> b & 1u) { parts.push_back(cur); cur = 1; }
                else ++cur;
            }
            parts.push_back(cur);
            std::sort(parts.rbegin(), parts.rend());
            seen.insert(parts);
        }
        by_weight[m].assign(seen.begin(), seen.end());
    }
    std::set<std::pair<std::vector<int>, std::vector<int>>> out;
    for (int i = 0; i <= hi; ++i)
        for (int j = 0; i + j <= hi; ++j) {
            if (i + j < lo) continue;
            for (const auto& a : by_weight[i])
                for (const auto& b : by_weight[j]) out.insert(std::minmax(a, b));
        }
    return out;
}

std::set<std::pair<std::vector<int>, std::vector<int>>> as_set(const std::vector<PartitionPair>& ps) {
    std::set<std::pair<std::vector<int>, std::vector<int>>> out;
    for (const auto& p : ps) out.insert(std::minmax(p.first.parts, p.second.parts));
    return out;
}

std::size_t dense_rank(const QMatrix& M) {
    std::vector<QVector> A(M.rows(), QVector(M.cols(), 0));
    for (std::size_t r = 0; r < M.rows(); ++r)
        for (const auto& [c, v] : M.row(r)) A[r][c] = v;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < M.cols() && rank < A.size(); ++c) {
        std::size_t p = rank;
        while (p < A.size() && A[p][c] == 0) ++p;
        if (p == A.size()) continue;
        std::swap(A[p], A[rank]);
        for (std::size_t r = 0; r < A.size(); ++r) {
            if (r == rank || A[r][c] == 0) continue;
            mpq_class f = A[r][c] / A[rank][c];
            for (std::size_t k = c; k < M.cols(); ++k) A[r][k] -= f * A[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

TEST(Partitions, SmallValues) {
    auto p0 = partitions_of(0);
    ASSERT_EQ(p0.size(), 1u);
    EXPECT_TRUE(p0[0].empty());
    EXPECT_EQ(partitions_of(4).size(), 5u);
    EXPECT_EQ(partitions_of(3)[0].to_string(), "(3)");
}

TEST(Partitions, PentagonalRecurrenceMatchesEnumeration) {
    auto Pi = partition_numbers(20);
    for (int m = 0; m <= 20; ++m) {
        EXPECT_EQ(Pi[m], partitions_of(m).size()) << m;
        EXPECT_EQ(Pi[m], count_partitions(m, m)) << m;
    }
    EXPECT_EQ(Pi[20], 627u);
}

TEST(Classes, NEqualsOne) {
    auto E = enumerate_E(1);
    auto P = enumerate_P(1);
    ASSERT_EQ(E.size(), 2u);
    ASSERT_EQ(P.size(), 2u);
    std::set<std::string> el{E[0].label(), E[1].label()}, pl{P[0].label(), P[1].label()};
    EXPECT_EQ(el, (std::set<std::string>{"{()|()}", "{(1)|()}"}));
    EXPECT_EQ(pl, (std::set<std::string>{"{(2)|()}", "{(1)|(1)}"}));
}

TEST(Classes, MatchBruteForceGenerator) {
    for (int n = 1; n <= 8; ++n) {
        std::vector<PartitionPair> E, P;
        for (const auto& e : enumerate_E(n)) E.push_back(e.pair);
        for (const auto& p : enumerate_P(n)) P.push_back(p.pair);
        EXPECT_EQ(as_set(E).size(), E.size()) << "duplicates in E, n=" << n;
        EXPECT_EQ(as_set(E), brute_pairs(0, n));
        auto bp = brute_pairs(n + 1, n + 1);
        std::vector<int> none, ones(n + 1, 1);
        bp.erase(std::minmax(none, ones));
        EXPECT_EQ(as_set(P), bp);
        EXPECT_EQ(as_set(P).size(), P.size());
        EXPECT_EQ(enumerate_E(n)[small_diagonal_index(n)].k(), n + 1);
    }
}

TEST(Classes, GeneratingFunctionCount) {
    // #unordered pairs of weight m = (sum_{i+j=m} Pi(i)Pi(j) + [m even] Pi(m/2)) / 2
    auto Pi = partition_numbers(12);
    for (int n = 1; n <= 12; ++n) {
        std::uint64_t total = 0;
        for (int m = 0; m <= n; ++m) {
            std::uint64_t s = 0;
            for (int i = 0; i <= m; ++i) s += Pi[i] * Pi[m - i];
            if (m % 2 == 0) s += Pi[m / 2];
            total += s / 2;
        }
        EXPECT_EQ(enumerate_E(n).size(), total);
    }
}

TEST(Fibres, ExceptionalFamiliesAndBound) {
    for (int n = 4; n <= 12; ++n) {
        auto rep = fiber_counts(n);
        auto P = enumerate_P(n);
        std::set<std::size_t> fam;
        for (std::size_t p = 0; p < P.size(); ++p)
            if (in_exceptional_family(P[p], n)) fam.insert(p);
        EXPECT_EQ(std::set<std::size_t>(rep.singleton_p2.begin(), rep.singleton_p2.end()), fam) << n;
        EXPECT_LE(rep.singleton_p2.size(), static_cast<std::size_t>(n));
        if (n > 5) {
            EXPECT_GT(rep.partition_bound, static_cast<std::uint64_t>(n));
        }
    }
    EXPECT_EQ(fiber_counts(6).partition_bound, 8u);
}

TEST(Boundary, MatchesBruteForce) {
    for (int n = 1; n <= 5; ++n) EXPECT_TRUE(boundary_matrix(n) == brute_force_matrix(n)) << n;
    EXPECT_THROW(brute_force_matrix(6), ResourceError);
}

TEST(Boundary, SmallDiagonalAloneIsNotACycle) {
    // Restricting the small diagonal to a_1 = ... = a_1 gives the single point class {(n+1)|()}.
    for (int n = 1; n <= 8; ++n) {
        QMatrix M = boundary_matrix(n);
        auto P = enumerate_P(n);
        std::size_t c = small_diagonal_index(n), nonzero = 0;
        for (std::size_t r = 0; r < M.rows(); ++r) {
            auto v = M.at(r, c);
            if (v == 0) continue;
            ++nonzero;
            EXPECT_TRUE(P[r].pair == PartitionPair::make(Partition{{n + 1}}, Partition{})) << P[r].label();
            EXPECT_EQ(v, 2);
        }
        EXPECT_EQ(nonzero, 1u);
    }
}

TEST(Boundary, TrivialRowsForOddN) {
    for (int n : {3, 5}) {
        QMatrix M = boundary_matrix(n);
        auto P = enumerate_P(n);
        std::size_t seen = 0;
        for (std::size_t r = 0; r < P.size(); ++r) {
            if (!P[r].pair.symmetric()) continue;
            ++seen;
            EXPECT_TRUE(M.row(r).empty()) << P[r].label();
        }
        EXPECT_GT(seen, 0u);
    }
}

TEST(Kernel, DimensionsAndKernelProperty) {
    for (int n = 1; n <= 12; ++n) {
        QMatrix M = boundary_matrix(n);
        auto kb = kernel_basis(M);
        EXPECT_GE(kb.dimension, 1u);
        if (n <= 2) {
            EXPECT_EQ(kb.dimension, 1u);
        }
        if (n >= 3 && n <= 6) {
            EXPECT_GE(kb.dimension, 2u);
        }
        EXPECT_EQ(kb.dimension + kb.rank, M.cols());
        for (const auto& v : kb.vectors)
            for (const auto& y : M.apply(v)) ASSERT_EQ(y, 0);
        if (n <= 7) {
            EXPECT_EQ(kb.rank, dense_rank(M)) << n;
        }
    }
}

TEST(Kernel, InvariantUnderPermutation) {
    std::mt19937_64 rng(3);
    for (int n = 3; n <= 7; ++n) {
        QMatrix M = boundary_matrix(n);
        std::vector<std::size_t> rp(M.rows()), cp(M.cols());
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        EXPECT_EQ(kernel_basis(M.permuted(rp, cp)).dimension, kernel_basis(M).dimension);
        EXPECT_EQ(kernel_basis(M).vectors, kernel_basis(M).vectors);  // deterministic
    }
}

TEST(Kernel, RandomMatricesAgainstDenseRank) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> v(-3, 3), z(0, 2);
    for (int t = 0; t < 50; ++t) {
        std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
        QMatrix M(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (z(rng) == 0) {
                    mpq_class q(v(rng), 1 + static_cast<int>(rng() % 3));
                    q.canonicalize();
                    M.set(i, j, q);
                }
        auto kb = kernel_basis(M);
        EXPECT_EQ(kb.rank, dense_rank(M));
        for (const auto& x : kb.vectors)
            for (const auto& y : M.apply(x)) EXPECT_EQ(y, 0);
        EXPECT_EQ(rank_of_vectors(kb.vectors), kb.dimension);
    }
}
