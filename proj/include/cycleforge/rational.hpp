#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cycleforge {

using QVector = std::vector<mpq_class>;

inline std::string q_to_string(const mpq_class& q) {
    mpq_class c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline mpq_class q_parse(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("rational: cannot parse \"" + s + "\"");
    q.canonicalize();
    return q;
}

// Sparse exact matrix, rows stored as column-sorted (col, value) lists without zeros.
class QMatrix {
public:
    using Row = std::vector<std::pair<std::uint32_t, mpq_class>>;

    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const Row& row(std::size_t r) const { return rows_[r]; }

    mpq_class at(std::size_t r, std::size_t c) const {
        check(r, c);
        const auto& row = rows_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::size_t x) { return e.first < x; });
        return it != row.end() && it->first == c ? it->second : mpq_class(0);
    }

    void set(std::size_t r, std::size_t c, const mpq_class& v) {
        check(r, c);
        auto& row = rows_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::size_t x) { return e.first < x; });
        bool present = it != row.end() && it->first == c;
        if (v == 0) {
            if (present) row.erase(it);
        } else if (present) {
            it->second = v;
        } else {
            row.insert(it, {static_cast<std::uint32_t>(c), v});
        }
    }

    void add(std::size_t r, std::size_t c, const mpq_class& v) { set(r, c, at(r, c) + v); }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& r : rows_) n += r.size();
        return n;
    }

    QVector apply(const QVector& x) const {
        if (x.size() != cols_) throw std::invalid_argument("QMatrix::apply: size mismatch");
        QVector y(rows(), 0);
        for (std::size_t r = 0; r < rows(); ++r)
            for (const auto& [c, v] : rows_[r]) y[r] += v * x[c];
        return y;
    }

    QMatrix permuted(const std::vector<std::size_t>& row_perm, const std::vector<std::size_t>& col_perm) const {
        // new(i, j) = old(row_perm[i], col_perm[j])
        std::vector<std::size_t> col_inv(cols_);
        for (std::size_t j = 0; j < cols_; ++j) col_inv[col_perm[j]] = j;
        QMatrix out(rows(), cols_);
        for (std::size_t i = 0; i < rows(); ++i) {
            for (const auto& [c, v] : rows_[row_perm[i]]) out.rows_[i].push_back({static_cast<std::uint32_t>(col_inv[c]), v});
            std::sort(out.rows_[i].begin(), out.rows_[i].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        }
        return out;
    }

    friend bool operator==(const QMatrix& a, const QMatrix& b) { return a.cols_ == b.cols_ && a.rows_ == b.rows_; }

private:
    void check(std::size_t r, std::size_t c) const {
        if (r >= rows() || c >= cols_) throw std::out_of_range("QMatrix: index out of range");
    }
    std::size_t cols_ = 0;
    std::vector<Row> rows_;
};

struct KernelBasis {
    std::vector<QVector> vectors;
    std::size_t dimension = 0;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_columns;
    std::vector<std::size_t> free_columns;
};

namespace detail {

using ZRow = std::vector<std::pair<std::uint32_t, mpz_class>>;

inline void make_primitive(ZRow& r) {
    if (r.empty()) return;
    mpz_class g = 0;
    for (const auto& e : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1) return;
    }
    for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

inline const mpz_class* find(const ZRow& r, std::uint32_t c) {
    auto it = std::lower_bound(r.begin(), r.end(), c, [](const auto& e, std::uint32_t x) { return e.first < x; });
    return it != r.end() && it->first == c ? &it->second : nullptr;
}

// r <- (p/g) r - (r[c]/g) piv, p = piv[c], g = gcd(p, r[c]); then divide out the content.
inline void eliminate(ZRow& r, const ZRow& piv, std::uint32_t c, const mpz_class& p) {
    const mpz_class* rc = find(r, c);
    if (!rc) return;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), rc->get_mpz_t());
    mpz_class a = p / g, b = *rc / g;
    ZRow out;
    out.reserve(r.size() + piv.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < piv.size()) {
        if (j == piv.size() || (i < r.size() && r[i].first < piv[j].first)) {
            out.push_back({r[i].first, a * r[i].second});
            ++i;
        } else if (i == r.size() || piv[j].first < r[i].first) {
            out.push_back({piv[j].first, -b * piv[j].second});
            ++j;
        } else {
            mpz_class v = a * r[i].second - b * piv[j].second;
            if (v != 0) out.push_back({r[i].first, std::move(v)});
            ++i;
            ++j;
        }
    }
    make_primitive(out);
    r = std::move(out);
}

}  // namespace detail

// Exact nullspace by fraction-free sparse Gauss-Jordan elimination. Rows are scaled to primitive
// integer rows; pivots are taken from the sparsest remaining row (smallest |entry|, then lowest column),
// so the computation is deterministic. The basis has one vector per free column j: x_j = 1, the other free
// coordinates 0.
inline KernelBasis kernel_basis(const QMatrix& M) {
    using detail::ZRow;
    std::vector<ZRow> pending;
    for (std::size_t r = 0; r < M.rows(); ++r) {
        const auto& row = M.row(r);
        if (row.empty()) continue;
        mpz_class l = 1;
        for (const auto& e : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.get_den_mpz_t());
        ZRow z;
        for (const auto& e : row) {
            mpz_class v = e.second.get_num() * (l / e.second.get_den());
            z.push_back({e.first, std::move(v)});
        }
        detail::make_primitive(z);
        pending.push_back(std::move(z));
    }
    std::vector<ZRow> pivots;
    std::vector<std::uint32_t> pivot_col;
    std::vector<bool> alive(pending.size(), true);
    while (true) {
        std::size_t best = pending.size();
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (!alive[i]) continue;
            if (pending[i].empty()) { alive[i] = false; continue; }
            if (best == pending.size() || pending[i].size() < pending[best].size()) best = i;
        }
        if (best == pending.size()) break;
        ZRow piv = std::move(pending[best]);
        alive[best] = false;
        std::size_t pe = 0;
        for (std::size_t e = 1; e < piv.size(); ++e)
            if (mpz_cmpabs(piv[e].second.get_mpz_t(), piv[pe].second.get_mpz_t()) < 0) pe = e;
        std::uint32_t c = piv[pe].first;
        mpz_class p = piv[pe].second;
        for (std::size_t i = 0; i < pending.size(); ++i)
            if (alive[i]) detail::eliminate(pending[i], piv, c, p);
        for (auto& q : pivots) detail::eliminate(q, piv, c, p);
        pivots.push_back(std::move(piv));
        pivot_col.push_back(c);
    }

    KernelBasis kb;
    std::size_t n = M.cols();
    std::vector<int> pivot_of(n, -1);
    for (std::size_t i = 0; i < pivots.size(); ++i) pivot_of[pivot_col[i]] = static_cast<int>(i);
    for (std::size_t j = 0; j < n; ++j) (pivot_of[j] >= 0 ? kb.pivot_columns : kb.free_columns).push_back(j);
    kb.rank = pivots.size();
    // Column index -> (pivot row, entry) for free columns.
    std::vector<std::vector<std::pair<std::size_t, mpz_class>>> by_free(n);
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (const auto& [c, v] : pivots[i])
            if (c != pivot_col[i]) by_free[c].push_back({i, v});
    for (std::size_t j : kb.free_columns) {
        QVector x(n, 0);
        x[j] = 1;
        for (const auto& [i, v] : by_free[j]) {
            const mpz_class& p = *detail::find(pivots[i], pivot_col[i]);
            x[pivot_col[i]] = mpq_class(-v, p);
            x[pivot_col[i]].canonicalize();
        }
        kb.vectors.push_back(std::move(x));
    }
    kb.dimension = kb.vectors.size();
    return kb;
}

inline std::size_t rank_of(const QMatrix& M) { return kernel_basis(M).rank; }

// Rank of a family of vectors (as rows).
inline std::size_t rank_of_vectors(const std::vector<QVector>& vs) {
    if (vs.empty()) return 0;
    QMatrix M(vs.size(), vs.front().size());
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < vs[i].size(); ++j)
            if (vs[i][j] != 0) M.set(i, j, vs[i][j]);
    return rank_of(M);
}

}  // namespace cycleforge
