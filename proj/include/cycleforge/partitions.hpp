#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycleforge {

struct Partition {
    std::vector<int> parts;  // non-increasing, positive

    int weight() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    int length() const { return static_cast<int>(parts.size()); }
    bool empty() const { return parts.empty(); }
    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
        return s + ")";
    }
    // Adds one part and keeps the order.
    Partition with_part(int p) const {
        Partition q = *this;
        auto it = q.parts.begin();
        while (it != q.parts.end() && *it >= p) ++it;
        q.parts.insert(it, p);
        return q;
    }
    friend auto operator<=>(const Partition&, const Partition&) = default;
    friend bool operator==(const Partition&, const Partition&) = default;
};

// Partitions of m, largest first part first: 4 -> (4),(3,1),(2,2),(2,1,1),(1,1,1,1).
inline std::vector<Partition> partitions_of(int m) {
    if (m < 0) throw std::invalid_argument("partitions_of: negative weight");
    std::vector<Partition> out;
    std::vector<int> cur;
    auto rec = [&](auto& self, int rest, int maxpart) -> void {
        if (rest == 0) { out.push_back(Partition{cur}); return; }
        for (int p = std::min(rest, maxpart); p >= 1; --p) {
            cur.push_back(p);
            self(self, rest - p, p);
            cur.pop_back();
        }
    };
    rec(rec, m, m);
    return out;
}

// Euler's pentagonal-number recurrence.
inline std::vector<std::uint64_t> partition_numbers(int upto) {
    std::vector<std::uint64_t> p(upto + 1, 0);
    p[0] = 1;
    for (int m = 1; m <= upto; ++m) {
        std::int64_t s = 0;
        for (int k = 1;; ++k) {
            int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            if (g1 > m) break;
            std::int64_t sg = (k % 2) ? 1 : -1;
            s += sg * static_cast<std::int64_t>(p[m - g1]);
            if (g2 <= m) s += sg * static_cast<std::int64_t>(p[m - g2]);
        }
        p[m] = static_cast<std::uint64_t>(s);
    }
    return p;
}

}  // namespace cycleforge
