#pragma once

#include "hash.hpp"
#include "perm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cycleforge {

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tuples and moves

struct HurwitzTuple {
    std::vector<Perm> entries;

    int size() const { return static_cast<int>(entries.size()); }
    int degree() const { return entries.empty() ? 0 : entries.front().degree(); }
    bool product_is_identity() const { return product(entries).is_identity(); }
    std::vector<std::string> to_strings() const {
        std::vector<std::string> out;
        for (const auto& p : entries) out.push_back(p.to_string());
        return out;
    }
    static HurwitzTuple parse(const std::vector<std::string>& cycles, int degree) {
        HurwitzTuple t;
        for (const auto& c : cycles) t.entries.push_back(Perm::parse(c, degree));
        return t;
    }
    friend bool operator==(const HurwitzTuple&, const HurwitzTuple&) = default;
    friend auto operator<=>(const HurwitzTuple& a, const HurwitzTuple& b) { return a.entries <=> b.entries; }
};

enum class Direction { forward, inverse };

struct Move {
    int index;  // 1-based, acts on entries index and index+1
    Direction dir = Direction::forward;
};

// forward:  (.., s_i, s_{i+1}, ..) -> (.., s_i s_{i+1} s_i^{-1}, s_i, ..)
// inverse:  (.., x, y, ..)         -> (.., y, y^{-1} x y, ..)
inline HurwitzTuple hurwitz_move(HurwitzTuple t, int i, Direction dir) {
    if (i < 1 || i >= t.size()) throw std::out_of_range("hurwitz_move: index " + std::to_string(i) + " out of range");
    Perm x = t.entries[i - 1], y = t.entries[i];
    if (dir == Direction::forward) {
        t.entries[i - 1] = conjugate(y, x);
        t.entries[i] = x;
    } else {
        t.entries[i - 1] = y;
        t.entries[i] = conjugate(x, inverse(y));
    }
    return t;
}

inline HurwitzTuple replay_sequence(HurwitzTuple t, const std::vector<Move>& moves) {
    for (const auto& m : moves) t = hurwitz_move(std::move(t), m.index, m.dir);
    return t;
}

// 2 - 2g = 2d - sum (d - #cycles)
inline int riemann_hurwitz_genus(const HurwitzTuple& t) {
    int d = t.degree();
    int ram = 0;
    for (const auto& p : t.entries) ram += d - cycle_type(p).cycles();
    int twice = ram - 2 * d + 2;
    if (twice % 2) throw std::logic_error("Riemann-Hurwitz: odd total ramification");
    return twice / 2;
}

inline int genus_of(const HurwitzTuple& t) {
    if (t.entries.empty() || !is_transitive(t.entries)) throw std::invalid_argument("genus_of: tuple is not transitive");
    return riemann_hurwitz_genus(t);
}

struct MergeComponent {
    std::vector<int> points;          // 1-based points of the fibre in this component
    HurwitzTuple tuple;               // restriction, relabelled to 1..points.size()
    int genus = 0;
    std::vector<int> branch_points;   // positions (original numbering) where the restriction is nontrivial
};

// Collide branch points i and i+1: entries i, i+1 become their product (dropped if trivial),
// then split the fibre into orbits of the new monodromy group.
inline std::vector<MergeComponent> degenerate_merge(const HurwitzTuple& t, int i) {
    if (i < 1 || i >= t.size()) throw std::out_of_range("degenerate_merge: index out of range");
    std::vector<Perm> merged;
    std::vector<int> pos;
    for (int j = 1; j <= t.size(); ++j) {
        if (j == i) {
            Perm p = compose(t.entries[j - 1], t.entries[j]);
            if (!p.is_identity()) { merged.push_back(p); pos.push_back(j); }
            ++j;
            continue;
        }
        merged.push_back(t.entries[j - 1]);
        pos.push_back(j);
    }
    std::vector<Perm> gens = merged;
    if (gens.empty()) gens.push_back(Perm::identity(t.degree()));
    std::vector<MergeComponent> out;
    for (const auto& orb : orbits0(gens)) {
        MergeComponent c;
        int m = static_cast<int>(orb.size());
        std::vector<int> relabel(t.degree(), -1);
        for (int a = 0; a < m; ++a) { relabel[orb[a]] = a; c.points.push_back(orb[a] + 1); }
        for (std::size_t e = 0; e < merged.size(); ++e) {
            std::vector<int> img(m);
            for (int a = 0; a < m; ++a) img[a] = relabel[merged[e].image0(orb[a])] + 1;
            Perm r = Perm::from_images(img);
            if (!r.is_identity()) c.branch_points.push_back(pos[e]);
            c.tuple.entries.push_back(r);
        }
        if (c.tuple.entries.empty()) c.tuple.entries.push_back(Perm::identity(m));
        c.genus = riemann_hurwitz_genus(c.tuple);
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Profiles

struct BranchProfile {
    int degree = 0;
    std::vector<CycleType> types;  // multiset, kept sorted

    int length() const { return static_cast<int>(types.size()); }

    static BranchProfile make(int degree, std::vector<CycleType> types) {
        if (degree < 1 || degree > 8) throw std::invalid_argument("BranchProfile: degree must be in 1..8");
        if (types.size() < 2) throw std::invalid_argument("BranchProfile: need at least 2 branch points");
        for (const auto& t : types)
            if (t.degree() != degree) throw std::invalid_argument("BranchProfile: cycle type " + t.to_string() + " has wrong degree");
        std::sort(types.begin(), types.end());
        return BranchProfile{degree, std::move(types)};
    }

    std::string describe() const {
        std::map<CycleType, int> count;
        for (const auto& t : types) ++count[t];
        std::string s = "degree " + std::to_string(degree) + ":";
        for (const auto& [t, c] : count) s += " " + std::to_string(c) + "x" + t.to_string();
        return s;
    }
    friend bool operator==(const BranchProfile&, const BranchProfile&) = default;
};

inline CycleType transposition_type(int d) {
    std::vector<int> parts(d - 1, 1);
    parts[0] = 2;
    return CycleType{parts};
}

// H_g: n = 2g+4 points, n-2 simple branch points and two of type (2,2).
inline BranchProfile hg_profile(int g) {
    if (g < 0) throw std::invalid_argument("hg_profile: genus must be non-negative");
    int n = 2 * g + 4;
    std::vector<CycleType> types(n - 2, transposition_type(4));
    types.push_back(CycleType{{2, 2}});
    types.push_back(CycleType{{2, 2}});
    return BranchProfile::make(4, types);
}

inline BranchProfile transposition_profile(int d, int n) {
    return BranchProfile::make(d, std::vector<CycleType>(n, transposition_type(d)));
}

// Degree-6 profile with two points of type (2,2,2), as in ((2 3),(2 3),(4 5),(4 5),(1 2),..,(1 2),v,v).
inline BranchProfile sigma6_profile(int n) {
    if (n < 4) throw std::invalid_argument("sigma6_profile: n must be at least 4");
    std::vector<CycleType> types(n - 2, transposition_type(6));
    types.push_back(CycleType{{2, 2, 2}});
    types.push_back(CycleType{{2, 2, 2}});
    return BranchProfile::make(6, types);
}

// ---------------------------------------------------------------------------
// Group tables for small symmetric groups

class GroupTable {
public:
    explicit GroupTable(int d) : d_(d), elems_(all_perms(d)) {
        n_ = static_cast<int>(elems_.size());
        if (n_ > 65535) throw std::invalid_argument("GroupTable: degree too large");
        mul_.resize(std::size_t(n_) * n_);
        conj_.resize(std::size_t(n_) * n_);
        inv_.resize(n_);
        type_.resize(n_);
        for (int a = 0; a < n_; ++a) {
            inv_[a] = index_of(inverse(elems_[a]));
            auto ct = cycle_type(elems_[a]);
            auto it = std::find(types_.begin(), types_.end(), ct);
            if (it == types_.end()) { types_.push_back(ct); it = types_.end() - 1; }
            type_[a] = static_cast<std::uint16_t>(it - types_.begin());
        }
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) mul_[std::size_t(a) * n_ + b] = index_of(compose(elems_[a], elems_[b]));
        for (int g = 0; g < n_; ++g)
            for (int x = 0; x < n_; ++x) conj_[std::size_t(g) * n_ + x] = mul(mul(g, x), inv_[g]);
    }

    int degree() const { return d_; }
    int order() const { return n_; }
    const Perm& element(int a) const { return elems_[a]; }
    std::uint16_t mul(int a, int b) const { return mul_[std::size_t(a) * n_ + b]; }
    std::uint16_t inv(int a) const { return inv_[a]; }
    // g x g^{-1}
    std::uint16_t conj(int g, int x) const { return conj_[std::size_t(g) * n_ + x]; }
    std::uint16_t type(int a) const { return type_[a]; }
    int type_id(const CycleType& ct) const {
        auto it = std::find(types_.begin(), types_.end(), ct);
        return it == types_.end() ? -1 : static_cast<int>(it - types_.begin());
    }
    int class_size(int type_id) const {
        return static_cast<int>(std::count(type_.begin(), type_.end(), static_cast<std::uint16_t>(type_id)));
    }
    int num_types() const { return static_cast<int>(types_.size()); }

    // Rank of a permutation in lexicographic order (Lehmer code).
    std::uint16_t index_of(const Perm& p) const {
        if (p.degree() != d_) throw std::invalid_argument("GroupTable: degree mismatch");
        int r = 0;
        for (int i = 0; i < d_; ++i) {
            int smaller = 0;
            for (int j = i + 1; j < d_; ++j) smaller += p.image0(j) < p.image0(i);
            r = r * (d_ - i) + smaller;
        }
        return static_cast<std::uint16_t>(r);
    }

    static std::shared_ptr<const GroupTable> get(int d) {
        static std::mutex mu;
        static std::map<int, std::shared_ptr<const GroupTable>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[d];
        if (!slot) slot = std::make_shared<const GroupTable>(d);
        return slot;
    }

private:
    int d_, n_;
    std::vector<Perm> elems_;
    std::vector<std::uint16_t> mul_, conj_, inv_, type_;
    std::vector<CycleType> types_;
};

using PackedKey = unsigned __int128;

// Lexicographically smallest simultaneous conjugate. Returns the stabiliser order.
inline std::size_t canonicalize(const GroupTable& G, std::vector<std::uint16_t>& t, std::vector<std::uint16_t>& scratch) {
    scratch.resize(G.order());
    std::size_t m = 0;
    for (int g = 0; g < G.order(); ++g) scratch[m++] = static_cast<std::uint16_t>(g);
    for (auto& x : t) {
        if (m == 1) { x = G.conj(scratch[0], x); continue; }
        std::uint16_t best = 0xFFFF;
        for (std::size_t c = 0; c < m; ++c) best = std::min(best, G.conj(scratch[c], x));
        std::size_t k = 0;
        for (std::size_t c = 0; c < m; ++c)
            if (G.conj(scratch[c], x) == best) scratch[k++] = scratch[c];
        m = k;
        x = best;
    }
    return m;
}

inline bool transitive_indices(const GroupTable& G, const std::vector<std::uint16_t>& t) {
    int d = G.degree();
    unsigned reach = 1u, frontier = 1u;
    while (frontier) {
        unsigned next = 0;
        for (auto x : t) {
            const Perm& p = G.element(x);
            for (int a = 0; a < d; ++a)
                if (frontier >> a & 1u) next |= 1u << p.image0(a);
        }
        frontier = next & ~reach;
        reach |= next;
    }
    return reach == (1u << d) - 1;
}

// ---------------------------------------------------------------------------
// Class enumeration

struct TupleClass {
    HurwitzTuple representative;
    std::size_t stabilizer_order = 0;
};

// Canonical classes stored as packed keys (entry 0 in the most significant bits),
// so numeric order equals lexicographic order of representatives.
class ClassList {
public:
    ClassList() = default;
    ClassList(BranchProfile profile, bool connected_only)
        : profile_(std::move(profile)), connected_only_(connected_only), table_(GroupTable::get(profile_.degree)) {
        bits_ = std::bit_width(static_cast<unsigned>(table_->order() - 1));
        if (bits_ == 0) bits_ = 1;
        if (bits_ * profile_.length() > 128)
            throw ResourceError("ClassList: tuple of length " + std::to_string(profile_.length()) + " does not fit a 128-bit key");
    }

    // Builds a class list from arbitrary (possibly non-canonical, unordered) tuples.
    static ClassList from_classes(const BranchProfile& profile, const std::vector<TupleClass>& classes, bool connected_only) {
        ClassList out(profile, connected_only);
        std::vector<std::pair<PackedKey, std::uint32_t>> rows;
        std::vector<std::uint16_t> t, scratch;
        for (const auto& c : classes) {
            out.indices_of(c.representative, t);
            auto stab = canonicalize(*out.table_, t, scratch);
            rows.emplace_back(out.pack(t), static_cast<std::uint32_t>(stab));
        }
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        for (auto& [k, s] : rows) { out.keys_.push_back(k); out.stab_.push_back(s); }
        return out;
    }

    std::size_t size() const { return keys_.size(); }
    const BranchProfile& profile() const { return profile_; }
    bool connected_only() const { return connected_only_; }
    const GroupTable& table() const { return *table_; }
    const std::vector<PackedKey>& keys() const { return keys_; }
    std::uint32_t stabilizer_order(std::size_t i) const { return stab_[i]; }

    TupleClass operator[](std::size_t i) const {
        std::vector<std::uint16_t> t;
        unpack(keys_[i], t);
        TupleClass c;
        for (auto x : t) c.representative.entries.push_back(table_->element(x));
        c.stabilizer_order = stab_[i];
        return c;
    }
    std::vector<TupleClass> to_vector() const {
        std::vector<TupleClass> out;
        for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i]);
        return out;
    }

    PackedKey pack(const std::vector<std::uint16_t>& t) const {
        PackedKey k = 0;
        for (auto x : t) k = (k << bits_) | x;
        return k;
    }
    void unpack(PackedKey k, std::vector<std::uint16_t>& t) const {
        int n = profile_.length();
        t.resize(n);
        PackedKey mask = (PackedKey(1) << bits_) - 1;
        for (int j = n - 1; j >= 0; --j) { t[j] = static_cast<std::uint16_t>(k & mask); k >>= bits_; }
    }
    void indices_of(const HurwitzTuple& h, std::vector<std::uint16_t>& t) const {
        if (h.size() != profile_.length()) throw std::invalid_argument("ClassList: tuple length does not match profile");
        t.clear();
        for (const auto& p : h.entries) t.push_back(table_->index_of(p));
    }
    std::optional<std::size_t> find(PackedKey k) const {
        auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
        if (it == keys_.end() || *it != k) return std::nullopt;
        return static_cast<std::size_t>(it - keys_.begin());
    }

private:
    friend class ClassEnumerator;
    BranchProfile profile_;
    bool connected_only_ = false;
    std::shared_ptr<const GroupTable> table_;
    int bits_ = 0;
    std::vector<PackedKey> keys_;
    std::vector<std::uint32_t> stab_;
};

// raw typed sequences * 2 / d!^2: product-identity fraction ~ 2/d! (parity), one class per d! tuples.
inline double estimated_class_count(const BranchProfile& profile) {
    auto G = GroupTable::get(profile.degree);
    std::map<CycleType, int> count;
    for (const auto& t : profile.types) ++count[t];
    double log_raw = std::lgamma(profile.length() + 1.0);
    for (const auto& [t, c] : count) {
        log_raw -= std::lgamma(c + 1.0);
        log_raw += c * std::log(static_cast<double>(G->class_size(G->type_id(t))));
    }
    double n = G->order();
    return std::exp(log_raw) * 2.0 / (n * n);
}

inline constexpr double default_class_cap = 1e8;

// Orderly generation: a tuple is canonical iff each prefix is canonical, and a canonical prefix p
// extends by x iff x <= g x g^{-1} for every g in Stab(p). The last entry is forced by the product.
class ClassEnumerator {
public:
    ClassEnumerator(ClassList& out) : out_(out), G_(*out.table_) {
        const auto& prof = out.profile_;
        n_ = prof.length();
        remaining_.assign(G_.num_types(), 0);
        for (const auto& t : prof.types) {
            int id = G_.type_id(t);
            if (id < 0) throw std::invalid_argument("enumerate_classes: invalid cycle type");
            ++remaining_[id];
        }
        t_.assign(n_, 0);
        stabs_.assign(n_ + 1, {});
        for (int g = 0; g < G_.order(); ++g) stabs_[0].push_back(static_cast<std::uint16_t>(g));
    }

    void run() { dfs(0, 0); }

private:
    void dfs(int depth, std::uint16_t prefix) {
        const auto& stab = stabs_[depth];
        if (depth == n_ - 1) {
            std::uint16_t x = G_.inv(prefix);
            if (remaining_[G_.type(x)] != 1) return;
            std::size_t fixed = 0;
            for (auto g : stab) {
                auto y = G_.conj(g, x);
                if (y < x) return;
                fixed += (y == x);
            }
            t_[depth] = x;
            if (out_.connected_only_ && !transitive_indices(G_, t_)) return;
            out_.keys_.push_back(out_.pack(t_));
            out_.stab_.push_back(static_cast<std::uint32_t>(fixed));
            return;
        }
        auto& next = stabs_[depth + 1];
        for (int x = 0; x < G_.order(); ++x) {
            auto ty = G_.type(x);
            if (remaining_[ty] == 0) continue;
            bool ok = true;
            for (auto g : stab)
                if (G_.conj(g, x) < x) { ok = false; break; }
            if (!ok) continue;
            next.clear();
            for (auto g : stab)
                if (G_.conj(g, x) == x) next.push_back(g);
            t_[depth] = static_cast<std::uint16_t>(x);
            --remaining_[ty];
            dfs(depth + 1, G_.mul(prefix, x));
            ++remaining_[ty];
        }
    }

    ClassList& out_;
    const GroupTable& G_;
    int n_;
    std::vector<int> remaining_;
    std::vector<std::uint16_t> t_;
    std::vector<std::vector<std::uint16_t>> stabs_;
};

inline ClassList enumerate_classes(const BranchProfile& profile, bool connected_only, double cap = default_class_cap) {
    double est = estimated_class_count(profile);
    if (est > cap) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "enumerate_classes: estimated %.3g classes exceeds cap %.3g (%s)", est, cap,
                      profile.describe().c_str());
        throw ResourceError(buf);
    }
    ClassList out(profile, connected_only);
    ClassEnumerator(out).run();
    return out;
}

// ---------------------------------------------------------------------------
// Orbits under the Hurwitz moves

struct OrbitInfo {
    std::size_t size = 0;
    HurwitzTuple representative;  // smallest canonical class of the orbit
    std::size_t deck_order = 0;
    std::optional<int> genus;     // empty when the monodromy is intransitive
};

struct OrbitReport {
    BranchProfile profile;
    std::size_t class_count = 0;
    std::vector<OrbitInfo> orbits;
    bool complete = true;
};

struct OrbitOptions {
    unsigned threads = 1;
    std::string checkpoint_path;               // empty: no checkpointing
    std::size_t checkpoint_every = 1'000'000;  // labelled states between checkpoints
    std::size_t stop_after = 0;                // > 0: stop (after checkpointing) once this many states are labelled
};

namespace detail {

struct OrbitState {
    std::vector<std::int32_t> labels;
    std::vector<std::uint64_t> sizes, seeds;
    std::vector<std::uint32_t> stabs;
    std::vector<std::uint32_t> frontier;
    std::uint64_t scan = 0, labelled = 0;
};

inline std::string fingerprint(const ClassList& cl) {
    std::string buf(reinterpret_cast<const char*>(cl.keys().data()), cl.keys().size() * sizeof(PackedKey));
    buf += cl.profile().describe();
    buf += cl.connected_only() ? "c" : "a";
    return sha256_hex(buf);
}

template <class T>
void put_vec(std::string& s, const std::vector<T>& v) {
    std::uint64_t n = v.size();
    s.append(reinterpret_cast<const char*>(&n), sizeof n);
    s.append(reinterpret_cast<const char*>(v.data()), n * sizeof(T));
}
template <class T>
bool get_vec(const std::string& s, std::size_t& pos, std::vector<T>& v) {
    std::uint64_t n;
    if (pos + sizeof n > s.size()) return false;
    std::memcpy(&n, s.data() + pos, sizeof n);
    pos += sizeof n;
    if (n > (s.size() - pos) / sizeof(T)) return false;
    v.resize(n);
    std::memcpy(v.data(), s.data() + pos, n * sizeof(T));
    pos += n * sizeof(T);
    return true;
}

inline void save_checkpoint(const std::string& path, const std::string& fp, const OrbitState& st) {
    std::string body;
    put_vec(body, st.labels);
    put_vec(body, st.sizes);
    put_vec(body, st.seeds);
    put_vec(body, st.stabs);
    put_vec(body, st.frontier);
    put_vec(body, std::vector<std::uint64_t>{st.scan, st.labelled});
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("checkpoint: cannot write " + tmp);
        out << "CFORBIT1\n" << fp << '\n' << sha256_hex(body) << '\n';
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!out) throw std::runtime_error("checkpoint: write failed for " + tmp);
    }
    std::rename(tmp.c_str(), path.c_str());
}

// Returns false on a missing, foreign or corrupted checkpoint.
inline bool load_checkpoint(const std::string& path, const std::string& fp, std::size_t n, OrbitState& st) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::string magic, got_fp, sum;
    if (!std::getline(in, magic) || magic != "CFORBIT1") return false;
    if (!std::getline(in, got_fp) || got_fp != fp) return false;
    if (!std::getline(in, sum)) return false;
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (sha256_hex(body) != sum) return false;
    OrbitState s;
    std::vector<std::uint64_t> tail;
    std::size_t pos = 0;
    if (!get_vec(body, pos, s.labels) || !get_vec(body, pos, s.sizes) || !get_vec(body, pos, s.seeds) ||
        !get_vec(body, pos, s.stabs) || !get_vec(body, pos, s.frontier) || !get_vec(body, pos, tail))
        return false;
    if (s.labels.size() != n || tail.size() != 2) return false;
    s.scan = tail[0];
    s.labelled = tail[1];
    st = std::move(s);
    return true;
}

}  // namespace detail

// Neighbour classes of class i under all moves Gamma_j^{+-1}.
inline void move_neighbours(const ClassList& cl, std::size_t i, std::vector<std::uint32_t>& out) {
    const auto& G = cl.table();
    std::vector<std::uint16_t> t, u, scratch;
    cl.unpack(cl.keys()[i], t);
    int n = static_cast<int>(t.size());
    out.clear();
    for (int j = 0; j + 1 < n; ++j) {
        for (int dir = 0; dir < 2; ++dir) {
            u = t;
            auto x = t[j], y = t[j + 1];
            if (dir == 0) { u[j] = G.conj(x, y); u[j + 1] = x; }
            else { u[j] = y; u[j + 1] = G.conj(G.inv(y), x); }
            canonicalize(G, u, scratch);
            auto idx = cl.find(cl.pack(u));
            if (!idx) throw std::logic_error("orbit_partition: move left the class set (inconsistent class list)");
            out.push_back(static_cast<std::uint32_t>(*idx));
        }
    }
}

// Level-synchronous BFS; each level's neighbour computation is sharded over threads and merged
// in frontier order, so labels and orbit order do not depend on scheduling.
inline OrbitReport orbit_partition(const ClassList& cl, const OrbitOptions& opt = {}) {
    std::size_t N = cl.size();
    if (N > 0x7fffffff) throw ResourceError("orbit_partition: too many classes");
    detail::OrbitState st;
    std::string fp;
    bool resumed = false;
    if (!opt.checkpoint_path.empty()) {
        fp = detail::fingerprint(cl);
        resumed = detail::load_checkpoint(opt.checkpoint_path, fp, N, st);
    }
    if (!resumed) st.labels.assign(N, -1);
    unsigned threads = std::max(1u, opt.threads);
    std::size_t since = 0;
    std::vector<std::vector<std::uint32_t>> nb;
    OrbitReport rep;
    rep.profile = cl.profile();
    rep.class_count = N;

    auto checkpoint = [&] {
        if (!opt.checkpoint_path.empty()) detail::save_checkpoint(opt.checkpoint_path, fp, st);
        since = 0;
    };

    while (true) {
        if (st.frontier.empty()) {
            while (st.scan < N && st.labels[st.scan] >= 0) ++st.scan;
            if (st.scan == N) break;
            auto id = static_cast<std::int32_t>(st.sizes.size());
            st.labels[st.scan] = id;
            st.sizes.push_back(1);
            st.seeds.push_back(st.scan);
            st.stabs.push_back(cl.stabilizer_order(st.scan));
            st.frontier.push_back(static_cast<std::uint32_t>(st.scan));
            ++st.labelled;
            ++since;
        }
        std::int32_t id = st.labels[st.frontier.front()];
        std::size_t F = st.frontier.size();
        nb.resize(F);
        auto work = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t f = lo; f < hi; ++f) move_neighbours(cl, st.frontier[f], nb[f]);
        };
        if (threads == 1 || F < 256) work(0, F);
        else {
            std::vector<std::thread> pool;
            std::size_t chunk = (F + threads - 1) / threads;
            for (unsigned w = 0; w < threads; ++w) {
                std::size_t lo = w * chunk, hi = std::min(F, lo + chunk);
                if (lo < hi) pool.emplace_back(work, lo, hi);
            }
            for (auto& th : pool) th.join();
        }
        std::vector<std::uint32_t> next;
        for (std::size_t f = 0; f < F; ++f) {
            for (auto v : nb[f]) {
                if (st.labels[v] >= 0) continue;
                if (cl.stabilizer_order(v) != st.stabs[id])
                    throw std::logic_error("orbit_partition: deck order not constant on an orbit");
                st.labels[v] = id;
                ++st.sizes[id];
                next.push_back(v);
            }
        }
        st.labelled += next.size();
        since += next.size();
        st.frontier = std::move(next);
        if (opt.stop_after && st.labelled >= opt.stop_after) {
            checkpoint();
            rep.complete = false;
            return rep;
        }
        if (since >= opt.checkpoint_every) checkpoint();
    }

    for (std::size_t o = 0; o < st.sizes.size(); ++o) {
        OrbitInfo info;
        info.size = st.sizes[o];
        info.representative = cl[st.seeds[o]].representative;
        if (is_transitive(info.representative.entries)) {
            info.deck_order = deck_automorphisms(info.representative.entries).order;
            if (info.deck_order != st.stabs[o]) throw std::logic_error("orbit_partition: deck group disagrees with stabiliser");
            info.genus = genus_of(info.representative);
        } else {
            info.deck_order = st.stabs[o];
        }
        rep.orbits.push_back(std::move(info));
    }
    if (!opt.checkpoint_path.empty()) std::remove(opt.checkpoint_path.c_str());
    return rep;
}

}  // namespace cycleforge
