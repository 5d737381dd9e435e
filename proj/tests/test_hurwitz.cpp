#include "cycleforge/report.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>

using namespace cycleforge;

namespace {

HurwitzTuple tuple(std::vector<std::string> s, int d = 4) { return HurwitzTuple::parse(s, d); }

const std::string v1 = "(1 2)(3 4)";

const ClassList& h2_classes() {
    static const ClassList cl = enumerate_classes(hg_profile(2), true);
    return cl;
}

std::string dump(const OrbitReport& r) { return to_json(r).dump(); }

// Meet-in-the-middle count of product-one sequences for a two-type profile, entries restricted
// to `allowed`; `need` = number of entries of the second type.
std::uint64_t mitm_count(const std::vector<Perm>& first, const std::vector<Perm>& second, int n, int need) {
    int half = n / 2;
    using Key = std::pair<std::vector<int>, int>;
    auto table = [&](int len) {
        std::map<Key, std::uint64_t> m;
        m[{Perm::identity(4).images(), 0}] = 1;
        for (int step = 0; step < len; ++step) {
            std::map<Key, std::uint64_t> next;
            for (const auto& [k, c] : m) {
                Perm p = Perm::from_images(k.first);
                for (const auto& x : first) next[{compose(p, x).images(), k.second}] += c;
                if (k.second < need)
                    for (const auto& x : second) next[{compose(p, x).images(), k.second + 1}] += c;
            }
            m = std::move(next);
        }
        return m;
    };
    auto pre = table(half), suf = table(n - half);
    std::uint64_t total = 0;
    for (const auto& [k, c] : pre) {
        auto inv = inverse(Perm::from_images(k.first)).images();
        auto it = suf.find({inv, need - k.second});
        if (it != suf.end()) total += c * it->second;
    }
    return total;
}

}  // namespace

TEST(HurwitzMove, DefinitionExample) {
    auto t = tuple({"(1 2)", "(1 3)"}, 3);
    auto u = hurwitz_move(t, 1, Direction::forward);
    EXPECT_EQ(u, tuple({"(2 3)", "(1 2)"}, 3));
    EXPECT_EQ(hurwitz_move(u, 1, Direction::inverse), t);
    EXPECT_THROW(hurwitz_move(t, 2, Direction::forward), std::out_of_range);
    EXPECT_THROW(hurwitz_move(t, 0, Direction::forward), std::out_of_range);
}

TEST(HurwitzMove, InverseUndoesForwardRandom) {
    std::mt19937_64 rng(1);
    auto all = all_perms(5);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int c = 0; c < 1000; ++c) {
        HurwitzTuple t;
        int n = 2 + c % 7;
        for (int j = 0; j < n; ++j) t.entries.push_back(all[pick(rng)]);
        int i = 1 + static_cast<int>(rng() % (n - 1));
        EXPECT_EQ(hurwitz_move(hurwitz_move(t, i, Direction::forward), i, Direction::inverse), t);
        EXPECT_EQ(hurwitz_move(hurwitz_move(t, i, Direction::inverse), i, Direction::forward), t);
        EXPECT_EQ(product(hurwitz_move(t, i, Direction::forward).entries), product(t.entries));
    }
}

TEST(HurwitzMove, WordThenReversedInverseIsIdentity) {
    std::mt19937_64 rng(2);
    const auto& cl = h2_classes();
    for (int c = 0; c < 200; ++c) {
        auto t = cl[rng() % cl.size()].representative;
        std::vector<Move> w, back;
        for (int k = 0; k < 20; ++k) w.push_back({1 + static_cast<int>(rng() % 7), rng() % 2 ? Direction::forward : Direction::inverse});
        for (auto it = w.rbegin(); it != w.rend(); ++it)
            back.push_back({it->index, it->dir == Direction::forward ? Direction::inverse : Direction::forward});
        EXPECT_EQ(replay_sequence(replay_sequence(t, w), back), t);
    }
    auto t = cl[0].representative;
    EXPECT_EQ(replay_sequence(t, {}), t);
}

// Expected tuples are the displayed right-hand sides of the two composites.
TEST(Replay, CaseTwoComposite) {
    auto S8 = tuple({"(1 3)", "(1 3)", "(1 2)", "(1 2)", "(1 3)", "(1 3)", v1, v1});
    std::vector<Move> w;
    int n = 8;
    for (int k : {n - 4, n - 2, n - 3, n - 4, n - 5, n - 4, n - 5, n - 4, n - 3, n - 2}) w.push_back({k});
    EXPECT_EQ(replay_sequence(S8, w), tuple({"(1 3)", "(1 3)", "(2 4)", "(1 2)", "(1 2)", "(2 4)", v1, v1}));

    auto S10 = tuple({"(1 3)", "(1 3)", "(1 3)", "(1 3)", "(1 2)", "(1 2)", "(1 3)", "(1 3)", v1, v1});
    n = 10;
    w.clear();
    for (int k : {n - 4, n - 2, n - 3, n - 4, n - 5, n - 4, n - 5, n - 4, n - 3, n - 2}) w.push_back({k});
    EXPECT_EQ(replay_sequence(S10, w), tuple({"(1 3)", "(1 3)", "(1 3)", "(1 3)", "(2 4)", "(1 2)", "(1 2)", "(2 4)", v1, v1}));
}

TEST(Replay, CaseThreeComposite) {
    auto S8 = tuple({"(1 3)", "(1 3)", "(1 3)", "(1 3)", "(1 3)", "(1 3)", v1, v1});
    EXPECT_EQ(replay_sequence(S8, {{6}, {5}, {5}, {6}}), tuple({"(1 3)", "(1 3)", "(1 3)", "(1 3)", "(2 4)", "(2 4)", v1, v1}));
    auto S10 = tuple({"(1 3)", "(1 3)", "(1 3)", "(1 3)", "(1 3)", "(1 3)", "(1 3)", "(1 3)", v1, v1});
    EXPECT_EQ(replay_sequence(S10, {{8}, {7}, {7}, {8}}),
              tuple({"(1 3)", "(1 3)", "(1 3)", "(1 3)", "(1 3)", "(1 3)", "(2 4)", "(2 4)", v1, v1}));
}

TEST(Genus, RiemannHurwitz) {
    EXPECT_EQ(genus_of(tuple({"(1 2)", "(1 2)"}, 2)), 0);
    EXPECT_EQ(genus_of(tuple({"(1 2)", "(1 2)", "(2 3)", "(2 3)"}, 3)), 0);
    EXPECT_EQ(genus_of(h2_classes()[0].representative), 2);
    EXPECT_THROW(genus_of(tuple({"(1 2)", "(1 2)"}, 3)), std::invalid_argument);
}

TEST(Enumerate, DegreeTwo) {
    auto cl = enumerate_classes(transposition_profile(2, 2), true);
    ASSERT_EQ(cl.size(), 1u);
    EXPECT_EQ(cl[0].representative, tuple({"(1 2)", "(1 2)"}, 2));
}

TEST(Enumerate, DegreeThreeMatchesBruteForce) {
    // Brute force over all 3^4 transposition tuples.
    std::vector<Perm> ts{Perm::parse("(1 2)", 3), Perm::parse("(1 3)", 3), Perm::parse("(2 3)", 3)};
    std::set<std::vector<std::vector<int>>> classes;
    int raw = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    ++raw;
                    std::vector<Perm> t{ts[a], ts[b], ts[c], ts[d]};
                    if (!product(t).is_identity() || !is_transitive(t)) continue;
                    std::set<std::vector<std::vector<int>>> orbit;
                    for (const auto& g : all_perms(3)) {
                        std::vector<std::vector<int>> im;
                        for (const auto& p : t) im.push_back(conjugate(p, g).images());
                        orbit.insert(im);
                    }
                    classes.insert(*orbit.begin());
                }
    EXPECT_EQ(raw, 81);
    auto cl = enumerate_classes(transposition_profile(3, 4), true);
    EXPECT_EQ(cl.size(), classes.size());
    EXPECT_EQ(cl.size(), 4u);
    auto rep = orbit_partition(cl);
    ASSERT_EQ(rep.orbits.size(), 1u);
    EXPECT_EQ(*rep.orbits[0].genus, 0);
}

TEST(Enumerate, H2MatchesMeetInTheMiddleBurnside) {
    // All classes (connected or not): Burnside over S_4, fixed tuples counted by meet in the middle.
    auto all = all_perms(4);
    std::uint64_t fixed_sum = 0;
    for (const auto& g : all) {
        std::vector<Perm> tr, dt;
        for (const auto& x : all) {
            if (!(compose(g, x) == compose(x, g))) continue;
            auto ct = cycle_type(x).to_string();
            if (ct == "[2,1,1]") tr.push_back(x);
            if (ct == "[2,2]") dt.push_back(x);
        }
        fixed_sum += mitm_count(tr, dt, 8, 2);
    }
    ASSERT_EQ(fixed_sum % 24, 0u);
    auto cl_all = enumerate_classes(hg_profile(2), false);
    EXPECT_EQ(cl_all.size(), fixed_sum / 24);
}

TEST(Enumerate, H2ConnectedMatchesBruteForceBurnside) {
    // Every typed sequence, filtered, weighted by |centraliser| / 24.
    auto all = all_perms(4);
    std::vector<Perm> tr, dt;
    for (const auto& x : all) {
        auto ct = cycle_type(x).to_string();
        if (ct == "[2,1,1]") tr.push_back(x);
        if (ct == "[2,2]") dt.push_back(x);
    }
    std::uint64_t weighted = 0;
    std::vector<Perm> t(8, Perm::identity(4));
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) {
            std::vector<int> slots;
            for (int k = 0; k < 8; ++k)
                if (k != i && k != j) slots.push_back(k);
            for (int code = 0; code < 6 * 6 * 6 * 6 * 6 * 6 * 9; ++code) {
                int c = code;
                t[i] = dt[c % 3]; c /= 3;
                t[j] = dt[c % 3]; c /= 3;
                for (int s : slots) { t[s] = tr[c % 6]; c /= 6; }
                if (!product(t).is_identity() || !is_transitive(t)) continue;
                for (const auto& g : all) {
                    bool ok = true;
                    for (const auto& x : t) ok = ok && compose(g, x) == compose(x, g);
                    weighted += ok;
                }
            }
        }
    ASSERT_EQ(weighted % 24, 0u);
    EXPECT_EQ(h2_classes().size(), weighted / 24);
}

TEST(Enumerate, SortedCanonicalAndConsistentStabilisers) {
    const auto& cl = h2_classes();
    EXPECT_TRUE(std::is_sorted(cl.keys().begin(), cl.keys().end()));
    std::mt19937_64 rng(5);
    auto all = all_perms(4);
    for (int c = 0; c < 300; ++c) {
        auto tc = cl[rng() % cl.size()];
        const auto& g = all[rng() % all.size()];
        HurwitzTuple u = tc.representative;
        for (auto& p : u.entries) p = conjugate(p, g);
        std::vector<std::uint16_t> t, scratch;
        cl.indices_of(u, t);
        auto stab = canonicalize(cl.table(), t, scratch);
        EXPECT_EQ(stab, tc.stabilizer_order);
        auto again = t;
        canonicalize(cl.table(), again, scratch);
        EXPECT_EQ(again, t);  // idempotent
        cl.indices_of(tc.representative, scratch);
        EXPECT_EQ(t, scratch);
        EXPECT_TRUE(u.product_is_identity());
    }
}

TEST(Enumerate, CapIsEnforced) {
    try {
        enumerate_classes(hg_profile(4), true);
        FAIL() << "expected ResourceError";
    } catch (const ResourceError& e) {
        EXPECT_NE(std::string(e.what()).find("estimated"), std::string::npos);
    }
}

TEST(Orbits, H2HasTwoComponents) {
    auto rep = orbit_partition(h2_classes());
    ASSERT_EQ(rep.orbits.size(), 2u);
    std::size_t total = 0;
    std::multiset<std::size_t> decks;
    for (const auto& o : rep.orbits) {
        total += o.size;
        decks.insert(o.deck_order);
        EXPECT_EQ(*o.genus, 2);
    }
    EXPECT_EQ(total, rep.class_count);
    EXPECT_EQ(decks, (std::multiset<std::size_t>{1, 2}));
}

TEST(Orbits, IndependentOfInputOrderAndThreads) {
    const auto& cl = h2_classes();
    auto base = dump(orbit_partition(cl));
    std::mt19937_64 rng(9);
    auto classes = cl.to_vector();
    std::shuffle(classes.begin(), classes.end(), rng);
    auto all = all_perms(4);
    for (auto& c : classes)
        for (auto& p : c.representative.entries) p = conjugate(p, all[3]);
    auto cl2 = ClassList::from_classes(hg_profile(2), classes, true);
    EXPECT_EQ(dump(orbit_partition(cl2)), base);
    OrbitOptions o;
    o.threads = 4;
    EXPECT_EQ(dump(orbit_partition(cl, o)), base);
}

TEST(Orbits, MovesPreserveInvariantsOnAllH2Classes) {
    const auto& cl = h2_classes();
    std::vector<std::uint16_t> t, scratch;
    for (std::size_t i = 0; i < cl.size(); ++i) {
        auto rep = cl[i].representative;
        for (int j = 1; j < 8; ++j) {
            auto u = hurwitz_move(rep, j, Direction::forward);
            cl.indices_of(u, t);
            auto stab = canonicalize(cl.table(), t, scratch);
            auto idx = cl.find(cl.pack(t));
            ASSERT_TRUE(idx.has_value());
            EXPECT_EQ(stab, cl.stabilizer_order(i));
        }
    }
}

TEST(Orbits, Sigma6ProfileOrbitsCoverAllClasses) {
    auto rep = orbit_partition(enumerate_classes(sigma6_profile(8), true));
    EXPECT_GT(rep.class_count, 0u);
    std::size_t total = 0;
    for (const auto& o : rep.orbits) total += o.size;
    EXPECT_EQ(total, rep.class_count);
}

TEST(Degenerate, BadFibre) {
    for (int n : {8, 10, 12}) {
        std::vector<std::string> s{"(2 3)", "(2 3)"};
        for (int i = 0; i < n - 4; ++i) s.push_back("(1 2)");
        s.push_back(v1);
        s.push_back(v1);
        auto comps = degenerate_merge(tuple(s), 1);
        ASSERT_EQ(comps.size(), 2u);
        // points {1,2}: n-4 transpositions and the two v1 images; points {3,4}: the two v1 positions
        EXPECT_EQ(comps[0].points, (std::vector<int>{1, 2}));
        EXPECT_EQ(comps[0].genus, (n - 4) / 2);
        EXPECT_EQ(comps[0].branch_points.size(), static_cast<std::size_t>(n - 2));
        EXPECT_EQ(comps[1].points, (std::vector<int>{3, 4}));
        EXPECT_EQ(comps[1].genus, 0);
        EXPECT_EQ(comps[1].branch_points, (std::vector<int>{n - 1, n}));
    }
}

TEST(Degenerate, EqualTranspositionsInDegreeTwo) {
    auto t = tuple({"(1 2)", "(1 2)", "(1 2)", "(1 2)"}, 2);
    auto comps = degenerate_merge(t, 1);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_EQ(comps[0].genus, genus_of(t) - 1);
}

TEST(Degenerate, ThreeCycleMergeKeepsGenus) {
    const auto& cl = h2_classes();
    std::size_t checked = 0;
    for (std::size_t i = 0; i < cl.size(); i += 7) {
        auto t = cl[i].representative;
        for (int j = 1; j < 8; ++j) {
            if (cycle_type(compose(t.entries[j - 1], t.entries[j])).to_string() != "[3,1]") continue;
            auto comps = degenerate_merge(t, j);
            ASSERT_EQ(comps.size(), 1u);
            EXPECT_EQ(comps[0].genus, genus_of(t));
            ++checked;
        }
    }
    EXPECT_GT(checked, 0u);
}

TEST(Checkpoint, H3ResumedRunMatchesColdRun) {
    auto cl = enumerate_classes(hg_profile(3), true);
    auto cold = dump(orbit_partition(cl));
    auto path = (std::filesystem::temp_directory_path() / "cycleforge_h3.ckpt").string();
    std::filesystem::remove(path);
    OrbitOptions o;
    o.checkpoint_path = path;
    o.checkpoint_every = 2'000'000;
    o.stop_after = cl.size() / 3;
    auto partial = orbit_partition(cl, o);
    EXPECT_FALSE(partial.complete);
    ASSERT_TRUE(std::filesystem::exists(path));
    o.stop_after = 0;
    auto resumed = orbit_partition(cl, o);
    EXPECT_EQ(dump(resumed), cold);
    EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(Profile, Validation) {
    EXPECT_THROW(BranchProfile::make(4, {CycleType{{2, 1, 1}}}), std::invalid_argument);
    EXPECT_THROW(BranchProfile::make(4, {CycleType{{2, 1}}, CycleType{{2, 1}}}), std::invalid_argument);
    EXPECT_EQ(hg_profile(2).length(), 8);
    auto j = to_json(hg_profile(3));
    EXPECT_EQ(profile_from_json(j), hg_profile(3));
}
