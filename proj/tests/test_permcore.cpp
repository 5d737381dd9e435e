#include "cycleforge/perm.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cycleforge;

TEST(Perm, ParseAndPrint) {
    auto p = Perm::parse("(1 2)(3 4)", 4);
    EXPECT_EQ(p.to_string(), "(1 2)(3 4)");
    EXPECT_EQ(Perm::identity(5).to_string(), "()");
    EXPECT_EQ(Perm::parse("(1 3 2)", 3).images(), (std::vector<int>{3, 1, 2}));
    EXPECT_THROW(Perm::parse("(1 5)", 4), std::invalid_argument);
    EXPECT_THROW(Perm::parse("(1 2 1)", 4), std::invalid_argument);
}

TEST(Perm, CompositionIsRightToLeft) {
    // compose(p, q): first q, then p.
    auto p = Perm::parse("(1 2)", 3), q = Perm::parse("(2 3)", 3);
    EXPECT_EQ(compose(p, q).image0(1), 2);
    EXPECT_EQ(compose(p, q).to_string(), "(1 2 3)");
    EXPECT_EQ(compose(q, p).to_string(), "(1 3 2)");
}

TEST(Perm, ConjugateDefinition) {
    auto t12 = Perm::parse("(1 2)", 3), t13 = Perm::parse("(1 3)", 3);
    // t12 t13 t12^{-1} = t23
    EXPECT_EQ(conjugate(t13, t12).to_string(), "(2 3)");
}

TEST(Perm, GroupAxiomsRandom) {
    std::mt19937_64 rng(7);
    auto all = all_perms(5);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int i = 0; i < 200; ++i) {
        const auto &a = all[pick(rng)], &b = all[pick(rng)], &c = all[pick(rng)];
        EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
        EXPECT_TRUE(compose(a, inverse(a)).is_identity());
        EXPECT_EQ(sign(compose(a, b)), sign(a) * sign(b));
        EXPECT_EQ(cycle_type(conjugate(a, b)), cycle_type(a));
    }
}

TEST(Perm, CycleTypeAndSign) {
    EXPECT_EQ(cycle_type(Perm::parse("(1 2)(3 4)", 5)).to_string(), "[2,2,1]");
    EXPECT_EQ(sign(Perm::parse("(1 2 3)", 3)), 1);
    EXPECT_EQ(sign(Perm::parse("(1 2)", 3)), -1);
    auto S4 = all_perms(4);
    EXPECT_EQ(S4.size(), 24u);
    EXPECT_TRUE(std::is_sorted(S4.begin(), S4.end()));
}

TEST(Perm, OrbitsAndTransitivity) {
    std::vector<Perm> g{Perm::parse("(1 2)", 4), Perm::parse("(3 4)", 4)};
    EXPECT_EQ(orbits0(g).size(), 2u);
    EXPECT_FALSE(is_transitive(g));
    g.push_back(Perm::parse("(2 3)", 4));
    EXPECT_TRUE(is_transitive(g));
}

// Oracle: centraliser by scanning the whole symmetric group.
static std::size_t centraliser_order(const std::vector<Perm>& gens) {
    std::size_t c = 0;
    for (const auto& x : all_perms(gens.front().degree())) {
        bool ok = true;
        for (const auto& g : gens) ok = ok && compose(x, g) == compose(g, x);
        c += ok;
    }
    return c;
}

TEST(Perm, DeckGroupMatchesCentraliser) {
    std::mt19937_64 rng(11);
    for (int d = 2; d <= 6; ++d) {
        auto all = all_perms(d);
        std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<Perm> gens{all[pick(rng)], all[pick(rng)]};
            if (!is_transitive(gens)) continue;
            auto D = deck_automorphisms(gens);
            EXPECT_EQ(D.order, centraliser_order(gens));
            EXPECT_EQ(D.elements.size(), D.order);
        }
    }
    // Type (iii) cover: t13 and v1 generate a dihedral group with centre {1, v2}.
    std::vector<Perm> iii{Perm::parse("(1 3)", 4), Perm::parse("(1 2)(3 4)", 4)};
    EXPECT_EQ(deck_automorphisms(iii).order, 2u);
    EXPECT_THROW(deck_automorphisms({Perm::parse("(1 2)", 4)}), std::invalid_argument);
}

TEST(Perm, GeneratedSubgroup) {
    EXPECT_EQ(generated_subgroup({Perm::parse("(1 2)", 4), Perm::parse("(1 2 3 4)", 4)}).size(), 24u);
    EXPECT_EQ(generated_subgroup({Perm::parse("(1 2)(3 4)", 4), Perm::parse("(1 3)(2 4)", 4)}).size(), 4u);
}
