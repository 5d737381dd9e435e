#pragma once

#include "cache.hpp"
#include "report.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace cycleforge {

struct VerifyOptions {
    bool fast = false;      // n <= 4, g = 2, tol = 1e-3
    bool extended = false;  // adds g = 4
    unsigned threads = 1;
    std::uint64_t seed = 20240601;
};

struct ClaimResult {
    int criterion = 0;
    std::string id;
    std::string anchor;
    std::string status;  // pass | fail | skipped
    json artifacts;
    std::string summary;
    double seconds = 0;
    bool cached = false;
};

struct ClaimSpec {
    int criterion;
    std::string id;
    std::string anchor;
};

inline const std::vector<ClaimSpec>& claim_specs() {
    static const std::vector<ClaimSpec> specs{
        {1, "hurwitz-components", "H_g consists of two components; one has a deck automorphism of order 2"},
        {2, "move-replay", "the two displayed Gamma-composites reproduce their output tuples"},
        {3, "badfibre-degeneration", "the degenerate fibre has components of genus (n-4)/2 and 0"},
        {4, "toy-hurwitz-oracle", "degree 3, four transpositions: 4 classes, 1 orbit"},
        {5, "cycle-space-rank", "V(C,D) has rank 1 for n <= 2 and rank > 1 for n > 2"},
        {6, "proof-counts", "singleton fibres are the two exceptional families; partition bound exceeds n"},
        {7, "hypothesis-check", "the hypothesis holds for 2 <= n <= 6"},
        {8, "regulator-functional-equation", "I(lambda) - I(1/lambda) = log|lambda|; I is not constant"},
        {9, "genus0-configuration", "the genus-0 4-configuration is a cycle"},
        {10, "property-suites", "move bijectivity, reduce linearity, canonical forms, quadrature error bounds"},
    };
    return specs;
}

namespace claims {

struct Outcome {
    bool pass = false;
    json artifacts = json::object();
    std::string summary;
};

inline HurwitzTuple badfibre_tuple(int n) {
    std::vector<std::string> s{"(2 3)", "(2 3)"};
    for (int i = 0; i < n - 4; ++i) s.push_back("(1 2)");
    s.push_back("(1 2)(3 4)");
    s.push_back("(1 2)(3 4)");
    return HurwitzTuple::parse(s, 4);
}

// Case (ii): (t13,..,t13, t12,t12, t13,t13, v1,v1); moves innermost first.
inline std::pair<HurwitzTuple, HurwitzTuple> replay_case_ii(int n) {
    std::vector<std::string> s(n - 8, "(1 3)");
    for (auto x : {"(1 3)", "(1 3)", "(1 2)", "(1 2)", "(1 3)", "(1 3)", "(1 2)(3 4)", "(1 2)(3 4)"}) s.push_back(x);
    std::vector<Move> mv;
    for (int k : {n - 4, n - 2, n - 3, n - 4, n - 5, n - 4, n - 5, n - 4, n - 3, n - 2}) mv.push_back({k, Direction::forward});
    auto out = replay_sequence(HurwitzTuple::parse(s, 4), mv);
    std::vector<std::string> e(n - 6, "(1 3)");
    for (auto x : {"(2 4)", "(1 2)", "(1 2)", "(2 4)", "(1 2)(3 4)", "(1 2)(3 4)"}) e.push_back(x);
    return {out, HurwitzTuple::parse(e, 4)};
}

// Case (iii): (t13,..,t13,v1,v1) under Gamma_{n-2} Gamma_{n-3} Gamma_{n-3} Gamma_{n-2}.
inline std::pair<HurwitzTuple, HurwitzTuple> replay_case_iii(int n) {
    std::vector<std::string> s(n - 2, "(1 3)");
    s.push_back("(1 2)(3 4)");
    s.push_back("(1 2)(3 4)");
    auto out = replay_sequence(HurwitzTuple::parse(s, 4), {{n - 2}, {n - 3}, {n - 3}, {n - 2}});
    std::vector<std::string> e(n - 4, "(1 3)");
    for (auto x : {"(2 4)", "(2 4)", "(1 2)(3 4)", "(1 2)(3 4)"}) e.push_back(x);
    return {out, HurwitzTuple::parse(e, 4)};
}

inline Outcome hurwitz_components(const VerifyOptions& o) {
    Outcome r;
    r.pass = true;
    std::vector<int> gs{2};
    if (!o.fast) gs.push_back(3);
    if (o.extended) gs.push_back(4);
    for (int g : gs) {
        auto cl = enumerate_classes(hg_profile(g), true, o.extended ? 1e9 : default_class_cap);
        OrbitOptions oo;
        oo.threads = o.threads;
        auto rep = orbit_partition(cl, oo);
        std::multiset<std::size_t> decks;
        bool genus_ok = true;
        for (const auto& orb : rep.orbits) {
            decks.insert(orb.deck_order);
            genus_ok = genus_ok && orb.genus && *orb.genus == g;
        }
        bool ok = rep.orbits.size() == 2 && decks == std::multiset<std::size_t>{1, 2} && genus_ok;
        r.pass = r.pass && ok;
        json sizes = json::array(), deck = json::array();
        for (const auto& orb : rep.orbits) { sizes.push_back(orb.size); deck.push_back(orb.deck_order); }
        r.artifacts["g=" + std::to_string(g)] = {{"class_count", rep.class_count}, {"orbit_sizes", sizes}, {"deck_orders", deck}, {"pass", ok}};
        if (!r.summary.empty()) r.summary += "; ";
        r.summary += "g=" + std::to_string(g) + ": " + std::to_string(rep.orbits.size()) + " orbits, deck orders";
        for (const auto& orb : rep.orbits) r.summary += " " + std::to_string(orb.deck_order);
    }
    return r;
}

inline Outcome move_replay(const VerifyOptions&) {
    Outcome r;
    r.pass = true;
    for (int n : {8, 10}) {
        auto [a, ea] = replay_case_ii(n);
        auto [b, eb] = replay_case_iii(n);
        bool ok = a == ea && b == eb;
        r.pass = r.pass && ok;
        r.artifacts["n=" + std::to_string(n)] = {{"case_ii", to_json(a)}, {"case_iii", to_json(b)}, {"pass", ok}};
    }
    r.summary = r.pass ? "both composites reproduce at n=8,10" : "mismatch";
    return r;
}

inline Outcome badfibre(const VerifyOptions&) {
    Outcome r;
    r.pass = true;
    for (int n : {8, 10, 12}) {
        auto comps = degenerate_merge(badfibre_tuple(n), 1);
        bool ok = comps.size() == 2;
        std::vector<int> all, last{n - 1, n};
        for (int j = 3; j <= n; ++j) all.push_back(j);
        json cj = json::array();
        if (ok) {
            const auto& c1 = comps[0].genus >= comps[1].genus ? comps[0] : comps[1];
            const auto& c2 = &c1 == &comps[0] ? comps[1] : comps[0];
            ok = c1.tuple.degree() == 2 && c2.tuple.degree() == 2 && c1.genus == (n - 4) / 2 && c2.genus == 0 &&
                 c1.branch_points == all && c2.branch_points == last;
        }
        for (const auto& c : comps) cj.push_back({{"points", c.points}, {"genus", c.genus}, {"branch_points", c.branch_points}});
        r.pass = r.pass && ok;
        r.artifacts["n=" + std::to_string(n)] = {{"components", cj}, {"pass", ok}};
    }
    r.summary = r.pass ? "genera (n-4)/2 and 0 at n=8,10,12" : "mismatch";
    return r;
}

// Classes of transitive product-one transposition 4-tuples in S_3, by brute force over 3^4 tuples.
inline std::size_t brute_force_degree3_classes() {
    std::vector<Perm> ts{Perm::parse("(1 2)", 3), Perm::parse("(1 3)", 3), Perm::parse("(2 3)", 3)};
    std::set<std::vector<std::string>> classes;
    for (int code = 0; code < 81; ++code) {
        std::vector<Perm> t;
        for (int c = code, k = 0; k < 4; ++k, c /= 3) t.push_back(ts[c % 3]);
        if (!product(t).is_identity() || !is_transitive(t)) continue;
        std::vector<std::string> best;
        for (const auto& g : all_perms(3)) {
            std::vector<std::string> s;
            for (const auto& p : t) s.push_back(conjugate(p, g).to_string());
            if (best.empty() || s < best) best = s;
        }
        classes.insert(best);
    }
    return classes.size();
}

inline Outcome toy_oracle(const VerifyOptions&) {
    Outcome r;
    auto cl = enumerate_classes(transposition_profile(3, 4), true);
    auto rep = orbit_partition(cl);
    std::size_t brute = brute_force_degree3_classes();
    r.pass = cl.size() == 4 && brute == 4 && rep.orbits.size() == 1;
    r.artifacts = {{"classes", cl.size()}, {"brute_force_classes", brute}, {"orbits", rep.orbits.size()}};
    r.summary = std::to_string(cl.size()) + " classes, " + std::to_string(rep.orbits.size()) + " orbit";
    return r;
}

inline Outcome cycle_space(const VerifyOptions& o) {
    Outcome r;
    r.pass = true;
    int top = o.fast ? 4 : 12;
    json dims = json::object();
    for (int n = 1; n <= top; ++n) {
        auto kb = kernel_basis(boundary_matrix(n));
        bool ok = kb.dimension >= 1 && (n > 2 || kb.dimension == 1) && (n < 3 || n > 6 || kb.dimension >= 2);
        dims[std::to_string(n)] = kb.dimension;
        r.pass = r.pass && ok;
    }
    bool oracle = true;
    for (int n = 1; n <= 4; ++n) oracle = oracle && boundary_matrix(n) == brute_force_matrix(n);
    r.pass = r.pass && oracle;
    r.artifacts = {{"kernel_dimensions", dims}, {"brute_force_match_n_le_4", oracle}};
    r.summary = "kernel dims " + dims.dump();
    return r;
}

inline Outcome proof_counts(const VerifyOptions&) {
    Outcome r;
    r.pass = true;
    for (int n = 4; n <= 12; ++n) {
        auto rep = fiber_counts(n);
        auto Ps = enumerate_P(n);
        std::set<std::size_t> singles(rep.singleton_p2.begin(), rep.singleton_p2.end()), family;
        for (std::size_t p = 0; p < Ps.size(); ++p)
            if (in_exceptional_family(Ps[p], n)) family.insert(p);
        bool ok = singles == family && singles.size() <= static_cast<std::size_t>(n);
        bool bound = n <= 5 || rep.partition_bound > static_cast<std::uint64_t>(n);
        json labels = json::array();
        for (auto p : singles) labels.push_back(Ps[p].label());
        r.artifacts["n=" + std::to_string(n)] = {{"singletons", labels}, {"partition_bound", rep.partition_bound}, {"pass", ok && bound}};
        r.pass = r.pass && ok && bound;
    }
    r.summary = r.pass ? "classification and bound hold for n=4..12" : "mismatch";
    return r;
}

inline Outcome hypothesis(const VerifyOptions& o) {
    Outcome r;
    r.pass = true;
    int top = o.fast ? 4 : 6;
    for (int n = 2; n <= top; ++n) {
        auto kb = kernel_basis(boundary_matrix(n));
        auto rep = hypothesis_check(n, kb.vectors);
        r.pass = r.pass && rep.pass;
        r.artifacts["n=" + std::to_string(n)] = to_json(rep);
    }
    r.summary = r.pass ? "passes for n=2.." + std::to_string(top) : "fails";
    return r;
}

inline Outcome regulator(const VerifyOptions&) {
    Outcome r;
    r.pass = true;
    const double tol = 1e-3;
    for (cplx l : {cplx(2), cplx(4), cplx(10), cplx(3, 1)}) {
        auto f = functional_equation_check(l, tol);
        bool ok = f.residual < 5e-3;
        r.pass = r.pass && ok;
        std::ostringstream key;
        key << "lambda=" << l.real() << (l.imag() ? "+" + std::to_string(static_cast<int>(l.imag())) + "i" : "");
        r.artifacts[key.str()] = {{"I", f.I.value}, {"I_inv", f.I_inv.value}, {"err", f.I.error}, {"err_inv", f.I_inv.error},
                                  {"residual", f.residual}, {"pass", ok}};
    }
    auto a = regulator_integral(cplx(2), tol), b = regulator_integral(cplx(0.5), tol);
    double gap = std::abs(a.value - b.value);
    bool nonconst = gap > 0.69 - 5e-3;
    r.pass = r.pass && nonconst;
    r.artifacts["nonconstancy"] = {{"gap", gap}, {"pass", nonconst}};
    r.summary = "|I(2)-I(1/2)| = " + std::to_string(gap);
    return r;
}

inline Outcome genus0(const VerifyOptions&) {
    Outcome r;
    auto s = search_plus_config(20);
    if (!s) {
        r.summary = "no datum with (+) up to height 20";
        return r;
    }
    auto F = build_config(s->a1, s->a2, s->b1, s->b2);
    auto c = check_conditions(F);
    auto B = cubical_boundary(F);
    bool fvals = c.f0 == GQ(1) && c.finf == GQ(1);
    bool singles = true;
    for (int i = 1; i <= 4; ++i) singles = singles && !cubical_boundary(F, {i}).zero();
    bool neg = false;
    json negj = nullptr;
    if (auto nc = search_negative_control()) {
        auto G = build_config(nc->a1, nc->a2, nc->b1, nc->b2);
        auto cg = check_conditions(G);
        neg = !cg.plus && !cg.star_all;
        negj = {{"a1", nc->a1.to_string()}, {"a2", nc->a2.to_string()}, {"b1", nc->b1.to_string()}, {"b2", nc->b2.to_string()},
                {"weil_identity", cg.star_all}};
    }
    r.pass = c.plus && fvals && c.star_all && B.zero() && singles && neg;
    r.artifacts = to_json(F, c, B);
    r.artifacts["height"] = s->height;
    r.artifacts["single_curve_boundaries_nonzero"] = singles;
    r.artifacts["negative_control"] = negj;
    r.summary = "datum a=(" + s->a1.to_string() + "," + s->a2.to_string() + ") b=(" + s->b1.to_string() + "," +
                s->b2.to_string() + "), boundary " + (B.zero() ? "0" : "nonzero");
    return r;
}

// ---------------------------------------------------------------------------
// Property suites

inline mpq_class random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline KSymbolVector random_symbol_vector(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> kind(0, 2), kk(1, 7), tr(-2, 2), bit(0, 1), len(1, 8);
    KSymbolVector v;
    for (int t = len(rng); t > 0; --t) {
        KSymbol s{static_cast<KSymbol::Kind>(kind(rng)), kk(rng), Translation::zero(n)};
        if (s.kind == KSymbol::A && s.k % 2 == 0) ++s.k;
        for (auto& x : s.c.free) x = tr(rng);
        s.c.torsion = bit(rng);
        v.add(s, random_rational(rng));
    }
    return v;
}

struct MoveCheck {
    std::size_t cases = 0, failures = 0;
};

inline MoveCheck move_properties(const ClassList& cl, std::size_t cases, std::mt19937_64& rng) {
    MoveCheck mc;
    int n = cl.profile().length();
    auto perms = all_perms(cl.profile().degree);
    std::uniform_int_distribution<std::size_t> pick(0, cl.size() - 1), pg(0, perms.size() - 1);
    std::uniform_int_distribution<int> pi(1, n - 1), pd(0, 1);
    auto types = [](const HurwitzTuple& t) {
        std::vector<CycleType> v;
        for (const auto& p : t.entries) v.push_back(cycle_type(p));
        std::sort(v.begin(), v.end());
        return v;
    };
    for (std::size_t c = 0; c < cases; ++c) {
        HurwitzTuple t = cl[pick(rng)].representative;
        const Perm& g = perms[pg(rng)];
        for (auto& p : t.entries) p = conjugate(p, g);
        int i = pi(rng);
        Direction d = pd(rng) ? Direction::inverse : Direction::forward;
        Direction back = d == Direction::forward ? Direction::inverse : Direction::forward;
        HurwitzTuple u = hurwitz_move(t, i, d);
        bool ok = hurwitz_move(u, i, back) == t && u.product_is_identity() && types(u) == types(t) &&
                  generated_subgroup(u.entries) == generated_subgroup(t.entries) &&
                  deck_automorphisms(u.entries).order == deck_automorphisms(t.entries).order;
        ++mc.cases;
        mc.failures += !ok;
    }
    return mc;
}

// Every class conjugated by every group element canonicalises back to itself with the same stabiliser.
inline std::size_t canonicalization_failures(const ClassList& cl) {
    const GroupTable& G = cl.table();
    std::vector<std::uint16_t> t, u, scratch;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < cl.size(); ++i) {
        cl.unpack(cl.keys()[i], t);
        for (int g = 0; g < G.order(); ++g) {
            u = t;
            for (auto& x : u) x = G.conj(g, x);
            auto stab = canonicalize(G, u, scratch);
            failures += cl.pack(u) != cl.keys()[i] || stab != cl.stabilizer_order(i);
        }
    }
    return failures;
}

inline Outcome properties(const VerifyOptions& o) {
    Outcome r;
    std::mt19937_64 rng(o.seed);
    auto cl = enumerate_classes(hg_profile(2), true);
    auto mc = move_properties(cl, 1000, rng);

    std::size_t red_fail = 0;
    for (int c = 0; c < 500; ++c) {
        int n = 2 + static_cast<int>(rng() % 5);
        auto u = random_symbol_vector(rng, n), v = random_symbol_vector(rng, n);
        mpq_class a = random_rational(rng), b = random_rational(rng);
        KSymbolVector lhs = u.scaled(a);
        lhs.add(v, b);
        KSymbolVector rhs = reduce(u).scaled(a);
        rhs.add(reduce(v), b);
        red_fail += !(reduce(lhs) == rhs) || !(reduce(reduce(u)) == reduce(u));
    }

    std::size_t canon_fail = canonicalization_failures(cl);

    // Two-resolution bound against a run at the tightest tolerance.
    std::size_t quad_fail = 0;
    json quad = json::array();
    for (cplx l : {cplx(2), cplx(0.5), cplx(4), cplx(0.25), cplx(10), cplx(0.1), cplx(3, 1), 1.0 / cplx(3, 1)}) {
        auto lo = regulator_integral(l, 1e-3);
        auto hi = regulator_integral(l, 1e-6);
        bool ok = lo.error <= 1e-3 && hi.error <= 1e-6 && std::abs(lo.value - hi.value) <= lo.error + hi.error;
        quad_fail += !ok;
        quad.push_back({{"lambda", cplx_json(l)}, {"err", lo.error}, {"deviation", std::abs(lo.value - hi.value)}});
    }
    r.pass = mc.failures == 0 && red_fail == 0 && canon_fail == 0 && quad_fail == 0;
    r.artifacts = {{"move_cases", mc.cases},
                   {"move_failures", mc.failures},
                   {"reduce_cases", 500},
                   {"reduce_failures", red_fail},
                   {"canonicalization_classes", cl.size()},
                   {"canonicalization_failures", canon_fail},
                   {"quadrature_runs", quad},
                   {"quadrature_failures", quad_fail}};
    r.summary = "failures: moves " + std::to_string(mc.failures) + ", reduce " + std::to_string(red_fail) + ", canonical " +
                std::to_string(canon_fail) + ", quadrature " + std::to_string(quad_fail);
    return r;
}

}  // namespace claims

inline std::function<claims::Outcome(const VerifyOptions&)> claim_runner(int criterion) {
    switch (criterion) {
        case 1: return claims::hurwitz_components;
        case 2: return claims::move_replay;
        case 3: return claims::badfibre;
        case 4: return claims::toy_oracle;
        case 5: return claims::cycle_space;
        case 6: return claims::proof_counts;
        case 7: return claims::hypothesis;
        case 8: return claims::regulator;
        case 9: return claims::genus0;
        case 10: return claims::properties;
    }
    throw std::invalid_argument("no claim for criterion " + std::to_string(criterion));
}

inline std::string claim_params(int criterion, const VerifyOptions& o) {
    return json{{"criterion", criterion}, {"fast", o.fast}, {"extended", o.extended}, {"seed", o.seed}}.dump();
}

inline ClaimResult run_claim(int criterion, const VerifyOptions& o, ResultCache* cache = nullptr) {
    const auto& spec = claim_specs().at(criterion - 1);
    ClaimResult cr;
    cr.criterion = criterion;
    cr.id = spec.id;
    cr.anchor = spec.anchor;
    auto t0 = std::chrono::steady_clock::now();
    std::string params = claim_params(criterion, o);
    std::optional<std::string> hit = cache ? cache->get("verify", params) : std::nullopt;
    json payload;
    if (hit) {
        try {
            payload = json::parse(*hit);
            cr.cached = true;
        } catch (const json::exception&) {
            hit.reset();
        }
    }
    if (!hit) {
        claims::Outcome out;
        try {
            out = claim_runner(criterion)(o);
        } catch (const std::exception& e) {
            out.pass = false;
            out.summary = std::string("error: ") + e.what();
        }
        payload = {{"status", out.pass ? "pass" : "fail"}, {"summary", out.summary}, {"artifacts", out.artifacts}};
        if (cache && out.pass) cache->put("verify", params, payload.dump());
    }
    cr.status = payload.at("status").get<std::string>();
    cr.summary = payload.at("summary").get<std::string>();
    cr.artifacts = payload.at("artifacts");
    cr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cr;
}

// Timing lives in its own top-level field so reports compare equal across runs without it.
inline json verification_report(const std::vector<ClaimResult>& results, const VerifyOptions& o) {
    json claims = json::array(), timing = json::object();
    bool all = true;
    for (const auto& r : results) {
        claims.push_back({{"id", r.id}, {"criterion", r.criterion}, {"anchor", r.anchor}, {"status", r.status},
                          {"summary", r.summary}, {"artifacts", r.artifacts}});
        timing[r.id] = {{"seconds", r.seconds}, {"cached", r.cached}};
        all = all && r.status == "pass";
    }
    return json{{"suite_version", code_version},
                {"mode", o.fast ? "fast" : (o.extended ? "extended" : "full")},
                {"seed", o.seed},
                {"claims", claims},
                {"pass", all},
                {"timing", timing}};
}

}  // namespace cycleforge
