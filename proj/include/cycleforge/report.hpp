#pragma once

#include "cyclespace.hpp"
#include "ellreg.hpp"
#include "fourconfig.hpp"
#include "hurwitz.hpp"
#include "hypcheck.hpp"

#include <json.hpp>

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cycleforge {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// hurwitz

inline json to_json(const BranchProfile& p) {
    json types = json::array();
    for (const auto& t : p.types) types.push_back(t.parts);
    return json{{"degree", p.degree}, {"types", types}};
}

// {"degree": 4, "types": [[2,1,1], ..., [2,2]]}
inline BranchProfile profile_from_json(const json& j) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("types")) throw std::invalid_argument("profile: expected {degree, types}");
    std::vector<CycleType> types;
    for (const auto& t : j.at("types")) types.push_back(CycleType::from_parts(t.get<std::vector<int>>()));
    return BranchProfile::make(j.at("degree").get<int>(), types);
}

inline json to_json(const HurwitzTuple& t) { return t.to_strings(); }

inline json to_json(const OrbitReport& r) {
    json orbits = json::array();
    for (const auto& o : r.orbits)
        orbits.push_back({{"size", o.size},
                          {"representative", to_json(o.representative)},
                          {"deck_order", o.deck_order},
                          {"genus", o.genus ? json(*o.genus) : json(nullptr)}});
    return json{{"profile", to_json(r.profile)}, {"class_count", r.class_count}, {"orbits", orbits}, {"complete", r.complete}};
}

// "1+,2-,3" -> moves; '+' (default) forward, '-' inverse.
inline std::vector<Move> parse_moves(const std::string& text) {
    std::vector<Move> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.erase(0, 1);
        if (tok.empty()) continue;
        Direction d = Direction::forward;
        if (tok.back() == '+' || tok.back() == '-') {
            d = tok.back() == '-' ? Direction::inverse : Direction::forward;
            tok.pop_back();
        }
        std::size_t used = 0;
        int i = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("moves: cannot parse \"" + tok + "\"");
        out.push_back({i, d});
    }
    return out;
}

// "(1 2),(1 2)(3 4),()" -> tuple of the given degree (cycles separated by ',' or ';').
inline HurwitzTuple parse_tuple(const std::string& text, int degree) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == ',' || c == ';') && depth == 0) {
            parts.push_back(cur);
            cur.clear();
            continue;
        }
        cur += c;
    }
    if (!cur.empty()) parts.push_back(cur);
    return HurwitzTuple::parse(parts, degree);
}

inline int max_point(const std::string& text) {
    int m = 1, v = 0;
    bool in = false;
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c))) { v = v * 10 + (c - '0'); in = true; }
        else { if (in) m = std::max(m, v); v = 0; in = false; }
    }
    if (in) m = std::max(m, v);
    return m;
}

// ---------------------------------------------------------------------------
// cyclespace

inline std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_matrix_csv(std::ostream& os, int n, const QMatrix& M) {
    auto Es = enumerate_E(n);
    auto Ps = enumerate_P(n);
    os << csv_quote("P\\E");
    for (const auto& e : Es) os << ',' << csv_quote(e.label());
    os << '\n';
    for (std::size_t r = 0; r < Ps.size(); ++r) {
        os << csv_quote(Ps[r].label());
        for (std::size_t c = 0; c < Es.size(); ++c) os << ',' << q_to_string(M.at(r, c));
        os << '\n';
    }
}

inline json kernel_json(int n, const KernelBasis& kb) {
    json cols = json::array();
    for (const auto& e : enumerate_E(n)) cols.push_back(e.label());
    json basis = json::array();
    for (const auto& v : kb.vectors) {
        json row = json::array();
        for (const auto& q : v) row.push_back(q_to_string(q));
        basis.push_back(row);
    }
    return json{{"n", n}, {"dimension", kb.dimension}, {"rank", kb.rank}, {"columns", cols}, {"basis", basis}};
}

// ---------------------------------------------------------------------------
// hypcheck

inline json to_json(const SpecializationReport& r) {
    json scalars = json::array(), diag = json::array();
    for (const auto& q : r.scalars) scalars.push_back(q_to_string(q));
    for (const auto& q : r.diagonal_coefficients) diag.push_back(q_to_string(q));
    return json{{"n", r.n},
                {"kernel_dim", r.kernel_dim},
                {"image_dim", r.image_dim},
                {"residuals_zero", r.residuals_zero},
                {"literal_residuals_zero", r.literal_residuals_zero},
                {"proportional", r.proportional},
                {"scalar_iff_diagonal", r.scalar_iff_diagonal},
                {"kernel_characterization", r.kernel_characterization},
                {"scalars", scalars},
                {"diagonal_coefficients", diag},
                {"pass", r.pass}};
}

// ---------------------------------------------------------------------------
// ellreg

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// fourconfig

inline json to_json(const FourConfig& F, const ConditionReport& c, const BoundaryResult& b) {
    json terms = json::array();
    for (const auto& [p, k] : b.total)
        terms.push_back({{"face", p.face}, {"alpha", p.alpha.to_string()},
                         {"rest", {p.rest[0].to_string(), p.rest[1].to_string()}}, {"coefficient", k}});
    std::size_t dropped = 0;
    for (const auto& i : b.incidences) dropped += i.dropped;
    return json{{"a1", F.a1.to_string()},
                {"a2", F.a2.to_string()},
                {"b1", F.b1.to_string()},
                {"b2", F.b2.to_string()},
                {"conditions",
                 {{"plus", c.plus},
                  {"f(1)=f(-1)", c.plus_at_unit},
                  {"f(i)=f(-i)", c.plus_at_i},
                  {"weil_identity", c.star_all},
                  {"f(0)", c.f0.to_string()},
                  {"f(inf)", c.finf.to_string()},
                  {"f(0)=f(inf)", c.f0_equals_finf},
                  {"c1^4", c.c4[0].to_string()},
                  {"c2^4", c.c4[1].to_string()},
                  {"relations", {c.relation[0], c.relation[1]}}}},
                {"boundary",
                 {{"zero", b.zero()}, {"incidences", b.incidences.size()}, {"dropped", dropped}, {"terms", terms}}}};
}

}  // namespace cycleforge
