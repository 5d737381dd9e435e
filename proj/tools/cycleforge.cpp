#include "cycleforge/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace cycleforge;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void emit(const json& j, const std::string& out) {
    std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

cplx parse_lambda(const std::string& s) {
    auto comma = s.find(',');
    try {
        double re = std::stod(s.substr(0, comma));
        double im = comma == std::string::npos ? 0.0 : std::stod(s.substr(comma + 1));
        return {re, im};
    } catch (const std::exception&) {
        throw UsageError("--lambda expects RE or RE,IM, got \"" + s + "\"");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cycleforge: computational checks for hyperelliptic higher cycles"};
    app.require_subcommand(1);
    unsigned threads = 1;
    std::string cache_dir;
    bool no_cache = false;
    std::uint64_t seed = VerifyOptions{}.seed;
    app.add_option("--threads", threads, "Worker threads for orbit searches")->check(CLI::Range(1u, 256u));
    app.add_option("--cache-dir", cache_dir, "Result cache directory (default: $CYCLEFORGE_CACHE or .cycleforge-cache)");
    app.add_flag("--no-cache", no_cache, "Disable the result cache");
    app.add_option("--seed", seed, "Seed for randomized property checks");

    // hurwitz
    auto* hur = app.add_subcommand("hurwitz", "Hurwitz spaces of simply branched covers");
    hur->require_subcommand(1);
    auto* comp = hur->add_subcommand("components", "Orbits of the Hurwitz moves on a profile");
    int genus = -1;
    std::string profile_file, hur_out, checkpoint;
    double cap = default_class_cap;
    bool all_tuples = false;
    comp->add_option("--genus", genus, "H_g profile: 2g+2 transpositions and two double transpositions in S_4");
    comp->add_option("--profile", profile_file, "JSON profile {\"degree\": d, \"types\": [[2,1,1], ...]}");
    comp->add_option("--out", hur_out, "Report path (default stdout)");
    comp->add_option("--cap", cap, "Maximum estimated class count");
    comp->add_option("--checkpoint", checkpoint, "Checkpoint file for resumable runs");
    comp->add_flag("--all-tuples", all_tuples, "Keep intransitive tuples");

    auto* rep = hur->add_subcommand("replay", "Apply a word of Hurwitz moves");
    std::string tuple_text, moves_text;
    int degree = 0;
    rep->add_option("--tuple", tuple_text, "Entries, e.g. \"(1 2),(1 2),(1 3)(2 4),...\"")->required();
    rep->add_option("--moves", moves_text, "Moves applied left to right, e.g. \"6,4,5-\" ('-' = inverse)")->required();
    rep->add_option("--degree", degree, "Degree (default: largest point)");

    // cyclespace
    auto* cs = app.add_subcommand("cyclespace", "Boundary matrix and invariant cycle space");
    int cs_n = 0;
    bool oracle = false, cs_large = false;
    std::string csv_out, kernel_out;
    cs->add_option("--n", cs_n, "n (curves in C^{n+1})")->required();
    cs->add_flag("--oracle", oracle, "Compare with the brute-force matrix (n <= 5)");
    cs->add_option("--out", csv_out, "Matrix CSV path");
    cs->add_option("--kernel", kernel_out, "Kernel basis JSON path");
    cs->add_flag("--allow-large", cs_large, "Permit n > 12");

    // hypcheck
    auto* hy = app.add_subcommand("hypcheck", "Specialisation of invariant cycles");
    int hy_n = 0;
    bool allow_large = false;
    std::string hy_out;
    hy->add_option("--n", hy_n, "n in 2..6")->required();
    hy->add_option("--out", hy_out, "Report path (default stdout)");
    hy->add_flag("--allow-large", allow_large, "Permit n > 6");

    // ellreg
    auto* el = app.add_subcommand("ellreg", "Elliptic regulator integral I(lambda)");
    std::string lambda_text, el_out;
    double tol = 1e-3;
    bool fe = false;
    el->add_option("--lambda", lambda_text, "lambda as RE or RE,IM")->required();
    el->add_option("--tol", tol, "Absolute tolerance (>= 1e-6)");
    el->add_flag("--check-functional-equation", fe, "Also compute I(1/lambda) and the residual");
    el->add_option("--out", el_out, "Report path (default stdout)");

    // fourconfig
    auto* fc = app.add_subcommand("fourconfig", "Genus-0 4-configuration");
    std::string a1, a2, b1, b2, unit = "1", fc_out;
    bool search = false;
    int height = 20;
    fc->add_option("--a1", a1, "Gaussian rational, e.g. 2, -1/2+3i");
    fc->add_option("--a2", a2);
    fc->add_option("--b1", b1);
    fc->add_option("--b2", b2);
    fc->add_option("--unit", unit, "Rescaling unit u (roots of h_1, h_2 at +-u, +-iu)");
    fc->add_flag("--search", search, "Search for a datum satisfying (+)");
    fc->add_option("--max-height", height, "Height bound for --search");
    fc->add_option("--out", fc_out, "Report path (default stdout)");

    // verify
    auto* ve = app.add_subcommand("verify", "Run the acceptance claims");
    bool all = false, fast = false, extended = false;
    std::vector<int> only;
    std::string ve_out;
    ve->add_flag("--all", all, "Run every claim");
    ve->add_option("--claim", only, "Criterion numbers to run")->check(CLI::Range(1, 10));
    ve->add_flag("--fast", fast, "Reduced parameters: n <= 4, g = 2");
    ve->add_flag("--extended", extended, "Add g = 4");
    ve->add_option("--out", ve_out, "Report path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        ResultCache cache(no_cache ? std::filesystem::path() : ResultCache::resolve_dir(cache_dir));

        if (*hur && *comp) {
            require((genus >= 0) != !profile_file.empty(), "hurwitz components: give exactly one of --genus, --profile");
            BranchProfile prof;
            if (!profile_file.empty()) {
                std::ifstream f(profile_file);
                require(static_cast<bool>(f), "cannot read profile " + profile_file);
                prof = profile_from_json(json::parse(f));
            } else {
                require(genus <= 6, "--genus must be at most 6");
                prof = hg_profile(genus);
            }
            std::string params = json{{"profile", to_json(prof)}, {"connected", !all_tuples}}.dump();
            if (auto hit = cache.get("hurwitz", params)) {
                emit(json::parse(*hit), hur_out);
                return 0;
            }
            auto cl = enumerate_classes(prof, !all_tuples, cap);
            OrbitOptions oo;
            oo.threads = threads;
            oo.checkpoint_path = checkpoint;
            json j = to_json(orbit_partition(cl, oo));
            cache.put("hurwitz", params, j.dump());
            emit(j, hur_out);
            return 0;
        }
        if (*hur && *rep) {
            auto t = parse_tuple(tuple_text, degree > 0 ? degree : max_point(tuple_text));
            auto moves = parse_moves(moves_text);
            auto out = replay_sequence(t, moves);
            emit(json{{"input", to_json(t)}, {"moves", moves_text}, {"output", to_json(out)},
                      {"product_is_identity", out.product_is_identity()}},
                 "");
            return 0;
        }
        if (*cs) {
            require(cs_n >= 1 && (cs_n <= 12 || cs_large), "--n must be in 1..12 (or use --allow-large)");
            QMatrix M = boundary_matrix(cs_n);
            auto kb = kernel_basis(M);
            json summary{{"n", cs_n}, {"rows", M.rows()}, {"cols", M.cols()}, {"kernel_dim", kb.dimension}};
            bool ok = true;
            if (oracle) {
                ok = M == brute_force_matrix(cs_n);
                summary["oracle_match"] = ok;
            }
            if (!csv_out.empty()) {
                std::ofstream f(csv_out, std::ios::binary);
                require(static_cast<bool>(f), "cannot write " + csv_out);
                write_matrix_csv(f, cs_n, M);
            }
            if (!kernel_out.empty()) emit(kernel_json(cs_n, kb), kernel_out);
            emit(summary, "");
            return ok ? 0 : 1;
        }
        if (*hy) {
            require(hy_n >= 2 && (hy_n <= 6 || allow_large), "--n must be in 2..6 (or use --allow-large)");
            std::string params = json{{"n", hy_n}}.dump();
            json j;
            if (auto hit = cache.get("hypcheck", params)) j = json::parse(*hit);
            else {
                HypcheckOptions ho;
                ho.allow_large_n = allow_large;
                j = to_json(hypothesis_check(hy_n, kernel_basis(boundary_matrix(hy_n)).vectors, ho));
                cache.put("hypcheck", params, j.dump());
            }
            emit(j, hy_out);
            return j.at("pass").get<bool>() ? 0 : 1;
        }
        if (*el) {
            require(tol >= 1e-6, "--tol must be >= 1e-6");
            cplx lambda = parse_lambda(lambda_text);
            json j{{"lambda", cplx_json(lambda)}};
            if (fe) {
                auto r = functional_equation_check(lambda, tol);
                j["I"] = r.I.value;
                j["err"] = r.I.error;
                j["I_inv"] = r.I_inv.value;
                j["err_inv"] = r.I_inv.error;
                j["residual"] = r.residual;
                j["pass"] = r.pass;
            } else {
                auto r = regulator_integral(lambda, tol);
                j["I"] = r.value;
                j["err"] = r.error;
                j["residual"] = nullptr;
                j["pass"] = r.error <= tol;
            }
            emit(j, el_out);
            return j.at("pass").get<bool>() ? 0 : 1;
        }
        if (*fc) {
            json j;
            if (search) {
                auto s = search_plus_config(height);
                if (!s) {
                    emit(json{{"search", {{"max_height", height}, {"found", false}}}}, fc_out);
                    return 1;
                }
                auto F = build_config(s->a1, s->a2, s->b1, s->b2);
                j = to_json(F, check_conditions(F), cubical_boundary(F));
                j["search"] = {{"max_height", height}, {"found", true}, {"height", s->height}};
            } else {
                require(!a1.empty() && !a2.empty() && !b1.empty() && !b2.empty(), "fourconfig: give --a1 --a2 --b1 --b2 or --search");
                auto F = build_config(GQ::parse(a1), GQ::parse(a2), GQ::parse(b1), GQ::parse(b2), GQ::parse(unit));
                j = to_json(F, check_conditions(F), cubical_boundary(F));
            }
            bool ok = j["conditions"]["plus"].get<bool>() && j["conditions"]["weil_identity"].get<bool>() && j["boundary"]["zero"].get<bool>();
            j["pass"] = ok;
            emit(j, fc_out);
            return ok ? 0 : 1;
        }
        if (*ve) {
            require(all || !only.empty(), "verify: give --all or --claim N");
            VerifyOptions vo;
            vo.fast = fast;
            vo.extended = extended;
            vo.threads = threads;
            vo.seed = seed;
            std::vector<int> which = only;
            if (all) {
                which.clear();
                for (int c = 1; c <= 10; ++c) which.push_back(c);
            }
            std::vector<ClaimResult> results;
            for (int c : which) {
                results.push_back(run_claim(c, vo, &cache));
                const auto& r = results.back();
                std::cerr << "[" << r.criterion << "] " << r.id << ": " << r.status << " (" << r.summary << ")\n";
            }
            json j = verification_report(results, vo);
            emit(j, ve_out);
            return j.at("pass").get<bool>() ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
