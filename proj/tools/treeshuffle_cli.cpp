// Command-line front end: parse trees, dispatch to the library, and emit
// text, NDJSON, or DOT. Exit codes: 0 success, 2 input parse error,
// 3 resource cap exceeded, 1 internal failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "treeshuffle/count.hpp"
#include "treeshuffle/geometry.hpp"
#include "treeshuffle/lattice.hpp"
#include "treeshuffle/shuffle.hpp"

namespace {

using namespace treeshuffle;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Adds -S/-T (inline grammar) and --S-file/--T-file options to a subcommand.
struct TreeOptions {
    std::string s_expr, t_expr, s_file, t_file;

    void add(CLI::App* cmd, bool with_t = true) {
        auto* se = cmd->add_option("-S", s_expr, "tree S as a grammar expression");
        auto* sf = cmd->add_option("--S-file", s_file, "file containing tree S");
        se->excludes(sf);
        if (with_t) {
            auto* te = cmd->add_option("-T", t_expr, "tree T as a grammar expression");
            auto* tf = cmd->add_option("--T-file", t_file, "file containing tree T");
            te->excludes(tf);
        }
    }

    Tree s() const { return load(s_expr, s_file, "S"); }
    Tree t() const { return load(t_expr, t_file, "T"); }

private:
    static Tree load(const std::string& expr, const std::string& file, const char* name) {
        if (!expr.empty()) return Tree::parse(expr);
        if (!file.empty()) return Tree::parse(read_file(file));
        throw InputError(std::string("tree ") + name + " missing: pass -" + name + " or --" +
                         name + "-file");
    }
};

void maybe_load_cache() {
    if (const char* path = std::getenv("TREESHUFFLE_CACHE")) {
        std::ifstream in(path);
        if (in) load_count_cache(in);
    }
}

void maybe_save_cache() {
    if (const char* path = std::getenv("TREESHUFFLE_CACHE")) {
        std::ofstream out(path, std::ios::trunc);
        if (out) save_count_cache(out);
    }
}

std::string permutation_cycles(const std::vector<int>& perm) {
    std::ostringstream os;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i] || perm[i] == static_cast<int>(i)) continue;
        os << "(";
        std::size_t j = i;
        bool first = true;
        while (!seen[j]) {
            seen[j] = true;
            os << (first ? "" : " ") << j;
            first = false;
            j = perm[j];
        }
        os << ")";
    }
    std::string text = os.str();
    return text.empty() ? "()" : text;
}

int run(int argc, char** argv) {
    CLI::App app{"shuffles of rooted trees: counting, enumeration, lattice structure"};
    app.require_subcommand(1);

    TreeOptions count_opts, enum_opts, poly_opts, bounds_opts, lattice_opts, aut_opts,
        intersect_opts;

    auto* cmd_count = app.add_subcommand("count", "number of shuffles of S and T");
    count_opts.add(cmd_count);

    auto* cmd_enum = app.add_subcommand("enumerate", "all shuffles of S and T, NDJSON");
    enum_opts.add(cmd_enum);
    bool summary = false, verify_each = false;
    std::uint64_t max_shuffles = 1000000;
    cmd_enum->add_flag("--summary", summary, "print only the number of shuffles");
    cmd_enum->add_flag("--verify", verify_each, "re-check each shuffle before printing");
    cmd_enum->add_option("--max-shuffles", max_shuffles, "enumeration cap (default 10^6)");

    auto* cmd_poly = app.add_subcommand("poly", "counting polynomial P_S");
    poly_opts.add(cmd_poly, false);

    auto* cmd_bounds = app.add_subcommand("bounds", "lower and upper bounds on the count");
    bounds_opts.add(cmd_bounds);

    auto* cmd_lattice = app.add_subcommand("lattice", "the shuffle lattice of S and T");
    lattice_opts.add(cmd_lattice);
    bool emit_hasse = false;
    std::uint64_t lattice_cap = 1000000;
    cmd_lattice->add_flag("--hasse", emit_hasse, "emit the Hasse diagram as DOT");
    cmd_lattice->add_option("--max-shuffles", lattice_cap, "enumeration cap");

    auto* cmd_compose = app.add_subcommand("compose", "compose two shuffles (JSON files)");
    std::string f_path, g_path;
    cmd_compose->add_option("f", f_path, "shuffle in Sh(S,T), JSON file")->required();
    cmd_compose->add_option("g", g_path, "shuffle in Sh(R,S), JSON file")->required();

    auto* cmd_aut = app.add_subcommand("aut", "automorphisms of the shuffle lattice");
    aut_opts.add(cmd_aut);
    int aut_cap = 30;
    cmd_aut->add_option("--cap", aut_cap, "maximum pair-poset size (default 30)");

    auto* cmd_intersect =
        app.add_subcommand("intersect", "intersections of shuffles and maximal chains");
    intersect_opts.add(cmd_intersect);
    std::string a_path, b_path;
    bool emit_diagram = false, emit_chains = false, cover_check = false;
    cmd_intersect->add_option("--a", a_path, "first shuffle, JSON file");
    cmd_intersect->add_option("--b", b_path, "second shuffle, JSON file");
    cmd_intersect->add_flag("--diagram", emit_diagram, "emit the intersection diagram as DOT");
    cmd_intersect->add_flag("--chains", emit_chains, "list all maximal chains as JSON");
    cmd_intersect->add_flag("--cover-check", cover_check,
                            "check that shuffle branches cover all maximal chains");

    auto* cmd_verify = app.add_subcommand("verify", "run all three shuffle checks on a JSON file");
    std::string v_path;
    cmd_verify->add_option("shuffle", v_path, "shuffle JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    if (cmd_count->parsed()) {
        maybe_load_cache();
        std::cout << count_shuffles(count_opts.s(), count_opts.t()) << "\n";
        maybe_save_cache();
    } else if (cmd_enum->parsed()) {
        Tree S = enum_opts.s(), T = enum_opts.t();
        if (summary) {
            std::uint64_t n = 0;
            for_each_shuffle(S, T, [&](const Shuffle&) { ++n; }, max_shuffles);
            std::cout << n << "\n";
        } else {
            ShuffleChecker checker(S, T);
            for_each_shuffle(
                S, T,
                [&](const Shuffle& a) {
                    if (verify_each) {
                        std::string why;
                        if (!checker.definition(a.edges, &why) || !checker.branches(a.edges) ||
                            !checker.maximality(a.edges))
                            throw std::logic_error("enumerated shuffle failed verification: " +
                                                   why);
                    }
                    std::cout << shuffle_to_json(a) << "\n";
                },
                max_shuffles);
        }
    } else if (cmd_poly->parsed()) {
        std::cout << shuffle_polynomial(poly_opts.s()).to_string() << "\n";
    } else if (cmd_bounds->parsed()) {
        BoundsTriple b = count_bounds(bounds_opts.s(), bounds_opts.t());
        std::cout << "lower " << b.lower << "\n";
        std::cout << "upper_sharp " << b.upper_sharp << "\n";
        std::cout << "upper_coarse " << b.upper_coarse << "\n";
    } else if (cmd_lattice->parsed()) {
        HasseDiagram h = hasse(lattice_opts.s(), lattice_opts.t(), lattice_cap);
        if (emit_hasse)
            std::cout << hasse_to_dot(h);
        else
            std::cout << "nodes " << h.nodes.size() << "\nedges " << h.edges.size() << "\n";
    } else if (cmd_compose->parsed()) {
        Shuffle f = shuffle_from_json(read_file(f_path));
        Shuffle g = shuffle_from_json(read_file(g_path));
        std::cout << shuffle_to_json(compose(f, g)) << "\n";
    } else if (cmd_aut->parsed()) {
        AutomorphismGroup grp = poset_automorphisms(aut_opts.s(), aut_opts.t(), aut_cap);
        std::cout << "order " << grp.order << "\n";
        for (const auto& perm : grp.generators)
            std::cout << "generator " << permutation_cycles(perm) << "\n";
    } else if (cmd_intersect->parsed()) {
        if (!a_path.empty() || !b_path.empty()) {
            if (a_path.empty() || b_path.empty())
                throw InputError("intersect needs both --a and --b");
            Shuffle a = shuffle_from_json(read_file(a_path));
            Shuffle b = shuffle_from_json(read_file(b_path));
            std::cout << shuffle_to_json(intersect_shuffles(a, b)) << "\n";
        } else if (emit_diagram) {
            std::cout << diagram_to_dot(
                intersection_diagram(intersect_opts.s(), intersect_opts.t()));
        } else if (emit_chains) {
            std::cout << chains_to_json(maximal_chains(intersect_opts.s(), intersect_opts.t()))
                      << "\n";
        } else if (cover_check) {
            bool ok = chains_cover_check(intersect_opts.s(), intersect_opts.t());
            std::cout << (ok ? "true" : "false") << "\n";
            if (!ok) throw std::logic_error("chain cover check failed");
        } else {
            throw InputError("intersect needs --a/--b, --diagram, --chains, or --cover-check");
        }
    } else if (cmd_verify->parsed()) {
        Shuffle a = shuffle_from_json(read_file(v_path));
        std::string why;
        bool d = verify_definition(*a.S, *a.T, a.edges, &why);
        bool b = verify_branches(*a.S, *a.T, a.edges);
        bool m = verify_maximality(*a.S, *a.T, a.edges);
        std::cout << "definition " << (d ? "pass" : "fail: " + why) << "\n";
        std::cout << "branches " << (b ? "pass" : "fail") << "\n";
        std::cout << "maximality " << (m ? "pass" : "fail") << "\n";
        std::cout << (d && b && m ? "valid" : "invalid") << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const treeshuffle::ParseError& e) {
        std::cerr << "parse error at offset " << e.offset() << ": " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "json error: " << e.what() << "\n";
        return 2;
    } catch (const treeshuffle::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
