#include "coshom/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "coshom/chain.hpp"
#include "coshom/cosheaf.hpp"
#include "coshom/error.hpp"
#include "coshom/io.hpp"
#include "coshom/mayer_vietoris.hpp"
#include "coshom/morse.hpp"

namespace coshom {

namespace {

struct Options {
    std::string complex_path, cosheaf_path, matching_path, left_path, right_path, report_path;
    bool auto_matching = false;
    std::uint32_t field = 2;
    std::uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string hex_digest(const std::string& bytes) {
    std::ostringstream os;
    os << std::hex << std::setfill('0') << std::setw(16) << fnv1a(bytes);
    return os.str();
}

void append_les_lines(Report& r, const std::string& prefix, const LESReport& les) {
    for (std::size_t i = 0; i < les.nodes.size(); ++i) {
        const LESNode& n = les.nodes[i];
        r.les.push_back(prefix + "node " + n.label + " dim=" + std::to_string(n.dimension) +
                        " exact=" + (les.exact_at[i] ? "true" : "false"));
        if (i < les.maps.size())
            r.les.push_back(prefix + "map " + n.label + " -> " + les.nodes[i + 1].label +
                            " rank=" + std::to_string(les.maps[i].rank()));
    }
}

/// Recompute every connecting map with shuffled pivot orders; the snake
/// lemma says the result cannot depend on the lift choices.
bool connecting_maps_stable(const ShortExactSequence& ses, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int k = 1; k <= ses.right().top_degree(); ++k) {
        Matrix base = connecting_homomorphism(ses, k);
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<std::size_t> lift(ses.middle().dim(k));
            std::iota(lift.begin(), lift.end(), std::size_t{0});
            std::shuffle(lift.begin(), lift.end(), rng);
            std::vector<std::size_t> pull(ses.left().dim(k - 1));
            std::iota(pull.begin(), pull.end(), std::size_t{0});
            std::shuffle(pull.begin(), pull.end(), rng);
            if (!(connecting_homomorphism(ses, k, lift, pull) == base)) return false;
        }
    }
    return true;
}

/// Pairs allowed in an auto-generated matching that must respect both
/// pieces of a decomposition: neither piece may be straddled.
PairPredicate piece_predicate(const Decomposition& dec) {
    SimplicialComplex l = dec.l, m = dec.m;
    return [l, m](const Simplex& sig, const Simplex& tau) {
        return l.contains(sig) == l.contains(tau) && m.contains(sig) == m.contains(tau);
    };
}

int run_command(const std::string& cmd, const Options& opt, const std::string& echo) {
    auto start = std::chrono::steady_clock::now();
    Report report;
    report.command = echo;

    // --- Load inputs --------------------------------------------------
    std::string ktext = read_file(opt.complex_path);
    SimplicialComplex k = parse_complex(ktext, opt.complex_path);
    report.inputs.emplace_back("complex", opt.complex_path + " fnv1a=" + hex_digest(ktext));

    std::optional<Cosheaf> cos;
    if (!opt.cosheaf_path.empty()) {
        std::string text = read_file(opt.cosheaf_path);
        cos = parse_cosheaf(text, k, opt.cosheaf_path);
        report.inputs.emplace_back("cosheaf", opt.cosheaf_path + " fnv1a=" + hex_digest(text));
    } else {
        cos = constant_cosheaf(k, 1, PrimeField(opt.field));
        report.inputs.emplace_back("cosheaf",
                                   "constant field=" + std::to_string(opt.field) + " (default)");
    }
    const Cosheaf& c = *cos;

    std::optional<SimplicialComplex> left, right;
    if (!opt.left_path.empty()) {
        std::string text = read_file(opt.left_path);
        left = parse_complex(text, opt.left_path);
        report.inputs.emplace_back("left", opt.left_path + " fnv1a=" + hex_digest(text));
    }
    if (!opt.right_path.empty()) {
        std::string text = read_file(opt.right_path);
        right = parse_complex(text, opt.right_path);
        report.inputs.emplace_back("right", opt.right_path + " fnv1a=" + hex_digest(text));
    }

    bool have_matching_source = !opt.matching_path.empty() || opt.auto_matching;
    std::string matching_desc = opt.matching_path.empty() ? "auto-matching" : opt.matching_path;
    std::optional<PartialMatching> matching;
    auto obtain_matching = [&](const PairPredicate& allowed) {
        if (!opt.matching_path.empty()) {
            std::string text = read_file(opt.matching_path);
            matching = parse_matching(text, opt.matching_path);
            report.inputs.emplace_back("matching",
                                       opt.matching_path + " fnv1a=" + hex_digest(text));
        } else {
            matching = generate_matching(k, c, allowed);
            report.inputs.emplace_back("matching",
                                       "auto fnv1a=" + hex_digest(emit_matching(*matching)));
        }
    };
    auto require_usable_matching = [&]() {
        auto problems = validate_matching(k, *matching);
        if (!problems.empty()) throw ValidationError(matching_desc + ": " + problems.front());
        if (!is_acyclic(k, *matching))
            throw ValidationError(matching_desc +
                                  ": matching admits a non-gradient path (not acyclic)");
        if (!is_cosheaf_compatible(*matching, c))
            throw ValidationError(matching_desc + ": a matched facet map is not invertible");
    };
    auto need_decomposition = [&]() -> Decomposition {
        try {
            return check_decomposition(k, *left, *right);
        } catch (const InvalidInput& e) {
            throw ValidationError("decomposition (" + opt.left_path + ", " + opt.right_path +
                                  "): " + e.what());
        }
    };
    auto verdict = [&](const std::string& name, bool ok) {
        report.verdicts.emplace_back(name, ok);
    };

    // --- Dispatch ------------------------------------------------------
    if (cmd == "validate") {
        verdict("complex_valid", true);  // parse_complex enforces closure
        verdict("cosheaf_valid", true);  // parse_cosheaf runs full validation
        if (have_matching_source) {
            obtain_matching({});
            auto problems = validate_matching(k, *matching);
            verdict("matching_valid", problems.empty());
            if (problems.empty()) {
                verdict("matching_acyclic", is_acyclic(k, *matching));
                verdict("matching_compatible", is_cosheaf_compatible(*matching, c));
            } else {
                for (const auto& p : problems) std::cerr << matching_desc << ": " << p << "\n";
            }
        }
        if (left && right) {
            bool ok = true;
            try {
                check_decomposition(k, *left, *right);
            } catch (const InvalidInput& e) {
                ok = false;
                std::cerr << "decomposition (" << opt.left_path << ", " << opt.right_path
                          << "): " << e.what() << "\n";
            }
            verdict("decomposition_valid", ok);
        }
    } else if (cmd == "homology") {
        ChainComplex cc = assemble(k, c);
        report.homology = homology_dimensions(cc);
        bool dsq = true;
        for (int d = 2; d <= cc.top_degree(); ++d)
            if (!(cc.boundary(d - 1) * cc.boundary(d)).is_zero()) dsq = false;
        verdict("boundary_squared_zero", dsq);
    } else if (cmd == "morse") {
        obtain_matching({});
        require_usable_matching();
        MorseComplexData data = assemble_morse_complex(k, c, *matching);
        report.homology = data.morse_homology;
        for (const auto& level : data.critical) report.critical.push_back(level.size());
        verdict("matching_valid", true);
        verdict("matching_acyclic", true);
        verdict("matching_compatible", true);
        verdict("quasi_isomorphic", data.quasi_isomorphic);
    } else if (cmd == "mv") {
        report.inputs.emplace_back("seed", std::to_string(opt.seed));
        Decomposition dec = need_decomposition();
        MayerVietorisData data = build_mv_ses(dec, c);
        report.homology = homology_dimensions(data.ses.right());
        LESReport les = long_exact_sequence(data.ses);
        verdict("ses_exact", check_exactness(data.ses.p(), data.ses.q()).empty());
        verdict("les_exact", les.all_exact);
        verdict("connecting_stable", connecting_maps_stable(data.ses, opt.seed));
        append_les_lines(report, "", les);
    } else if (cmd == "morse-mv" || cmd == "compare") {
        Decomposition dec = need_decomposition();
        obtain_matching(piece_predicate(dec));
        report.inputs.emplace_back("seed", std::to_string(opt.seed));
        require_usable_matching();
        if (!matching_subcomplex_compatible(*matching, dec.l))
            throw ValidationError(matching_desc + ": a matched pair straddles the left piece");
        if (!matching_subcomplex_compatible(*matching, dec.m))
            throw ValidationError(matching_desc + ": a matched pair straddles the right piece");
        MorseMVData data = build_morse_mv_ses(dec, c, *matching);
        MayerVietorisData standard = build_mv_ses(dec, c);
        LESReport les_morse = long_exact_sequence(data.ses);
        LESReport les_standard = long_exact_sequence(standard.ses);
        LESComparison cmpr = compare_les(les_standard, les_morse);
        report.homology = data.right.morse_homology;
        for (const auto& level : data.right.critical) report.critical.push_back(level.size());
        if (cmd == "morse-mv") {
            verdict("ses_exact", check_exactness(data.ses.p(), data.ses.q()).empty());
            verdict("cube_commutes", data.cube_commutes);
            verdict("les_exact", les_morse.all_exact);
            verdict("les_isomorphic", cmpr.isomorphic);
            verdict("connecting_stable", connecting_maps_stable(data.ses, opt.seed));
            append_les_lines(report, "", les_morse);
        } else {
            verdict("les_exact_standard", les_standard.all_exact);
            verdict("les_exact_morse", les_morse.all_exact);
            verdict("cube_commutes", data.cube_commutes);
            verdict("les_isomorphic", cmpr.isomorphic);
            append_les_lines(report, "standard ", les_standard);
            append_les_lines(report, "morse ", les_morse);
        }
        if (!cmpr.isomorphic) report.les.push_back("first_difference " + cmpr.first_difference);
    }

    // --- Emit ----------------------------------------------------------
    report.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    std::string text = emit_report(report);
    std::cout << text;
    if (!opt.report_path.empty()) {
        std::ofstream out(opt.report_path, std::ios::binary);
        if (!out) throw ParseError(opt.report_path, 0, "cannot open report file for writing");
        out << text;
    }
    bool ok = std::all_of(report.verdicts.begin(), report.verdicts.end(),
                          [](const auto& v) { return v.second; });
    return ok ? 0 : 1;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"cellular cosheaf homology over prime fields"};
    app.require_subcommand(1);
    Options opt;

    auto prime_check = CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                unsigned long v = std::stoul(s);
                if (v > 0xffffffffUL) return "field modulus out of range";
                (void)PrimeField(static_cast<std::uint32_t>(v));
            } catch (const std::exception& e) {
                return std::string("invalid field modulus: ") + e.what();
            }
            return {};
        },
        "PRIME", "prime");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--complex", opt.complex_path, "simplicial complex file")->required();
        sub->add_option("--cosheaf", opt.cosheaf_path,
                        "cosheaf file (default: constant coefficients)");
        sub->add_option("--field", opt.field,
                        "prime modulus for the default constant cosheaf")
            ->check(prime_check);
        sub->add_option("--report", opt.report_path, "also write the report to this file");
    };
    auto add_matching = [&](CLI::App* sub) {
        auto* mo = sub->add_option("--matching", opt.matching_path, "partial matching file");
        auto* ao = sub->add_flag("--auto-matching", opt.auto_matching,
                                 "generate a matching by greedy coreduction");
        mo->excludes(ao);
        ao->excludes(mo);
    };
    auto add_pieces = [&](CLI::App* sub, bool required) {
        auto* lo = sub->add_option("--left", opt.left_path, "generators of the left piece");
        auto* ro = sub->add_option("--right", opt.right_path, "generators of the right piece");
        if (required) {
            lo->required();
            ro->required();
        } else {
            lo->needs(ro);
            ro->needs(lo);
        }
    };
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "seed for the randomized self-checks");
    };

    CLI::App* validate =
        app.add_subcommand("validate", "parse the inputs and check every invariant");
    add_common(validate);
    add_matching(validate);
    add_pieces(validate, false);

    CLI::App* homology =
        app.add_subcommand("homology", "assemble the chain complex and report homology");
    add_common(homology);

    CLI::App* morse = app.add_subcommand(
        "morse", "compress through a matching and verify the quasi-isomorphism");
    add_common(morse);
    add_matching(morse);

    CLI::App* mv = app.add_subcommand(
        "mv", "build the Mayer-Vietoris sequences for a two-piece decomposition");
    add_common(mv);
    add_pieces(mv, true);
    add_seed(mv);

    CLI::App* morse_mv = app.add_subcommand(
        "morse-mv", "build the compressed Mayer-Vietoris sequences for a decomposition");
    add_common(morse_mv);
    add_matching(morse_mv);
    add_pieces(morse_mv, true);
    add_seed(morse_mv);

    CLI::App* compare = app.add_subcommand(
        "compare", "compare the standard and compressed long exact sequences");
    add_common(compare);
    add_matching(compare);
    add_pieces(compare, true);
    add_seed(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    if ((cmd == "morse" || cmd == "morse-mv" || cmd == "compare") && opt.matching_path.empty() &&
        !opt.auto_matching) {
        std::cerr << "error: " << cmd << " requires either --matching PATH or --auto-matching\n";
        return 2;
    }

    std::string echo;
    for (int i = 1; i < argc; ++i) echo += (i > 1 ? " " : "") + std::string(argv[i]);

    try {
        return run_command(cmd, opt, echo);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace coshom
