#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coshom/chain.hpp"
#include "coshom/cli.hpp"
#include "coshom/cosheaf.hpp"
#include "coshom/error.hpp"
#include "coshom/io.hpp"
#include "coshom/morse.hpp"
#include "test_util.hpp"

using namespace coshom;

namespace {

/// The twisted scalar circle: all stalks F_7, maps chosen with distinct
/// nonzero scalars. Mirrored byte-for-byte by fixtures/scalar_circle.csh.
Cosheaf scalar_circle_cosheaf() {
    PrimeField f7(7);
    Cosheaf c(testutil::circle_complex(), f7);
    for (const Simplex& s : testutil::circle_complex().all_simplices()) c.set_stalk_dim(s, 1);
    auto set = [&](Simplex cof, Simplex fac, long long v) {
        c.set_facet_map(cof, fac, Matrix::from_rows({{v}}, f7));
    };
    set(Simplex{0, 1}, Simplex{0}, 1);
    set(Simplex{0, 1}, Simplex{1}, 2);
    set(Simplex{1, 2}, Simplex{1}, 3);
    set(Simplex{1, 2}, Simplex{2}, 4);
    set(Simplex{0, 2}, Simplex{0}, 5);
    set(Simplex{0, 2}, Simplex{2}, 6);
    return c;
}

std::string fixture_path(const std::string& name) {
    return std::string(COSHOM_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = (std::filesystem::temp_directory_path() / ("coshom_cli_" + name)).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

struct CliResult {
    int code;
    std::string out, err;
};

/// Invoke run_cli in-process with captured streams, the way a shell would.
CliResult run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("coshom");
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    auto* old_out = std::cout.rdbuf(out.rdbuf());
    auto* old_err = std::cerr.rdbuf(err.rdbuf());
    int code = run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

std::string strip_timing(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("timing_ms:", 0) != 0) out << line << "\n";
    return out.str();
}

} // namespace

TEST_CASE("complex files parse to face closures with located errors") {
    SimplicialComplex tri = parse_complex("0 1 2");
    CHECK(tri.size() == 7);
    CHECK(tri.dim() == 2);

    SimplicialComplex circle = parse_complex("0 1\n1 2\n0 2\n");
    CHECK(circle == testutil::circle_complex());
    CHECK(circle.size() == 6);

    // comments, blanks, and duplicate listings are all harmless
    CHECK(parse_complex("# header\n\n0 1\n  \n0 1\n") == parse_complex("0 1"));
    CHECK(parse_complex("").empty());

    try {
        parse_complex("0 1 1", "k.cplx");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.source == "k.cplx");
        CHECK(e.line == 1);
        CHECK(has(e.what(), "k.cplx:1:"));
        CHECK(has(e.what(), "strictly increasing"));
    }
    try {
        parse_complex("0 1\n# fine\n\n5 4\n", "k.cplx");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
    }
    CHECK_THROWS_AS(parse_complex("0 x"), ParseError);
    CHECK_THROWS_AS(parse_complex("-1 2"), ParseError);
    CHECK_THROWS_AS(parse_complex("99999999999999999999999"), ParseError);
}

TEST_CASE("complex emit lists maximal simplices and round-trips") {
    CHECK(emit_complex(testutil::circle_complex()) ==
          "# complex: 6 simplices, top dimension 1\n0 1\n0 2\n1 2\n");

    for (const SimplicialComplex& k :
         {testutil::circle_complex(), testutil::solid_tetrahedron(), testutil::torus_complex(),
          testutil::projective_plane_complex(), SimplicialComplex()})
        CHECK(parse_complex(emit_complex(k)) == k);

    std::mt19937_64 rng(41);
    for (int t = 0; t < 15; ++t) {
        SimplicialComplex k = testutil::random_complex(rng);
        CHECK(parse_complex(emit_complex(k)) == k);
    }

    // the checked-in circle fixture is in canonical emitted form
    std::string file = slurp(fixture_path("circle.cplx"));
    CHECK(parse_complex(file) == testutil::circle_complex());
    CHECK(emit_complex(parse_complex(file)) == file);
}

TEST_CASE("cosheaf files parse, validate, and round-trip") {
    SimplicialComplex circle = testutil::circle_complex();
    Cosheaf expected = scalar_circle_cosheaf();

    std::string file = slurp(fixture_path("scalar_circle.csh"));
    Cosheaf parsed = parse_cosheaf(file, circle, "scalar_circle.csh");
    CHECK(parsed == expected);
    CHECK(emit_cosheaf(expected) == file); // byte-level golden
    CHECK(parse_cosheaf(emit_cosheaf(parsed), circle) == parsed);

    PrimeField f3(3);
    Cosheaf konst = constant_cosheaf(testutil::filled_triangle(), 2, f3);
    CHECK(parse_cosheaf(emit_cosheaf(konst), testutil::filled_triangle()) == konst);

    std::mt19937_64 rng(2026);
    for (int t = 0; t < 10; ++t) {
        SimplicialComplex k = testutil::random_complex(rng, 25);
        PrimeField f(t % 2 ? 5 : 2);
        Cosheaf c = testutil::random_cosheaf(rng, k, f);
        CHECK(parse_cosheaf(emit_cosheaf(c), k) == c);
    }

    // unspecified stalks default to zero, and then no maps are owed
    Cosheaf sparse = parse_cosheaf("field 5\nstalk (0) 2\n", circle);
    CHECK(sparse.stalk_dim(Simplex{0}) == 2);
    CHECK(sparse.stalk_dim(Simplex{1}) == 0);
    CHECK(sparse.stalk_dim(Simplex{0, 1}) == 0);
}

TEST_CASE("cosheaf parse errors name the line and the offending pair") {
    SimplicialComplex circle = testutil::circle_complex();
    std::string good = slurp(fixture_path("scalar_circle.csh"));

    // dropping one required map is reported by facet pair
    std::string missing = good.substr(0, good.find("map (1,2) -> (2)"));
    try {
        parse_cosheaf(missing, circle, "c.csh");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(has(e.what(), "missing map (1,2) -> (2)"));
    }

    // entries must already be reduced modulo p
    try {
        parse_cosheaf("field 7\nstalk (0) 1\nstalk (1) 1\nstalk (0,1) 1\n"
                      "map (0,1) -> (0) : 7\nmap (0,1) -> (1) : 1\n",
                      circle, "c.csh");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 5);
        CHECK(has(e.what(), "not reduced"));
    }

    // wrong entry count for the declared stalk shapes
    CHECK_THROWS_AS(parse_cosheaf("field 5\nstalk (0) 2\nstalk (0,1) 1\n"
                                  "map (0,1) -> (0) : 1\nmap (0,1) -> (1) :\n",
                                  circle),
                    ParseError);

    // header problems
    CHECK_THROWS_AS(parse_cosheaf("", circle), ParseError);
    CHECK_THROWS_AS(parse_cosheaf("stalk (0) 1\n", circle), ParseError);
    CHECK_THROWS_AS(parse_cosheaf("field 6\n", circle), ParseError);
    CHECK_THROWS_AS(parse_cosheaf("field x\n", circle), ParseError);

    // membership, facet relation, duplicates
    CHECK_THROWS_AS(parse_cosheaf("field 5\nstalk (5) 1\n", circle), ParseError);
    CHECK_THROWS_AS(parse_cosheaf("field 5\nstalk (0) 1\nstalk (1,2) 1\n"
                                  "map (1,2) -> (0) : 1\n",
                                  circle),
                    ParseError);
    CHECK_THROWS_AS(parse_cosheaf("field 5\nstalk (0) 1\nstalk (0) 2\n", circle), ParseError);
    CHECK_THROWS_AS(parse_cosheaf("field 5\nstalk (0) 1\nstalk (1) 1\nstalk (0,1) 1\n"
                                  "map (0,1) -> (0) : 1\nmap (0,1) -> (0) : 2\n"
                                  "map (0,1) -> (1) : 1\n",
                                  circle),
                    ParseError);

    // well-formed but non-functorial data fails validation, not parsing
    std::string skew =
        "field 3\n"
        "stalk (0) 1\nstalk (1) 1\nstalk (2) 1\n"
        "stalk (0,1) 1\nstalk (0,2) 1\nstalk (1,2) 1\nstalk (0,1,2) 1\n"
        "map (0,1) -> (0) : 1\nmap (0,1) -> (1) : 1\n"
        "map (0,2) -> (0) : 1\nmap (0,2) -> (2) : 1\n"
        "map (1,2) -> (1) : 1\nmap (1,2) -> (2) : 1\n"
        "map (0,1,2) -> (0,1) : 2\nmap (0,1,2) -> (0,2) : 1\nmap (0,1,2) -> (1,2) : 1\n";
    try {
        parse_cosheaf(skew, testutil::filled_triangle(), "skew.csh");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(has(e.what(), "skew.csh"));
    }
}

TEST_CASE("matching files parse and round-trip") {
    PartialMatching expected;
    expected.add_pair(Simplex{1}, Simplex{0, 1});
    expected.add_pair(Simplex{2}, Simplex{1, 2});

    PartialMatching m = parse_matching("pair (1) (0,1)\npair (2) (1,2)\n");
    CHECK(m == expected);
    CHECK(emit_matching(m) == "pair (1) (0,1)\npair (2) (1,2)\n");
    CHECK(parse_matching(emit_matching(m)) == m);
    CHECK(parse_matching("").empty());
    CHECK(emit_matching(PartialMatching{}).empty());

    std::string file = slurp(fixture_path("circle.match"));
    CHECK(parse_matching(file) == expected);
    CHECK(emit_matching(parse_matching(file)) == file);

    CHECK_THROWS_AS(parse_matching("pair (0,1)"), ParseError);
    CHECK_THROWS_AS(parse_matching("link (0) (0,1)"), ParseError);
    try {
        parse_matching("pair (1) (0,1)\npair 2 (1,2)\n", "m.match");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.source == "m.match");
        CHECK(e.line == 2);
    }
}

TEST_CASE("reports round-trip through emit and parse") {
    Report r;
    r.command = "mv --complex circle.cplx --left l.cplx --right r.cplx --seed 7";
    r.inputs = {{"complex", "circle.cplx fnv1a=c4be5c8c8fa032cb"},
                {"cosheaf", "constant field=2 (default)"}};
    r.homology = {1, 1};
    r.critical = {1, 1};
    r.verdicts = {{"ses_exact", true}, {"les_exact", false}};
    r.les = {"node H_1(left) dim=0 exact=true", "map H_1(right) -> H_0(left) rank=1"};
    r.timing_ms = 42;
    CHECK(parse_report(emit_report(r)) == r);

    Report minimal;
    minimal.command = "homology --complex k.cplx";
    CHECK(parse_report(emit_report(minimal)) == minimal);

    CHECK_THROWS_AS(parse_report("nonsense without a colon"), ParseError);
    CHECK_THROWS_AS(parse_report("mystery: 3"), ParseError);
    try {
        parse_report("command: ok\nverdict: broken\n", "r.txt");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }

    // digest function against the published reference vectors
    CHECK(fnv1a("") == 14695981039346656037ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("cli computes homology and morse data on the circle fixtures") {
    std::string kf = fixture_path("circle.cplx");
    std::string cf = fixture_path("scalar_circle.csh");
    std::string mf = fixture_path("circle.match");

    auto res = run({"homology", "--complex", kf});
    CHECK(res.code == 0);
    CHECK(has(res.out, "homology: 1 1"));
    CHECK(has(res.out, "verdict: boundary_squared_zero true"));

    // the twisted scalar circle is acyclic over F_7
    res = run({"homology", "--complex", kf, "--cosheaf", cf});
    CHECK(res.code == 0);
    CHECK(has(res.out, "homology: 0 0"));

    res = run({"morse", "--complex", kf, "--auto-matching"});
    CHECK(res.code == 0);
    CHECK(has(res.out, "homology: 1 1"));
    CHECK(has(res.out, "critical: 1 1"));
    CHECK(has(res.out, "verdict: quasi_isomorphic true"));

    res = run({"morse", "--complex", kf, "--cosheaf", cf, "--matching", mf});
    CHECK(res.code == 0);
    CHECK(has(res.out, "homology: 0 0"));
    CHECK(has(res.out, "critical: 1 1"));

    res = run({"validate", "--complex", kf, "--cosheaf", cf, "--matching", mf});
    CHECK(res.code == 0);
    CHECK(has(res.out, "verdict: matching_acyclic true"));
    CHECK(has(res.out, "verdict: matching_compatible true"));

    res = run({"homology", "--complex", kf, "--field", "3"});
    CHECK(res.code == 0);
    CHECK(has(res.out, "input: cosheaf constant field=3 (default)"));
    CHECK(has(res.out, "homology: 1 1"));
}

TEST_CASE("cli builds mayer-vietoris reports with stable connecting maps") {
    std::string kf = fixture_path("circle.cplx");
    std::string lf = fixture_path("arc_left.cplx");
    std::string rf = fixture_path("arc_right.cplx");

    auto res = run({"mv", "--complex", kf, "--left", lf, "--right", rf, "--seed", "7"});
    CHECK(res.code == 0);
    CHECK(has(res.out, "verdict: ses_exact true"));
    CHECK(has(res.out, "verdict: les_exact true"));
    CHECK(has(res.out, "verdict: connecting_stable true"));
    CHECK(has(res.out, "les: map H_1(right) -> H_0(left) rank=1"));

    res = run({"morse-mv", "--complex", kf, "--left", lf, "--right", rf, "--auto-matching",
               "--field", "5"});
    CHECK(res.code == 0);
    CHECK(has(res.out, "verdict: ses_exact true"));
    CHECK(has(res.out, "verdict: cube_commutes true"));
    CHECK(has(res.out, "verdict: les_exact true"));
    CHECK(has(res.out, "verdict: les_isomorphic true"));

    res = run({"compare", "--complex", kf, "--left", lf, "--right", rf, "--auto-matching"});
    CHECK(res.code == 0);
    CHECK(has(res.out, "verdict: les_isomorphic true"));
    CHECK(has(res.out, "les: standard node H_1(right) dim=1 exact=true"));
    CHECK(has(res.out, "les: morse node H_1(right) dim=1 exact=true"));
    CHECK(!has(res.out, "first_difference"));
}

TEST_CASE("cli exit codes separate usage, parse, and validation failures") {
    std::string kf = fixture_path("circle.cplx");
    std::string lf = fixture_path("arc_left.cplx");
    std::string rf = fixture_path("arc_right.cplx");

    // usage problems -> 2; help -> 0
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"homology"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"homology", "--help"}).code == 0);
    CHECK(run({"morse", "--complex", kf}).code == 2);
    CHECK(run({"morse", "--complex", kf, "--matching", fixture_path("circle.match"),
               "--auto-matching"})
              .code == 2);
    CHECK(run({"homology", "--complex", kf, "--field", "6"}).code == 2);
    CHECK(run({"mv", "--complex", kf, "--left", lf}).code == 2);
    CHECK(run({"validate", "--complex", kf, "--left", lf}).code == 2);

    // parse errors -> 2 with a file:line diagnostic
    std::string bad = write_temp("bad.cplx", "0 1 1\n");
    auto res = run({"homology", "--complex", bad});
    CHECK(res.code == 2);
    CHECK(has(res.err, bad + ":1:"));
    CHECK(run({"homology", "--complex", "/nonexistent/k.cplx"}).code == 2);

    // semantic failures -> 1 with the input named
    std::string nonfacet = write_temp("nonfacet.match", "pair (0) (1,2)\n");
    res = run({"morse", "--complex", kf, "--matching", nonfacet});
    CHECK(res.code == 1);
    CHECK(has(res.err, nonfacet));

    res = run({"validate", "--complex", kf, "--matching", nonfacet});
    CHECK(res.code == 1);
    CHECK(has(res.out, "verdict: matching_valid false"));

    std::string skew = write_temp(
        "skew.csh",
        "field 3\n"
        "stalk (0) 1\nstalk (1) 1\nstalk (2) 1\n"
        "stalk (0,1) 1\nstalk (0,2) 1\nstalk (1,2) 1\nstalk (0,1,2) 1\n"
        "map (0,1) -> (0) : 1\nmap (0,1) -> (1) : 1\n"
        "map (0,2) -> (0) : 1\nmap (0,2) -> (2) : 1\n"
        "map (1,2) -> (1) : 1\nmap (1,2) -> (2) : 1\n"
        "map (0,1,2) -> (0,1) : 2\nmap (0,1,2) -> (0,2) : 1\nmap (0,1,2) -> (1,2) : 1\n");
    std::string tri = write_temp("tri.cplx", "0 1 2\n");
    res = run({"homology", "--complex", tri, "--cosheaf", skew});
    CHECK(res.code == 1);
    CHECK(has(res.err, "skew.csh"));

    // pieces that fail to cover the complex -> 1
    std::string pt = write_temp("pt.cplx", "0\n");
    res = run({"mv", "--complex", kf, "--left", pt, "--right", pt});
    CHECK(res.code == 1);
    CHECK(has(res.err, "decomposition"));

    // a matching that straddles a piece -> 1
    std::string straddle = write_temp("straddle.match", "pair (0) (0,1)\n");
    res = run({"morse-mv", "--complex", kf, "--left", lf, "--right", rf, "--matching", straddle});
    CHECK(res.code == 1);
    CHECK(has(res.err, "straddles"));
}

TEST_CASE("fuzzed inputs never crash and always exit gracefully") {
    std::mt19937_64 rng(99);
    const std::string alphabet = "0123456789 ()->:abcxyz#,\n\t-";
    auto random_text = [&]() {
        std::size_t len = testutil::rng_below(rng, 64);
        std::string text;
        for (std::size_t i = 0; i < len; ++i)
            text += alphabet[testutil::rng_below(rng, alphabet.size())];
        return text;
    };

    for (int t = 0; t < 60; ++t) {
        std::string path = write_temp("fuzz.cplx", random_text());
        auto res = run({"homology", "--complex", path});
        CHECK((res.code == 0 || res.code == 2));
        if (res.code == 2) CHECK(has(res.err, "fuzz.cplx"));
    }

    for (int t = 0; t < 60; ++t) {
        std::string path = write_temp("fuzz.csh", "field 5\n" + random_text());
        auto res = run(
            {"homology", "--complex", fixture_path("circle.cplx"), "--cosheaf", path});
        CHECK((res.code == 0 || res.code == 1 || res.code == 2));
    }

    for (int t = 0; t < 40; ++t) {
        try {
            (void)parse_report(random_text());
        } catch (const ParseError&) {
            // located rejection is the expected outcome
        }
    }
}

TEST_CASE("reports are deterministic given identical inputs and seed") {
    std::string kf = fixture_path("circle.cplx");
    std::string lf = fixture_path("arc_left.cplx");
    std::string rf = fixture_path("arc_right.cplx");

    std::vector<std::string> args = {"morse-mv", "--complex", kf,   "--left", lf,
                                     "--right",  rf,          "--auto-matching",
                                     "--seed",   "11"};
    auto once = run(args);
    auto twice = run(args);
    CHECK(once.code == 0);
    CHECK(strip_timing(once.out) == strip_timing(twice.out));

    std::vector<std::string> mv_args = {"mv",      "--complex", kf,  "--left", lf,
                                        "--right", rf,          "--seed", "3"};
    CHECK(strip_timing(run(mv_args).out) == strip_timing(run(mv_args).out));
}

TEST_CASE("--report writes the same report to a file") {
    std::string kf = fixture_path("circle.cplx");
    std::string rpt =
        (std::filesystem::temp_directory_path() / "coshom_cli_report.txt").string();

    auto res = run({"morse", "--complex", kf, "--auto-matching", "--report", rpt});
    CHECK(res.code == 0);
    std::string file = slurp(rpt);
    CHECK(file == res.out);

    Report parsed = parse_report(file, rpt);
    CHECK(parsed.command.rfind("morse ", 0) == 0);
    CHECK(parsed.homology == std::vector<std::size_t>{1, 1});
    CHECK(parsed.critical == std::vector<std::size_t>{1, 1});
    CHECK(emit_report(parsed) == file);

    CHECK(run({"morse", "--complex", kf, "--auto-matching", "--report",
               "/nonexistent_dir/r.txt"})
              .code == 2);
}
