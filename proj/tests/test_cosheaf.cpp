#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coshom/cosheaf.hpp"
#include "test_util.hpp"

using namespace coshom;
using namespace testutil;

TEST_CASE("constant cosheaf validates and has identity data") {
    for (std::uint32_t p : {2u, 5u}) {
        PrimeField f(p);
        auto k = sphere_complex();
        Cosheaf c = constant_cosheaf(k, 2, f);
        CHECK(validate_cosheaf(c).empty());
        for (const auto& s : k.all_simplices()) CHECK(c.stalk_dim(s) == 2);
        CHECK(c.facet_map(Simplex{0, 1}, Simplex{0}) == Matrix::identity(2, f));
    }
    Cosheaf zero = constant_cosheaf(filled_triangle(), 0, PrimeField(2));
    CHECK(validate_cosheaf(zero).empty());
    CHECK(zero.stalk_dim(Simplex{0, 1, 2}) == 0);
    Cosheaf pt = constant_cosheaf(point_complex(), 3, PrimeField(3));
    CHECK(pt.stalk_dim(Simplex{0}) == 3);
}

TEST_CASE("a single perturbed facet map breaks exactly one square") {
    PrimeField f3(3);
    Cosheaf c = constant_cosheaf(filled_triangle(), 1, f3);
    // Scaling the ((0,1) -> (0)) map only disturbs the square through the
    // codimension-2 pair ((0,1,2) => (0)).
    c.set_facet_map(Simplex{0, 1}, Simplex{0}, Matrix::from_rows({{2}}, f3));
    auto report = validate_cosheaf(c);
    REQUIRE(report.size() == 1);
    CHECK(report[0].find("(0,1,2) => (0)") != std::string::npos);
}

TEST_CASE("missing and misshapen maps are reported") {
    PrimeField f2(2);
    auto k = SimplicialComplex::close_under_faces({Simplex{0, 1}});
    Cosheaf c(k, f2);
    c.set_stalk_dim(Simplex{0}, 1);
    c.set_stalk_dim(Simplex{1}, 1);
    c.set_stalk_dim(Simplex{0, 1}, 1);
    auto report = validate_cosheaf(c);
    REQUIRE(report.size() == 2); // both facet maps of the edge missing
    CHECK(report[0].find("missing facet map") != std::string::npos);

    c.set_facet_map(Simplex{0, 1}, Simplex{0}, Matrix::identity(1, f2));
    c.set_facet_map(Simplex{0, 1}, Simplex{1}, Matrix(2, 1, f2)); // wrong rows
    report = validate_cosheaf(c);
    REQUIRE(report.size() == 1);
    CHECK(report[0].find("shape") != std::string::npos);
}

TEST_CASE("random cosheaves are valid as generated") {
    std::mt19937_64 rng(2024);
    for (std::uint32_t p : {2u, 3u, 5u}) {
        PrimeField f(p);
        for (int trial = 0; trial < 15; ++trial) {
            auto k = random_complex(rng);
            Cosheaf c = random_cosheaf(rng, k, f);
            CHECK(validate_cosheaf(c).empty());
        }
    }
}

TEST_CASE("extension maps compose correctly") {
    PrimeField f5(5);
    auto k = solid_tetrahedron();
    Cosheaf c = constant_cosheaf(k, 2, f5);
    Simplex top{0, 1, 2, 3};
    CHECK(c.extension_map(top, top) == Matrix::identity(2, f5));
    CHECK(c.extension_map(top, Simplex{1, 3}) == Matrix::identity(2, f5));
    CHECK_THROWS_AS(c.extension_map(Simplex{0, 1}, Simplex{2}), InvalidInput);

    // On a validated random cosheaf, every descending chain gives the same
    // composite: check both orders around each codimension-2 square.
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto rk = random_complex(rng);
        Cosheaf rc = random_cosheaf(rng, rk, f5);
        REQUIRE(validate_cosheaf(rc).empty());
        for (int d = 2; d <= rk.dim(); ++d)
            for (const auto& s : rk.simplices(d))
                for (std::size_t a = 0; a + 1 <= s.dim(); ++a)
                    for (std::size_t b = a + 1; b <= s.dim(); ++b) {
                        Simplex ta = s.facet(a), tb = s.facet(b);
                        Simplex tt = ta.facet(b - 1);
                        CHECK(rc.facet_map(ta, tt) * rc.facet_map(s, ta) ==
                              rc.facet_map(tb, tt) * rc.facet_map(s, tb));
                        CHECK(rc.extension_map(s, tt) ==
                              rc.facet_map(ta, tt) * rc.facet_map(s, ta));
                    }
    }
}

TEST_CASE("skyscrapers have forced zero maps everywhere") {
    PrimeField f2(2);
    auto edge = SimplicialComplex::close_under_faces({Simplex{0, 1}});
    Cosheaf sky = skyscraper_cosheaf(edge, Simplex{0}, f2);
    CHECK(sky.stalk_dim(Simplex{0}) == 1);
    CHECK(sky.stalk_dim(Simplex{1}) == 0);
    CHECK(sky.stalk_dim(Simplex{0, 1}) == 0);
    Matrix m = sky.facet_map(Simplex{0, 1}, Simplex{0});
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 0);
    CHECK(validate_cosheaf(sky).empty());

    Cosheaf esky = skyscraper_cosheaf(edge, Simplex{0, 1}, f2);
    Matrix down = esky.facet_map(Simplex{0, 1}, Simplex{1});
    CHECK(down.rows() == 0);
    CHECK(down.cols() == 1);
    CHECK(validate_cosheaf(esky).empty());

    CHECK_THROWS_AS(skyscraper_cosheaf(edge, Simplex{7}, f2), InvalidInput);
}

TEST_CASE("direct sums stack stalks and block maps") {
    PrimeField f3(3);
    auto k = filled_triangle();
    Cosheaf a = constant_cosheaf(k, 1, f3);
    Cosheaf b = constant_cosheaf(k, 2, f3);
    Cosheaf s = direct_sum(a, b);
    CHECK(s.stalk_dim(Simplex{0, 1, 2}) == 3);
    CHECK(s.facet_map(Simplex{0, 1}, Simplex{1}) == Matrix::identity(3, f3));
    CHECK(validate_cosheaf(s).empty());

    Cosheaf zero = constant_cosheaf(k, 0, f3);
    Cosheaf same = direct_sum(a, zero);
    for (const auto& x : k.all_simplices()) CHECK(same.stalk_dim(x) == a.stalk_dim(x));

    CHECK_THROWS_AS(direct_sum(a, constant_cosheaf(k, 1, PrimeField(5))), InvalidInput);
    CHECK_THROWS_AS(direct_sum(a, constant_cosheaf(circle_complex(), 1, f3)), InvalidInput);
}

TEST_CASE("extend by zero and restrict round-trip") {
    PrimeField f2(2);
    auto k = filled_triangle();
    auto vertex = SimplicialComplex::close_under_faces({Simplex{1}});
    Cosheaf on_vertex = constant_cosheaf(vertex, 1, f2);
    Cosheaf ext = extend_by_zero(on_vertex, k);
    CHECK(ext == skyscraper_cosheaf(k, Simplex{1}, f2));

    Cosheaf c = constant_cosheaf(k, 2, f2);
    CHECK(extend_by_zero(c, k) == c);
    CHECK(restrict(c, k) == c);

    auto arc = SimplicialComplex::close_under_faces({Simplex{0, 1}});
    Cosheaf r = restrict(c, arc);
    CHECK(r == constant_cosheaf(arc, 2, f2));
    CHECK(validate_cosheaf(r).empty());
    CHECK(restrict(extend_by_zero(r, k), arc) == r);

    CHECK_THROWS_AS(restrict(c, SimplicialComplex::close_under_faces({Simplex{9}})),
                    InvalidInput);
    CHECK_THROWS_AS(extend_by_zero(c, arc), InvalidInput);
}

TEST_CASE("restrictions of valid random cosheaves stay valid") {
    std::mt19937_64 rng(77);
    PrimeField f3(3);
    for (int trial = 0; trial < 10; ++trial) {
        auto k = random_complex(rng);
        Cosheaf c = random_cosheaf(rng, k, f3);
        auto sub = random_subcomplex(rng, k);
        CHECK(validate_cosheaf(restrict(c, sub)).empty());
    }
}

TEST_CASE("morphism naturality validation") {
    PrimeField f2(2);
    auto k = filled_triangle();
    Cosheaf a = constant_cosheaf(k, 1, f2);

    CosheafMorphism id(a, a);
    for (const auto& s : k.all_simplices()) id.set_component(s, Matrix::identity(1, f2));
    CHECK(validate_morphism(id).empty());

    // Zero morphism (all components defaulted) is natural too.
    CosheafMorphism zero(a, a);
    CHECK(validate_morphism(zero).empty());

    // Break naturality on one simplex.
    CosheafMorphism broken(a, a);
    for (const auto& s : k.all_simplices()) broken.set_component(s, Matrix::identity(1, f2));
    broken.set_component(Simplex{0, 1}, Matrix(1, 1, f2)); // zero now
    auto report = validate_morphism(broken);
    CHECK(report.size() == 3); // edge->v0, edge->v1, triangle->edge all fail
    for (const auto& line : report)
        CHECK(line.find("naturality fails") != std::string::npos);
}

TEST_CASE("fibre cohomology of the map to a point recovers global cohomology") {
    PrimeField f2(2);
    auto k = circle_complex();
    auto pt = point_complex();
    std::map<VertexId, VertexId> to_pt{{0, 0}, {1, 0}, {2, 0}};
    Cosheaf h0 = fibre_cohomology_cosheaf(k, pt, to_pt, 0, f2);
    CHECK(h0.stalk_dim(Simplex{0}) == 1);
    Cosheaf h1 = fibre_cohomology_cosheaf(k, pt, to_pt, 1, f2);
    CHECK(h1.stalk_dim(Simplex{0}) == 1);
    Cosheaf h2 = fibre_cohomology_cosheaf(k, pt, to_pt, 2, f2);
    CHECK(h2.stalk_dim(Simplex{0}) == 0);
}

TEST_CASE("fibre cohomology of the identity map gives the constant picture") {
    PrimeField f3(3);
    auto k = sphere_complex();
    std::map<VertexId, VertexId> idm;
    for (VertexId v = 0; v < 4; ++v) idm[v] = v;
    // degree 0: every fibre is a closed simplex (a cone) with one component
    Cosheaf h0 = fibre_cohomology_cosheaf(k, k, idm, 0, f3);
    CHECK(validate_cosheaf(h0).empty());
    for (const auto& s : k.all_simplices()) {
        CHECK(h0.stalk_dim(s) == 1);
        for (std::size_t i = 0; s.dim() >= 1 && i <= s.dim(); ++i)
            CHECK(h0.facet_map(s, s.facet(i)) == Matrix::identity(1, f3));
    }
    // degree >= 1: cones are acyclic
    Cosheaf h1 = fibre_cohomology_cosheaf(k, k, idm, 1, f3);
    for (const auto& s : k.all_simplices()) CHECK(h1.stalk_dim(s) == 0);
}

TEST_CASE("fibre cohomology rejects non-simplicial vertex maps") {
    PrimeField f2(2);
    auto k = filled_triangle();
    auto edge = SimplicialComplex::close_under_faces({Simplex{0, 1}});
    // (0,1,2) would have to land on (0,1) as a 2-simplex image containing
    // both vertices -- that image simplex is fine, but map 2 -> 7 is not.
    std::map<VertexId, VertexId> bad{{0, 0}, {1, 1}, {2, 7}};
    CHECK_THROWS_AS(fibre_cohomology_cosheaf(k, edge, bad, 0, f2), InvalidInput);
    std::map<VertexId, VertexId> missing{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(fibre_cohomology_cosheaf(k, edge, missing, 0, f2), InvalidInput);
    // collapse of the triangle onto an edge is simplicial and fine
    std::map<VertexId, VertexId> collapse{{0, 0}, {1, 1}, {2, 1}};
    Cosheaf ok = fibre_cohomology_cosheaf(k, edge, collapse, 0, f2);
    CHECK(validate_cosheaf(ok).empty());
    CHECK(ok.stalk_dim(Simplex{0, 1}) == 1); // whole triangle maps into (0,1)
    CHECK(ok.stalk_dim(Simplex{1}) == 1);    // fibre over (1): edge (1,2)+v1+v2
    CHECK(ok.stalk_dim(Simplex{0}) == 1);    // fibre over (0): vertex 0
}

TEST_CASE("fibre cohomology detects a circle fibre") {
    // Collapse the hollow tetrahedron minus nothing... instead: project the
    // circle triangle boundary onto an edge so one fibre is two points.
    PrimeField f2(2);
    auto circle = circle_complex();
    auto edge = SimplicialComplex::close_under_faces({Simplex{0, 1}});
    std::map<VertexId, VertexId> proj{{0, 0}, {1, 1}, {2, 0}};
    Cosheaf h0 = fibre_cohomology_cosheaf(circle, edge, proj, 0, f2);
    CHECK(validate_cosheaf(h0).empty());
    // fibre over vertex (0): simplices mapping into {0} = vertices 0,2 and
    // the edge (0,2): an interval, one component.
    CHECK(h0.stalk_dim(Simplex{0}) == 1);
    // fibre over vertex (1): just vertex 1.
    CHECK(h0.stalk_dim(Simplex{1}) == 1);
    // fibre over the whole edge: everything, one component.
    CHECK(h0.stalk_dim(Simplex{0, 1}) == 1);
}
