#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "uniformize/conjugate.hpp"
#include "uniformize/mapper.hpp"
#include "uniformize/metrics.hpp"
#include "uniformize/refine.hpp"

using namespace uniformize;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

struct Prep {
    SlitQuadrilateral q;
    ScalarField g, h;
    double per = 0.0;
    RectNet net;
    TargetAnnulus target;
    PLMap map;
};

Prep make(const MeshDocument& doc) {
    PLComplex cx = doc.to_complex();
    DirichletSpec spec;
    spec.k = doc.k;
    spec.high_set = cx.net.boundary_components()[0];
    spec.low_sets = {cx.net.boundary_components()[1]};
    ScalarField g0 = solve_dirichlet(cx.net, spec);
    std::vector<VertexId> originals;
    for (VertexId v = 0; v < cx.net.vertex_count(); ++v) originals.push_back(v);
    Refined r = refine_for_levels(cx, g0, distinct_values(g0, originals, 1e-12));
    Slit slit = find_slit(r.cx, r.field);
    Prep p{cut_along_slit(r.cx, r.field, slit), {}, {}, 0.0, {}, {}, {}};
    p.g = p.q.lift_field(r.field);
    ConjugateField gs = conjugate_of_g(p.q, p.g);
    p.per = period(p.q, p.g, gs);
    p.h = harmonic_conjugate(p.q, p.per);
    p.net = build_rectnet(p.q, p.g, p.h);
    p.target = build_target(doc.k, p.per, p.net.g_values, p.net.h_values);
    p.map = build_map(p.net, p.target);
    return p;
}
}  // namespace

TEST_CASE("wheel target: radii and angles") {
    Prep p = make(fixtures::quad_wheel());
    CHECK(p.per == doctest::Approx(4.0));
    REQUIRE(p.target.circle_radii.size() == 2);
    CHECK(p.target.circle_radii[0] == doctest::Approx(1.0));
    CHECK(p.target.circle_radii[1] == doctest::Approx(std::exp(std::numbers::pi / 2)));
    // declared boundary radii {1, 2pi exp(2pi k / period)}
    CHECK(p.target.boundary_r1() == 1.0);
    CHECK(p.target.boundary_r2() == two_pi * std::exp(two_pi * 1.0 / p.per));
    REQUIRE(p.target.angles.size() == 5);
    for (size_t j = 0; j < 5; ++j) {
        CHECK(p.target.angles[j] == doctest::Approx(0.25 * two_pi * static_cast<double>(j)));
    }
    CHECK(p.target.angles.front() == doctest::Approx(0.0));
    CHECK(p.target.angles.back() == doctest::Approx(two_pi));
}

TEST_CASE("build_target validates monotone levels") {
    CHECK_THROWS_AS(build_target(1.0, 4.0, {0.0, 0.5, 0.4}, {0.0, 4.0}), Error);
    CHECK_THROWS_AS(build_target(1.0, -1.0, {0.0, 1.0}, {0.0, 4.0}), Error);
}

TEST_CASE("map corners and boundary preservation") {
    Prep p = make(fixtures::g8x3());
    for (const auto& cm : p.map.cells) {
        CHECK(cm.r0 == p.target.circle_radii[static_cast<size_t>(cm.i)]);
        CHECK(cm.r1 == p.target.circle_radii[static_cast<size_t>(cm.i + 1)]);
        CHECK(cm.phi0 == p.target.angles[static_cast<size_t>(cm.j)]);
        CHECK(cm.phi1 == p.target.angles[static_cast<size_t>(cm.j + 1)]);
        // source corners follow the lattice
        CHECK(cm.source_corners[0].x == p.net.at(cm.i, cm.j).p.x);
        CHECK(cm.source_corners[1].x == p.net.at(cm.i + 1, cm.j).p.x);
    }
    // cells on the inner boundary map to arcs on the unit circle
    for (const auto& cm : p.map.cells) {
        if (cm.i == 0) CHECK(cm.r0 == doctest::Approx(1.0));
    }
}

TEST_CASE("measure preservation and tiling completeness") {
    for (auto doc : {fixtures::quad_wheel(), fixtures::g8x3(), fixtures::irregular_annulus(1),
                     fixtures::irregular_annulus(2)}) {
        Prep p = make(doc);
        auto rep = verify_measure_preservation(p.map, p.net, p.target, 1e-9);
        CHECK(rep.pass());
        // total nu equals pi (exp(4 pi k / period) - 1)
        CHECK(rep.total_nu ==
              doctest::Approx(std::numbers::pi * (std::exp(4 * std::numbers::pi / p.per) - 1.0))
                  .epsilon(1e-8));
        // shells tile the target annulus without gaps
        double shells = 0.0;
        for (const auto& cm : p.map.cells) shells += cm.shell_area();
        CHECK(shells == doctest::Approx(p.target.tiled_area()).epsilon(1e-8));
    }
}

TEST_CASE("cylinder map") {
    Prep p = make(fixtures::quad_wheel());
    Cylinder cyl = to_cylinder(p.target);
    CHECK(cyl.radius == 1.0);
    CHECK(cyl.height ==
          doctest::Approx(std::log(p.target.boundary_r2() / p.target.boundary_r1())));
    REQUIRE(cyl.rectangles.size() == p.net.cells.size());
    for (size_t i = 0; i < cyl.rectangles.size(); ++i) {
        double lam = cell_measure_lambda(p.net.cells[i], p.per);
        CHECK(std::abs(lam - cyl.rectangles[i].area()) <= 1e-9 * cyl.rectangles[i].area());
    }
    // height uses the declared boundary radii
    TargetAnnulus t = build_target(1.0, two_pi, {0.0, 1.0}, {0.0, two_pi});
    Cylinder c2 = to_cylinder(t);
    CHECK(c2.height == doctest::Approx(std::log(two_pi * std::exp(1.0))));
    REQUIRE(c2.rectangles.size() == 1);
    CHECK(c2.rectangles[0].area() == doctest::Approx(two_pi * 1.0));

    auto pt = cylinder_point({2.0, 0.0});
    CHECK(pt[0] == doctest::Approx(1.0));
    CHECK(pt[1] == doctest::Approx(0.0));
    CHECK(pt[2] == doctest::Approx(std::log(2.0)));
}

TEST_CASE("level curves map to circles and radial lines") {
    // every lattice point on g-level i maps to radius r_i; on h-level j to angle phi_j
    Prep p = make(fixtures::g8x3());
    for (const auto& cm : p.map.cells) {
        // the four target corners of the shell, counterclockwise
        double r[4] = {cm.r0, cm.r1, cm.r1, cm.r0};
        double phi[4] = {cm.phi0, cm.phi0, cm.phi1, cm.phi1};
        for (int c = 0; c < 4; ++c) {
            CHECK(r[c] >= 1.0 - 1e-12);
            CHECK(phi[c] >= -1e-12);
            CHECK(phi[c] <= two_pi + 1e-12);
        }
    }
}
