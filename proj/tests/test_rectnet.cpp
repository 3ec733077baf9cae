#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "uniformize/conjugate.hpp"
#include "uniformize/refine.hpp"
#include "uniformize/rectnet.hpp"

using namespace uniformize;

namespace {

struct NetPrep {
    SlitQuadrilateral q;
    ScalarField g, h;
    double per = 0.0;
    RectNet net;
};

NetPrep make_net(const MeshDocument& doc) {
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
    NetPrep p{cut_along_slit(r.cx, r.field, slit), {}, {}, 0.0, {}};
    p.g = p.q.lift_field(r.field);
    ConjugateField gs = conjugate_of_g(p.q, p.g);
    p.per = period(p.q, p.g, gs);
    p.h = harmonic_conjugate(p.q, p.per);
    p.net = build_rectnet(p.q, p.g, p.h);
    return p;
}

}  // namespace

TEST_CASE("wheel net: 2 x 5 families, 1 x 4 cells") {
    NetPrep p = make_net(fixtures::quad_wheel());
    CHECK(p.net.g_count() == 2);
    CHECK(p.net.h_count() == 5);
    CHECK(p.net.cells.size() == 4);
    // lattice adjacency is a grid by construction; corners must be distinct
    // per (i, j) and match the curve intersections
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 5; ++j) {
            const auto& a = p.net.at(i, j);
            int same = 0;
            for (int i2 = 0; i2 < 2; ++i2) {
                for (int j2 = 0; j2 < 5; ++j2) {
                    if (i2 == i && j2 == j) continue;
                    const auto& b = p.net.at(i2, j2);
                    // twin corners coincide geometrically on the slit
                    bool twin_pair = (j == 0 && j2 == 4) || (j == 4 && j2 == 0);
                    if (dist(a.p, b.p) < 1e-12 && !twin_pair) ++same;
                }
            }
            CHECK(same == 0);
        }
    }
}

TEST_CASE("G8x3 net: 3 levels give two layers of cells") {
    NetPrep p = make_net(fixtures::g8x3());
    CHECK(p.net.g_count() == 3);
    CHECK(p.net.h_count() == 9);
    CHECK(p.net.cells.size() == 2 * 8);
}

TEST_CASE("orthogonal filling holds on all annulus fixtures") {
    for (auto doc : {fixtures::quad_wheel(), fixtures::g8x3(), fixtures::irregular_annulus(1),
                     fixtures::irregular_annulus(2)}) {
        NetPrep p = make_net(doc);
        auto rep = verify_orthogonal_filling(p.net);
        CHECK(rep.pass());
        for (const auto& pc : rep.counts) CHECK(pc.count == 1);
        CHECK(rep.counts.size() ==
              static_cast<size_t>(p.net.g_count()) * static_cast<size_t>(p.net.h_count()));
    }
}

TEST_CASE("net cells cover the cut quadrilateral") {
    for (auto doc : {fixtures::quad_wheel(), fixtures::g8x3(), fixtures::irregular_annulus(1)}) {
        NetPrep p = make_net(doc);
        double total = p.net.total_cell_area();
        double domain = p.q.cx.total_area();
        CHECK(std::abs(total - domain) <= 1e-9 * domain);
        for (const auto& cell : p.net.cells) CHECK(cell.area > 0);
    }
}

TEST_CASE("the checker flags a corrupted h family") {
    NetPrep p = make_net(fixtures::g8x3());
    // corrupt h at one interior vertex so a level curve folds back
    ScalarField bad = p.h;
    for (VertexId v = 0; v < p.q.cx.net.vertex_count(); ++v) {
        if (!p.q.cx.net.is_boundary_vertex(v) && bad[v] > 0.3 * p.per && bad[v] < 0.7 * p.per) {
            bad[v] += 0.4 * p.per;
            break;
        }
    }
    RectNet corrupt = p.net;
    corrupt.h_levels.clear();
    std::vector<VertexId> family;
    for (VertexId v = 0; v < p.q.cx.net.vertex_count(); ++v) {
        if (p.q.cx.kinds[static_cast<size_t>(v)] != VertexKind::TypeII) family.push_back(v);
    }
    auto vals = distinct_values(bad, family, 1e-9);
    for (size_t i = 1; i + 1 < vals.size(); ++i) {
        // the raw tracer: the corrupted field produces closed components
        for (auto& lc : level_curves(p.q.cx, bad, vals[i])) {
            corrupt.h_levels.push_back(std::move(lc));
        }
    }
    auto rep = verify_orthogonal_filling(corrupt);
    CHECK_FALSE(rep.pass());
}

TEST_CASE("build_rectnet rejects an inconsistent pair") {
    NetPrep p = make_net(fixtures::g8x3());
    // feeding g as both families cannot give unique crossings
    CHECK_THROWS_AS(build_rectnet(p.q, p.g, p.g), Error);
}
