// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "uniformize/pipeline.hpp"
#include "uniformize/refine.hpp"

using namespace uniformize;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

int failures = 0;
int criterion = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    ++criterion;
    std::string dots(44 > name.size() ? 44 - name.size() : 1, '.');
    std::printf("[%2d/11] %s %s %s  %s\n", criterion, name.c_str(), dots.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++failures;
}

ScalarField solve_annulus_like(const PLComplex& cx, double k) {
    DirichletSpec spec;
    spec.k = k;
    spec.high_set = cx.net.boundary_components()[0];
    for (size_t i = 1; i < cx.net.boundary_components().size(); ++i) {
        spec.low_sets.push_back(cx.net.boundary_components()[i]);
    }
    return solve_dirichlet(cx.net, spec);
}

std::vector<std::pair<std::string, MeshDocument>> annulus_fixtures() {
    std::vector<std::pair<std::string, MeshDocument>> v;
    v.emplace_back("wheel", fixtures::quad_wheel());
    v.emplace_back("g8x3", fixtures::g8x3());
    v.emplace_back("irregular1", fixtures::irregular_annulus(1));
    v.emplace_back("irregular2", fixtures::irregular_annulus(2));
    return v;
}

std::vector<std::pair<std::string, MeshDocument>> all_fixtures() {
    auto v = annulus_fixtures();
    v.emplace_back("wheel_tri", fixtures::tri_wheel());
    v.emplace_back("p3", fixtures::p3());
    v.emplace_back("p4", fixtures::p4());
    return v;
}

// --- criterion 1: Green identity on random connected planar networks -------

FiniteNetwork random_grid_network(fixtures::Rng& rng, int w, int h) {
    FiniteNetwork net;
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) net.add_vertex({double(i), double(j)});
    }
    auto id = [w](int i, int j) { return j * w + i; };
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            if (i + 1 < w) net.add_edge(id(i, j), id(i + 1, j), rng.uniform(0.5, 2.0));
            if (j + 1 < h) net.add_edge(id(i, j), id(i, j + 1), rng.uniform(0.5, 2.0));
        }
    }
    return net;
}

void criterion_green_identity() {
    double worst_ratio = 0.0;
    int runs = 0;
    for (unsigned seed = 1; seed <= 50; ++seed) {
        fixtures::Rng rng(seed * 977 + 13);
        int w = 2 + static_cast<int>(rng.uniform(1.0, 13.0));
        int h = 2 + static_cast<int>(rng.uniform(1.0, 13.0));
        if (w * h > 200) h = std::max(2, 200 / w);
        FiniteNetwork net = random_grid_network(rng, w, h);
        DirichletSpec spec;
        spec.k = 1.0;
        auto id = [w](int i, int j) { return j * w + i; };
        for (int j = 0; j < h; ++j) spec.high_set.push_back(id(0, j));
        spec.low_sets.emplace_back();
        for (int j = 0; j < h; ++j) spec.low_sets[0].push_back(id(w - 1, j));
        ScalarField g = solve_dirichlet(net, spec);

        std::vector<VertexId> interior;
        for (int j = 0; j < h; ++j) {
            for (int i = 1; i + 1 < w; ++i) interior.push_back(id(i, j));
        }
        if (interior.empty()) continue;
        ScalarField ones;
        ones.values.assign(static_cast<size_t>(net.vertex_count()), 1.0);
        for (const ScalarField* v : {&ones, &g}) {
            double scale = 1.0;
            for (const auto& [e, c] : net.edges()) {
                scale += c * std::abs(g[e.first] - g[e.second]) *
                         std::abs((*v)[e.first] - (*v)[e.second]);
            }
            double res = green_identity_residual(net, g, *v, interior);
            worst_ratio = std::max(worst_ratio, res / (1e-9 * scale));
            ++runs;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d checks, worst residual at %.3g of the 1e-9 bound", runs,
                  worst_ratio);
    report("green-identity", worst_ratio <= 1.0, buf);
}

// --- criterion 2: solver equivalence with the dense oracle -----------------

void criterion_solver_oracle() {
    double worst = 0.0;
    for (const auto& [name, doc] : all_fixtures()) {
        PLComplex cx = doc.to_complex();
        ScalarField g = solve_annulus_like(cx, doc.k);
        std::vector<char> clamped(static_cast<size_t>(cx.net.vertex_count()), 0);
        ScalarField data;
        data.values.assign(g.values.size(), 0.0);
        for (VertexId v : cx.net.boundary_components()[0]) {
            clamped[static_cast<size_t>(v)] = 1;
            data[v] = doc.k;
        }
        for (size_t i = 1; i < cx.net.boundary_components().size(); ++i) {
            for (VertexId v : cx.net.boundary_components()[i]) clamped[static_cast<size_t>(v)] = 1;
        }
        ScalarField ref = oracle::dirichlet(cx.net, clamped, data);
        for (VertexId v = 0; v < cx.net.vertex_count(); ++v) {
            worst = std::max(worst, std::abs(g[v] - ref[v]));
        }
    }
    // Dirichlet-Neumann: the harmonic conjugate system on the cut annuli
    for (const auto& [name, doc] : annulus_fixtures()) {
        PipelineOptions opts;
        opts.k = doc.k;
        AnnulusResult ar = uniformize_annulus(doc.to_complex(), opts);
        const SlitQuadrilateral& q = ar.q;
        const int n = q.cx.net.vertex_count();
        std::vector<char> clamped(static_cast<size_t>(n), 0), neumann(static_cast<size_t>(n), 0);
        ScalarField data;
        data.values.assign(static_cast<size_t>(n), 0.0);
        for (VertexId v : q.slit_top) {
            clamped[static_cast<size_t>(v)] = 1;
            data[v] = ar.period;
        }
        for (VertexId v : q.slit_base) clamped[static_cast<size_t>(v)] = 1;
        for (const auto* arc : {&q.arc_e1, &q.arc_e2}) {
            for (VertexId v : *arc) {
                if (!clamped[static_cast<size_t>(v)]) neumann[static_cast<size_t>(v)] = 1;
            }
        }
        ScalarField ref = oracle::dirichlet_neumann(q.cx.net, clamped, neumann, data);
        for (const auto& s : q.cx.net.slaves()) {
            if (!clamped[static_cast<size_t>(s.v)]) {
                ref[s.v] = (1 - s.t) * ref[s.a] + s.t * ref[s.b];
            }
        }
        for (VertexId v = 0; v < n; ++v) worst = std::max(worst, std::abs(ar.h[v] - ref[v]));
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max deviation %.3g (tol 1e-10)", worst);
    report("solver-oracle-equivalence", worst <= 1e-10, buf);
}

// --- criterion 3: maximum principle -----------------------------------------

void criterion_max_principle() {
    int bad = 0;
    for (const auto& [name, doc] : all_fixtures()) {
        PLComplex cx = doc.to_complex();
        ScalarField g = solve_annulus_like(cx, doc.k);
        std::vector<char> clamped(static_cast<size_t>(cx.net.vertex_count()), 0);
        for (const auto& comp : cx.net.boundary_components()) {
            for (VertexId v : comp) clamped[static_cast<size_t>(v)] = 1;
        }
        bad += static_cast<int>(max_principle_violations(cx.net, g, clamped).size());
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%d interior values outside the open boundary range", bad);
    report("maximum-principle", bad == 0, buf);
}

// --- criterion 4: period well-definedness -----------------------------------

void criterion_period() {
    double worst_spread = 0.0;
    for (const auto& [name, doc] : annulus_fixtures()) {
        PipelineOptions opts;
        opts.k = doc.k;
        AnnulusResult ar = uniformize_annulus(doc.to_complex(), opts);
        double lo = 1e300, hi = -1e300;
        for (VertexId v : ar.q.slit_top) {
            lo = std::min(lo, ar.gstar.values[v]);
            hi = std::max(hi, ar.gstar.values[v]);
        }
        worst_spread = std::max(worst_spread, (hi - lo) / ar.period);
    }
    // two distinct slits on G8x3
    PLComplex cx = fixtures::g8x3().to_complex();
    ScalarField g0 = solve_annulus_like(cx, 1.0);
    std::vector<VertexId> originals;
    for (VertexId v = 0; v < cx.net.vertex_count(); ++v) originals.push_back(v);
    Refined r = refine_for_levels(cx, g0, distinct_values(g0, originals, 1e-12));
    auto period_for_start = [&](VertexId start) {
        Slit slit;
        slit.path.push_back(start);
        VertexId cur = start;
        while (true) {
            VertexId next = -1;
            double best = r.field[cur];
            for (VertexId y : r.cx.net.neighbors(cur)) {
                if (r.cx.net.conductance(cur, y) == 0.0) continue;
                if (r.field[y] < best) {
                    best = r.field[y];
                    next = y;
                }
            }
            if (next < 0) break;
            slit.path.push_back(next);
            cur = next;
        }
        SlitQuadrilateral q = cut_along_slit(r.cx, r.field, slit);
        ScalarField g = q.lift_field(r.field);
        ConjugateField gs = conjugate_of_g(q, g);
        return period(q, g, gs);
    };
    double pa = period_for_start(0);
    double pb = period_for_start(4);
    double slit_diff = std::abs(pa - pb) / pa;
    bool pass = worst_spread <= 1e-9 && slit_diff <= 1e-9;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "top spread %.3g of period; slit-choice difference %.3g",
                  worst_spread, slit_diff);
    report("period-well-defined", pass, buf);
}

// --- criteria 5-9: the annulus pipeline checks ------------------------------

struct AnnulusRuns {
    std::vector<std::pair<std::string, AnnulusResult>> runs;
};

AnnulusRuns run_annuli() {
    AnnulusRuns out;
    for (const auto& [name, doc] : annulus_fixtures()) {
        PipelineOptions opts;
        opts.k = doc.k;
        out.runs.emplace_back(name, uniformize_annulus(doc.to_complex(), opts));
    }
    return out;
}

void criterion_orthogonal_filling(const AnnulusRuns& rr) {
    int violations = 0;
    int pairs = 0;
    for (const auto& [name, ar] : rr.runs) {
        auto rep = verify_orthogonal_filling(ar.net);
        pairs += static_cast<int>(rep.counts.size());
        violations += static_cast<int>(rep.violations.size());
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%d level pairs, %d violations", pairs, violations);
    report("orthogonal-filling", violations == 0, buf);
}

void criterion_measure_preservation(const AnnulusRuns& rr) {
    double worst_cell = 0.0, worst_total = 0.0;
    for (const auto& [name, ar] : rr.runs) {
        auto rep = verify_measure_preservation(ar.map, ar.net, ar.target, 1e-9);
        for (const auto& cc : rep.cells) {
            if (cc.mu > 0) worst_cell = std::max(worst_cell, cc.residual / cc.mu);
        }
        worst_total = std::max(worst_total,
                               std::abs(rep.total_nu - rep.expected_total) / rep.expected_total);
    }
    bool pass = worst_cell <= 1e-9 && worst_total <= 1e-8;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "per-cell %.3g (tol 1e-9); total vs closed form %.3g (tol 1e-8)", worst_cell,
                  worst_total);
    report("measure-preservation", pass, buf);
}

void criterion_tiling(const AnnulusRuns& rr) {
    double worst = 0.0;
    bool disjoint = true;
    for (const auto& [name, ar] : rr.runs) {
        double shells = 0.0;
        std::vector<char> seen(ar.map.cells.size(), 0);
        for (const auto& cm : ar.map.cells) {
            shells += cm.shell_area();
            size_t idx = static_cast<size_t>(cm.i) * static_cast<size_t>(ar.net.h_count() - 1) +
                         static_cast<size_t>(cm.j);
            if (idx >= seen.size() || seen[idx]) disjoint = false;
            if (idx < seen.size()) seen[idx] = 1;
        }
        worst = std::max(worst, std::abs(shells - ar.target.tiled_area()) / ar.target.tiled_area());
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "area defect %.3g (tol 1e-8); shells %s by lattice index",
                  worst, disjoint ? "disjoint" : "OVERLAP");
    report("tiling-completeness", worst <= 1e-8 && disjoint, buf);
}

void criterion_boundary_radii(const AnnulusRuns& rr) {
    bool pass = true;
    for (const auto& [name, ar] : rr.runs) {
        double r1 = ar.target.boundary_r1();
        double r2 = ar.target.boundary_r2();
        if (r1 != 1.0) pass = false;
        if (r2 != two_pi * std::exp(two_pi * ar.k / ar.period)) pass = false;
    }
    report("boundary-radii", pass, "radii equal {1, 2pi exp(2pi k / period)} exactly");
}

void criterion_cylinder(const AnnulusRuns& rr) {
    bool height_ok = true;
    double worst = 0.0;
    for (const auto& [name, ar] : rr.runs) {
        if (ar.cylinder.height != std::log(ar.target.boundary_r2() / ar.target.boundary_r1())) {
            height_ok = false;
        }
        for (size_t i = 0; i < ar.net.cells.size(); ++i) {
            double lam = cell_measure_lambda(ar.net.cells[i], ar.period);
            double rect = ar.cylinder.rectangles[i].area();
            if (rect > 0) worst = std::max(worst, std::abs(lam - rect) / rect);
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "height exact: %s; lambda vs rectangle %.3g (tol 1e-9)",
                  height_ok ? "yes" : "no", worst);
    report("cylinder-map", height_ok && worst <= 1e-9, buf);
}

// --- criterion 10: singular pipeline ----------------------------------------

void criterion_singular() {
    bool pass = true;
    std::string detail;
    std::vector<std::tuple<std::string, MeshDocument, int>> cases;
    cases.emplace_back("p3", fixtures::p3(), 3);
    cases.emplace_back("p4", fixtures::p4(), 4);
    for (const auto& [name, doc, m] : cases) {
        PipelineOptions opts;
        opts.k = doc.k;
        PLComplex cx = doc.to_complex();
        LadderResult lr;
        try {
            lr = uniformize_multiply_connected(cx, opts);
        } catch (const Error& e) {
            pass = false;
            detail += name + ": " + e.what() + "; ";
            continue;
        }
        if (static_cast<int>(lr.ladder.boundary_lengths.size()) != m) {
            pass = false;
            detail += name + ": boundary count; ";
        }
        for (const auto& gl : lr.ladder.gluings) {
            if (gl.residual > 1e-9 * gl.parent_arc_length) {
                pass = false;
                detail += name + ": glued lengths; ";
            }
        }
        for (const auto& cp : lr.ladder.cone_points) {
            if (cp.angle != 2.0 * cp.incident * std::numbers::pi) {
                pass = false;
                detail += name + ": cone angle; ";
            }
        }
        if (!lr.ladder.pass() || !lr.verification.all_pass()) {
            pass = false;
            detail += name + ": internal checks; ";
        }
        detail += name + ": " + std::to_string(lr.nodes.size()) + " cylinders, " +
                  std::to_string(lr.ladder.cone_points.size()) + " cone points; ";
    }
    report("singular-pipeline", pass, detail);
}

// --- criterion 11: h-level lengths -------------------------------------------

void criterion_h_lengths(const AnnulusRuns& rr) {
    bool pass = true;
    for (const auto& [name, ar] : rr.runs) {
        double expect = std::exp(ar.k) - 1.0;
        double first = h_level_length(ar.g, ar.net.h_levels.front());
        for (const auto& lc : ar.net.h_levels) {
            double len = h_level_length(ar.g, lc);
            if (len != expect) pass = false;
            if (len != first) pass = false;
        }
    }
    report("h-level-lengths", pass, "every length equals exp(k) - 1 exactly, pairwise equal");
}

// --- non-gating smoke: fine annulus vs the smooth radial map -----------------

void smoke_fine_annulus() {
    PipelineOptions opts;
    PLComplex cx = fixtures::fine_annulus().to_complex();
    AnnulusResult ar = uniformize_annulus(cx, opts);
    double theta = two_pi / ar.period;
    // the smooth uniformizer of the geometric-radius annulus sends the ring
    // at radius s to exp(theta k log(s/s_min) / log(s_max/s_min))
    double worst = 0.0;
    size_t n = ar.net.g_values.size();
    for (size_t i = 0; i < n; ++i) {
        double frac = static_cast<double>(i) / static_cast<double>(n - 1);
        double smooth_r = std::exp(theta * ar.k * frac);
        double got = ar.target.circle_radii[i];
        worst = std::max(worst, std::abs(got - smooth_r) / smooth_r);
    }
    std::printf(
        "[info ] smooth-map smoke (non-gating): radial deviation %.3g against the 5%% tolerance\n",
        worst);
}

}  // namespace

int main() {
    std::printf("acceptance suite: discrete uniformization\n");
    try {
        criterion_green_identity();
        criterion_solver_oracle();
        criterion_max_principle();
        criterion_period();
        AnnulusRuns rr = run_annuli();
        criterion_orthogonal_filling(rr);
        criterion_measure_preservation(rr);
        criterion_tiling(rr);
        criterion_boundary_radii(rr);
        criterion_cylinder(rr);
        criterion_singular();
        criterion_h_lengths(rr);
        smoke_fine_annulus();
    } catch (const std::exception& e) {
        std::printf("FATAL: %s\n", e.what());
        return 99;
    }
    std::printf("%d of 11 criteria failed\n", failures);
    return failures;
}
