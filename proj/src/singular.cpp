#include "uniformize/singular.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>
#include <sstream>

#include "uniformize/refine.hpp"

namespace uniformize {

namespace {
std::pair<VertexId, VertexId> ekey(VertexId a, VertexId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}
}  // namespace

VertexIndex vertex_index(const PLComplex& cx, const ScalarField& f, VertexId v,
                         bool perturb_ties) {
    auto nbrs = cx.net.neighbors_ccw(v);
    if (nbrs.empty()) throw Error("vertex has no neighbors");
    std::vector<int> sign;
    for (VertexId w : nbrs) {
        double d = f[w] - f[v];
        if (d == 0.0) {
            if (!perturb_ties) {
                throw Error("vertex " + std::to_string(v) + " shares its value with neighbor " +
                            std::to_string(w));
            }
            sign.push_back(w < v ? -1 : 1);
        } else {
            sign.push_back(d < 0 ? -1 : 1);
        }
    }
    int changes = 0;
    for (size_t i = 0; i < sign.size(); ++i) {
        if (sign[i] != sign[(i + 1) % sign.size()]) ++changes;
    }
    VertexIndex out;
    out.sign_changes = changes;
    out.index = 1 - changes / 2;
    return out;
}

LevelClassification classify_level(const PLComplex& cx, const ScalarField& f, double t,
                                   bool perturb_ties) {
    LevelClassification cls;
    cls.value = t;
    double tol = 1e-9 * (field_range(f) + 1.0);
    for (VertexId v = 0; v < cx.net.vertex_count(); ++v) {
        if (std::abs(f[v] - t) > tol) continue;
        if (cx.net.is_boundary_vertex(v)) continue;
        VertexIndex ix = vertex_index(cx, f, v, perturb_ties);
        if (ix.index != 0) cls.singular_vertices.push_back(v);
    }
    cls.singular = !cls.singular_vertices.empty();

    auto curves = level_curves(cx, f, t);

    // group circles into components via shared vertices
    std::map<VertexId, std::vector<int>> by_vertex;
    for (size_t c = 0; c < curves.size(); ++c) {
        std::set<VertexId> verts;
        for (const auto& cp : curves[c].points) {
            if (cp.kind == CurvePoint::Kind::Vertex) verts.insert(cp.vertex);
        }
        for (VertexId v : verts) by_vertex[v].push_back(static_cast<int>(c));
    }
    std::vector<int> comp(curves.size(), -1);
    int ncomp = 0;
    for (size_t c = 0; c < curves.size(); ++c) {
        if (comp[c] >= 0) continue;
        std::deque<int> q{static_cast<int>(c)};
        comp[c] = ncomp;
        while (!q.empty()) {
            int cur = q.front();
            q.pop_front();
            for (const auto& cp : curves[static_cast<size_t>(cur)].points) {
                if (cp.kind != CurvePoint::Kind::Vertex) continue;
                for (int other : by_vertex[cp.vertex]) {
                    if (comp[static_cast<size_t>(other)] < 0) {
                        comp[static_cast<size_t>(other)] = ncomp;
                        q.push_back(other);
                    }
                }
            }
        }
        ++ncomp;
    }
    cls.components.resize(static_cast<size_t>(ncomp));
    for (size_t c = 0; c < curves.size(); ++c) {
        cls.components[static_cast<size_t>(comp[c])].circles.push_back(std::move(curves[c]));
    }
    for (auto& b : cls.components) {
        std::map<VertexId, int> count;
        for (const auto& circle : b.circles) {
            std::set<VertexId> verts;
            for (const auto& cp : circle.points) {
                if (cp.kind == CurvePoint::Kind::Vertex) verts.insert(cp.vertex);
            }
            for (VertexId v : verts) count[v]++;
        }
        for (const auto& [v, c] : count) {
            if (c >= 2) b.tangency_multiplicity[v] = c;
        }
        // bouquet sanity: two circles meet in at most one vertex
        for (size_t i = 0; i < b.circles.size(); ++i) {
            for (size_t j = i + 1; j < b.circles.size(); ++j) {
                int shared = 0;
                std::set<VertexId> vi;
                for (const auto& cp : b.circles[i].points) {
                    if (cp.kind == CurvePoint::Kind::Vertex) vi.insert(cp.vertex);
                }
                for (const auto& cp : b.circles[j].points) {
                    if (cp.kind == CurvePoint::Kind::Vertex && vi.count(cp.vertex)) ++shared;
                }
                if (shared > 1) throw Error("level component is not a bouquet of circles");
            }
        }
    }
    return cls;
}

namespace {

Vec2 hole_witness(const PLComplex& cx, const std::vector<VertexId>& cycle) {
    std::vector<Vec2> poly;
    for (VertexId v : cycle) poly.push_back(cx.net.position(v));
    return interior_point(poly);
}

bool bouquet_encloses(const Bouquet& b, Vec2 p) {
    int wind = 0;
    for (const auto& circle : b.circles) {
        auto poly = circle.polyline();
        wind += winding_number(poly, p);
    }
    return wind != 0;
}

}  // namespace

MaximalSingularCurve maximal_singular_curve(const PLComplex& cx, const ScalarField& f,
                                            bool perturb_ties) {
    if (cx.connectivity() <= 2) {
        throw Error("no singular level curve is required on a domain of connectivity <= 2");
    }
    double tol = 1e-9 * (field_range(f) + 1.0);
    std::vector<double> singular_values;
    for (VertexId v = 0; v < cx.net.vertex_count(); ++v) {
        if (cx.net.is_boundary_vertex(v)) continue;
        VertexIndex ix = vertex_index(cx, f, v, perturb_ties);
        if (ix.index == 0) continue;
        bool dup = false;
        for (double s : singular_values) {
            if (std::abs(s - f[v]) <= tol) dup = true;
        }
        if (!dup) singular_values.push_back(f[v]);
    }
    std::sort(singular_values.begin(), singular_values.end());

    std::vector<Vec2> witnesses;
    const auto& boundary = cx.net.boundary_components();
    for (size_t i = 1; i < boundary.size(); ++i) witnesses.push_back(hole_witness(cx, boundary[i]));

    std::vector<MaximalSingularCurve> found;
    for (double value : singular_values) {
        auto cls = classify_level(cx, f, value, perturb_ties);
        if (!cls.singular) continue;
        for (auto& b : cls.components) {
            bool all = true;
            for (Vec2 w : witnesses) {
                if (!bouquet_encloses(b, w)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                MaximalSingularCurve m;
                m.value = value;
                m.bouquet = std::move(b);
                found.push_back(std::move(m));
            }
        }
    }
    if (found.empty()) throw Error("no singular level curve encloses all inner boundaries");
    if (found.size() > 1) throw Error("maximal singular level curve is not unique");
    return std::move(found[0]);
}

namespace {

/// Cells incident to v in counterclockwise order (duplicated from the cut
/// logic; fans here may be open at the boundary).
std::vector<int> fan_cells_ccw(const PLComplex& cx, VertexId v) {
    struct Entry {
        int cell;
        VertexId prev, next;
    };
    std::vector<Entry> entries;
    std::set<int> seen;
    for (VertexId w : cx.net.neighbors(v)) {
        for (int c : cx.cells_of_edge(v, w)) {
            if (seen.count(c)) continue;
            seen.insert(c);
            const auto& cyc = cx.cells[static_cast<size_t>(c)];
            size_t k = cyc.size();
            for (size_t i = 0; i < k; ++i) {
                if (cyc[i] == v) {
                    entries.push_back({c, cyc[(i + k - 1) % k], cyc[(i + 1) % k]});
                    break;
                }
            }
        }
    }
    std::map<VertexId, int> by_next;
    for (size_t i = 0; i < entries.size(); ++i) by_next[entries[i].next] = static_cast<int>(i);
    int start = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (cx.cells_of_edge(v, entries[i].next).size() == 1) {
            start = static_cast<int>(i);
            break;
        }
    }
    std::vector<int> order;
    int cur = start;
    for (size_t step = 0; step < entries.size(); ++step) {
        order.push_back(entries[static_cast<size_t>(cur)].cell);
        auto it = by_next.find(entries[static_cast<size_t>(cur)].prev);
        if (it == by_next.end()) break;
        cur = it->second;
        if (cur == start) break;
    }
    if (order.size() != entries.size()) throw Error("internal: broken fan at vertex " + std::to_string(v));
    return order;
}

}  // namespace

SplitResult split_domain(const PLComplex& cx, const ScalarField& g,
                         const MaximalSingularCurve& curve) {
    SplitResult res;
    res.level_value = curve.value;
    res.refined = cx;
    res.refined_g = g;

    // materialize the level: repeat until no circle crosses an edge interior
    while (true) {
        auto cls = classify_level(res.refined, res.refined_g, curve.value, true);
        // locate the enclosing component again on the refined complex
        std::vector<Vec2> witnesses;
        const auto& boundary = res.refined.net.boundary_components();
        for (size_t i = 1; i < boundary.size(); ++i) {
            witnesses.push_back(hole_witness(res.refined, boundary[i]));
        }
        Bouquet* target = nullptr;
        for (auto& b : cls.components) {
            bool all = true;
            for (Vec2 w : witnesses) {
                if (!bouquet_encloses(b, w)) all = false;
            }
            if (all) target = &b;
        }
        if (!target) throw Error("internal: maximal component lost during refinement");
        bool has_edge_points = false;
        for (const auto& circle : target->circles) {
            for (const auto& cp : circle.points) {
                if (cp.kind == CurvePoint::Kind::EdgePoint) has_edge_points = true;
            }
        }
        if (!has_edge_points) {
            res.bouquet = std::move(*target);
            break;
        }
        for (const auto& circle : target->circles) {
            bool any = false;
            for (const auto& cp : circle.points) {
                if (cp.kind == CurvePoint::Kind::EdgePoint) any = true;
            }
            if (!any) continue;
            Refined step = refine_type1(res.refined, res.refined_g, circle, VertexKind::TypeI);
            res.refined = std::move(step.cx);
            res.refined_g = std::move(step.field);
            break;  // re-trace on the refined complex
        }
    }

    const PLComplex& rcx = res.refined;
    const ScalarField& rg = res.refined_g;

    // curve carrier edges and vertices
    std::set<std::pair<VertexId, VertexId>> curve_edges;
    std::set<VertexId> curve_vertices;
    std::map<std::pair<VertexId, VertexId>, int> edge_circle;
    for (size_t c = 0; c < res.bouquet.circles.size(); ++c) {
        const auto& circle = res.bouquet.circles[c];
        size_t n = circle.points.size();
        for (int s : circle.on_edge_steps) {
            VertexId a = circle.points[static_cast<size_t>(s)].vertex;
            VertexId b = circle.points[(static_cast<size_t>(s) + 1) % n].vertex;
            curve_edges.insert(ekey(a, b));
            edge_circle[ekey(a, b)] = static_cast<int>(c);
        }
        for (const auto& cp : circle.points) curve_vertices.insert(cp.vertex);
        if (static_cast<size_t>(circle.on_edge_steps.size()) != n) {
            throw Error("internal: materialized circle still has chord steps");
        }
    }

    // flood-fill cells, not crossing the curve
    const int ncells = static_cast<int>(rcx.cells.size());
    std::vector<int> cell_comp(static_cast<size_t>(ncells), -1);
    int ncomp = 0;
    for (int c0 = 0; c0 < ncells; ++c0) {
        if (cell_comp[static_cast<size_t>(c0)] >= 0) continue;
        std::deque<int> q{c0};
        cell_comp[static_cast<size_t>(c0)] = ncomp;
        while (!q.empty()) {
            int c = q.front();
            q.pop_front();
            const auto& cyc = rcx.cells[static_cast<size_t>(c)];
            for (size_t i = 0; i < cyc.size(); ++i) {
                auto e = ekey(cyc[i], cyc[(i + 1) % cyc.size()]);
                if (curve_edges.count(e)) continue;
                for (int other : rcx.cells_of_edge(e.first, e.second)) {
                    if (cell_comp[static_cast<size_t>(other)] < 0) {
                        cell_comp[static_cast<size_t>(other)] = ncomp;
                        q.push_back(other);
                    }
                }
            }
        }
        ++ncomp;
    }

    // the exterior component contains the outer boundary's cells
    int exterior = -1;
    {
        VertexId outer_v = rcx.net.boundary_components().at(0).at(0);
        for (VertexId w : rcx.net.neighbors(outer_v)) {
            for (int c : rcx.cells_of_edge(outer_v, w)) exterior = cell_comp[static_cast<size_t>(c)];
        }
    }
    if (exterior < 0) throw Error("internal: exterior component not found");

    double tol = 1e-9 * (field_range(rg) + 1.0);

    for (int pass = 0; pass < 2; ++pass) {
        for (int comp = 0; comp < ncomp; ++comp) {
            bool is_ext = comp == exterior;
            if ((pass == 0) == is_ext) continue;  // exterior goes last

            SplitComponent sc;
            sc.is_exterior = is_ext;

            // vertices: tangency vertices in the exterior get one copy per fan wedge
            std::map<VertexId, VertexId> to_local;                    // plain vertices
            std::map<std::pair<VertexId, int>, VertexId> wedge_copy;  // (tangency, wedge)
            std::map<int, int> cell_wedge_of_tangency;                // parent cell -> wedge id

            auto local_of = [&](VertexId pv) -> VertexId {
                auto it = to_local.find(pv);
                if (it != to_local.end()) return it->second;
                VertexId lv = sc.cx.add_vertex(rcx.net.position(pv), rcx.kinds[static_cast<size_t>(pv)]);
                sc.parent_vertex.push_back(pv);
                sc.g.values.push_back(rg[pv]);
                to_local[pv] = lv;
                return lv;
            };

            std::set<VertexId> tangencies;
            if (is_ext) {
                for (const auto& [v, m] : res.bouquet.tangency_multiplicity) tangencies.insert(v);
                for (VertexId v : tangencies) {
                    auto fan = fan_cells_ccw(rcx, v);
                    // wedges: maximal cyclic runs of exterior cells
                    int nf = static_cast<int>(fan.size());
                    std::vector<int> wedge(static_cast<size_t>(nf), -1);
                    int wid = -1;
                    // find a non-exterior cell to anchor the cyclic runs
                    int anchor = -1;
                    for (int i = 0; i < nf; ++i) {
                        if (cell_comp[static_cast<size_t>(fan[static_cast<size_t>(i)])] != exterior)
                            anchor = i;
                    }
                    if (anchor < 0) throw Error("internal: tangency fan entirely exterior");
                    bool in_run = false;
                    for (int s = 1; s <= nf; ++s) {
                        int i = (anchor + s) % nf;
                        bool ext_cell = cell_comp[static_cast<size_t>(fan[static_cast<size_t>(i)])] == exterior;
                        if (ext_cell && !in_run) {
                            ++wid;
                            in_run = true;
                        }
                        if (!ext_cell) in_run = false;
                        if (ext_cell) wedge[static_cast<size_t>(i)] = wid;
                    }
                    int m = res.bouquet.tangency_multiplicity.at(v);
                    if (wid + 1 != m) {
                        std::ostringstream os;
                        os << "tangency " << v << ": " << (wid + 1) << " exterior wedges vs multiplicity "
                           << m;
                        throw Error(os.str());
                    }
                    for (int i = 0; i < nf; ++i) {
                        if (wedge[static_cast<size_t>(i)] < 0) continue;
                        int cell = fan[static_cast<size_t>(i)];
                        cell_wedge_of_tangency[cell * static_cast<int>(rcx.net.vertex_count()) +
                                               v] = wedge[static_cast<size_t>(i)];
                    }
                    for (int wdg = 0; wdg <= wid; ++wdg) {
                        VertexId lv = sc.cx.add_vertex(rcx.net.position(v),
                                                       rcx.kinds[static_cast<size_t>(v)]);
                        sc.parent_vertex.push_back(v);
                        sc.g.values.push_back(rg[v]);
                        wedge_copy[{v, wdg}] = lv;
                        sc.tangency_label[lv] = v;
                    }
                }
            }

            // copy cells
            for (int c = 0; c < ncells; ++c) {
                if (cell_comp[static_cast<size_t>(c)] != comp) continue;
                std::vector<VertexId> cyc;
                for (VertexId pv : rcx.cells[static_cast<size_t>(c)]) {
                    if (is_ext && tangencies.count(pv)) {
                        auto it = cell_wedge_of_tangency.find(
                            c * static_cast<int>(rcx.net.vertex_count()) + pv);
                        if (it == cell_wedge_of_tangency.end()) {
                            throw Error("internal: tangency wedge missing for cell");
                        }
                        cyc.push_back(wedge_copy.at({pv, it->second}));
                    } else {
                        cyc.push_back(local_of(pv));
                    }
                }
                sc.cx.cells.push_back(std::move(cyc));
            }

            // edges from cells; conductances from the parent; curve edges zeroed
            std::set<std::pair<VertexId, VertexId>> added;
            for (const auto& cyc : sc.cx.cells) {
                for (size_t i = 0; i < cyc.size(); ++i) {
                    VertexId a = cyc[i], b = cyc[(i + 1) % cyc.size()];
                    auto k = ekey(a, b);
                    if (added.count(k)) continue;
                    added.insert(k);
                    VertexId pa = sc.parent_vertex[static_cast<size_t>(a)];
                    VertexId pb = sc.parent_vertex[static_cast<size_t>(b)];
                    double cond = rcx.net.conductance(pa, pb);
                    if (curve_edges.count(ekey(pa, pb))) cond = 0.0;
                    sc.cx.net.add_edge(a, b, cond);
                }
            }
            sc.cx.net.rebuild_slaves();
            sc.cx.rebuild_incidence();

            // boundary cycles: edges with one incident cell
            std::map<VertexId, std::vector<VertexId>> bnbr;
            for (const auto& [e, cval] : sc.cx.net.edges()) {
                if (sc.cx.cells_of_edge(e.first, e.second).size() == 1) {
                    bnbr[e.first].push_back(e.second);
                    bnbr[e.second].push_back(e.first);
                }
            }
            std::set<VertexId> visited;
            std::vector<std::vector<VertexId>> cycles;
            for (const auto& [v0, ns] : bnbr) {
                if (visited.count(v0)) continue;
                if (ns.size() != 2) throw Error("internal: component boundary is not a union of cycles");
                std::vector<VertexId> cycle;
                VertexId prev = -1, cur = v0;
                do {
                    visited.insert(cur);
                    cycle.push_back(cur);
                    const auto& nn = bnbr[cur];
                    VertexId nxt = (nn[0] == prev) ? nn[1] : nn[0];
                    prev = cur;
                    cur = nxt;
                } while (cur != v0);
                cycles.push_back(std::move(cycle));
            }
            // outer cycle: maximal mean field value
            size_t outer_idx = 0;
            double best = -1e300;
            for (size_t i = 0; i < cycles.size(); ++i) {
                double mean = 0.0;
                for (VertexId v : cycles[i]) mean += sc.g[v];
                mean /= static_cast<double>(cycles[i].size());
                if (mean > best) {
                    best = mean;
                    outer_idx = i;
                }
            }
            std::swap(cycles[0], cycles[outer_idx]);
            sc.cx.net.boundary_components() = cycles;

            // normalize: inner boundary value 0
            double low = 1e300;
            for (size_t i = 1; i < cycles.size(); ++i) {
                for (VertexId v : cycles[i]) low = std::min(low, sc.g[v]);
            }
            if (cycles.size() < 2) throw Error("split component is not multiply connected");
            if (std::abs(low) > tol) {
                for (double& x : sc.g.values) x -= low;
            }
            sc.k_local = 0.0;
            for (VertexId v : cycles[0]) sc.k_local = std::max(sc.k_local, sc.g[v]);

            if (is_ext) {
                // inner cycle arcs -> bouquet circle ids
                const auto& inner = sc.cx.net.boundary_components().at(1);
                for (size_t i = 0; i < inner.size(); ++i) {
                    VertexId a = inner[i], b = inner[(i + 1) % inner.size()];
                    auto pe = ekey(sc.parent_vertex[static_cast<size_t>(a)],
                                   sc.parent_vertex[static_cast<size_t>(b)]);
                    auto it = edge_circle.find(pe);
                    if (it == edge_circle.end()) {
                        throw Error("internal: inner boundary edge is not on the singular curve");
                    }
                    sc.inner_arc_circle.push_back(it->second);
                }
            }
            res.components.push_back(std::move(sc));
        }
    }
    return res;
}

double cone_angle(int incident) {
    if (incident < 1) throw Error("cone angle needs at least one incident cylinder");
    return 2.0 * incident * std::numbers::pi;
}

PantsLadder assemble_ladder(const std::vector<LadderBuildComponent>& comps, double tol_rel) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    PantsLadder ladder;
    std::map<int, size_t> by_id;
    for (size_t i = 0; i < comps.size(); ++i) by_id[comps[i].id] = i;

    std::map<int, double> scale;
    // process parents before children
    std::vector<size_t> order;
    {
        std::set<int> done;
        while (order.size() < comps.size()) {
            bool progressed = false;
            for (size_t i = 0; i < comps.size(); ++i) {
                const auto& c = comps[i];
                if (done.count(c.id)) continue;
                if (c.parent >= 0 && !done.count(c.parent)) continue;
                order.push_back(i);
                done.insert(c.id);
                progressed = true;
            }
            if (!progressed) throw Error("splitting tree has a cycle");
        }
    }

    for (size_t oi : order) {
        const auto& c = comps[oi];
        double own_circumference = two_pi * std::exp(two_pi * c.k_local / c.period);
        double s;
        if (c.parent < 0) {
            s = 1.0;
        } else {
            const auto& p = comps[by_id.at(c.parent)];
            if (c.parent_circle < 0 || c.parent_circle >= static_cast<int>(p.circles.size())) {
                throw Error("child refers to a missing parent circle");
            }
            double target = scale.at(p.id) * p.circles[static_cast<size_t>(c.parent_circle)].arc_angle;
            s = target / own_circumference;
            PantsLadder::Gluing glue;
            glue.parent = p.id;
            glue.child = c.id;
            glue.circle = c.parent_circle;
            glue.parent_arc_length = target;
            glue.child_length = s * own_circumference;
            glue.residual = std::abs(glue.parent_arc_length - glue.child_length);
            if (glue.residual > tol_rel * std::max(glue.parent_arc_length, 1e-300)) {
                std::ostringstream os;
                os << "glued boundary lengths differ by " << glue.residual << " at component " << c.id;
                ladder.violations.push_back(os.str());
            }
            ladder.gluings.push_back(glue);
        }
        scale[c.id] = s;

        PantsLadder::Component comp;
        comp.id = c.id;
        comp.scale = s;
        comp.boundary_circumference = s * own_circumference;
        comp.tiled_height = s * (two_pi * c.k_local / c.period);
        ladder.components.push_back(comp);

        if (c.generalized) {
            // the circle arcs partition the unit inner circle
            double total = 0.0;
            for (const auto& circ : c.circles) total += circ.arc_angle;
            if (std::abs(total - two_pi) > tol_rel * two_pi) {
                std::ostringstream os;
                os << "bouquet arcs of component " << c.id << " sum to " << total
                   << ", expected 2pi";
                ladder.violations.push_back(os.str());
            }
        }

        if (c.parent < 0) {
            ladder.boundary_lengths.push_back(comp.boundary_circumference);
        }
        if (c.carries_inner_boundary) {
            // the inner circle of a leaf annulus has unit radius before scaling
            ladder.boundary_lengths.push_back(s * two_pi);
        }
    }

    // cone points: tangencies of generalized components
    for (const auto& c : comps) {
        for (const auto& [tid, m] : c.tangency_multiplicity) {
            PantsLadder::ConePoint cp;
            cp.tangency_id = tid;
            cp.incident = m + 1;  // the m circles' cylinders plus the component above
            cp.angle = cone_angle(cp.incident);
            ladder.cone_points.push_back(cp);
        }
    }
    return ladder;
}

}  // namespace uniformize
