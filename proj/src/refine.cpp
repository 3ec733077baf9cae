#include "uniformize/refine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace uniformize {

namespace {
std::pair<VertexId, VertexId> ekey(VertexId a, VertexId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}
}  // namespace

Refined refine_type1(const PLComplex& cx, const ScalarField& f, const LevelCurve& curve,
                     VertexKind kind) {
    const double t = curve.value;
    double tol = 1e-9 * (field_range(f) > 0 ? field_range(f) : 1.0);

    Refined r{cx, f, 0};
    PLComplex& out = r.cx;
    ScalarField& g = r.field;

    // Split crossed edges.
    std::map<std::pair<VertexId, VertexId>, VertexId> split;  // old edge -> new vertex
    std::map<VertexId, double> crossed_cond;                  // new vertex -> original conductance
    std::vector<FiniteNetwork::Slave> pending_slaves;         // crossings on zero edges
    for (const CurvePoint& cp : curve.points) {
        if (cp.kind != CurvePoint::Kind::EdgePoint) continue;
        auto k = ekey(cp.ea, cp.eb);
        if (split.count(k)) continue;
        VertexId v = k.first, u = k.second;
        if (out.net.boundary_component_of(v) >= 0 && out.net.boundary_component_of(u) >= 0 &&
            out.net.boundary_component_of(v) == out.net.boundary_component_of(u)) {
            throw Error("level curve crosses a boundary edge");
        }
        double gv = g[v], gu = g[u];
        if (std::abs(gv - t) <= tol || std::abs(gu - t) <= tol) {
            throw Error("internal: crossing point coincides with a vertex");
        }
        VertexId x = out.add_vertex(cp.p, kind);
        g.values.push_back(t);
        split[k] = x;
        double c = out.net.conductance(v, u);
        crossed_cond[x] = c;
        if (c == 0.0) pending_slaves.push_back({x, v, u, cp.t});
        ++r.new_vertices;
    }

    // Curve arcs along the members of the level family carry no conductance;
    // the separator arcs between consecutive levels must conduct, or boundary
    // vertices lose their coupling to the interior on coarse meshes. Joining
    // equal-value vertices, they leave the field harmonic either way.
    auto arc_conductance = [&](VertexId a, VertexId b) {
        if (kind != VertexKind::TypeII) return 0.0;
        double sum = 0.0;
        int n = 0;
        for (VertexId v : {a, b}) {
            auto it = crossed_cond.find(v);
            if (it != crossed_cond.end()) {
                sum += it->second;
                ++n;
            }
        }
        return n > 0 ? sum / n : 1.0;
    };

    // Rebuild the skeleton: copy edges, replacing split ones by their halves.
    FiniteNetwork net2;
    for (VertexId v = 0; v < out.net.vertex_count(); ++v) net2.add_vertex(out.net.position(v));
    for (const auto& [e, c] : out.net.edges()) {
        auto it = split.find(e);
        if (it == split.end()) {
            net2.add_edge(e.first, e.second, c);
        } else {
            VertexId v = e.first, u = e.second, x = it->second;
            double gv = g[v], gu = g[u];
            net2.add_edge(v, x, c == 0.0 ? 0.0 : c * (gv - gu) / (gv - t));
            net2.add_edge(u, x, c == 0.0 ? 0.0 : c * (gu - gv) / (gu - t));
        }
    }
    net2.boundary_components() = out.net.boundary_components();
    net2.slaves() = out.net.slaves();
    for (const auto& s : pending_slaves) net2.add_slave(s.v, s.a, s.b, s.t);

    // Rebuild cells, splitting those the curve passes through.
    std::vector<std::vector<VertexId>> cells2;
    for (const auto& cyc : out.cells) {
        // insert split vertices along sides
        std::vector<VertexId> walk;
        for (size_t i = 0; i < cyc.size(); ++i) {
            VertexId a = cyc[i], b = cyc[(i + 1) % cyc.size()];
            walk.push_back(a);
            auto it = split.find(ekey(a, b));
            if (it != split.end()) walk.push_back(it->second);
        }
        // find "at" corners and whether both strict sides appear
        std::vector<int> at_idx;
        bool below = false, above = false;
        for (size_t i = 0; i < walk.size(); ++i) {
            double d = g[walk[i]] - t;
            if (std::abs(d) <= tol) {
                at_idx.push_back(static_cast<int>(i));
            } else if (d < 0) {
                below = true;
            } else {
                above = true;
            }
        }
        if (at_idx.size() < 2 || !below || !above) {
            cells2.push_back(walk);
            continue;
        }
        if (at_idx.size() > 2) throw Error("internal: cell crossed more than once by one level");
        int i0 = at_idx[0], i1 = at_idx[1];
        int n = static_cast<int>(walk.size());
        if ((i0 + 1) % n == i1 || (i1 + 1) % n == i0) {
            cells2.push_back(walk);  // curve runs along an existing side
            continue;
        }
        // chord splits the cell into two cycles
        std::vector<VertexId> c1, c2;
        for (int i = i0;; i = (i + 1) % n) {
            c1.push_back(walk[static_cast<size_t>(i)]);
            if (i == i1) break;
        }
        for (int i = i1;; i = (i + 1) % n) {
            c2.push_back(walk[static_cast<size_t>(i)]);
            if (i == i0) break;
        }
        if (!net2.has_edge(walk[static_cast<size_t>(i0)], walk[static_cast<size_t>(i1)])) {
            net2.add_edge(walk[static_cast<size_t>(i0)], walk[static_cast<size_t>(i1)],
                          arc_conductance(walk[static_cast<size_t>(i0)], walk[static_cast<size_t>(i1)]));
        }
        // a quad cut next to one corner leaves a convex pentagon: divide it
        // with a conductance-free diagonal into a triangle and a quad
        auto emit = [&](std::vector<VertexId> cyc) {
            while (cyc.size() > 4) {
                std::vector<VertexId> tri{cyc[0], cyc[1], cyc[2]};
                if (!net2.has_edge(cyc[0], cyc[2])) net2.add_edge(cyc[0], cyc[2], 0.0);
                cells2.push_back(std::move(tri));
                cyc.erase(cyc.begin() + 1);
            }
            cells2.push_back(std::move(cyc));
        };
        emit(std::move(c1));
        emit(std::move(c2));
    }

    out.net = std::move(net2);
    out.cells.clear();
    for (auto& c : cells2) out.add_cell(std::move(c));
    out.rebuild_incidence();
    return r;
}

Refined refine_type2(const PLComplex& cx, const ScalarField& f, const std::vector<double>& levels) {
    Refined r{cx, f, 0};
    for (size_t i = 0; i + 1 < levels.size(); ++i) {
        double sigma = 0.5 * (levels[i] + levels[i + 1]);
        auto curves = level_curves(r.cx, r.field, sigma);
        for (const auto& lc : curves) {
            Refined step = refine_type1(r.cx, r.field, lc, VertexKind::TypeII);
            r.cx = std::move(step.cx);
            r.field = std::move(step.field);
            r.new_vertices += step.new_vertices;
        }
    }
    return r;
}

Refined refine_for_levels(const PLComplex& cx, const ScalarField& f,
                          const std::vector<double>& levels) {
    Refined r{cx, f, 0};
    for (size_t i = 1; i + 1 < levels.size(); ++i) {  // interior members only
        auto curves = level_curves(r.cx, r.field, levels[i]);
        for (const auto& lc : curves) {
            Refined step = refine_type1(r.cx, r.field, lc, VertexKind::TypeI);
            r.cx = std::move(step.cx);
            r.field = std::move(step.field);
            r.new_vertices += step.new_vertices;
        }
    }
    Refined s = refine_type2(r.cx, r.field, levels);
    s.new_vertices += r.new_vertices;
    return s;
}

}  // namespace uniformize
