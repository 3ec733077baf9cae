#include "uniformize/slit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace uniformize {

namespace {
std::pair<VertexId, VertexId> ekey(VertexId a, VertexId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}
}  // namespace

Slit find_slit(const PLComplex& cx, const ScalarField& g) {
    const auto& outer = cx.net.boundary_components().at(0);
    if (outer.empty()) throw Error("outer boundary is empty");
    VertexId start = outer[0];
    size_t best_deg = cx.net.neighbors(start).size();
    for (VertexId v : outer) {
        size_t d = cx.net.neighbors(v).size();
        if (d > best_deg || (d == best_deg && v < start)) {
            start = v;
            best_deg = d;
        }
    }
    Slit slit;
    slit.path.push_back(start);
    VertexId cur = start;
    while (true) {
        VertexId next = -1;
        double best = g[cur];
        for (VertexId y : cx.net.neighbors(cur)) {
            if (cx.net.conductance(cur, y) == 0.0) continue;  // arcs carry no flux
            if (g[y] < best || (next >= 0 && g[y] == best && y < next)) {
                best = g[y];
                next = y;
            }
        }
        if (next < 0) break;  // local minimum: inner boundary by the maximum principle
        slit.path.push_back(next);
        cur = next;
    }
    int comp = cx.net.boundary_component_of(cur);
    if (comp <= 0) throw Error("slit descent did not reach an inner boundary component");
    return slit;
}

ScalarField SlitQuadrilateral::lift_field(const ScalarField& f) const {
    ScalarField out;
    out.values.resize(static_cast<size_t>(cx.net.vertex_count()));
    for (VertexId v = 0; v < cx.net.vertex_count(); ++v) {
        out[v] = f[origin[static_cast<size_t>(v)]];
    }
    return out;
}

namespace {

/// Cells incident to v, chained counterclockwise: consecutive cells share an
/// edge at v. Open chains start at a boundary edge.
std::vector<int> cells_ccw_around(const PLComplex& cx, VertexId v) {
    struct Entry {
        int cell;
        VertexId prev, next;  // corners adjacent to v inside the cell
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
    if (entries.empty()) return {};
    std::map<VertexId, int> by_next;  // cell's next-corner -> entry index
    for (size_t i = 0; i < entries.size(); ++i) by_next[entries[i].next] = static_cast<int>(i);

    // start: a cell whose next-corner edge is a boundary edge (one incident
    // cell), otherwise any cell (interior vertex, full cycle).
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
    if (order.size() != entries.size()) throw Error("internal: broken cell fan around vertex " + std::to_string(v));
    return order;
}

}  // namespace

SlitQuadrilateral cut_along_slit(const PLComplex& cx, const ScalarField& g, const Slit& slit) {
    const auto& path = slit.path;
    if (path.size() < 2) throw Error("slit path too short");
    {
        std::set<VertexId> uniq(path.begin(), path.end());
        if (uniq.size() != path.size()) throw Error("slit is not simple");
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            if (!cx.net.has_edge(path[i], path[i + 1])) throw Error("slit is not a path in the 1-skeleton");
            if (!(g[path[i + 1]] < g[path[i]])) throw Error("field is not strictly decreasing along the slit");
        }
    }

    const size_t L = path.size();
    std::set<VertexId> on_path(path.begin(), path.end());

    // Group the incident cells of every slit vertex into side A / side B.
    // Side A at an interior path vertex runs counterclockwise from the cell
    // just after the down-slit edge up to the cell just before the up-slit
    // edge; the endpoint fans are open chains split by their single slit edge.
    std::map<int, int> cell_side;  // cell -> 0 (A) or 1 (B); only cells at the slit
    for (size_t i = 0; i < L; ++i) {
        VertexId v = path[i];
        VertexId down = (i + 1 < L) ? path[i + 1] : -1;  // toward E2
        VertexId up = (i > 0) ? path[i - 1] : -1;        // toward E1
        std::vector<int> fan = cells_ccw_around(cx, v);

        auto corner_at = [&](int cell, bool next_corner) -> VertexId {
            const auto& cyc = cx.cells[static_cast<size_t>(cell)];
            size_t k = cyc.size();
            for (size_t j = 0; j < k; ++j) {
                if (cyc[j] == v) {
                    return next_corner ? cyc[(j + 1) % k] : cyc[(j + k - 1) % k];
                }
            }
            throw Error("internal: vertex missing from fan cell");
        };

        std::map<int, int> local;
        if (down >= 0 && up >= 0) {
            size_t first = fan.size();
            for (size_t j = 0; j < fan.size(); ++j) {
                if (corner_at(fan[j], true) == down) {
                    first = j;
                    break;
                }
            }
            if (first == fan.size()) throw Error("internal: down-slit edge not in vertex fan");
            int side = 0;
            for (size_t step = 0; step < fan.size(); ++step) {
                size_t j = (first + step) % fan.size();
                local[fan[j]] = side;
                if (corner_at(fan[j], false) == up) side = 1;  // crossed the up edge
            }
        } else if (down >= 0) {
            // E1 endpoint: chain split by the down edge; cells from it onward are side A
            size_t first = fan.size();
            for (size_t j = 0; j < fan.size(); ++j) {
                if (corner_at(fan[j], true) == down) {
                    first = j;
                    break;
                }
            }
            if (first == fan.size()) throw Error("internal: down-slit edge not in endpoint fan");
            for (size_t j = 0; j < fan.size(); ++j) local[fan[j]] = j >= first ? 0 : 1;
        } else {
            // E2 endpoint: cells up to and including the one before the up edge are side A
            size_t last = fan.size();
            for (size_t j = 0; j < fan.size(); ++j) {
                if (corner_at(fan[j], false) == up) {
                    last = j;
                    break;
                }
            }
            if (last == fan.size()) throw Error("internal: up-slit edge not in endpoint fan");
            for (size_t j = 0; j < fan.size(); ++j) local[fan[j]] = j <= last ? 0 : 1;
        }
        for (const auto& [cell, s] : local) {
            auto it = cell_side.find(cell);
            if (it != cell_side.end() && it->second != s) {
                throw Error("internal: inconsistent side assignment along slit");
            }
            cell_side[cell] = s;
        }
    }

    SlitQuadrilateral q;
    PLComplex& out = q.cx;

    // vertices: originals, then twins of the path
    for (VertexId v = 0; v < cx.net.vertex_count(); ++v) {
        out.add_vertex(cx.net.position(v), cx.kinds[static_cast<size_t>(v)]);
        q.origin.push_back(v);
    }
    std::map<VertexId, VertexId> twin;
    for (VertexId v : path) {
        VertexId t = out.add_vertex(cx.net.position(v), cx.kinds[static_cast<size_t>(v)]);
        q.origin.push_back(v);
        twin[v] = t;
    }

    // cells: side-B cells use twin ids for their slit corners
    for (int c = 0; c < static_cast<int>(cx.cells.size()); ++c) {
        std::vector<VertexId> cyc = cx.cells[static_cast<size_t>(c)];
        auto it = cell_side.find(c);
        if (it != cell_side.end() && it->second == 1) {
            for (VertexId& v : cyc) {
                if (on_path.count(v)) v = twin[v];
            }
        }
        out.cells.push_back(std::move(cyc));
    }

    // edges from cells, conductances from the uncut complex
    std::set<std::pair<VertexId, VertexId>> added;
    for (const auto& cyc : out.cells) {
        for (size_t i = 0; i < cyc.size(); ++i) {
            VertexId a = cyc[i], b = cyc[(i + 1) % cyc.size()];
            auto k = ekey(a, b);
            if (added.count(k)) continue;
            added.insert(k);
            out.net.add_edge(a, b, cx.net.conductance(q.origin[static_cast<size_t>(a)],
                                                      q.origin[static_cast<size_t>(b)]));
        }
    }
    out.net.rebuild_slaves();
    out.rebuild_incidence();

    // boundary: single cycle of edges with one incident cell
    {
        std::map<VertexId, std::vector<VertexId>> bnbr;
        for (const auto& [e, c] : out.net.edges()) {
            if (out.cells_of_edge(e.first, e.second).size() == 1) {
                bnbr[e.first].push_back(e.second);
                bnbr[e.second].push_back(e.first);
            }
        }
        for (const auto& [v, ns] : bnbr) {
            if (ns.size() != 2) throw Error("internal: cut boundary is not a single cycle");
        }
        std::vector<VertexId> cycle;
        VertexId v0 = bnbr.begin()->first;
        VertexId prev = -1, cur = v0;
        do {
            cycle.push_back(cur);
            const auto& ns = bnbr[cur];
            VertexId nxt = (ns[0] == prev) ? ns[1] : ns[0];
            prev = cur;
            cur = nxt;
        } while (cur != v0);
        out.net.boundary_components() = {cycle};
    }

    // roles and arcs
    q.role.assign(static_cast<size_t>(out.net.vertex_count()), RoleNone);
    q.slit_base = path;
    q.slit_top.clear();
    for (VertexId v : path) q.slit_top.push_back(twin[v]);
    for (VertexId v : q.slit_base) q.role[static_cast<size_t>(v)] |= RoleBase;
    for (VertexId v : q.slit_top) q.role[static_cast<size_t>(v)] |= RoleTop;

    // E1 / E2 arcs: walk boundary edges that are not slit edges
    auto walk_arc = [&](VertexId from, VertexId to, const std::set<VertexId>& slit_set) {
        std::vector<VertexId> arc{from};
        VertexId prev = -1, cur = from;
        while (cur != to) {
            VertexId nxt = -1;
            for (VertexId y : out.net.neighbors(cur)) {
                if (y == prev) continue;
                if (out.cells_of_edge(cur, y).size() != 1) continue;  // interior edge
                if (slit_set.count(cur) && slit_set.count(y)) continue;
                if (cur == from && slit_set.count(y) && y != to) continue;
                nxt = y;
                break;
            }
            if (nxt < 0) throw Error("internal: boundary arc walk failed");
            arc.push_back(nxt);
            prev = cur;
            cur = nxt;
        }
        return arc;
    };
    std::set<VertexId> slit_set;
    for (VertexId v : q.slit_base) slit_set.insert(v);
    for (VertexId v : q.slit_top) slit_set.insert(v);
    q.arc_e1 = walk_arc(q.slit_base.front(), q.slit_top.front(), slit_set);
    q.arc_e2 = walk_arc(q.slit_base.back(), q.slit_top.back(), slit_set);
    for (VertexId v : q.arc_e1) q.role[static_cast<size_t>(v)] |= RoleE1;
    for (VertexId v : q.arc_e2) q.role[static_cast<size_t>(v)] |= RoleE2;

    for (const auto& [b, t] : twin) {
        q.base_to_top[b] = t;
        q.top_to_base[t] = b;
    }

    // Orient: the base copy is where level curves start. Probe one regular
    // interior level; if it starts on the tentative top, swap the labels.
    {
        ScalarField gq = q.lift_field(g);
        std::vector<VertexId> all(static_cast<size_t>(out.net.vertex_count()));
        for (VertexId v = 0; v < out.net.vertex_count(); ++v) all[static_cast<size_t>(v)] = v;
        auto vals = distinct_values(gq, all, 1e-12 * (field_range(gq) + 1.0));
        if (vals.size() < 2) throw Error("field has no interior levels");
        double probe = 0.5 * (vals[0] + vals[1]);
        auto curves = level_curves(out, gq, probe);
        if (curves.empty() || curves[0].closed) throw Error("internal: probe level did not cross the slit");
        const CurvePoint& s = curves[0].points.front();
        bool starts_on_base;
        if (s.kind == CurvePoint::Kind::Vertex) {
            starts_on_base = (q.role[static_cast<size_t>(s.vertex)] & RoleBase) != 0;
        } else {
            starts_on_base = (q.role[static_cast<size_t>(s.ea)] & RoleBase) != 0 &&
                             (q.role[static_cast<size_t>(s.eb)] & RoleBase) != 0;
        }
        if (!starts_on_base) {
            std::swap(q.slit_base, q.slit_top);
            std::swap(q.base_to_top, q.top_to_base);
            for (VertexId v = 0; v < out.net.vertex_count(); ++v) {
                uint8_t r = q.role[static_cast<size_t>(v)];
                uint8_t nr = static_cast<uint8_t>(r & ~(RoleBase | RoleTop));
                if (r & RoleBase) nr |= RoleTop;
                if (r & RoleTop) nr |= RoleBase;
                q.role[static_cast<size_t>(v)] = nr;
            }
            // arcs are stored from base corner to top corner
            std::reverse(q.arc_e1.begin(), q.arc_e1.end());
            std::reverse(q.arc_e2.begin(), q.arc_e2.end());
        }
    }
    return q;
}

std::vector<LevelCurve> level_curves_on_quad(const SlitQuadrilateral& q, const ScalarField& f,
                                             double t, bool field_is_g, const TraceOptions& opts) {
    double range = field_range(f);
    double fmin = *std::min_element(f.values.begin(), f.values.end());
    double fmax = fmin + range;
    double tol = opts.level_tol * (range > 0 ? range : 1.0);

    auto arc_curve = [&](const std::vector<VertexId>& arc) {
        LevelCurve lc;
        lc.value = t;
        lc.closed = false;
        for (size_t i = 0; i < arc.size(); ++i) {
            CurvePoint cp;
            cp.kind = CurvePoint::Kind::Vertex;
            cp.vertex = arc[i];
            cp.p = q.cx.net.position(arc[i]);
            lc.points.push_back(cp);
            if (i + 1 < arc.size()) lc.on_edge_steps.push_back(static_cast<int>(i));
        }
        return std::vector<LevelCurve>{lc};
    };

    if (std::abs(t - fmin) <= tol) return arc_curve(field_is_g ? q.arc_e2 : q.slit_base);
    if (std::abs(t - fmax) <= tol) return arc_curve(field_is_g ? q.arc_e1 : q.slit_top);

    auto curves = level_curves(q.cx, f, t, opts);
    for (const auto& lc : curves) {
        if (lc.closed) throw Error("interior level curve of the cut quadrilateral is closed");
    }
    return curves;
}

}  // namespace uniformize
