#include "uniformize/levelcurve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace uniformize {

namespace {

std::pair<VertexId, VertexId> ekey(VertexId a, VertexId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

enum class Side : int8_t { Below = -1, At = 0, Above = 1 };

struct NodeId {
    bool is_vertex;
    VertexId v;              // vertex id, or edge key (v, w) with v < w
    VertexId w;

    bool operator<(const NodeId& o) const {
        if (is_vertex != o.is_vertex) return is_vertex < o.is_vertex;
        if (v != o.v) return v < o.v;
        return w < o.w;
    }
    bool operator==(const NodeId& o) const {
        return is_vertex == o.is_vertex && v == o.v && w == o.w;
    }
};

struct Segment {
    NodeId from, to;
    Vec2 a, b;
    bool is_edge = false;  // a full complex edge lying on the level
    bool used = false;
};

}  // namespace

std::vector<LevelCurve> level_curves(const PLComplex& cx, const ScalarField& f, double t,
                                     const TraceOptions& opts) {
    const int n = cx.net.vertex_count();
    double range = field_range(f);
    double fmin = *std::min_element(f.values.begin(), f.values.end());
    double fmax = fmin + range;
    double tol = opts.level_tol * (range > 0 ? range : 1.0);
    if (t < fmin - tol || t > fmax + tol) throw Error("level value outside field range");

    std::vector<Side> side(static_cast<size_t>(n));
    for (VertexId v = 0; v < n; ++v) {
        double d = f[v] - t;
        side[static_cast<size_t>(v)] = std::abs(d) <= tol ? Side::At : (d < 0 ? Side::Below : Side::Above);
    }

    // Domain-extreme value: the level is a union of boundary components.
    bool any_below = false, any_above = false;
    for (VertexId v = 0; v < n; ++v) {
        if (side[static_cast<size_t>(v)] == Side::Below) any_below = true;
        if (side[static_cast<size_t>(v)] == Side::Above) any_above = true;
    }
    if (!any_below || !any_above) {
        std::vector<LevelCurve> out;
        for (const auto& comp : cx.net.boundary_components()) {
            bool all_at = true;
            for (VertexId v : comp) {
                if (side[static_cast<size_t>(v)] != Side::At) {
                    all_at = false;
                    break;
                }
            }
            if (!all_at) continue;
            LevelCurve lc;
            lc.value = t;
            lc.closed = true;
            std::vector<VertexId> cyc = comp;
            std::vector<Vec2> poly;
            for (VertexId v : cyc) poly.push_back(cx.net.position(v));
            if (polygon_signed_area(poly) < 0) std::reverse(cyc.begin(), cyc.end());
            for (size_t i = 0; i < cyc.size(); ++i) {
                CurvePoint cp;
                cp.kind = CurvePoint::Kind::Vertex;
                cp.vertex = cyc[i];
                cp.p = cx.net.position(cyc[i]);
                lc.points.push_back(cp);
                lc.on_edge_steps.push_back(static_cast<int>(i));
            }
            out.push_back(std::move(lc));
        }
        if (out.empty()) throw Error("no level curve at the extreme value");
        return out;
    }

    // Crossing points on strictly straddling edges.
    std::map<std::pair<VertexId, VertexId>, std::pair<double, Vec2>> crossing;
    for (const auto& [e, c] : cx.net.edges()) {
        Side sa = side[static_cast<size_t>(e.first)];
        Side sb = side[static_cast<size_t>(e.second)];
        if (static_cast<int>(sa) * static_cast<int>(sb) != -1) continue;
        double fa = f[e.first], fb = f[e.second];
        double u = (t - fa) / (fb - fa);
        Vec2 p = lerp(cx.net.position(e.first), cx.net.position(e.second), u);
        crossing[e] = {u, p};
    }

    auto vertex_node = [&](VertexId v) {
        NodeId id{true, v, -1};
        return id;
    };
    auto edge_node = [&](VertexId a, VertexId b) {
        auto k = ekey(a, b);
        NodeId id{false, k.first, k.second};
        return id;
    };
    auto node_point = [&](const NodeId& id) -> Vec2 {
        if (id.is_vertex) return cx.net.position(id.v);
        return crossing.at({id.v, id.w}).second;
    };
    auto make_curve_point = [&](const NodeId& id) {
        CurvePoint cp;
        if (id.is_vertex) {
            cp.kind = CurvePoint::Kind::Vertex;
            cp.vertex = id.v;
        } else {
            cp.kind = CurvePoint::Kind::EdgePoint;
            cp.ea = id.v;
            cp.eb = id.w;
            cp.t = crossing.at({id.v, id.w}).first;
        }
        cp.p = node_point(id);
        return cp;
    };

    std::vector<Segment> segments;

    // Full edges on the level, directed so the below-side cell is on the left.
    for (const auto& [e, c] : cx.net.edges()) {
        if (side[static_cast<size_t>(e.first)] != Side::At || side[static_cast<size_t>(e.second)] != Side::At)
            continue;
        const auto& adj = cx.cells_of_edge(e.first, e.second);
        int below_cell = -1;
        int below_count = 0;
        for (int cell : adj) {
            bool has_below = false;
            for (VertexId v : cx.cells[static_cast<size_t>(cell)]) {
                if (side[static_cast<size_t>(v)] == Side::Below) has_below = true;
            }
            if (has_below) {
                ++below_count;
                below_cell = cell;
            }
        }
        if (below_count != 1) {
            std::ostringstream os;
            os << "level set at t=" << t << " is degenerate along edge (" << e.first << "," << e.second
               << "): equal adjacent field values off the level-curve structure";
            throw Error(os.str());
        }
        // Direct as the edge appears in the below cell's CCW cycle.
        const auto& cyc = cx.cells[static_cast<size_t>(below_cell)];
        VertexId a = e.first, b = e.second;
        for (size_t i = 0; i < cyc.size(); ++i) {
            VertexId u = cyc[i], v = cyc[(i + 1) % cyc.size()];
            if (u == e.second && v == e.first) {
                a = e.second;
                b = e.first;
                break;
            }
            if (u == e.first && v == e.second) break;
        }
        Segment s;
        s.from = vertex_node(a);
        s.to = vertex_node(b);
        s.a = cx.net.position(a);
        s.b = cx.net.position(b);
        s.is_edge = true;
        segments.push_back(s);
    }

    // Interior chords per cell: nodes in cyclic order with signed gaps.
    for (const auto& cyc : cx.cells) {
        const size_t k = cyc.size();
        bool has_below = false, has_above = false;
        for (VertexId v : cyc) {
            if (side[static_cast<size_t>(v)] == Side::Below) has_below = true;
            if (side[static_cast<size_t>(v)] == Side::Above) has_above = true;
        }
        if (!has_below || !has_above) continue;

        struct CellNode {
            NodeId id;
            bool at_side_next = false;  // node connected to the next node by an on-level side
        };
        std::vector<CellNode> nodes;
        std::vector<int> gap_sign;  // sign of the gap following nodes[i]

        for (size_t i = 0; i < k; ++i) {
            VertexId a = cyc[i];
            VertexId b = cyc[(i + 1) % k];
            if (side[static_cast<size_t>(a)] == Side::At) nodes.push_back({vertex_node(a), false});
            auto it = crossing.find(ekey(a, b));
            if (it != crossing.end()) nodes.push_back({edge_node(a, b), false});
        }
        if (nodes.size() < 2) continue;

        // Recompute gaps by walking the boundary between consecutive nodes.
        auto node_pos_in_walk = [&](const NodeId& id) -> double {
            // position measured in corner steps for ordering
            if (id.is_vertex) {
                for (size_t i = 0; i < k; ++i) {
                    if (cyc[i] == id.v) return static_cast<double>(i);
                }
            } else {
                for (size_t i = 0; i < k; ++i) {
                    if (ekey(cyc[i], cyc[(i + 1) % k]) == std::make_pair(id.v, id.w))
                        return static_cast<double>(i) + 0.5;
                }
            }
            throw Error("internal: node not on cell");
        };
        std::sort(nodes.begin(), nodes.end(), [&](const CellNode& x, const CellNode& y) {
            return node_pos_in_walk(x.id) < node_pos_in_walk(y.id);
        });

        const size_t m = nodes.size();
        gap_sign.assign(m, 0);
        for (size_t i = 0; i < m; ++i) {
            double p0 = node_pos_in_walk(nodes[i].id);
            double p1 = node_pos_in_walk(nodes[(i + 1) % m].id);
            if (i + 1 == m) p1 += static_cast<double>(k);
            int sgn = 0;
            bool at_side = false;
            // corners strictly inside (p0, p1)
            for (double c = std::floor(p0) + 1; c < p1; c += 1.0) {
                size_t ci = static_cast<size_t>(std::fmod(c, static_cast<double>(k)));
                Side s = side[static_cast<size_t>(cyc[ci])];
                if (s == Side::Below) sgn = -1;
                if (s == Side::Above) sgn = 1;
            }
            if (sgn == 0) {
                // no strict corner inside the gap: both nodes are the ends of an
                // on-level side (consecutive At corners)
                if (nodes[i].id.is_vertex && nodes[(i + 1) % m].id.is_vertex &&
                    p1 - p0 == 1.0) {
                    at_side = true;
                } else {
                    throw Error("internal: ambiguous level gap in cell");
                }
            }
            nodes[i].at_side_next = at_side;
            gap_sign[i] = sgn;
        }

        // Merge gaps of equal sign across touch nodes, then emit one chord per
        // below-gap (directed end -> start so the sublevel sits on the left).
        // A gap list entry: (start node index, end node index, sign).
        std::vector<std::array<int, 3>> gaps;
        for (size_t i = 0; i < m; ++i) {
            if (nodes[i].at_side_next) continue;  // on-level side handled as edge segment
            gaps.push_back({static_cast<int>(i), static_cast<int>((i + 1) % m), gap_sign[i]});
        }
        if (gaps.empty()) continue;
        // merge cyclically while neighbors share sign and meet at a node
        bool merged = true;
        while (merged && gaps.size() > 1) {
            merged = false;
            for (size_t i = 0; i < gaps.size(); ++i) {
                size_t j = (i + 1) % gaps.size();
                if (gaps[i][1] == gaps[j][0] && gaps[i][2] == gaps[j][2]) {
                    gaps[i][1] = gaps[j][1];
                    gaps.erase(gaps.begin() + static_cast<long>(j));
                    merged = true;
                    break;
                }
            }
        }
        for (const auto& g : gaps) {
            if (g[2] != -1) continue;
            const NodeId& start = nodes[static_cast<size_t>(g[0])].id;
            const NodeId& end = nodes[static_cast<size_t>(g[1])].id;
            if (start == end) continue;  // fully-below cell with a touch point
            Segment s;
            s.from = end;
            s.to = start;
            s.a = node_point(end);
            s.b = node_point(start);
            segments.push_back(s);
        }
    }

    // Chain directed segments into curves.
    std::map<NodeId, std::vector<size_t>> outgoing;
    std::map<NodeId, int> indeg;
    for (size_t i = 0; i < segments.size(); ++i) {
        outgoing[segments[i].from].push_back(i);
        indeg[segments[i].to]++;
    }

    auto take_next = [&](const NodeId& at, const Vec2* from_point) -> long {
        auto it = outgoing.find(at);
        if (it == outgoing.end()) return -1;
        std::vector<size_t> cands;
        for (size_t i : it->second) {
            if (!segments[i].used) cands.push_back(i);
        }
        if (cands.empty()) return -1;
        if (cands.size() == 1) return static_cast<long>(cands[0]);
        Vec2 base = node_point(at);
        double ref;
        if (from_point) {
            Vec2 d = *from_point - base;
            ref = std::atan2(d.y, d.x);
        } else {
            ref = 4.0;  // beyond pi: deterministic smallest-angle pick
        }
        long best = -1;
        double best_delta = 1e100;
        for (size_t i : cands) {
            Vec2 d = segments[i].b - base;
            double a = std::atan2(d.y, d.x);
            // first outgoing ray clockwise from the incoming ray
            double delta = std::fmod(ref - a + 4 * M_PI, 2 * M_PI);
            if (delta < 1e-12) delta += 2 * M_PI;
            if (delta < best_delta) {
                best_delta = delta;
                best = static_cast<long>(i);
            }
        }
        return best;
    };

    std::vector<LevelCurve> out;
    auto trace_from = [&](size_t first, bool closed_hint) {
        LevelCurve lc;
        lc.value = t;
        size_t cur = first;
        NodeId start = segments[first].from;
        lc.points.push_back(make_curve_point(start));
        while (true) {
            Segment& s = segments[cur];
            s.used = true;
            if (s.is_edge) lc.on_edge_steps.push_back(static_cast<int>(lc.points.size()) - 1);
            NodeId at = s.to;
            if (at == start && closed_hint) {
                lc.closed = true;
                break;
            }
            lc.points.push_back(make_curve_point(at));
            Vec2 prev = s.a;
            long next = take_next(at, &prev);
            if (next < 0) {
                lc.closed = false;
                break;
            }
            cur = static_cast<size_t>(next);
        }
        out.push_back(std::move(lc));
    };

    // open curves first: nodes with more unused outgoing than incoming
    for (const auto& [node, outs] : outgoing) {
        int out_count = static_cast<int>(outs.size());
        int in_count = indeg.count(node) ? indeg[node] : 0;
        while (out_count > in_count) {
            long first = take_next(node, nullptr);
            if (first < 0) break;
            trace_from(static_cast<size_t>(first), false);
            --out_count;
        }
    }
    // remaining cycles
    for (size_t i = 0; i < segments.size(); ++i) {
        if (!segments[i].used) trace_from(i, true);
    }

    for (const auto& lc : out) {
        if (lc.points.size() < 2) throw Error("internal: degenerate level curve");
    }
    return out;
}

}  // namespace uniformize
