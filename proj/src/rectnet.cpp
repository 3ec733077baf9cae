#include "uniformize/rectnet.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "uniformize/parallel.hpp"

namespace uniformize {

namespace {
std::pair<VertexId, VertexId> ekey(VertexId a, VertexId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}
}  // namespace

std::vector<CurveHit> intersect_curves(const LevelCurve& a, const LevelCurve& b) {
    std::vector<CurveHit> hits;
    const auto& pa = a.points;
    const auto& pb = b.points;

    // shared skeleton nodes
    for (size_t i = 0; i < pa.size(); ++i) {
        for (size_t j = 0; j < pb.size(); ++j) {
            if (pa[i].same_node(pb[j])) {
                hits.push_back({pa[i].p, static_cast<double>(i), static_cast<double>(j)});
            }
        }
    }

    // edges carried by one curve, crossed by the other at an interior point
    auto edge_hits = [&](const LevelCurve& u, const LevelCurve& v, bool u_is_a) {
        std::set<std::pair<VertexId, VertexId>> u_edges;
        std::map<std::pair<VertexId, VertexId>, int> u_step;
        for (int s : u.on_edge_steps) {
            size_t n = u.points.size();
            VertexId x = u.points[static_cast<size_t>(s)].vertex;
            VertexId y = u.points[(static_cast<size_t>(s) + 1) % n].vertex;
            u_edges.insert(ekey(x, y));
            u_step[ekey(x, y)] = s;
        }
        for (size_t j = 0; j < v.points.size(); ++j) {
            const CurvePoint& cp = v.points[j];
            if (cp.kind != CurvePoint::Kind::EdgePoint) continue;
            auto k = ekey(cp.ea, cp.eb);
            auto it = u_step.find(k);
            if (it == u_step.end()) continue;
            int s = it->second;
            const Vec2 p0 = u.points[static_cast<size_t>(s)].p;
            const Vec2 p1 = u.points[(static_cast<size_t>(s) + 1) % u.points.size()].p;
            double len = dist(p0, p1);
            double frac = len > 0 ? dist(p0, cp.p) / len : 0.0;
            double along_u = s + std::clamp(frac, 0.0, 1.0);
            if (u_is_a) {
                hits.push_back({cp.p, along_u, static_cast<double>(j)});
            } else {
                hits.push_back({cp.p, static_cast<double>(j), along_u});
            }
        }
        return u_edges;
    };
    auto a_edges = edge_hits(a, b, true);
    std::set<std::pair<VertexId, VertexId>> b_edges;
    {
        for (int s : b.on_edge_steps) {
            size_t n = b.points.size();
            VertexId x = b.points[static_cast<size_t>(s)].vertex;
            VertexId y = b.points[(static_cast<size_t>(s) + 1) % n].vertex;
            b_edges.insert(ekey(x, y));
        }
        edge_hits(b, a, false);
    }

    // collinear overlap along a shared edge counts as two points (a violation)
    for (const auto& e : a_edges) {
        if (b_edges.count(e)) {
            // positions of the shared edge endpoints
            hits.push_back({Vec2{0, 0}, -1, -1});
            hits.push_back({Vec2{0, 0}, -1, -1});
        }
    }

    return hits;
}

namespace {

/// Chord steps of a curve with their carrier cell and the cyclic boundary
/// positions of their endpoints (corner index plus side fraction).
struct ChordStep {
    size_t index;  // point index of the step's start
    int cell;
    double pos0, pos1;
};

double boundary_position(const PLComplex& cx, int cell, const CurvePoint& cp) {
    const auto& cyc = cx.cells[static_cast<size_t>(cell)];
    size_t k = cyc.size();
    if (cp.kind == CurvePoint::Kind::Vertex) {
        for (size_t i = 0; i < k; ++i) {
            if (cyc[i] == cp.vertex) return static_cast<double>(i);
        }
    } else {
        for (size_t i = 0; i < k; ++i) {
            VertexId a = cyc[i], b = cyc[(i + 1) % k];
            if (ekey(a, b) == std::make_pair(cp.ea, cp.eb)) {
                double frac = (a == cp.ea) ? cp.t : 1.0 - cp.t;
                return static_cast<double>(i) + frac;
            }
        }
    }
    throw Error("internal: curve point not on the cell boundary");
}

std::vector<ChordStep> chord_steps(const PLComplex& cx, const LevelCurve& c) {
    std::vector<char> edge_mask(c.points.size(), 0);
    for (int s : c.on_edge_steps) edge_mask[static_cast<size_t>(s)] = 1;
    size_t nseg = c.closed ? c.points.size() : c.points.size() - 1;

    auto cells_of_point = [&](const CurvePoint& cp) {
        std::set<int> out;
        if (cp.kind == CurvePoint::Kind::Vertex) {
            for (VertexId y : cx.net.neighbors(cp.vertex)) {
                for (int cell : cx.cells_of_edge(cp.vertex, y)) out.insert(cell);
            }
        } else {
            for (int cell : cx.cells_of_edge(cp.ea, cp.eb)) out.insert(cell);
        }
        return out;
    };

    std::vector<ChordStep> steps;
    for (size_t i = 0; i < nseg; ++i) {
        if (edge_mask[i]) continue;
        const CurvePoint& p0 = c.points[i];
        const CurvePoint& p1 = c.points[(i + 1) % c.points.size()];
        std::set<int> c0 = cells_of_point(p0);
        int cell = -1;
        for (int cand : cells_of_point(p1)) {
            if (c0.count(cand)) {
                cell = cand;
                break;
            }
        }
        if (cell < 0) throw Error("internal: chord step spans no single cell");
        steps.push_back({i, cell, boundary_position(cx, cell, p0), boundary_position(cx, cell, p1)});
    }
    return steps;
}

/// Strictly-inside test on the cyclic boundary parameter of a k-gon.
bool cyclic_between(double x, double lo, double hi, double k, double eps) {
    double span = std::fmod(hi - lo + k, k);
    double off = std::fmod(x - lo + k, k);
    return off > eps && off < span - eps;
}

}  // namespace

std::vector<CurveHit> intersect_curves(const LevelCurve& a, const LevelCurve& b, double snap,
                                       const PLComplex& cx) {
    std::vector<CurveHit> hits = intersect_curves(a, b);

    auto steps_a = chord_steps(cx, a);
    auto steps_b = chord_steps(cx, b);
    std::map<int, std::vector<const ChordStep*>> by_cell;
    for (const auto& s : steps_b) by_cell[s.cell].push_back(&s);

    for (const auto& sa : steps_a) {
        auto it = by_cell.find(sa.cell);
        if (it == by_cell.end()) continue;
        double k = static_cast<double>(cx.cells[static_cast<size_t>(sa.cell)].size());
        for (const ChordStep* sb : it->second) {
            // endpoints meeting on the boundary are node events, not crossings
            const double eps = 1e-9;
            auto near = [&](double x, double y) {
                double d = std::fmod(std::abs(x - y), k);
                return d <= eps || d >= k - eps;
            };
            if (near(sb->pos0, sa.pos0) || near(sb->pos0, sa.pos1) || near(sb->pos1, sa.pos0) ||
                near(sb->pos1, sa.pos1)) {
                continue;
            }
            int inside = 0;
            if (cyclic_between(sb->pos0, sa.pos0, sa.pos1, k, eps)) ++inside;
            if (cyclic_between(sb->pos1, sa.pos0, sa.pos1, k, eps)) ++inside;
            if (inside != 1) continue;
            // the chords interleave: one interior crossing in this cell
            Vec2 a0 = a.points[sa.index].p;
            Vec2 a1 = a.points[(sa.index + 1) % a.points.size()].p;
            Vec2 b0 = b.points[sb->index].p;
            Vec2 b1 = b.points[(sb->index + 1) % b.points.size()].p;
            auto geo = intersect_segments(a0, a1, b0, b1, 1e-12);
            Vec2 p = geo ? geo->p : lerp(lerp(a0, a1, 0.5), lerp(b0, b1, 0.5), 0.5);
            double sa_par = geo ? geo->s : 0.5;
            double sb_par = geo ? geo->t : 0.5;
            bool dup = false;
            for (const auto& h : hits) {
                if (h.along_a >= 0 && dist(h.p, p) <= snap) dup = true;
            }
            if (!dup) {
                hits.push_back({p, static_cast<double>(sa.index) + sa_par,
                                static_cast<double>(sb->index) + sb_par});
            }
        }
    }
    return hits;
}

double RectNet::total_cell_area() const {
    double a = 0.0;
    for (const auto& c : cells) a += c.area;
    return a;
}

namespace {

void append_arc(std::vector<Vec2>& out, const LevelCurve& c, double from, double to) {
    if (from <= to) {
        long lo = static_cast<long>(std::floor(from + 1e-9)) + 1;
        long hi = static_cast<long>(std::ceil(to - 1e-9)) - 1;
        for (long i = lo; i <= hi; ++i) out.push_back(c.points[static_cast<size_t>(i)].p);
    } else {
        long lo = static_cast<long>(std::floor(to + 1e-9)) + 1;
        long hi = static_cast<long>(std::ceil(from - 1e-9)) - 1;
        for (long i = hi; i >= lo; --i) out.push_back(c.points[static_cast<size_t>(i)].p);
    }
}

}  // namespace

RectNet build_rectnet(const SlitQuadrilateral& q, const ScalarField& g, const ScalarField& h) {
    RectNet net;
    const PLComplex& cx = q.cx;

    std::vector<VertexId> family_vertices;
    for (VertexId v = 0; v < cx.net.vertex_count(); ++v) {
        if (cx.kinds[static_cast<size_t>(v)] != VertexKind::TypeII) family_vertices.push_back(v);
    }
    double gtol = 1e-9 * (field_range(g) + 1.0);
    double htol = 1e-9 * (field_range(h) + 1.0);
    net.g_values = distinct_values(g, family_vertices, gtol);
    net.h_values = distinct_values(h, family_vertices, htol);

    for (double val : net.g_values) {
        auto curves = level_curves_on_quad(q, g, val, true);
        if (curves.size() != 1) {
            throw Error("level family of g is not a single curve per value");
        }
        net.g_levels.push_back(std::move(curves[0]));
    }
    for (double val : net.h_values) {
        auto curves = level_curves_on_quad(q, h, val, false);
        if (curves.size() != 1) {
            throw Error("level family of h is not a single curve per value");
        }
        net.h_levels.push_back(std::move(curves[0]));
    }

    const int gi = net.g_count(), hj = net.h_count();
    net.lattice.resize(static_cast<size_t>(gi * hj));
    for (int i = 0; i < gi; ++i) {
        for (int j = 0; j < hj; ++j) {
            auto hits = intersect_curves(net.g_levels[static_cast<size_t>(i)],
                                         net.h_levels[static_cast<size_t>(j)]);
            if (hits.size() != 1) {
                std::ostringstream os;
                os << "level curves (g " << i << ", h " << j << ") intersect " << hits.size()
                   << " times, expected exactly one";
                throw Error(os.str());
            }
            net.lattice[static_cast<size_t>(i * hj + j)] = {hits[0].p, hits[0].along_a, hits[0].along_b};
        }
    }

    for (int i = 0; i + 1 < gi; ++i) {
        for (int j = 0; j + 1 < hj; ++j) {
            RectNet::Cell cell;
            cell.i = i;
            cell.j = j;
            const auto& c00 = net.at(i, j);
            const auto& c10 = net.at(i + 1, j);
            const auto& c11 = net.at(i + 1, j + 1);
            const auto& c01 = net.at(i, j + 1);
            std::vector<Vec2>& poly = cell.polygon;
            poly.push_back(c00.p);
            append_arc(poly, net.h_levels[static_cast<size_t>(j)], c00.along_h, c10.along_h);
            poly.push_back(c10.p);
            append_arc(poly, net.g_levels[static_cast<size_t>(i + 1)], c10.along_g, c11.along_g);
            poly.push_back(c11.p);
            append_arc(poly, net.h_levels[static_cast<size_t>(j + 1)], c11.along_h, c01.along_h);
            poly.push_back(c01.p);
            append_arc(poly, net.g_levels[static_cast<size_t>(i)], c01.along_g, c00.along_g);
            cell.area = polygon_signed_area(poly);
            if (cell.area <= 0) throw Error("rectangular net cell is not positively oriented");
            cell.g_base = net.g_values[static_cast<size_t>(i)];
            cell.g_top = net.g_values[static_cast<size_t>(i + 1)];
            cell.dh = net.h_values[static_cast<size_t>(j + 1)] - net.h_values[static_cast<size_t>(j)];
            net.cells.push_back(std::move(cell));
        }
    }
    return net;
}

OrthogonalityReport verify_orthogonal_filling(const RectNet& net) {
    OrthogonalityReport rep;
    const int hj = net.h_count();
    rep.counts.resize(static_cast<size_t>(net.g_count() * hj));
    parallel_for(rep.counts.size(), [&](size_t idx) {
        int i = static_cast<int>(idx) / hj;
        int j = static_cast<int>(idx) % hj;
        auto hits = intersect_curves(net.g_levels[static_cast<size_t>(i)],
                                     net.h_levels[static_cast<size_t>(j)]);
        rep.counts[idx] = {i, j, static_cast<int>(hits.size())};
    });
    for (const auto& pc : rep.counts) {
        if (pc.count != 1) {
            std::ostringstream os;
            os << "pair (g " << pc.i << ", h " << pc.j << ") intersects " << pc.count << " times";
            rep.violations.push_back(os.str());
        }
    }
    auto family_disjoint = [&](const std::vector<LevelCurve>& fam, const char* name) {
        for (size_t i = 0; i < fam.size(); ++i) {
            for (size_t j = i + 1; j < fam.size(); ++j) {
                auto hits = intersect_curves(fam[i], fam[j]);
                if (!hits.empty()) {
                    std::ostringstream os;
                    os << name << " curves " << i << " and " << j << " are not disjoint";
                    rep.violations.push_back(os.str());
                }
            }
        }
    };
    family_disjoint(net.g_levels, "g-level");
    family_disjoint(net.h_levels, "h-level");
    return rep;
}

}  // namespace uniformize
