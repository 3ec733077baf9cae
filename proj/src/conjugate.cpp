#include "uniformize/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uniformize/rectnet.hpp"

namespace uniformize {

namespace {

/// Edges that carry no flux for the integration. For g (a Dirichlet
/// solution) only edges inside one Neumann arc are excluded; their g-drop
/// vanishes anyway. For h (a Dirichlet-Neumann solution) the problem lives
/// on the edges with an interior endpoint, so every boundary-to-boundary
/// edge is excluded: chords between arcs carry no current in the solve.
bool excluded_edge(const SlitQuadrilateral& q, VertexId a, VertexId b, bool field_is_g) {
    uint8_t ra = q.role[static_cast<size_t>(a)];
    uint8_t rb = q.role[static_cast<size_t>(b)];
    if (field_is_g) return (ra & rb & (RoleE1 | RoleE2)) != 0;
    return ra != RoleNone && rb != RoleNone;
}

/// Flux of the field at a vertex toward its strictly smaller (sign = +1) or
/// strictly larger (sign = -1) neighbors, skipping excluded edges.
double vertex_flux(const SlitQuadrilateral& q, const ScalarField& f, VertexId v, int sign,
                   double tol, bool field_is_g) {
    double s = 0.0;
    for (VertexId y : q.cx.net.neighbors(v)) {
        double d = sign * (f[v] - f[y]);
        if (d <= tol) continue;
        if (excluded_edge(q, v, y, field_is_g)) continue;
        s += q.cx.net.conductance(v, y) * d;
    }
    return s;
}

/// Integrate the conjugate of `f` along all its level curves.
ConjugateField integrate_conjugate(const SlitQuadrilateral& q, const ScalarField& f,
                                   bool field_is_g) {
    const PLComplex& cx = q.cx;
    const int n = cx.net.vertex_count();
    double range = field_range(f);
    double tol = 1e-9 * (range > 0 ? range : 1.0);
    double fmin = *std::min_element(f.values.begin(), f.values.end());

    ConjugateField out;
    out.base = field_is_g ? ConjugateField::BaseKind::OfG : ConjugateField::BaseKind::OfH;
    out.values.values.assign(static_cast<size_t>(n), std::nan(""));

    std::vector<VertexId> all(static_cast<size_t>(n));
    for (VertexId v = 0; v < n; ++v) all[static_cast<size_t>(v)] = v;
    auto vals = distinct_values(f, all, tol);

    auto slit_neighbor_flux = [&](VertexId v, int sign) {
        // the twin-copied slit edge at the curve's end, counted once
        const auto& path = q.slit_top;
        size_t idx = path.size();
        for (size_t i = 0; i < path.size(); ++i) {
            if (path[i] == v) idx = i;
        }
        if (idx == path.size()) throw Error("internal: curve end is not on the top slit copy");
        VertexId nb;
        if (sign > 0) {
            if (idx + 1 >= path.size()) throw Error("internal: no down-slit neighbor at curve end");
            nb = path[idx + 1];
        } else {
            if (idx == 0) throw Error("internal: no up-slit neighbor at curve end");
            nb = path[idx - 1];
        }
        return cx.net.conductance(v, nb) * std::abs(f[v] - f[nb]);
    };

    for (double val : vals) {
        int sign = std::abs(val - fmin) <= tol ? -1 : +1;
        auto curves = level_curves_on_quad(q, f, val, field_is_g);
        for (const auto& lc : curves) {
            double running = 0.0;
            for (size_t i = 0; i < lc.points.size(); ++i) {
                const CurvePoint& cp = lc.points[i];
                if (i == 0) {
                    if (cp.kind == CurvePoint::Kind::Vertex) out.values[cp.vertex] = 0.0;
                    // The conjugate vanishes at the starting point, but its
                    // flux belongs to the total. For g the end twin restores
                    // it; for h it enters the running sum right away.
                    if (!field_is_g && cp.kind == CurvePoint::Kind::Vertex) {
                        running += vertex_flux(q, f, cp.vertex, sign, tol, field_is_g);
                    }
                    continue;
                }
                double term = 0.0;
                if (cp.kind == CurvePoint::Kind::Vertex) {
                    VertexId v = cp.vertex;
                    bool end_twin = field_is_g && i + 1 == lc.points.size() &&
                                    q.has_role(v, RoleTop);
                    if (end_twin) {
                        VertexId tw = q.top_to_base.at(v);
                        term = vertex_flux(q, f, v, sign, tol, field_is_g) +
                               vertex_flux(q, f, tw, sign, tol, field_is_g) -
                               slit_neighbor_flux(v, sign);
                    } else {
                        term = vertex_flux(q, f, v, sign, tol, field_is_g);
                    }
                } else {
                    if (!excluded_edge(q, cp.ea, cp.eb, field_is_g)) {
                        term = cx.net.conductance(cp.ea, cp.eb) * std::abs(f[cp.ea] - f[cp.eb]);
                    }
                }
                running += term;
                if (cp.kind == CurvePoint::Kind::Vertex) out.values[cp.vertex] = running;
            }
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (std::isnan(out.values[v])) {
            throw Error("conjugate integration missed vertex " + std::to_string(v));
        }
    }
    return out;
}

}  // namespace

ConjugateField conjugate_of_g(const SlitQuadrilateral& q, const ScalarField& g) {
    return integrate_conjugate(q, g, true);
}

double period(const SlitQuadrilateral& q, const ScalarField& g, const ConjugateField& gstar,
              double tol_rel) {
    (void)g;
    double lo = 1e300, hi = -1e300;
    for (VertexId v : q.slit_top) {
        lo = std::min(lo, gstar.values[v]);
        hi = std::max(hi, gstar.values[v]);
    }
    double p = 0.5 * (lo + hi);
    if (!(p > 0)) throw Error("period is not positive");
    if (hi - lo > tol_rel * p) {
        std::ostringstream os;
        os << "conjugate value on the top slit copy is not constant: spread " << (hi - lo)
           << " vs period " << p;
        throw Error(os.str());
    }
    return p;
}

ScalarField harmonic_conjugate(const SlitQuadrilateral& q, double p) {
    if (!(p > 0)) throw Error("period must be positive");
    DirichletNeumannSpec spec;
    spec.dirichlet.push_back({q.slit_top, p});
    spec.dirichlet.push_back({q.slit_base, 0.0});
    spec.neumann.push_back(q.arc_e1);
    spec.neumann.push_back(q.arc_e2);
    return solve_dirichlet_neumann(q.cx.net, spec);
}

ConjugateField conjugate_of_h(const SlitQuadrilateral& q, const ScalarField& h) {
    return integrate_conjugate(q, h, false);
}

double width(const SlitQuadrilateral& q, const ScalarField& h, const ConjugateField& hstar,
             double tol_rel) {
    double lo = 1e300, hi = -1e300;
    for (VertexId v : q.arc_e2) {
        lo = std::min(lo, hstar.values[v]);
        hi = std::max(hi, hstar.values[v]);
    }
    double w = 0.5 * (lo + hi);
    double scale = std::abs(w) + field_range(h);
    if (hi - lo > tol_rel * scale) {
        std::ostringstream os;
        os << "conjugate of h is not constant on Q(E2): spread " << (hi - lo) << " vs width " << w;
        throw Error(os.str());
    }
    return w;
}

TopologyReport verify_level_topology(const SlitQuadrilateral& q, const ScalarField& base_field,
                                     const ConjugateField& conj) {
    TopologyReport rep;
    const bool base_is_g = conj.base == ConjugateField::BaseKind::OfG;
    const PLComplex& cx = q.cx;
    const int n = cx.net.vertex_count();
    std::vector<VertexId> all(static_cast<size_t>(n));
    for (VertexId v = 0; v < n; ++v) all[static_cast<size_t>(v)] = v;

    double ctol = 1e-9 * (field_range(conj.values) + 1.0);
    auto conj_vals = distinct_values(conj.values, all, ctol);
    double btol = 1e-9 * (field_range(base_field) + 1.0);
    auto base_vals = distinct_values(base_field, all, btol);

    std::vector<LevelCurve> base_curves;
    for (double bv : base_vals) {
        auto cs = level_curves_on_quad(q, base_field, bv, base_is_g);
        for (auto& c : cs) base_curves.push_back(std::move(c));
    }

    double snap;
    {
        double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
        for (VertexId v = 0; v < n; ++v) {
            Vec2 p = cx.net.position(v);
            minx = std::min(minx, p.x);
            miny = std::min(miny, p.y);
            maxx = std::max(maxx, p.x);
            maxy = std::max(maxy, p.y);
        }
        snap = 1e-9 * std::hypot(maxx - minx, maxy - miny);
    }

    // the conjugate's level curves join the arcs transverse to the base family
    auto on_arcs = [&](const CurvePoint& cp) {
        uint8_t want = base_is_g ? (RoleE1 | RoleE2) : (RoleBase | RoleTop);
        if (cp.kind == CurvePoint::Kind::Vertex) {
            return (q.role[static_cast<size_t>(cp.vertex)] & want) != 0;
        }
        return (q.role[static_cast<size_t>(cp.ea)] & q.role[static_cast<size_t>(cp.eb)] & want) != 0;
    };

    for (size_t k = 0; k + 1 < conj_vals.size(); ++k) {
        double t = 0.5 * (conj_vals[k] + conj_vals[k + 1]);
        std::vector<LevelCurve> curves;
        try {
            curves = level_curves(cx, conj.values, t);
        } catch (const Error& e) {
            rep.violations.push_back(std::string("tracing failed at conjugate level: ") + e.what());
            continue;
        }
        for (const auto& lc : curves) {
            ++rep.curves_checked;
            std::ostringstream tag;
            tag << "conjugate level " << t;
            if (lc.closed) {
                rep.violations.push_back(tag.str() + ": curve is closed (must join the boundary arcs)");
                continue;
            }
            if (!on_arcs(lc.points.front()) || !on_arcs(lc.points.back())) {
                rep.violations.push_back(tag.str() + ": endpoint lies in the interior");
            }
            auto poly = lc.polyline();
            // open curves across the slit end where they began (coincident
            // twin copies): test them as closed polygons
            bool wraps = dist(poly.front(), poly.back()) <= snap;
            if (wraps && poly.size() > 2) poly.pop_back();
            if (polyline_self_intersects(poly, wraps, 1e-12)) {
                rep.violations.push_back(tag.str() + ": curve is not simple");
            }
            for (size_t b = 0; b < base_curves.size(); ++b) {
                auto hits = intersect_curves(lc, base_curves[b], snap, cx);
                ++rep.intersections_checked;
                if (hits.size() != 1) {
                    std::ostringstream os;
                    os << tag.str() << ": meets base level " << base_curves[b].value << " "
                       << hits.size() << " times";
                    rep.violations.push_back(os.str());
                }
            }
        }
    }
    return rep;
}

}  // namespace uniformize
