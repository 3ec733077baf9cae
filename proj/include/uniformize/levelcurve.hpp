#pragma once

#include <cmath>
#include <vector>

#include "uniformize/plcomplex.hpp"

namespace uniformize {

/// One point of a traced level curve. Vertex points carry the vertex id;
/// edge points carry the crossed edge (a < b) and the parameter from a.
struct CurvePoint {
    enum class Kind : uint8_t { Vertex, EdgePoint };
    Kind kind = Kind::Vertex;
    Vec2 p;
    VertexId vertex = -1;
    VertexId ea = -1, eb = -1;
    double t = 0.0;

    bool same_node(const CurvePoint& o) const {
        if (kind != o.kind) return false;
        if (kind == Kind::Vertex) return vertex == o.vertex;
        return ea == o.ea && eb == o.eb && std::abs(t - o.t) <= 1e-9;
    }
};

/// Oriented polyline of constant field value. Open curves run from their
/// start boundary to their end; closed curves wrap (last point != first).
/// Orientation: the sublevel region lies on the left.
struct LevelCurve {
    double value = 0.0;
    std::vector<CurvePoint> points;
    bool closed = false;
    /// Complex edges fully contained in the curve (both endpoints at value),
    /// as consecutive point indices: points[i] -> points[i+1] spans the edge.
    std::vector<int> on_edge_steps;

    std::vector<Vec2> polyline() const {
        std::vector<Vec2> out;
        out.reserve(points.size());
        for (const auto& cp : points) out.push_back(cp.p);
        return out;
    }
};

struct TraceOptions {
    double level_tol = 1e-9;  // relative to field range: vertex counts as "on level"
};

/// Trace the level set of the piecewise extension of f at value t into
/// oriented curves. Regular interior values give simple curves; at singular
/// values the components decompose into circles of a bouquet (each returned
/// separately). Values at the domain extremes return the boundary components
/// carrying that value (closed cycles; on cut complexes use the slit-aware
/// wrapper instead).
std::vector<LevelCurve> level_curves(const PLComplex& cx, const ScalarField& f, double t,
                                     const TraceOptions& opts = {});

}  // namespace uniformize
