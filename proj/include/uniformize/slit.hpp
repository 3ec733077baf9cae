#pragma once

#include <cstdint>
#include <map>

#include "uniformize/levelcurve.hpp"

namespace uniformize {

/// Simple 1-skeleton path from the outer boundary to the inner one along
/// which the field is strictly monotone decreasing.
struct Slit {
    std::vector<VertexId> path;  // path[0] on E1, path.back() on E2
};

/// Steepest-descent slit from the outer-boundary vertex of maximal degree
/// (ties by vertex id). Requires a solved Dirichlet field.
Slit find_slit(const PLComplex& cx, const ScalarField& g);

enum Role : uint8_t {
    RoleNone = 0,
    RoleBase = 1,
    RoleTop = 2,
    RoleE1 = 4,
    RoleE2 = 8,
};

/// The annulus cut open along the slit: a disk with twin copies of the slit
/// path. Twin vertices share coordinates and field values; all four corner
/// vertices (slit endpoints, both copies) carry boundary-arc roles too.
struct SlitQuadrilateral {
    PLComplex cx;
    std::vector<uint8_t> role;          // per vertex, Role bitmask
    std::vector<VertexId> slit_base;    // from E1 corner to E2 corner
    std::vector<VertexId> slit_top;     // same order, twin ids
    std::vector<VertexId> arc_e1;       // from base E1-corner to top E1-corner
    std::vector<VertexId> arc_e2;       // from base E2-corner to top E2-corner
    std::map<VertexId, VertexId> base_to_top;
    std::map<VertexId, VertexId> top_to_base;
    std::vector<VertexId> origin;       // cut vertex id -> vertex id in the uncut complex

    bool has_role(VertexId v, Role r) const { return (role[static_cast<size_t>(v)] & r) != 0; }

    /// Transfer a per-vertex field from the uncut complex (twins copy values).
    ScalarField lift_field(const ScalarField& f) const;
};

/// Cut the annulus open along the slit. The base copy is the side on which
/// level curves of g begin (counterclockwise orientation, sublevel left).
SlitQuadrilateral cut_along_slit(const PLComplex& cx, const ScalarField& g, const Slit& slit);

/// Level curves of a field on the cut complex. Handles the extreme values of
/// g (the boundary arcs Q(E1), Q(E2)) and of h (the slit copies) via roles;
/// interior values go through the generic tracer. Curves are oriented to
/// start on their integration-origin boundary.
std::vector<LevelCurve> level_curves_on_quad(const SlitQuadrilateral& q, const ScalarField& f,
                                             double t, bool field_is_g,
                                             const TraceOptions& opts = {});

}  // namespace uniformize
