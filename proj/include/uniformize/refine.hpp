#pragma once

#include "uniformize/levelcurve.hpp"

namespace uniformize {

struct Refined {
    PLComplex cx;
    ScalarField field;
    int new_vertices = 0;
};

/// Insert the level curve into the complex: edge-interior crossings become
/// vertices (conductances rewritten so the field stays harmonic), curve arcs
/// become zero-conductance edges, and crossed cells split into triangles and
/// quadrilaterals. Pre-existing edges lying on the curve keep their
/// conductances.
Refined refine_type1(const PLComplex& cx, const ScalarField& f, const LevelCurve& curve,
                     VertexKind kind = VertexKind::TypeI);

/// Separate consecutive level sets combinatorially by inserting the mid-gap
/// level curve of each consecutive pair of `levels` (ascending). Insertions
/// preserve harmonicity and the original vertex values.
Refined refine_type2(const PLComplex& cx, const ScalarField& f, const std::vector<double>& levels);

/// Materialize all interior members of the level family, then separate them:
/// the standard preparation before cutting along a slit.
Refined refine_for_levels(const PLComplex& cx, const ScalarField& f,
                          const std::vector<double>& levels);

}  // namespace uniformize
