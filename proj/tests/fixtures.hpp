#pragma once

#include "uniformize/mesh_document.hpp"

namespace fixtures {

using uniformize::MeshDocument;

/// 2-ring, 4-spoke wheel annulus with quadrilateral cells (pre-refined input).
/// Outer square ids 0..3 (radius 2), inner square 4..7 (radius 1), c = 1, k = 1.
MeshDocument quad_wheel();

/// Same wheel triangulated with diagonals (8 vertices, 8 triangles).
MeshDocument tri_wheel();

/// 3-ring, 8-spoke grid annulus: radii 3 (outer), 2, 1 (inner), c = 1, k = 1.
MeshDocument g8x3();

/// Irregular triangulated annulus: jittered concentric rings, seeded
/// conductances in [0.5, 2]. Two seeds give the two standard fixtures.
MeshDocument irregular_annulus(unsigned seed);

/// 3-connected criss-cross grid domain with two square holes.
MeshDocument p3();

/// 4-connected domain with three holes, the third smaller and off-axis so the
/// splitting recurses.
MeshDocument p4();

/// Fine concentric quad-grid annulus with geometric radii 1..2 (32 x 6).
MeshDocument fine_annulus();

/// Deterministic uniform draw in [lo, hi] (xorshift-based).
struct Rng {
    unsigned long long state;
    explicit Rng(unsigned seed) : state(seed * 2654435769ULL + 1) {}
    double uniform(double lo, double hi);
};

}  // namespace fixtures
