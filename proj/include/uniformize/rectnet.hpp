#pragma once

#include "uniformize/slit.hpp"

namespace uniformize {

/// One geometric intersection of two level curves. Node hits are exact
/// (shared vertex / shared edge identity); chord hits are transversal
/// crossings inside a common 2-cell.
struct CurveHit {
    Vec2 p;
    double along_a = 0.0;  // position along curve A in point-index units
    double along_b = 0.0;
};

/// All intersection points of two traced curves, counted on the 1-skeleton:
/// shared nodes by identity (robust against the coincident slit copies) and
/// edges carried by one curve and crossed by the other. Curves that ride
/// edges meet others only at such events, so this form is complete for the
/// level families of the net.
std::vector<CurveHit> intersect_curves(const LevelCurve& a, const LevelCurve& b);

/// Adds interior crossings of chord segments, decided combinatorially: two
/// chords through one cell cross when their boundary endpoints interleave
/// around the cell. Straight-segment geometry is never trusted inside
/// quadrilaterals (the true isocontours are hyperbola arcs).
std::vector<CurveHit> intersect_curves(const LevelCurve& a, const LevelCurve& b, double snap,
                                       const PLComplex& cx);

/// The rectangular net induced by the level families of g and h on the cut
/// quadrilateral: lattice point (i, j) = L(i) ∩ M(j), cells between
/// consecutive members of both families.
struct RectNet {
    std::vector<LevelCurve> g_levels;  // ascending g; first = Q(E2), last = Q(E1)
    std::vector<LevelCurve> h_levels;  // ascending h; first = base, last = top
    std::vector<double> g_values;
    std::vector<double> h_values;

    struct Lattice {
        Vec2 p;
        double along_g = 0.0;  // along g_levels[i]
        double along_h = 0.0;  // along h_levels[j]
    };
    std::vector<Lattice> lattice;  // row-major: index = i * h_count + j
    int g_count() const { return static_cast<int>(g_levels.size()); }
    int h_count() const { return static_cast<int>(h_levels.size()); }
    const Lattice& at(int i, int j) const {
        return lattice[static_cast<size_t>(i * h_count() + j)];
    }

    struct Cell {
        int i = 0, j = 0;               // between L(i), L(i+1) and M(j), M(j+1)
        std::vector<Vec2> polygon;      // CCW boundary stitched from curve arcs
        double area = 0.0;
        double g_base = 0.0, g_top = 0.0;
        double dh = 0.0;
    };
    std::vector<Cell> cells;

    double total_cell_area() const;
};

/// Build the net. The families contain the levels through all original and
/// type I vertices; every pair must intersect exactly once.
RectNet build_rectnet(const SlitQuadrilateral& q, const ScalarField& g, const ScalarField& h);

struct OrthogonalityReport {
    struct PairCount {
        int i = 0, j = 0, count = 0;
    };
    std::vector<PairCount> counts;       // every (g-level, h-level) pair
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};

/// Checks |L ∩ M| = 1 for every cross-family pair and that each family is a
/// non-singular foliation (same-family curves pairwise disjoint).
OrthogonalityReport verify_orthogonal_filling(const RectNet& net);

}  // namespace uniformize
