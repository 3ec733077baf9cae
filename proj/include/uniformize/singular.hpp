#pragma once

#include <map>

#include "uniformize/levelcurve.hpp"

namespace uniformize {

/// Index of a vertex: 1 - (cyclic sign changes of neighbor differences)/2.
/// Regular vertices have index 0, saddles negative index, extrema 1.
struct VertexIndex {
    int sign_changes = 0;
    int index = 1;
};

/// Requires no neighbor to share the vertex value; with perturb_ties, exact
/// ties are broken by vertex id (smaller id counts as smaller value).
VertexIndex vertex_index(const PLComplex& cx, const ScalarField& f, VertexId v,
                         bool perturb_ties = false);

/// A connected component of a singular level set: piecewise-linear circles
/// meeting pairwise in at most one vertex, all tangencies exterior.
struct Bouquet {
    std::vector<LevelCurve> circles;
    std::map<VertexId, int> tangency_multiplicity;  // vertices on >= 2 circles
};

struct LevelClassification {
    double value = 0.0;
    bool singular = false;
    std::vector<VertexId> singular_vertices;
    std::vector<Bouquet> components;
};

LevelClassification classify_level(const PLComplex& cx, const ScalarField& f, double t,
                                   bool perturb_ties = false);

/// The unique singular level curve whose bounded complementary domain
/// contains every inner boundary component. Throws when the domain is an
/// annulus (no singular curve is required to exist) or uniqueness fails.
struct MaximalSingularCurve {
    double value = 0.0;
    Bouquet bouquet;
};

MaximalSingularCurve maximal_singular_curve(const PLComplex& cx, const ScalarField& f,
                                            bool perturb_ties = false);

/// One component of the complement of a maximal singular curve, carrying the
/// induced Dirichlet problem (the restriction of g solves it).
struct SplitComponent {
    PLComplex cx;
    ScalarField g;                      // restriction, shifted so the low boundary is 0
    double k_local = 0.0;               // value on the outer boundary after the shift
    bool is_exterior = false;           // the generalized singular annulus A(E1, L)
    std::vector<VertexId> parent_vertex;  // component id -> parent id

    // exterior component only: the inner boundary is the lifted labeled
    // circle; tangency copies carry labels back to the parent tangency vertex
    std::map<VertexId, VertexId> tangency_label;
    std::vector<int> inner_arc_circle;  // per inner-boundary cycle edge: bouquet circle id
};

struct SplitResult {
    double level_value = 0.0;
    Bouquet bouquet;                    // in parent vertex ids (after refinement)
    PLComplex refined;                  // parent complex with the curve materialized
    ScalarField refined_g;
    std::vector<SplitComponent> components;  // exterior last
};

SplitResult split_domain(const PLComplex& cx, const ScalarField& g,
                         const MaximalSingularCurve& curve);

/// Cone angle at a tangency of `incident` Euclidean cylinders: 2 incident pi.
double cone_angle(int incident);

/// Flat-gluing bookkeeping for the splitting tree. Components are glued
/// child-to-parent-circle with conformal scalings so boundary lengths match.
struct LadderBuildComponent {
    int id = -1;
    int parent = -1;         // -1 for the root (exterior of the top split)
    int parent_circle = -1;  // index into the parent's circles
    bool generalized = false;
    double k_local = 0.0;
    double period = 0.0;
    struct Circle {
        double arc_angle = 0.0;           // total angular extent on the unit inner circle
        std::vector<int> tangencies;      // global tangency ids at this circle
    };
    std::vector<Circle> circles;          // generalized components only
    std::map<int, int> tangency_multiplicity;  // global tangency id -> m(v)
    bool carries_inner_boundary = false;  // leaf annulus around an original hole
};

struct PantsLadder {
    struct Component {
        int id = -1;
        double scale = 1.0;
        double boundary_circumference = 0.0;  // scaled outer boundary length
        double tiled_height = 0.0;            // scaled
    };
    std::vector<Component> components;
    struct Gluing {
        int parent = -1, child = -1, circle = -1;
        double parent_arc_length = 0.0, child_length = 0.0, residual = 0.0;
    };
    std::vector<Gluing> gluings;
    struct ConePoint {
        int tangency_id = -1;
        int incident = 0;
        double angle = 0.0;
    };
    std::vector<ConePoint> cone_points;
    std::vector<double> boundary_lengths;  // outer boundary first
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};

PantsLadder assemble_ladder(const std::vector<LadderBuildComponent>& comps, double tol_rel = 1e-9);

}  // namespace uniformize
