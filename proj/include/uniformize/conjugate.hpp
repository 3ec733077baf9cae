#pragma once

#include "uniformize/slit.hpp"

namespace uniformize {

/// Conjugate function obtained by integrating the normal derivative of the
/// base field along its level curves, from the integration-origin boundary.
struct ConjugateField {
    enum class BaseKind : uint8_t { OfG, OfH };
    BaseKind base = BaseKind::OfG;
    ScalarField values;
};

/// g*: zero on the base slit copy, flux prefix sums along every level curve
/// of g, counterclockwise. The end twin absorbs the full flux of its uncut
/// vertex so the total over each curve is the flux through that level.
ConjugateField conjugate_of_g(const SlitQuadrilateral& q, const ScalarField& g);

/// Value of g* on the top slit copy. Verifies the spread over the top
/// vertices stays within tol_rel of the period.
double period(const SlitQuadrilateral& q, const ScalarField& g, const ConjugateField& gstar,
              double tol_rel = 1e-9);

/// The harmonic conjugate: h = p on the top slit copy, 0 on the base copy,
/// zero normal derivative along Q(E1) and Q(E2) except at the four corners.
ScalarField harmonic_conjugate(const SlitQuadrilateral& q, double p);

/// h*: zero on Q(E1), flux prefix sums along level curves of h.
ConjugateField conjugate_of_h(const SlitQuadrilateral& q, const ScalarField& h);

/// Value of h* on Q(E2). Verifies the spread (scaled by the h-range).
double width(const SlitQuadrilateral& q, const ScalarField& h, const ConjugateField& hstar,
             double tol_rel = 1e-9);

struct TopologyReport {
    std::vector<std::string> violations;
    int curves_checked = 0;
    int intersections_checked = 0;
    bool pass() const { return violations.empty(); }
};

/// Checks the level-curve topology of a conjugate field: each level curve is
/// simple, has no interior endpoint, joins its two prescribed boundary arcs,
/// and meets every level curve of the base field exactly once.
TopologyReport verify_level_topology(const SlitQuadrilateral& q, const ScalarField& base_field,
                                     const ConjugateField& conj);

}  // namespace uniformize
