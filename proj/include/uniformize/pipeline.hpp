#pragma once

#include <optional>

#include "uniformize/conjugate.hpp"
#include "uniformize/mapper.hpp"
#include "uniformize/mesh_document.hpp"
#include "uniformize/metrics.hpp"
#include "uniformize/rectnet.hpp"
#include "uniformize/singular.hpp"

namespace uniformize {

struct PipelineOptions {
    double k = 1.0;
    double tolerance = 1e-9;       // relative tolerance for the verification checks
    bool strict = false;           // abort on any verification failure
    bool verify = true;            // populate verification reports
    bool check_topology = false;   // run the (slow) conjugate level-topology check
    bool perturb_ties = false;     // deterministic id tie-break for equal values
    std::vector<VertexId> slit_override;  // original vertex ids; empty: steepest descent
};

struct VerificationCheck {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
    void add(const std::string& name, bool pass, double residual, double tol,
             const std::string& detail = "");
};

/// Everything the annulus pipeline produces for one (possibly lifted) annulus.
struct AnnulusResult {
    double k = 0.0;
    double period = 0.0;
    double width_value = 0.0;
    PLComplex refined;      // type I + type II refined annulus, uncut
    ScalarField g_refined;  // solution on the refined annulus
    Slit slit;
    SlitQuadrilateral q;
    ScalarField g;  // on the cut complex
    ScalarField h;
    ConjugateField gstar;
    ConjugateField hstar;
    RectNet net;
    TargetAnnulus target;
    PLMap map;
    Cylinder cylinder;
    VerificationReport verification;
};

AnnulusResult uniformize_annulus(const PLComplex& cx, const PipelineOptions& opts);

/// Uniformize the exterior component of a split (an annulus with one
/// singular boundary component, presented as the lift by its labeled
/// circle): runs the annulus pipeline on the lift, marks the images of the
/// lifted tangency copies on the inner circle, and reports the angular
/// extent of each bouquet circle for the quotient gluing.
struct SingularAnnulusResult {
    AnnulusResult annulus;
    std::vector<LadderBuildComponent::Circle> circles;  // tangencies keyed by parent vertex id
    std::vector<double> sing_angles;                    // images of the lifted tangency copies
    std::map<VertexId, int> tangency_multiplicity;      // parent tangency vertex -> m(v)
};

SingularAnnulusResult uniformize_singular_annulus(const SplitComponent& exterior,
                                                  const SplitResult& split,
                                                  const PipelineOptions& opts);

/// Result of the splitting pipeline for an m-connected domain (m > 2).
struct LadderResult {
    struct Node {
        int id = -1;
        int parent = -1;
        int parent_circle = -1;
        bool generalized = false;
        double level_value = 0.0;  // split level that produced this node's children
        AnnulusResult annulus;     // run on the (lifted) component
        std::vector<double> sing_angles;            // angles of lifted tangency copies
        std::vector<LadderBuildComponent::Circle> circles;
        std::map<int, int> tangency_multiplicity;   // parent-domain tangency vertex -> m(v)
        bool carries_inner_boundary = false;
    };
    std::vector<Node> nodes;
    PantsLadder ladder;
    VerificationReport verification;
};

LadderResult uniformize_multiply_connected(const PLComplex& cx, const PipelineOptions& opts);

struct PipelineResult {
    int connectivity = 0;
    std::optional<AnnulusResult> annulus;
    std::optional<LadderResult> ladder;
    VerificationReport verification;
};

PipelineResult run_pipeline(const MeshDocument& doc, const PipelineOptions& opts);
PipelineResult run_pipeline(const PLComplex& cx, const PipelineOptions& opts);

}  // namespace uniformize
