#pragma once

#include <map>
#include <span>
#include <vector>

#include "uniformize/geometry.hpp"

namespace uniformize {

using VertexId = int;

/// Per-vertex real values; extended affinely over triangles and bilinearly
/// over quadrilaterals by the carrier complex.
struct ScalarField {
    std::vector<double> values;

    double operator[](VertexId v) const { return values[static_cast<size_t>(v)]; }
    double& operator[](VertexId v) { return values[static_cast<size_t>(v)]; }
    size_t size() const { return values.size(); }
};

/// Weighted planar graph with positive symmetric conductances and labeled
/// boundary components (index 0 is the outer component).
class FiniteNetwork {
public:
    VertexId add_vertex(Vec2 p);
    void add_edge(VertexId a, VertexId b, double conductance);
    void set_conductance(VertexId a, VertexId b, double c);
    bool has_edge(VertexId a, VertexId b) const;
    double conductance(VertexId a, VertexId b) const;

    int vertex_count() const { return static_cast<int>(pos_.size()); }
    Vec2 position(VertexId v) const { return pos_.at(static_cast<size_t>(v)); }
    void set_position(VertexId v, Vec2 p) { pos_.at(static_cast<size_t>(v)) = p; }
    const std::vector<VertexId>& neighbors(VertexId v) const;

    /// Neighbors sorted by angle around v (counterclockwise), from the embedding.
    std::vector<VertexId> neighbors_ccw(VertexId v) const;

    const std::map<std::pair<VertexId, VertexId>, double>& edges() const { return cond_; }

    std::vector<std::vector<VertexId>>& boundary_components() { return boundary_; }
    const std::vector<std::vector<VertexId>>& boundary_components() const { return boundary_; }
    bool is_boundary_vertex(VertexId v) const;
    int boundary_component_of(VertexId v) const;  // -1 when interior

    /// Vertices inserted on zero-conductance edges carry no equations; their
    /// values follow the affine interpolation along the carrier edge.
    struct Slave {
        VertexId v = -1, a = -1, b = -1;
        double t = 0.0;  // parameter from a
    };
    void add_slave(VertexId v, VertexId a, VertexId b, double t) { slaves_.push_back({v, a, b, t}); }
    const std::vector<Slave>& slaves() const { return slaves_; }
    std::vector<Slave>& slaves() { return slaves_; }

    /// Recover the slave registry structurally (after cutting or splitting):
    /// a slave is a vertex all of whose edges have zero conductance; its
    /// carrier is the collinear neighbor pair it lies between.
    void rebuild_slaves();

    void check_valid() const;  // simple, connected, positive conductances

private:
    std::vector<Vec2> pos_;
    std::vector<std::vector<VertexId>> nbr_;
    std::map<std::pair<VertexId, VertexId>, double> cond_;  // key: a < b
    std::vector<std::vector<VertexId>> boundary_;
    std::vector<Slave> slaves_;

    void require_vertex(VertexId v) const;
};

struct DirichletSpec {
    std::vector<VertexId> high_set;               // value k
    double k = 1.0;                               // > 0
    std::vector<std::vector<VertexId>> low_sets;  // value 0
};

struct DirichletNeumannSpec {
    struct Arc {
        std::vector<VertexId> vertices;
        double value = 0.0;
    };
    std::vector<Arc> dirichlet;
    std::vector<std::vector<VertexId>> neumann;  // zero normal derivative
};

/// Sum over neighbors of c(x,y)(u(x)-u(y)).
double laplacian(const FiniteNetwork& net, const ScalarField& u, VertexId x);

/// Normal derivative of u at x with respect to F: sum over neighbors inside F.
/// Requires x outside F with at least one neighbor in F.
double normal_derivative(const FiniteNetwork& net, const ScalarField& u, VertexId x,
                         std::span<const VertexId> F);
double normal_derivative(const FiniteNetwork& net, const ScalarField& u, VertexId x,
                         const std::vector<char>& in_f);

/// Solve the Dirichlet problem: boundary data clamped, harmonic elsewhere.
ScalarField solve_dirichlet(const FiniteNetwork& net, const DirichletSpec& spec);

/// Solve the Dirichlet-Neumann problem: Dirichlet arcs clamped, zero normal
/// derivative at Neumann vertices (with respect to the interior), harmonic
/// at interior vertices. Verifies the zero-total-flux consistency afterwards.
ScalarField solve_dirichlet_neumann(const FiniteNetwork& net, const DirichletNeumannSpec& spec);

/// |LHS - RHS| of the first Green identity on F for the pair (u, v).
double green_identity_residual(const FiniteNetwork& net, const ScalarField& u,
                               const ScalarField& v, std::span<const VertexId> F);

/// Max |laplacian| over the given vertices.
double harmonic_residual(const FiniteNetwork& net, const ScalarField& u,
                         std::span<const VertexId> vertices);

/// Checks that every non-clamped value lies strictly between the min and max
/// of the clamped data (when the data is non-constant). Returns offenders.
std::vector<VertexId> max_principle_violations(const FiniteNetwork& net, const ScalarField& u,
                                               const std::vector<char>& clamped);

}  // namespace uniformize
