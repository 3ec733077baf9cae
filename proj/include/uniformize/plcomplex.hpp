#pragma once

#include <array>
#include <map>
#include <vector>

#include "uniformize/network.hpp"

namespace uniformize {

enum class VertexKind : uint8_t { Original, TypeI, TypeII };

/// Embedded cellular decomposition with triangle and quadrilateral 2-cells.
/// The 1-skeleton (with conductances) is the carrier network; boundary
/// components live on the network, outer component first.
class PLComplex {
public:
    FiniteNetwork net;
    std::vector<std::vector<VertexId>> cells;  // CCW vertex cycles, 3 or 4 corners
    std::vector<VertexKind> kinds;

    VertexId add_vertex(Vec2 p, VertexKind kind);
    int add_cell(std::vector<VertexId> corners);  // orients CCW, registers edges in incidence

    void rebuild_incidence();
    const std::vector<int>& cells_of_edge(VertexId a, VertexId b) const;

    std::vector<Vec2> cell_polygon(int cell) const;
    double cell_area(int cell) const;
    double total_area() const;

    /// Number of boundary components (the domain is m-connected).
    int connectivity() const { return static_cast<int>(net.boundary_components().size()); }

    /// Structural validation: CCW cells, every edge on <= 2 cells, boundary
    /// edges on exactly 1, interior on exactly 2, skeleton matches cells.
    void check_valid() const;

    /// Edges whose endpoints share a field value but lie on no common boundary
    /// component (the assumption the construction needs).
    std::vector<std::pair<VertexId, VertexId>> equal_adjacent_pairs(const ScalarField& f,
                                                                    double tol) const;

private:
    std::map<std::pair<VertexId, VertexId>, std::vector<int>> edge_cells_;
};

/// Piecewise value of the field at a point: barycentric on triangles,
/// bilinear on quadrilaterals. Throws when p lies in no cell.
double evaluate(const PLComplex& cx, const ScalarField& f, Vec2 p);

/// Distinct field values over a set of vertices, merged within tol, ascending.
std::vector<double> distinct_values(const ScalarField& f, std::span<const VertexId> vertices,
                                    double tol);

/// Range (max - min) of a field.
double field_range(const ScalarField& f);

}  // namespace uniformize
