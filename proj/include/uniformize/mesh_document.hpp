#pragma once

#include <string>

#include "uniformize/plcomplex.hpp"

namespace uniformize {

/// Input mesh: a triangulated (optionally pre-refined with quadrilaterals)
/// m-connected planar domain with boundary cycles and conductances.
struct MeshDocument {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 4>> quads;  // optional, for pre-refined inputs
    std::vector<int> outer_boundary;
    std::vector<std::vector<int>> inner_boundaries;
    double default_conductance = 1.0;
    std::vector<std::tuple<int, int, double>> conductances;  // explicit per-edge values
    double k = 1.0;

    PLComplex to_complex() const;
};

MeshDocument load_mesh(const std::string& path);
MeshDocument parse_mesh(const std::string& json_text, const std::string& origin = "<string>");
std::string mesh_to_json(const MeshDocument& doc);

}  // namespace uniformize
