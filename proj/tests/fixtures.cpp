#include "fixtures.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace fixtures {

using uniformize::Vec2;

double Rng::uniform(double lo, double hi) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    double u = static_cast<double>(state >> 11) / 9007199254740992.0;
    return lo + (hi - lo) * u;
}

MeshDocument quad_wheel() {
    MeshDocument doc;
    constexpr double pi = std::numbers::pi;
    for (int i = 0; i < 4; ++i) {
        double a = 0.5 * pi * i;
        doc.vertices.push_back({2 * std::cos(a), 2 * std::sin(a)});
    }
    for (int i = 0; i < 4; ++i) {
        double a = 0.5 * pi * i;
        doc.vertices.push_back({std::cos(a), std::sin(a)});
    }
    for (int i = 0; i < 4; ++i) {
        int j = (i + 1) % 4;
        doc.quads.push_back({4 + i, i, j, 4 + j});
    }
    doc.outer_boundary = {0, 1, 2, 3};
    doc.inner_boundaries = {{4, 5, 6, 7}};
    doc.k = 1.0;
    return doc;
}

MeshDocument tri_wheel() {
    MeshDocument doc = quad_wheel();
    doc.quads.clear();
    for (int i = 0; i < 4; ++i) {
        int j = (i + 1) % 4;
        doc.triangles.push_back({4 + i, i, j});
        doc.triangles.push_back({4 + i, j, 4 + j});
    }
    return doc;
}

MeshDocument g8x3() {
    MeshDocument doc;
    constexpr double pi = std::numbers::pi;
    const double radii[3] = {3.0, 2.0, 1.0};
    for (double r : radii) {
        for (int i = 0; i < 8; ++i) {
            double a = 0.25 * pi * i;
            doc.vertices.push_back({r * std::cos(a), r * std::sin(a)});
        }
    }
    for (int ring = 0; ring < 2; ++ring) {
        int outer0 = ring * 8, inner0 = (ring + 1) * 8;
        for (int i = 0; i < 8; ++i) {
            int j = (i + 1) % 8;
            doc.quads.push_back({inner0 + i, outer0 + i, outer0 + j, inner0 + j});
        }
    }
    doc.outer_boundary = {0, 1, 2, 3, 4, 5, 6, 7};
    doc.inner_boundaries = {{16, 17, 18, 19, 20, 21, 22, 23}};
    doc.k = 1.0;
    return doc;
}

MeshDocument irregular_annulus(unsigned seed) {
    MeshDocument doc;
    constexpr double pi = std::numbers::pi;
    Rng rng(seed);

    const int counts[3] = {14, 10, 7};
    const double base_r[3] = {3.0, 1.9, 1.0};
    std::vector<std::vector<int>> rings;
    std::vector<std::vector<double>> ring_angles;
    for (int r = 0; r < 3; ++r) {
        std::vector<int> ring;
        std::vector<double> angles;
        for (int i = 0; i < counts[r]; ++i) {
            double a = 2 * pi * i / counts[r] + rng.uniform(-0.12, 0.12);
            double rad = base_r[r] + rng.uniform(-0.15, 0.15);
            ring.push_back(static_cast<int>(doc.vertices.size()));
            doc.vertices.push_back({rad * std::cos(a), rad * std::sin(a)});
            angles.push_back(a);
        }
        rings.push_back(ring);
        ring_angles.push_back(angles);
    }

    // zipper triangulation between consecutive rings by unwrapped angle
    auto zipper = [&](int outer, int inner) {
        const auto& A = rings[static_cast<size_t>(outer)];
        const auto& B = rings[static_cast<size_t>(inner)];
        const auto& aa = ring_angles[static_cast<size_t>(outer)];
        const auto& bb = ring_angles[static_cast<size_t>(inner)];
        size_t na = A.size(), nb = B.size();
        size_t ia = 0, ib = 0;
        auto angA = [&](size_t i) { return aa[i % na] + 2 * pi * static_cast<double>(i / na); };
        auto angB = [&](size_t i) { return bb[i % nb] + 2 * pi * static_cast<double>(i / nb); };
        // align start
        while (angB(ib) < angA(0)) ++ib;
        size_t ib0 = ib;
        while (ia < na || ib < ib0 + nb) {
            bool advance_a;
            if (ia >= na) {
                advance_a = false;
            } else if (ib >= ib0 + nb) {
                advance_a = true;
            } else {
                advance_a = angA(ia + 1) <= angB(ib + 1);
            }
            if (advance_a) {
                doc.triangles.push_back({A[ia % na], A[(ia + 1) % na], B[ib % nb]});
                ++ia;
            } else {
                doc.triangles.push_back({A[ia % na], B[(ib + 1) % nb], B[ib % nb]});
                ++ib;
            }
        }
    };
    zipper(0, 1);
    zipper(1, 2);

    doc.outer_boundary = rings[0];
    doc.inner_boundaries = {rings[2]};

    std::map<std::pair<int, int>, double> cond;
    for (const auto& t : doc.triangles) {
        for (int e = 0; e < 3; ++e) {
            int a = t[static_cast<size_t>(e)], b = t[static_cast<size_t>((e + 1) % 3)];
            if (a > b) std::swap(a, b);
            if (!cond.count({a, b})) cond[{a, b}] = rng.uniform(0.5, 2.0);
        }
    }
    for (const auto& [e, c] : cond) doc.conductances.emplace_back(e.first, e.second, c);
    doc.k = 1.0;
    return doc;
}

namespace {

/// Criss-cross grid over [x0, x0+nx] x [y0, y0+ny] with unit cells; cells
/// listed in `holes` are omitted and their boundary cycles recorded.
MeshDocument crisscross(double x0, double y0, int nx, int ny,
                        const std::vector<std::pair<int, int>>& hole_cells,
                        const std::vector<std::vector<std::pair<int, int>>>& hole_cycles) {
    MeshDocument doc;
    auto idx = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            doc.vertices.push_back({x0 + i, y0 + j});
        }
    }
    auto is_hole = [&](int i, int j) {
        for (const auto& [hi, hj] : hole_cells) {
            if (hi == i && hj == j) return true;
        }
        return false;
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (is_hole(i, j)) continue;
            int c = static_cast<int>(doc.vertices.size());
            doc.vertices.push_back({x0 + i + 0.5, y0 + j + 0.5});
            int v00 = idx(i, j), v10 = idx(i + 1, j), v11 = idx(i + 1, j + 1), v01 = idx(i, j + 1);
            doc.triangles.push_back({v00, v10, c});
            doc.triangles.push_back({v10, v11, c});
            doc.triangles.push_back({v11, v01, c});
            doc.triangles.push_back({v01, v00, c});
        }
    }
    // outer rectangle boundary, counterclockwise
    for (int i = 0; i <= nx; ++i) doc.outer_boundary.push_back(idx(i, 0));
    for (int j = 1; j <= ny; ++j) doc.outer_boundary.push_back(idx(nx, j));
    for (int i = nx - 1; i >= 0; --i) doc.outer_boundary.push_back(idx(i, ny));
    for (int j = ny - 1; j >= 1; --j) doc.outer_boundary.push_back(idx(0, j));

    for (const auto& cyc : hole_cycles) {
        std::vector<int> ids;
        for (const auto& [i, j] : cyc) ids.push_back(idx(i, j));
        doc.inner_boundaries.push_back(ids);
    }
    doc.k = 1.0;
    return doc;
}

}  // namespace

MeshDocument p3() {
    // grid x in [-3, 3], y in [-2, 2]; square holes [-2,-1]x[-1,1] and [1,2]x[-1,1]
    std::vector<std::pair<int, int>> holes = {{1, 1}, {1, 2}, {4, 1}, {4, 2}};
    std::vector<std::vector<std::pair<int, int>>> cycles = {
        {{1, 1}, {2, 1}, {2, 2}, {2, 3}, {1, 3}, {1, 2}},
        {{4, 1}, {5, 1}, {5, 2}, {5, 3}, {4, 3}, {4, 2}},
    };
    return crisscross(-3.0, -2.0, 6, 4, holes, cycles);
}

MeshDocument p4() {
    // grid x in [-4.5, 4.5], y in [-2, 2]; two tall holes and one small one
    std::vector<std::pair<int, int>> holes = {{1, 1}, {1, 2}, {4, 1}, {4, 2}, {7, 2}};
    std::vector<std::vector<std::pair<int, int>>> cycles = {
        {{1, 1}, {2, 1}, {2, 2}, {2, 3}, {1, 3}, {1, 2}},
        {{4, 1}, {5, 1}, {5, 2}, {5, 3}, {4, 3}, {4, 2}},
        {{7, 2}, {8, 2}, {8, 3}, {7, 3}},
    };
    return crisscross(-4.5, -2.0, 9, 4, holes, cycles);
}

MeshDocument fine_annulus() {
    MeshDocument doc;
    constexpr double pi = std::numbers::pi;
    const int na = 32, nr = 6;
    for (int r = 0; r < nr; ++r) {
        double rad = 2.0 * std::pow(2.0, -static_cast<double>(r) / (nr - 1));  // 2 .. 1 geometric
        for (int i = 0; i < na; ++i) {
            double a = 2 * pi * i / na;
            doc.vertices.push_back({rad * std::cos(a), rad * std::sin(a)});
        }
    }
    for (int r = 0; r + 1 < nr; ++r) {
        int o0 = r * na, i0 = (r + 1) * na;
        for (int i = 0; i < na; ++i) {
            int j = (i + 1) % na;
            doc.quads.push_back({i0 + i, o0 + i, o0 + j, i0 + j});
        }
    }
    std::vector<int> outer, inner;
    for (int i = 0; i < na; ++i) outer.push_back(i);
    for (int i = 0; i < na; ++i) inner.push_back((nr - 1) * na + i);
    doc.outer_boundary = outer;
    doc.inner_boundaries = {inner};
    doc.k = 1.0;
    return doc;
}

}  // namespace fixtures
