#include "uniformize/plcomplex.hpp"

#include <algorithm>
#include <cmath>

namespace uniformize {

namespace {
std::pair<VertexId, VertexId> ekey(VertexId a, VertexId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}
}  // namespace

VertexId PLComplex::add_vertex(Vec2 p, VertexKind kind) {
    VertexId v = net.add_vertex(p);
    kinds.push_back(kind);
    return v;
}

int PLComplex::add_cell(std::vector<VertexId> corners) {
    std::vector<Vec2> poly;
    poly.reserve(corners.size());
    for (VertexId v : corners) poly.push_back(net.position(v));
    if (polygon_signed_area(poly) < 0) std::reverse(corners.begin(), corners.end());
    cells.push_back(std::move(corners));
    int id = static_cast<int>(cells.size()) - 1;
    const auto& c = cells.back();
    for (size_t i = 0; i < c.size(); ++i) {
        edge_cells_[ekey(c[i], c[(i + 1) % c.size()])].push_back(id);
    }
    return id;
}

void PLComplex::rebuild_incidence() {
    edge_cells_.clear();
    for (int id = 0; id < static_cast<int>(cells.size()); ++id) {
        const auto& c = cells[static_cast<size_t>(id)];
        for (size_t i = 0; i < c.size(); ++i) {
            edge_cells_[ekey(c[i], c[(i + 1) % c.size()])].push_back(id);
        }
    }
}

const std::vector<int>& PLComplex::cells_of_edge(VertexId a, VertexId b) const {
    static const std::vector<int> none;
    auto it = edge_cells_.find(ekey(a, b));
    return it == edge_cells_.end() ? none : it->second;
}

std::vector<Vec2> PLComplex::cell_polygon(int cell) const {
    std::vector<Vec2> poly;
    for (VertexId v : cells[static_cast<size_t>(cell)]) poly.push_back(net.position(v));
    return poly;
}

double PLComplex::cell_area(int cell) const {
    auto poly = cell_polygon(cell);
    return polygon_signed_area(poly);
}

double PLComplex::total_area() const {
    double a = 0.0;
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) a += cell_area(i);
    return a;
}

void PLComplex::check_valid() const {
    if (kinds.size() != static_cast<size_t>(net.vertex_count())) throw Error("vertex kind table out of sync");
    std::map<std::pair<VertexId, VertexId>, int> use;
    for (const auto& c : cells) {
        if (c.size() != 3 && c.size() != 4) throw Error("cell is neither a triangle nor a quadrilateral");
        std::vector<Vec2> poly;
        for (VertexId v : c) poly.push_back(net.position(v));
        if (polygon_signed_area(poly) <= 0) throw Error("cell is not counterclockwise");
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == c[(i + 1) % c.size()]) throw Error("degenerate cell edge");
            if (!net.has_edge(c[i], c[(i + 1) % c.size()])) throw Error("cell edge missing from skeleton");
            use[ekey(c[i], c[(i + 1) % c.size()])]++;
        }
    }
    for (const auto& [e, cnt] : use) {
        if (cnt > 2) throw Error("edge shared by more than two cells");
    }
    for (const auto& [e, c] : net.edges()) {
        auto it = use.find(e);
        if (it == use.end()) throw Error("skeleton edge belongs to no cell");
    }
}

std::vector<std::pair<VertexId, VertexId>> PLComplex::equal_adjacent_pairs(const ScalarField& f,
                                                                           double tol) const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (const auto& [e, c] : net.edges()) {
        if (std::abs(f[e.first] - f[e.second]) > tol) continue;
        int ba = net.boundary_component_of(e.first);
        int bb = net.boundary_component_of(e.second);
        if (ba >= 0 && ba == bb) continue;  // same boundary component is allowed
        out.push_back(e);
    }
    return out;
}

double evaluate(const PLComplex& cx, const ScalarField& f, Vec2 p) {
    const double scale = 1e-12;
    for (const auto& c : cx.cells) {
        std::vector<Vec2> poly;
        for (VertexId v : c) poly.push_back(cx.net.position(v));
        // quick reject
        double minx = poly[0].x, maxx = poly[0].x, miny = poly[0].y, maxy = poly[0].y;
        for (const Vec2& q : poly) {
            minx = std::min(minx, q.x);
            maxx = std::max(maxx, q.x);
            miny = std::min(miny, q.y);
            maxy = std::max(maxy, q.y);
        }
        double pad = scale + 1e-9 * (maxx - minx + maxy - miny);
        if (p.x < minx - pad || p.x > maxx + pad || p.y < miny - pad || p.y > maxy + pad) continue;

        if (c.size() == 3) {
            Vec2 a = poly[0], b = poly[1], d = poly[2];
            double area = orient(a, b, d);
            if (area == 0) continue;
            double wa = orient(p, b, d) / area;
            double wb = orient(a, p, d) / area;
            double wc = orient(a, b, p) / area;
            double eps = 1e-9;
            if (wa < -eps || wb < -eps || wc < -eps) continue;
            return wa * f[c[0]] + wb * f[c[1]] + wc * f[c[2]];
        }
        auto uv = invert_bilinear(poly[0], poly[1], poly[2], poly[3], p);
        if (!uv) continue;
        auto [u, v] = *uv;
        return (1 - u) * (1 - v) * f[c[0]] + u * (1 - v) * f[c[1]] + u * v * f[c[2]] +
               (1 - u) * v * f[c[3]];
    }
    throw Error("point lies outside the domain");
}

std::vector<double> distinct_values(const ScalarField& f, std::span<const VertexId> vertices,
                                    double tol) {
    std::vector<double> vals;
    vals.reserve(vertices.size());
    for (VertexId v : vertices) vals.push_back(f[v]);
    std::sort(vals.begin(), vals.end());
    std::vector<double> out;
    for (double x : vals) {
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    }
    return out;
}

double field_range(const ScalarField& f) {
    if (f.values.empty()) return 0.0;
    auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
    return *mx - *mn;
}

}  // namespace uniformize
