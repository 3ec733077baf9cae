#include "uniformize/mesh_document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace uniformize {

namespace {
using nlohmann::json;

std::pair<int, int> ekey(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

[[noreturn]] void fail(const std::string& origin, const std::string& field, const std::string& msg) {
    throw Error(origin + ": " + field + ": " + msg);
}
}  // namespace

MeshDocument parse_mesh(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset -> line number for the diagnostic
        size_t line = 1;
        for (size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') ++line;
        }
        throw Error(origin + ": line " + std::to_string(line) + ": malformed JSON: " + e.what());
    }

    MeshDocument doc;
    if (!j.is_object()) fail(origin, "$", "document must be an object");
    if (!j.contains("vertices") || !j["vertices"].is_array()) fail(origin, "vertices", "missing array");
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2) fail(origin, "vertices", "each vertex is [x, y]");
        doc.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    const int n = static_cast<int>(doc.vertices.size());
    auto check_id = [&](const json& x, const char* field) {
        if (!x.is_number_integer()) fail(origin, field, "vertex id must be an integer");
        int id = x.get<int>();
        if (id < 0 || id >= n) fail(origin, field, "vertex id " + std::to_string(id) + " out of range");
        return id;
    };

    if (j.contains("triangles")) {
        for (const auto& t : j["triangles"]) {
            if (!t.is_array() || t.size() != 3) fail(origin, "triangles", "each entry is [a, b, c]");
            std::array<int, 3> tri{check_id(t[0], "triangles"), check_id(t[1], "triangles"),
                                   check_id(t[2], "triangles")};
            std::set<int> seen;
            for (int v : tri) {
                if (seen.count(v)) {
                    fail(origin, "triangles", "duplicate vertex id " + std::to_string(v) + " in cell");
                }
                seen.insert(v);
            }
            doc.triangles.push_back(tri);
        }
    }
    if (j.contains("quads")) {
        for (const auto& t : j["quads"]) {
            if (!t.is_array() || t.size() != 4) fail(origin, "quads", "each entry is [a, b, c, d]");
            std::array<int, 4> q{check_id(t[0], "quads"), check_id(t[1], "quads"),
                                 check_id(t[2], "quads"), check_id(t[3], "quads")};
            std::set<int> uniq(q.begin(), q.end());
            if (uniq.size() != 4) {
                std::set<int> seen;
                int dup = q[0];
                for (int v : q) {
                    if (seen.count(v)) dup = v;
                    seen.insert(v);
                }
                fail(origin, "quads", "duplicate vertex id " + std::to_string(dup) + " in cell");
            }
            doc.quads.push_back(q);
        }
    }
    if (doc.triangles.empty() && doc.quads.empty()) fail(origin, "triangles", "no cells given");

    if (!j.contains("boundary") || !j["boundary"].is_object()) fail(origin, "boundary", "missing object");
    const auto& b = j["boundary"];
    if (!b.contains("outer") || !b["outer"].is_array()) fail(origin, "boundary.outer", "missing array");
    for (const auto& x : b["outer"]) doc.outer_boundary.push_back(check_id(x, "boundary.outer"));
    if (b.contains("inner")) {
        for (const auto& cyc : b["inner"]) {
            if (!cyc.is_array()) fail(origin, "boundary.inner", "each component is an id array");
            std::vector<int> c;
            for (const auto& x : cyc) c.push_back(check_id(x, "boundary.inner"));
            doc.inner_boundaries.push_back(std::move(c));
        }
    }
    if (doc.inner_boundaries.empty()) fail(origin, "boundary.inner", "domain must have an inner boundary");

    if (j.contains("conductances")) {
        const auto& c = j["conductances"];
        if (c.is_number()) {
            doc.default_conductance = c.get<double>();
        } else if (c.is_array()) {
            for (const auto& e : c) {
                if (!e.is_array() || e.size() != 3) {
                    fail(origin, "conductances", "each entry is [a, b, value]");
                }
                doc.conductances.emplace_back(check_id(e[0], "conductances"),
                                              check_id(e[1], "conductances"), e[2].get<double>());
            }
        } else {
            fail(origin, "conductances", "scalar default or [a, b, value] list");
        }
    }
    if (j.contains("k")) doc.k = j["k"].get<double>();
    if (!(doc.k > 0)) fail(origin, "k", "Dirichlet constant must be positive");
    return doc;
}

MeshDocument load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open mesh file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_mesh(ss.str(), path);
}

PLComplex MeshDocument::to_complex() const {
    PLComplex cx;
    for (const Vec2& p : vertices) cx.add_vertex(p, VertexKind::Original);

    std::set<std::pair<int, int>> edges;
    auto add_cell_edges = [&](const auto& cell) {
        for (size_t i = 0; i < cell.size(); ++i) {
            edges.insert(ekey(cell[i], cell[(i + 1) % cell.size()]));
        }
    };
    for (const auto& t : triangles) add_cell_edges(t);
    for (const auto& q : quads) add_cell_edges(q);

    std::map<std::pair<int, int>, double> cond;
    for (const auto& e : edges) cond[e] = default_conductance;
    for (const auto& [a, b, c] : conductances) {
        auto it = cond.find(ekey(a, b));
        if (it == cond.end()) {
            throw Error("conductance given for non-edge (" + std::to_string(a) + "," +
                        std::to_string(b) + ")");
        }
        it->second = c;
    }
    for (const auto& [e, c] : cond) {
        if (!(c > 0)) {
            throw Error("non-positive conductance on edge (" + std::to_string(e.first) + "," +
                        std::to_string(e.second) + ")");
        }
        cx.net.add_edge(e.first, e.second, c);
    }

    for (const auto& t : triangles) cx.add_cell({t[0], t[1], t[2]});
    for (const auto& q : quads) cx.add_cell({q[0], q[1], q[2], q[3]});
    cx.rebuild_incidence();

    auto check_cycle = [&](const std::vector<int>& cyc, const char* name) {
        if (cyc.size() < 3) throw Error(std::string(name) + ": boundary cycle too short");
        std::set<int> uniq(cyc.begin(), cyc.end());
        if (uniq.size() != cyc.size()) throw Error(std::string(name) + ": boundary cycle is not simple");
        for (size_t i = 0; i < cyc.size(); ++i) {
            int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
            if (!cx.net.has_edge(a, b)) {
                throw Error(std::string(name) + ": boundary edge (" + std::to_string(a) + "," +
                            std::to_string(b) + ") missing from the mesh");
            }
            if (cx.cells_of_edge(a, b).size() != 1) {
                throw Error(std::string(name) + ": boundary edge (" + std::to_string(a) + "," +
                            std::to_string(b) + ") is not on the domain boundary");
            }
        }
    };
    check_cycle(outer_boundary, "boundary.outer");
    std::vector<std::vector<int>> comps{outer_boundary};
    for (const auto& c : inner_boundaries) {
        check_cycle(c, "boundary.inner");
        comps.push_back(c);
    }
    cx.net.boundary_components() = comps;

    cx.net.check_valid();
    cx.check_valid();

    // planar embedding: cell edges may meet only at shared endpoints
    {
        std::vector<std::pair<int, int>> elist(edges.begin(), edges.end());
        for (size_t i = 0; i < elist.size(); ++i) {
            Vec2 a0 = vertices[static_cast<size_t>(elist[i].first)];
            Vec2 a1 = vertices[static_cast<size_t>(elist[i].second)];
            for (size_t j = i + 1; j < elist.size(); ++j) {
                if (elist[i].first == elist[j].first || elist[i].first == elist[j].second ||
                    elist[i].second == elist[j].first || elist[i].second == elist[j].second)
                    continue;
                Vec2 b0 = vertices[static_cast<size_t>(elist[j].first)];
                Vec2 b1 = vertices[static_cast<size_t>(elist[j].second)];
                if (intersect_segments(a0, a1, b0, b1, 1e-12) ||
                    segments_overlap(a0, a1, b0, b1, 1e-12)) {
                    throw Error("mesh is not planar-embedded: edges (" +
                                std::to_string(elist[i].first) + "," +
                                std::to_string(elist[i].second) + ") and (" +
                                std::to_string(elist[j].first) + "," +
                                std::to_string(elist[j].second) + ") intersect");
                }
            }
        }
    }
    return cx;
}

std::string mesh_to_json(const MeshDocument& doc) {
    json j;
    j["version"] = 1;
    json verts = json::array();
    for (const Vec2& v : doc.vertices) verts.push_back({v.x, v.y});
    j["vertices"] = verts;
    json tris = json::array();
    for (const auto& t : doc.triangles) tris.push_back({t[0], t[1], t[2]});
    j["triangles"] = tris;
    if (!doc.quads.empty()) {
        json qs = json::array();
        for (const auto& q : doc.quads) qs.push_back({q[0], q[1], q[2], q[3]});
        j["quads"] = qs;
    }
    j["boundary"]["outer"] = doc.outer_boundary;
    j["boundary"]["inner"] = doc.inner_boundaries;
    if (doc.conductances.empty()) {
        j["conductances"] = doc.default_conductance;
    } else {
        json cs = json::array();
        for (const auto& [a, b, c] : doc.conductances) cs.push_back({json(a), json(b), json(c)});
        j["conductances"] = cs;
    }
    j["k"] = doc.k;
    return j.dump(2) + "\n";
}

}  // namespace uniformize
