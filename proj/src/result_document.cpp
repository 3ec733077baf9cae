#include "uniformize/result_document.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace uniformize {

namespace {
using nlohmann::json;

/// nlohmann's dump() emits shortest-roundtrip floats; the document format
/// pins 17 significant digits instead, so serialize by hand. Objects keep
/// nlohmann's sorted key order.
void dump(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                dump(v, out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            char buf[64];
            double x = j.get<double>();
            if (std::isfinite(x)) {
                std::snprintf(buf, sizeof(buf), "%.17g", x);
                out += buf;
            } else {
                out += "null";
            }
            break;
        }
        default:
            out += j.dump();
    }
}

json vec2_json(Vec2 p) { return json::array({p.x, p.y}); }

json curve_json(const LevelCurve& lc) {
    json j;
    j["value"] = lc.value;
    j["closed"] = lc.closed;
    json pts = json::array();
    for (const auto& cp : lc.points) pts.push_back(vec2_json(cp.p));
    j["points"] = pts;
    return j;
}

json field_json(const ScalarField& f) {
    json a = json::array();
    for (double x : f.values) a.push_back(x);
    return a;
}

json report_json(const VerificationReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["residual"] = c.residual;
        e["tolerance"] = c.tolerance;
        if (!c.detail.empty()) e["detail"] = c.detail;
        checks.push_back(e);
    }
    json j;
    j["checks"] = checks;
    j["all_pass"] = rep.all_pass();
    return j;
}

json annulus_json(const AnnulusResult& ar) {
    json j;
    j["k"] = ar.k;
    j["period"] = ar.period;
    j["width"] = ar.width_value;
    j["fields"]["g"] = field_json(ar.g);
    j["fields"]["h"] = field_json(ar.h);
    j["fields"]["g_star"] = field_json(ar.gstar.values);
    j["fields"]["h_star"] = field_json(ar.hstar.values);
    j["slit"] = ar.slit.path;

    json glv = json::array();
    for (const auto& lc : ar.net.g_levels) glv.push_back(curve_json(lc));
    json hlv = json::array();
    for (const auto& lc : ar.net.h_levels) hlv.push_back(curve_json(lc));
    j["levels"]["g"] = glv;
    j["levels"]["h"] = hlv;

    json lattice = json::array();
    for (int i = 0; i < ar.net.g_count(); ++i) {
        for (int jj = 0; jj < ar.net.h_count(); ++jj) {
            json e;
            e["i"] = i;
            e["j"] = jj;
            e["p"] = vec2_json(ar.net.at(i, jj).p);
            lattice.push_back(e);
        }
    }
    j["net"]["lattice"] = lattice;
    json cells = json::array();
    for (const auto& cell : ar.net.cells) {
        json e;
        e["i"] = cell.i;
        e["j"] = cell.j;
        e["area"] = cell.area;
        e["nu"] = cell_measure_nu(cell, ar.period);
        e["lambda"] = cell_measure_lambda(cell, ar.period);
        cells.push_back(e);
    }
    j["net"]["cells"] = cells;

    j["target"]["circle_radii"] = ar.target.circle_radii;
    j["target"]["angles"] = ar.target.angles;
    j["target"]["boundary_radii"] = json::array({ar.target.boundary_r1(), ar.target.boundary_r2()});
    j["cylinder"]["radius"] = ar.cylinder.radius;
    j["cylinder"]["height"] = ar.cylinder.height;

    json map_cells = json::array();
    for (const auto& cm : ar.map.cells) {
        json e;
        e["i"] = cm.i;
        e["j"] = cm.j;
        json src = json::array();
        for (const Vec2& p : cm.source_corners) src.push_back(vec2_json(p));
        e["source_corners"] = src;
        e["r"] = json::array({cm.r0, cm.r1});
        e["phi"] = json::array({cm.phi0, cm.phi1});
        map_cells.push_back(e);
    }
    j["map"]["cells"] = map_cells;
    j["verification"] = report_json(ar.verification);
    return j;
}

json ladder_json(const LadderResult& lr) {
    json j;
    json nodes = json::array();
    for (const auto& node : lr.nodes) {
        json e;
        e["id"] = node.id;
        e["parent"] = node.parent;
        e["parent_circle"] = node.parent_circle;
        e["generalized"] = node.generalized;
        if (node.generalized) {
            e["split_level"] = node.level_value;
            json circles = json::array();
            for (const auto& c : node.circles) {
                json ce;
                ce["arc_angle"] = c.arc_angle;
                ce["tangencies"] = c.tangencies;
                circles.push_back(ce);
            }
            e["circles"] = circles;
            e["sing_angles"] = node.sing_angles;
        }
        e["annulus"] = annulus_json(node.annulus);
        nodes.push_back(e);
    }
    j["nodes"] = nodes;

    json comps = json::array();
    for (const auto& c : lr.ladder.components) {
        json e;
        e["id"] = c.id;
        e["scale"] = c.scale;
        e["boundary_circumference"] = c.boundary_circumference;
        e["tiled_height"] = c.tiled_height;
        comps.push_back(e);
    }
    j["ladder"]["components"] = comps;
    json glue = json::array();
    for (const auto& gl : lr.ladder.gluings) {
        json e;
        e["parent"] = gl.parent;
        e["child"] = gl.child;
        e["circle"] = gl.circle;
        e["parent_arc_length"] = gl.parent_arc_length;
        e["child_length"] = gl.child_length;
        e["residual"] = gl.residual;
        glue.push_back(e);
    }
    j["ladder"]["gluings"] = glue;
    json cones = json::array();
    for (const auto& cp : lr.ladder.cone_points) {
        json e;
        e["tangency"] = cp.tangency_id;
        e["incident"] = cp.incident;
        e["angle"] = cp.angle;
        cones.push_back(e);
    }
    j["ladder"]["cone_points"] = cones;
    j["ladder"]["boundary_lengths"] = lr.ladder.boundary_lengths;
    j["verification"] = report_json(lr.verification);
    return j;
}

}  // namespace

std::string result_to_json(const PipelineResult& result) {
    json j;
    j["version"] = 1;
    j["connectivity"] = result.connectivity;
    j["kind"] = result.annulus ? "annulus" : "ladder";
    if (result.annulus) j["annulus"] = annulus_json(*result.annulus);
    if (result.ladder) j["ladder_result"] = ladder_json(*result.ladder);
    j["verification"] = report_json(result.verification);
    std::string out;
    dump(j, out);
    out += '\n';
    return out;
}

void write_result_json(const PipelineResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << result_to_json(result);
}

}  // namespace uniformize
