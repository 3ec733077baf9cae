#include "uniformize/mapper.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "uniformize/metrics.hpp"

namespace uniformize {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double TargetAnnulus::boundary_r2() const {
    return two_pi * std::exp(two_pi * k / period);
}

double TargetAnnulus::tiled_area() const {
    double r_in = circle_radii.front();
    double r_out = circle_radii.back();
    return std::numbers::pi * (r_out * r_out - r_in * r_in);
}

TargetAnnulus build_target(double k, double period, const std::vector<double>& g_values,
                           const std::vector<double>& h_values) {
    if (!(period > 0)) throw Error("period must be positive");
    for (size_t i = 1; i < g_values.size(); ++i) {
        if (!(g_values[i] > g_values[i - 1])) throw Error("g-levels are not strictly ascending");
    }
    for (size_t j = 1; j < h_values.size(); ++j) {
        if (!(h_values[j] > h_values[j - 1])) throw Error("h-levels are not strictly ascending");
    }
    TargetAnnulus t;
    t.k = k;
    t.period = period;
    t.g_values = g_values;
    t.h_values = h_values;
    double theta = two_pi / period;
    for (double g : g_values) t.circle_radii.push_back(std::exp(theta * g));
    for (double h : h_values) t.angles.push_back(theta * h);
    if (std::abs(t.angles.front()) > 1e-9 || std::abs(t.angles.back() - two_pi) > 1e-9) {
        throw Error("angle family does not span [0, 2pi]");
    }
    return t;
}

PLMap build_map(const RectNet& net, const TargetAnnulus& target) {
    if (net.g_count() != static_cast<int>(target.circle_radii.size()) ||
        net.h_count() != static_cast<int>(target.angles.size())) {
        throw Error("net and target families are not index-compatible");
    }
    PLMap map;
    for (const auto& cell : net.cells) {
        PLMap::CellMap cm;
        cm.i = cell.i;
        cm.j = cell.j;
        cm.source_corners = {net.at(cell.i, cell.j).p, net.at(cell.i + 1, cell.j).p,
                             net.at(cell.i + 1, cell.j + 1).p, net.at(cell.i, cell.j + 1).p};
        cm.r0 = target.circle_radii[static_cast<size_t>(cell.i)];
        cm.r1 = target.circle_radii[static_cast<size_t>(cell.i + 1)];
        cm.phi0 = target.angles[static_cast<size_t>(cell.j)];
        cm.phi1 = target.angles[static_cast<size_t>(cell.j + 1)];
        cm.dphi = two_pi * cell.dh / target.period;
        map.cells.push_back(cm);
    }
    return map;
}

MeasureReport verify_measure_preservation(const PLMap& map, const RectNet& net,
                                          const TargetAnnulus& target, double tol_rel) {
    MeasureReport rep;
    rep.expected_total = total_measure_nu(target.k, target.period);
    if (map.cells.size() != net.cells.size()) throw Error("map and net cell counts differ");
    for (size_t idx = 0; idx < map.cells.size(); ++idx) {
        const auto& cm = map.cells[idx];
        const auto& cell = net.cells[idx];
        MeasureReport::CellCheck cc;
        cc.i = cm.i;
        cc.j = cm.j;
        cc.nu = cell_measure_nu(cell, target.period);
        cc.mu = cm.shell_area();
        cc.residual = std::abs(cc.nu - cc.mu);
        rep.total_nu += cc.nu;
        rep.total_mu += cc.mu;
        if (cc.residual > tol_rel * cc.mu) {
            std::ostringstream os;
            os << "cell (" << cm.i << "," << cm.j << "): |nu - mu| = " << cc.residual
               << " exceeds " << tol_rel << " * mu";
            rep.violations.push_back(os.str());
        }
        rep.cells.push_back(cc);
    }
    if (std::abs(rep.total_nu - rep.expected_total) > 1e-8 * rep.expected_total) {
        std::ostringstream os;
        os << "total nu " << rep.total_nu << " differs from closed form " << rep.expected_total;
        rep.violations.push_back(os.str());
    }
    return rep;
}

Cylinder to_cylinder(const TargetAnnulus& target) {
    double a = target.boundary_r1();
    double b = target.boundary_r2();
    if (!(a > 0)) throw Error("inner radius must be positive");
    Cylinder cyl;
    cyl.height = std::log(b / a);
    for (size_t i = 0; i + 1 < target.circle_radii.size(); ++i) {
        for (size_t j = 0; j + 1 < target.angles.size(); ++j) {
            Cylinder::Rect r;
            r.i = static_cast<int>(i);
            r.j = static_cast<int>(j);
            // same arithmetic as the cell measures so slivers compare exactly
            double dh = target.h_values[j + 1] - target.h_values[j];
            r.dphi = two_pi * dh / target.period;
            double rt = std::exp(two_pi / target.period * target.g_values[i + 1]);
            double rb = std::exp(two_pi / target.period * target.g_values[i]);
            r.dlogr = std::log(rt / rb);
            cyl.rectangles.push_back(r);
        }
    }
    return cyl;
}

std::array<double, 3> cylinder_point(Vec2 p) {
    double rho = std::hypot(p.x, p.y);
    if (!(rho > 0)) throw Error("cylinder map undefined at the origin");
    return {p.x / rho, p.y / rho, std::log(rho)};
}

}  // namespace uniformize
