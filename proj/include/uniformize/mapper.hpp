#pragma once

#include <array>

#include "uniformize/rectnet.hpp"

namespace uniformize {

/// Concentric target annulus: the tiling circles carry the level radii
/// exp((2pi/p) g_i); the declared boundary radii are {1, 2pi exp((2pi/p) k)}.
struct TargetAnnulus {
    double k = 0.0;
    double period = 0.0;
    std::vector<double> g_values;      // level values behind the circles
    std::vector<double> h_values;      // level values behind the angles
    std::vector<double> circle_radii;  // ascending, first = 1
    std::vector<double> angles;        // ascending, first = 0, last = 2pi

    double boundary_r1() const { return 1.0; }
    double boundary_r2() const;

    /// Area of the tiled annulus (between the extreme circles).
    double tiled_area() const;
};

TargetAnnulus build_target(double k, double period, const std::vector<double>& g_values,
                           const std::vector<double>& h_values);

/// Cell-to-shell correspondence. Shell (i, j) spans radii [r_i, r_{i+1}] and
/// angles [phi_j, phi_{j+1}]; corners follow the counterclockwise order of
/// the source cell corners.
struct PLMap {
    struct CellMap {
        int i = 0, j = 0;
        std::array<Vec2, 4> source_corners;  // (i,j), (i+1,j), (i+1,j+1), (i,j+1)
        double r0 = 0, r1 = 0, phi0 = 0, phi1 = 0;
        double dphi = 0;  // 2 pi dh / period, the exact angular extent
        double shell_area() const { return 0.5 * (r1 * r1 - r0 * r0) * dphi; }
    };
    std::vector<CellMap> cells;
};

PLMap build_map(const RectNet& net, const TargetAnnulus& target);

struct MeasureReport {
    struct CellCheck {
        int i = 0, j = 0;
        double nu = 0, mu = 0, residual = 0;
    };
    std::vector<CellCheck> cells;
    double total_nu = 0, total_mu = 0, expected_total = 0;
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};

/// Per-cell |nu(R) - mu(T_R)| <= tol_rel * mu(T_R) and the closed-form total.
MeasureReport verify_measure_preservation(const PLMap& map, const RectNet& net,
                                          const TargetAnnulus& target, double tol_rel = 1e-9);

/// Euclidean cylinder image of the annulus: radius 1, height log(r2/r1) of
/// the declared boundary radii. Shells map to rectangles dphi x dlog(r).
struct Cylinder {
    double radius = 1.0;
    double height = 0.0;
    struct Rect {
        int i = 0, j = 0;
        double dphi = 0, dlogr = 0;
        double area() const { return dphi * dlogr; }
    };
    std::vector<Rect> rectangles;
};

Cylinder to_cylinder(const TargetAnnulus& target);

/// The cylinder map itself: (rho cos h, rho sin h) -> (cos h, sin h, log rho).
std::array<double, 3> cylinder_point(Vec2 annulus_point);

}  // namespace uniformize
