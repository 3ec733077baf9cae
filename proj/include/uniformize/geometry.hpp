#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uniformize {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 lerp(Vec2 a, Vec2 b, double t) { return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t}; }

/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
inline double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

/// Signed area of a simple polygon (positive when counterclockwise).
double polygon_signed_area(std::span<const Vec2> poly);

/// Winding number of a closed polyline around p (1 for CCW enclosure, 0 outside).
int winding_number(std::span<const Vec2> poly, Vec2 p);

bool point_in_polygon(std::span<const Vec2> poly, Vec2 p);

/// A representative point strictly inside a simple polygon.
Vec2 interior_point(std::span<const Vec2> poly);

struct SegmentHit {
    Vec2 p;
    double s = 0.0;  // parameter along (a0, a1)
    double t = 0.0;  // parameter along (b0, b1)
};

/// Intersection of segments [a0,a1] and [b0,b1]. Endpoint touches within `eps`
/// count as hits. Collinear overlap of positive length returns nullopt (callers
/// that care must detect it separately).
std::optional<SegmentHit> intersect_segments(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double eps);

/// True if segments share more than a single point (collinear overlap).
bool segments_overlap(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double eps);

/// Solve the bilinear map of quad (p00, p10, p11, p01) for parameters (u, v) of p.
/// Returns nullopt when p is not in the quad (tolerance `eps` in parameter space).
std::optional<std::pair<double, double>> invert_bilinear(Vec2 p00, Vec2 p10, Vec2 p11, Vec2 p01,
                                                         Vec2 p, double eps = 1e-9);

/// Self-intersection test for a polyline (non-adjacent segments crossing).
bool polyline_self_intersects(std::span<const Vec2> pts, bool closed, double eps);

}  // namespace uniformize
