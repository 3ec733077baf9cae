#include "uniformize/geometry.hpp"

#include <algorithm>

namespace uniformize {

double polygon_signed_area(std::span<const Vec2> poly) {
    double a = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

int winding_number(std::span<const Vec2> poly, Vec2 p) {
    // Crossing-count form: robust enough for points away from the carrier.
    int wn = 0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = poly[i];
        Vec2 b = poly[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && orient(a, b, p) > 0) ++wn;
        } else {
            if (b.y <= p.y && orient(a, b, p) < 0) --wn;
        }
    }
    return wn;
}

bool point_in_polygon(std::span<const Vec2> poly, Vec2 p) {
    return winding_number(poly, p) != 0;
}

Vec2 interior_point(std::span<const Vec2> poly) {
    // Centroid works for the convex-ish fixtures; fall back to probing
    // inward from an edge midpoint when it lands outside.
    Vec2 c{0, 0};
    for (const Vec2& v : poly) c = c + v;
    c = c * (1.0 / static_cast<double>(poly.size()));
    if (point_in_polygon(poly, c)) return c;

    const size_t n = poly.size();
    double orientation = polygon_signed_area(poly) > 0 ? 1.0 : -1.0;
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = poly[i], b = poly[(i + 1) % n];
        Vec2 mid = lerp(a, b, 0.5);
        Vec2 d = b - a;
        Vec2 inward{-d.y * orientation, d.x * orientation};
        double len = norm(inward);
        if (len == 0) continue;
        inward = inward * (1.0 / len);
        double step = norm(d) * 0.25;
        for (int k = 0; k < 16; ++k) {
            Vec2 q = mid + inward * step;
            if (point_in_polygon(poly, q)) return q;
            step *= 0.5;
        }
    }
    throw Error("interior_point: could not find a point inside polygon");
}

std::optional<SegmentHit> intersect_segments(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double eps) {
    Vec2 r = a1 - a0;
    Vec2 s = b1 - b0;
    double denom = cross(r, s);
    double lr = norm(r), ls = norm(s);
    if (lr == 0 || ls == 0) return std::nullopt;

    if (std::abs(denom) <= eps * lr * ls) {
        // Parallel. Positive-length overlap is reported by segments_overlap.
        return std::nullopt;
    }
    Vec2 d = b0 - a0;
    double sp = cross(d, s) / denom;
    double tp = cross(d, r) / denom;
    double es = eps;  // parameter tolerance for endpoint touches
    if (sp < -es || sp > 1 + es || tp < -es || tp > 1 + es) return std::nullopt;
    sp = std::clamp(sp, 0.0, 1.0);
    tp = std::clamp(tp, 0.0, 1.0);
    return SegmentHit{lerp(a0, a1, sp), sp, tp};
}

bool segments_overlap(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double eps) {
    Vec2 r = a1 - a0;
    Vec2 s = b1 - b0;
    double lr = norm(r), ls = norm(s);
    if (lr == 0 || ls == 0) return false;
    if (std::abs(cross(r, s)) > eps * lr * ls) return false;
    if (std::abs(cross(b0 - a0, r)) > eps * lr * lr) return false;
    // Collinear: project onto r and compare intervals.
    double t0 = dot(b0 - a0, r) / (lr * lr);
    double t1 = dot(b1 - a0, r) / (lr * lr);
    if (t0 > t1) std::swap(t0, t1);
    double lo = std::max(t0, 0.0), hi = std::min(t1, 1.0);
    return hi - lo > eps;
}

std::optional<std::pair<double, double>> invert_bilinear(Vec2 p00, Vec2 p10, Vec2 p11, Vec2 p01,
                                                         Vec2 p, double eps) {
    // p(u,v) = (1-u)(1-v) p00 + u(1-v) p10 + u v p11 + (1-u) v p01
    // Reduce to a quadratic in u via the cross-product elimination of v.
    Vec2 e = p10 - p00;
    Vec2 f = p01 - p00;
    Vec2 g = (p00 - p10) + (p11 - p01);
    Vec2 h = p - p00;

    double k2 = cross(g, f);
    double k1 = cross(e, f) + cross(h, g);
    double k0 = cross(h, e);

    auto v_from_u = [&](double u) -> std::optional<double> {
        Vec2 denom = f + g * u;
        double dd = dot(denom, denom);
        if (dd < 1e-30) return std::nullopt;
        Vec2 num = h - e * u;
        return dot(num, denom) / dd;
    };

    auto accept = [&](double u) -> std::optional<std::pair<double, double>> {
        if (u < -eps || u > 1 + eps) return std::nullopt;
        auto v = v_from_u(u);
        if (!v || *v < -eps || *v > 1 + eps) return std::nullopt;
        return std::make_pair(std::clamp(u, 0.0, 1.0), std::clamp(*v, 0.0, 1.0));
    };

    if (std::abs(k2) < 1e-14 * (std::abs(k1) + std::abs(k0) + 1e-300)) {
        if (std::abs(k1) < 1e-30) return std::nullopt;
        return accept(-k0 / k1);
    }
    double disc = k1 * k1 - 4 * k2 * k0;
    if (disc < 0) {
        if (disc < -eps) return std::nullopt;
        disc = 0;
    }
    double sq = std::sqrt(disc);
    double q = -0.5 * (k1 + (k1 >= 0 ? sq : -sq));
    double roots[2] = {q / k2, std::abs(q) > 1e-300 ? k0 / q : q / k2};
    for (double u : roots) {
        if (auto uv = accept(u)) return uv;
    }
    return std::nullopt;
}

bool polyline_self_intersects(std::span<const Vec2> pts, bool closed, double eps) {
    const size_t n = pts.size();
    if (n < 3) return false;
    const size_t nseg = closed ? n : n - 1;
    auto seg = [&](size_t i) { return std::pair<Vec2, Vec2>{pts[i], pts[(i + 1) % n]}; };
    for (size_t i = 0; i < nseg; ++i) {
        for (size_t j = i + 2; j < nseg; ++j) {
            if (closed && i == 0 && j == nseg - 1) continue;  // shared endpoint
            auto [a0, a1] = seg(i);
            auto [b0, b1] = seg(j);
            if (segments_overlap(a0, a1, b0, b1, eps)) return true;
            auto hit = intersect_segments(a0, a1, b0, b1, eps);
            if (hit) return true;
        }
    }
    return false;
}

}  // namespace uniformize
