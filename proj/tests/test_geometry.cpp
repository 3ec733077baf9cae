#include "doctest.h"
#include "uniformize/geometry.hpp"

using namespace uniformize;

TEST_CASE("polygon area and winding") {
    std::vector<Vec2> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(polygon_signed_area(sq) == doctest::Approx(1.0));
    std::reverse(sq.begin(), sq.end());
    CHECK(polygon_signed_area(sq) == doctest::Approx(-1.0));

    std::vector<Vec2> tri = {{0, 0}, {2, 0}, {0, 2}};
    CHECK(winding_number(tri, {0.5, 0.5}) == 1);
    CHECK(winding_number(tri, {3, 3}) == 0);
    CHECK(point_in_polygon(tri, {0.5, 0.5}));
    CHECK_FALSE(point_in_polygon(tri, {1.5, 1.5}));
}

TEST_CASE("segment intersection") {
    auto hit = intersect_segments({0, 0}, {1, 1}, {0, 1}, {1, 0}, 1e-12);
    REQUIRE(hit.has_value());
    CHECK(hit->p.x == doctest::Approx(0.5));
    CHECK(hit->s == doctest::Approx(0.5));

    CHECK_FALSE(intersect_segments({0, 0}, {1, 0}, {0, 1}, {1, 1}, 1e-12).has_value());
    // endpoint touch
    auto touch = intersect_segments({0, 0}, {1, 0}, {1, 0}, {1, 1}, 1e-12);
    REQUIRE(touch.has_value());
    CHECK(touch->s == doctest::Approx(1.0));

    CHECK(segments_overlap({0, 0}, {2, 0}, {1, 0}, {3, 0}, 1e-12));
    CHECK_FALSE(segments_overlap({0, 0}, {1, 0}, {2, 0}, {3, 0}, 1e-12));
}

TEST_CASE("bilinear inversion") {
    Vec2 p00{0, 0}, p10{2, 0}, p11{2.5, 2}, p01{-0.5, 2};
    auto uv = invert_bilinear(p00, p10, p11, p01, {1, 1});
    REQUIRE(uv.has_value());
    auto [u, v] = *uv;
    // forward map must reproduce the point
    Vec2 q = p00 * ((1 - u) * (1 - v)) + p10 * (u * (1 - v)) + p11 * (u * v) + p01 * ((1 - u) * v);
    CHECK(q.x == doctest::Approx(1.0));
    CHECK(q.y == doctest::Approx(1.0));
    CHECK_FALSE(invert_bilinear(p00, p10, p11, p01, {5, 5}).has_value());
}

TEST_CASE("polyline self intersection") {
    std::vector<Vec2> simple = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK_FALSE(polyline_self_intersects(simple, true, 1e-12));
    std::vector<Vec2> bow = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK(polyline_self_intersects(bow, true, 1e-12));
}
