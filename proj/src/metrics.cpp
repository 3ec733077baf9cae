#include "uniformize/metrics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace uniformize {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double h_at_point(const ScalarField& h, const CurvePoint& cp) {
    if (cp.kind == CurvePoint::Kind::Vertex) return h[cp.vertex];
    return h[cp.ea] + (h[cp.eb] - h[cp.ea]) * cp.t;
}

double g_at_point(const ScalarField& g, const CurvePoint& cp) {
    if (cp.kind == CurvePoint::Kind::Vertex) return g[cp.vertex];
    return g[cp.ea] + (g[cp.eb] - g[cp.ea]) * cp.t;
}
}  // namespace

double edge_weight(const PairFluxWeight& w, VertexId from, VertexId to) {
    double theta = two_pi / w.period;
    double dh = (*w.h)[to] - (*w.h)[from];
    return theta * std::exp(theta * (*w.g)[from]) * std::abs(dh);
}

double g_level_length(const PairFluxWeight& w, const LevelCurve& curve, double tol_rel) {
    double theta = two_pi / w.period;
    double m = curve.value;
    double sum_dh = 0.0;
    const auto& pts = curve.points;
    size_t steps = curve.closed ? pts.size() : pts.size() - 1;
    for (size_t i = 0; i < steps; ++i) {
        double h0 = h_at_point(*w.h, pts[i]);
        double h1 = h_at_point(*w.h, pts[(i + 1) % pts.size()]);
        sum_dh += std::abs(h1 - h0);
    }
    double length = theta * std::exp(theta * m) * sum_dh;
    double closed_form = two_pi * std::exp(theta * m);
    if (std::abs(length - closed_form) > tol_rel * closed_form) {
        std::ostringstream os;
        os << "pair-flux length of level " << m << " is " << length << ", expected " << closed_form;
        throw Error(os.str());
    }
    return length;
}

double h_level_length(const ScalarField& g, const LevelCurve& curve) {
    double g0 = g_at_point(g, curve.points.front());
    double g1 = g_at_point(g, curve.points.back());
    if (g0 < g1) std::swap(g0, g1);  // g0: E1 end, g1: E2 end
    return std::exp(g0) - std::exp(g1);
}

double cell_measure_nu(const RectNet::Cell& cell, double period) {
    double theta = two_pi / period;
    double rt = std::exp(theta * cell.g_top);
    double rb = std::exp(theta * cell.g_base);
    return 0.5 * (rt * rt - rb * rb) * (two_pi * cell.dh / period);
}

double cell_measure_lambda(const RectNet::Cell& cell, double period) {
    double theta = two_pi / period;
    double rt = std::exp(theta * cell.g_top);
    double rb = std::exp(theta * cell.g_base);
    return (two_pi * cell.dh / period) * std::log(rt / rb);
}

double total_measure_nu(double k, double period) {
    double e = std::exp(two_pi * k / period);
    return std::numbers::pi * (e * e - 1.0);
}

}  // namespace uniformize
