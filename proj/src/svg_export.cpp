#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "uniformize/result_document.hpp"

namespace uniformize {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

struct Frame {
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    void grow(Vec2 p) {
        minx = std::min(minx, p.x);
        miny = std::min(miny, p.y);
        maxx = std::max(maxx, p.x);
        maxy = std::max(maxy, p.y);
    }
    double w() const { return maxx - minx; }
    double h() const { return maxy - miny; }
};

void polyline(std::ostringstream& os, const std::vector<Vec2>& pts, const char* style,
              double ox, double oy, double s, double view_h) {
    os << "<polyline fill=\"none\" " << style << " points=\"";
    for (const Vec2& p : pts) {
        os << fmt(ox + s * p.x) << "," << fmt(view_h - (oy + s * p.y)) << " ";
    }
    os << "\"/>\n";
}

void draw_annulus(std::ostringstream& os, const AnnulusResult& ar, double pane_w, double pane_h,
                  double x_off) {
    Frame f;
    for (VertexId v = 0; v < ar.q.cx.net.vertex_count(); ++v) f.grow(ar.q.cx.net.position(v));
    double s = 0.9 * std::min(pane_w / (f.w() + 1e-12), pane_h / (f.h() + 1e-12));
    double ox = x_off + 0.5 * pane_w - s * 0.5 * (f.minx + f.maxx);
    double oy = 0.5 * pane_h - s * 0.5 * (f.miny + f.maxy);

    for (const auto& lc : ar.net.g_levels) {
        polyline(os, lc.polyline(), "stroke=\"#b03030\" stroke-width=\"1\"", ox, oy, s, pane_h);
    }
    for (const auto& lc : ar.net.h_levels) {
        polyline(os, lc.polyline(), "stroke=\"#3050b0\" stroke-width=\"1\"", ox, oy, s, pane_h);
    }

    // target pane: concentric circles and radial lines
    double r_out = ar.target.circle_radii.back();
    double ts = 0.45 * std::min(pane_w, pane_h) / r_out;
    double cx = x_off + pane_w + 0.5 * pane_w;
    double cy = 0.5 * pane_h;
    for (double r : ar.target.circle_radii) {
        os << "<circle fill=\"none\" stroke=\"#b03030\" stroke-width=\"1\" cx=\"" << fmt(cx)
           << "\" cy=\"" << fmt(pane_h - cy) << "\" r=\"" << fmt(ts * r) << "\"/>\n";
    }
    for (double phi : ar.target.angles) {
        double r0 = ar.target.circle_radii.front();
        Vec2 a{cx + ts * r0 * std::cos(phi), cy + ts * r0 * std::sin(phi)};
        Vec2 b{cx + ts * r_out * std::cos(phi), cy + ts * r_out * std::sin(phi)};
        os << "<line stroke=\"#3050b0\" stroke-width=\"1\" x1=\"" << fmt(a.x) << "\" y1=\""
           << fmt(pane_h - a.y) << "\" x2=\"" << fmt(b.x) << "\" y2=\"" << fmt(pane_h - b.y)
           << "\"/>\n";
    }
}

}  // namespace

std::string result_to_svg(const PipelineResult& result) {
    const double pane_w = 480, pane_h = 480;
    std::ostringstream os;

    std::vector<const AnnulusResult*> panes;
    if (result.annulus) {
        panes.push_back(&*result.annulus);
    } else if (result.ladder) {
        for (const auto& node : result.ladder->nodes) panes.push_back(&node.annulus);
    }
    double total_w = 2 * pane_w * static_cast<double>(std::max<size_t>(panes.size(), 1));
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    os << "<svg width=\"" << fmt(total_w) << "\" height=\"" << fmt(pane_h)
       << "\" version=\"1.1\" xmlns=\"http://www.w3.org/2000/svg\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    double x = 0;
    for (const AnnulusResult* ar : panes) {
        draw_annulus(os, *ar, pane_w, pane_h, x);
        x += 2 * pane_w;
    }
    os << "</svg>\n";
    return os.str();
}

void write_result_svg(const PipelineResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << result_to_svg(result);
}

}  // namespace uniformize
