#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdflow/path.hpp"

namespace qdflow {

enum class CurveStyle { short_trajectory, critical, orthogonal };

inline const char* css_class(CurveStyle s) {
    switch (s) {
        case CurveStyle::short_trajectory: return "short";
        case CurveStyle::critical: return "critical";
        default: return "orthogonal";
    }
}

enum class MarkerKind { zero, pole, overlay_zero };

struct Viewport {
    C center{};
    double half_width = 1.0;
};

struct Scene {
    std::vector<std::pair<Path, CurveStyle>> curves;
    std::vector<std::pair<C, MarkerKind>> markers;
    std::optional<Viewport> viewport; // auto-fit when absent
};

namespace detail {

inline std::string fmt6(double v) {
    char buf[64];
    // -0.000000 and 0.000000 must not depend on the sign of a vanishing value
    if (v == 0.0) v = 0.0;
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// Markers always fit; curve outliers (points racing to the poles) may spill,
// so the box covers the 99% of curve points nearest the marker centroid,
// then grows by a 10% margin.
inline Viewport auto_viewport(const Scene& scene) {
    std::vector<C> anchor;
    for (const auto& m : scene.markers) anchor.push_back(m.first);
    C centroid = 0.0;
    if (!anchor.empty()) {
        for (const C& p : anchor) centroid += p;
        centroid /= double(anchor.size());
    }
    std::vector<C> curve_points;
    for (const auto& c : scene.curves)
        curve_points.insert(curve_points.end(), c.first.points.begin(), c.first.points.end());
    std::sort(curve_points.begin(), curve_points.end(), [&](C u, C v) {
        return std::abs(u - centroid) < std::abs(v - centroid);
    });
    const std::size_t keep =
        curve_points.size() - curve_points.size() / 100; // floor(1%) dropped
    std::vector<C> box = anchor;
    box.insert(box.end(), curve_points.begin(), curve_points.begin() + keep);
    if (box.empty()) return {C(0.0), 1.0};

    double xmin = box[0].real(), xmax = xmin, ymin = box[0].imag(), ymax = ymin;
    for (const C& p : box) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    const C center(0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
    double half = 0.5 * std::max(xmax - xmin, ymax - ymin);
    if (!(half > 0.0)) half = 1.0;
    return {center, half * 1.1};
}

} // namespace detail

// Deterministic SVG 1.1: one <path> per curve (possibly several subpaths
// after viewport clipping), circles for zeros, a cross for the order-4 pole,
// dots for overlaid polynomial zeros. Byte-identical for identical scenes.
inline std::string render_svg(const Scene& scene) {
    if (scene.curves.empty() && scene.markers.empty()) throw EmptyScene();
    const Viewport vp = scene.viewport ? *scene.viewport : detail::auto_viewport(scene);
    const double size = 800.0;
    const double sc = size / (2.0 * vp.half_width);
    auto px = [&](C z) -> std::pair<double, double> {
        return {(z.real() - vp.center.real()) * sc + size / 2.0,
                size / 2.0 - (z.imag() - vp.center.imag()) * sc};
    };
    auto inside = [&](C z) {
        return std::abs(z.real() - vp.center.real()) <= vp.half_width &&
               std::abs(z.imag() - vp.center.imag()) <= vp.half_width;
    };
    // Clip a segment to the viewport square (Liang-Barsky).
    auto clip_segment = [&](C p, C q, C& cp, C& cq) -> bool {
        double t0 = 0.0, t1 = 1.0;
        const double dx = q.real() - p.real(), dy = q.imag() - p.imag();
        const double xmin = vp.center.real() - vp.half_width, xmax = vp.center.real() + vp.half_width;
        const double ymin = vp.center.imag() - vp.half_width, ymax = vp.center.imag() + vp.half_width;
        const double pk[4] = {-dx, dx, -dy, dy};
        const double qk[4] = {p.real() - xmin, xmax - p.real(), p.imag() - ymin, ymax - p.imag()};
        for (int k = 0; k < 4; ++k) {
            if (pk[k] == 0.0) {
                if (qk[k] < 0.0) return false;
            } else {
                const double t = qk[k] / pk[k];
                if (pk[k] < 0.0) t0 = std::max(t0, t);
                else t1 = std::min(t1, t);
            }
        }
        if (t0 > t1) return false;
        cp = p + t0 * C(dx, dy);
        cq = p + t1 * C(dx, dy);
        return true;
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
           "height=\"800\" viewBox=\"0 0 800 800\">\n";
    svg += "<style>\n"
           ".short { fill: none; stroke: #c0392b; stroke-width: 2.4; }\n"
           ".critical { fill: none; stroke: #2c3e50; stroke-width: 1.2; }\n"
           ".orthogonal { fill: none; stroke: #7f8c8d; stroke-width: 1.0; "
           "stroke-dasharray: 6 4; }\n"
           ".zero { fill: #2980b9; }\n"
           ".pole { stroke: #000000; stroke-width: 1.6; }\n"
           ".overlay-zero { fill: #e67e22; }\n"
           "</style>\n";

    for (const auto& [path, style] : scene.curves) {
        std::string d;
        bool pen_down = false;
        for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
            C cp, cq;
            if (!clip_segment(path.points[i], path.points[i + 1], cp, cq)) {
                pen_down = false;
                continue;
            }
            const auto [x0, y0] = px(cp);
            const auto [x1, y1] = px(cq);
            const bool fresh = !pen_down || cp != path.points[i];
            if (fresh)
                d += "M " + detail::fmt6(x0) + " " + detail::fmt6(y0) + " ";
            d += "L " + detail::fmt6(x1) + " " + detail::fmt6(y1) + " ";
            pen_down = cq == path.points[i + 1];
        }
        if (!d.empty() && d.back() == ' ') d.pop_back();
        svg += "<path class=\"";
        svg += css_class(style);
        svg += "\" d=\"" + d + "\"/>\n";
    }

    for (const auto& [z, kind] : scene.markers) {
        if (!inside(z)) continue;
        const auto [x, y] = px(z);
        if (kind == MarkerKind::zero) {
            svg += "<circle class=\"zero\" cx=\"" + detail::fmt6(x) + "\" cy=\"" +
                   detail::fmt6(y) + "\" r=\"5.000000\"/>\n";
        } else if (kind == MarkerKind::overlay_zero) {
            svg += "<circle class=\"overlay-zero\" cx=\"" + detail::fmt6(x) + "\" cy=\"" +
                   detail::fmt6(y) + "\" r=\"2.500000\"/>\n";
        } else {
            const double r = 6.0;
            svg += "<path class=\"pole\" d=\"M " + detail::fmt6(x - r) + " " +
                   detail::fmt6(y - r) + " L " + detail::fmt6(x + r) + " " + detail::fmt6(y + r) +
                   " M " + detail::fmt6(x - r) + " " + detail::fmt6(y + r) + " L " +
                   detail::fmt6(x + r) + " " + detail::fmt6(y - r) + "\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace qdflow
