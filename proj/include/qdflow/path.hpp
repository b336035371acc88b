#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "qdflow/complex_util.hpp"
#include "qdflow/errors.hpp"

namespace qdflow {

// Oriented polyline. A closed path repeats its first point as the last one.
struct Path {
    std::vector<C> points;
    bool closed = false;

    std::size_t segment_count() const {
        return points.size() < 2 ? 0 : points.size() - 1;
    }

    double length() const {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            s += std::abs(points[i + 1] - points[i]);
        return s;
    }

    void validate() const {
        if (points.size() < 2)
            throw BadInput("path needs at least two points");
        for (const C& p : points)
            if (!is_finite(p))
                throw BadInput("path contains a non-finite point");
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            if (points[i] == points[i + 1])
                throw BadInput("path has coincident consecutive points");
        if (closed && std::abs(points.front() - points.back()) > 1e-12)
            throw BadInput("closed path does not return to its start");
    }

    Path reversed() const {
        Path r{*this};
        std::reverse(r.points.begin(), r.points.end());
        return r;
    }
};

inline double point_segment_distance(C p, C s0, C s1) {
    const C d = s1 - s0;
    const double l2 = std::norm(d);
    if (l2 == 0.0) return std::abs(p - s0);
    double t = ((p - s0) * std::conj(d)).real() / l2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (s0 + t * d));
}

inline double point_path_distance(C p, const Path& path) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
        best = std::min(best, point_segment_distance(p, path.points[i], path.points[i + 1]));
    return best;
}

// One-sided Hausdorff from the vertices of a to the polyline b, maximised
// with the opposite direction.
inline double hausdorff_distance(const Path& a, const Path& b) {
    double h = 0.0;
    for (const C& p : a.points) h = std::max(h, point_path_distance(p, b));
    for (const C& p : b.points) h = std::max(h, point_path_distance(p, a));
    return h;
}

// Winding number of a closed polyline around p, by summing turn angles.
inline double winding_number(const std::vector<C>& loop, C p) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
        const C u = loop[i] - p;
        const C v = loop[i + 1] - p;
        total += std::arg(v / u);
    }
    return total / (2.0 * pi);
}

inline double max_pairwise_distance(const std::vector<C>& pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, std::abs(pts[i] - pts[j]));
    return best;
}

inline Path make_circle_path(C center, double radius, int segments, bool counterclockwise = true) {
    Path p;
    p.closed = true;
    p.points.reserve(static_cast<std::size_t>(segments) + 1);
    for (int k = 0; k <= segments; ++k) {
        double t = 2.0 * pi * double(k) / double(segments);
        if (!counterclockwise) t = -t;
        p.points.push_back(center + std::polar(radius, t));
    }
    p.points.back() = p.points.front();
    return p;
}

// Boundary of a tubular neighbourhood of the segment [a, b]: two half-circle
// caps joined by straight sides, the sides subdivided to pieces no longer
// than half the clearance (per-segment quadrature stays sharp only while the
// segment length is small against the distance to the branch points).
// Counterclockwise.
inline Path make_stadium_path(C a, C b, double clearance, int arc_segments = 24) {
    const C e = unit(b - a);
    const double base = std::arg(e);
    Path p;
    p.closed = true;
    auto push = [&](C q) {
        if (p.points.empty() || std::abs(p.points.back() - q) > 0.0) p.points.push_back(q);
    };
    auto arc = [&](C center, double from, double to) {
        for (int k = 0; k <= arc_segments; ++k)
            push(center + std::polar(clearance, from + (to - from) * double(k) / double(arc_segments)));
    };
    const int side_pieces =
        std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / (0.5 * clearance))));
    auto side = [&](C from, C to) {
        for (int k = 1; k <= side_pieces; ++k)
            push(from + (to - from) * double(k) / double(side_pieces));
    };
    const C n = C(0.0, 1.0) * e;
    arc(b, base - pi / 2.0, base + pi / 2.0); // b - cn to b + cn
    side(b + clearance * n, a + clearance * n);
    arc(a, base + pi / 2.0, base + 3.0 * pi / 2.0); // a + cn to a - cn
    side(a - clearance * n, b - clearance * n);
    p.points.back() = p.points.front();
    return p;
}

} // namespace qdflow
