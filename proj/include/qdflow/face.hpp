#pragma once

#include <cmath>
#include <vector>

#include "qdflow/path.hpp"
#include "qdflow/trace.hpp"

namespace qdflow {

// Corner of a polygon bounded by trajectory arcs. `multiplicity` is the
// signed order of the singular point sitting at the corner (+1 for a simple
// zero, -4 for the origin pole).
struct FaceCorner {
    C location;
    int multiplicity;
};

// Cyclic boundary description: segments tip-to-tail with interior on the
// left; corner j sits between segments[j-1] and segments[j].
struct FaceInput {
    std::vector<Path> segments;
    std::vector<FaceCorner> corners;
};

struct FaceReport {
    std::vector<double> corner_angles;
    std::vector<int> corner_multiplicities;
    int interior_multiplicity_sum = 0;
    double sum_rule_residual = 0.0;
    bool valid = false;
};

// Checks the polygon sum rule
//   sum_j (1 - theta_j (n_j + 2) / 2pi) = 2 + sum_i n_i
// with corner angles measured from the adjacent polyline tangents and the
// interior multiplicities counted by winding number over the critical points
// of the differential.
inline FaceReport validate_face(const CriticalGraph& graph, const FaceInput& face) {
    const std::size_t m = face.segments.size();
    if (m == 0 || face.corners.size() != m)
        throw BadInput("face needs one corner per boundary segment");
    for (const auto& s : face.segments)
        if (s.points.size() < 2) throw BadInput("face segment needs at least two points");

    double diam = 0.0;
    for (const auto& s : face.segments)
        for (const C& p : s.points)
            diam = std::max(diam, std::abs(p - face.segments[0].points[0]));
    const double close_tol = std::max(1e-6, 1e-9 * diam);

    // Closure: each segment must start at its corner and end at the next one.
    for (std::size_t j = 0; j < m; ++j) {
        const auto& seg = face.segments[j];
        const auto& next = face.corners[(j + 1) % m];
        const double g0 = std::abs(seg.points.front() - face.corners[j].location);
        const double g1 = std::abs(seg.points.back() - next.location);
        if (g0 > close_tol) throw OpenBoundary(g0);
        if (g1 > close_tol) throw OpenBoundary(g1);
    }

    FaceReport report;
    for (std::size_t j = 0; j < m; ++j) {
        const auto& arriving = face.segments[(j + m - 1) % m];
        const auto& leaving = face.segments[j];
        const C a_in = unit(arriving.points.back() - arriving.points[arriving.points.size() - 2]);
        const C a_out = unit(leaving.points[1] - leaving.points.front());
        // Interior on the left: angle swept from the outgoing ray to the
        // reversed incoming ray, in (0, 2pi]. A cusp measuring ~0 means the
        // face wraps the corner, i.e. angle 2pi.
        double theta = wrap_angle(std::arg(-a_in / a_out));
        if (theta < 1e-6) theta = 2.0 * pi;
        report.corner_angles.push_back(theta);
        report.corner_multiplicities.push_back(face.corners[j].multiplicity);
    }

    // Winding test for strictly interior singular points.
    std::vector<C> loop;
    for (std::size_t j = 0; j < m; ++j) {
        loop.push_back(face.corners[j].location);
        for (const C& p : face.segments[j].points) loop.push_back(p);
    }
    loop.push_back(face.corners[0].location);

    int interior = 0;
    for (const auto& cp : graph.qd.critical_points()) {
        if (cp.at_infinity) continue;
        bool on_boundary = false;
        for (const auto& corner : face.corners)
            if (std::abs(corner.location - cp.location) <= close_tol) on_boundary = true;
        for (const auto& seg : face.segments)
            if (point_path_distance(cp.location, seg) <= close_tol) on_boundary = true;
        if (on_boundary) continue;
        if (std::abs(winding_number(loop, cp.location)) > 0.5)
            interior += cp.signed_multiplicity();
    }
    report.interior_multiplicity_sum = interior;

    double lhs = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        lhs += 1.0 - report.corner_angles[j] * double(report.corner_multiplicities[j] + 2) /
                         (2.0 * pi);
    report.sum_rule_residual = std::abs(lhs - 2.0 - double(interior));
    report.valid = report.sum_rule_residual < 0.05;
    return report;
}

} // namespace qdflow
