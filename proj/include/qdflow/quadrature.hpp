#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "qdflow/errors.hpp"
#include "qdflow/path.hpp"

namespace qdflow {

struct QuadratureNode {
    double x;
    double w;
};

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline std::vector<QuadratureNode> gauss_legendre_rule(int n) {
    std::vector<QuadratureNode> rule(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (double(i) + 0.75) / (double(n) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - double(j) * p2) / double(j + 1);
            }
            pp = double(n) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * x * p1 - double(j) * p2) / double(j + 1);
        }
        pp = double(n) * (x * p0 - p1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule[static_cast<std::size_t>(i)] = {-x, w};
        rule[static_cast<std::size_t>(n - 1 - i)] = {x, w};
    }
    return rule;
}

inline const std::vector<QuadratureNode>& gauss_legendre_cached(int n) {
    static std::map<int, std::vector<QuadratureNode>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre_rule(n)).first;
    return it->second;
}

// Gauss-Legendre integral of f along the polyline, nodes_per_segment points
// per straight segment, visited in path order (so branch-tracked integrands
// stay continuous). Throws NonFiniteSample on a NaN/Inf sample.
template <class F>
C integrate_path(F&& f, const Path& path, int nodes_per_segment = 16) {
    if (nodes_per_segment < 2) throw BadInput("nodes_per_segment must be at least 2");
    path.validate();
    const auto& rule = gauss_legendre_cached(nodes_per_segment);
    C total = 0.0;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        const C mid = 0.5 * (path.points[i] + path.points[i + 1]);
        const C half = 0.5 * (path.points[i + 1] - path.points[i]);
        C acc = 0.0;
        for (const auto& node : rule) {
            const C z = mid + node.x * half;
            const C v = f(z);
            if (!is_finite(v)) throw NonFiniteSample(z);
            acc += node.w * v;
        }
        total += acc * half;
    }
    return total;
}

} // namespace qdflow
