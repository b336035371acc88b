#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qdflow/branch.hpp"
#include "qdflow/quaddiff.hpp"
#include "qdflow/trace.hpp"

namespace qdflow {

// z^2 C^2(z) - (p z + q) C(z) + r = 0 with nonvanishing coefficients.
class AlgebraicEquation {
public:
    AlgebraicEquation(C p, C q, C r) : p_(p), q_(q), r_(r) {
        if (p == C(0.0)) throw DegenerateParameters("p = 0");
        if (q == C(0.0)) throw DegenerateParameters("q = 0");
        if (r == C(0.0)) throw DegenerateParameters("r = 0");
    }

    C p() const { return p_; }
    C q() const { return q_; }
    C r() const { return r_; }

    // D(z) = (p^2 - 4r) z^2 + 2pq z + q^2, the discriminant in C.
    C discriminant_at(C z) const { return (p_ * p_ - 4.0 * r_) * z * z + 2.0 * p_ * q_ * z + q_ * q_; }

private:
    C p_, q_, r_;
};

struct Discriminant {
    C c2, c1, c0; // D(z) = c2 z^2 + c1 z + c0
    C z1, z2;     // roots; z1 takes the minus branch of the quadratic formula
};

inline Discriminant discriminant(const AlgebraicEquation& eq) {
    Discriminant d;
    d.c2 = eq.p() * eq.p() - 4.0 * eq.r();
    d.c1 = 2.0 * eq.p() * eq.q();
    d.c0 = eq.q() * eq.q();
    const double scale = std::max({std::abs(d.c2), std::abs(d.c1), std::abs(d.c0)});
    if (std::abs(d.c2) < 1e-14 * scale)
        throw DegenerateDiscriminant("p^2 - 4r = 0, discriminant degenerates to a linear factor");
    const C root = std::sqrt(d.c1 * d.c1 - 4.0 * d.c2 * d.c0);
    d.z1 = (-d.c1 - root) / (2.0 * d.c2);
    d.z2 = (-d.c1 + root) / (2.0 * d.c2);
    return d;
}

struct MassPair {
    C m_plus, m_minus; // (p +- sqrt(p^2 - 4r)) / 2
    bool real_mass_exists;
};

inline MassPair masses(const AlgebraicEquation& eq) {
    const C root = std::sqrt(eq.p() * eq.p() - 4.0 * eq.r());
    MassPair m{(eq.p() + root) / 2.0, (eq.p() - root) / 2.0, false};
    const auto real_enough = [](C v) {
        return std::abs(v.imag()) <= 1e-9 * std::max(1.0, std::abs(v));
    };
    m.real_mass_exists = real_enough(m.m_plus) || real_enough(m.m_minus);
    return m;
}

// Both roots of the quadratic in C at the point z.
inline std::pair<C, C> solve_pointwise(const AlgebraicEquation& eq, C z) {
    if (z == C(0.0)) throw OriginEvaluation();
    const C root = std::sqrt(eq.discriminant_at(z));
    const C num = eq.p() * z + eq.q();
    const C two_z2 = 2.0 * z * z;
    return {(num + root) / two_z2, (num - root) / two_z2};
}

// The associated differential -D(z)/z^4 dz^2 as a QuadDiff: lambda^2 = -(p^2-4r),
// lambda = i * principal sqrt (trajectories only see lambda^2), zeros = roots of D.
inline QuadDiff to_quaddiff(const AlgebraicEquation& eq) {
    const Discriminant d = discriminant(eq);
    if (std::abs(d.z1 - d.z2) < 1e-14 * std::max(std::abs(d.z1), std::abs(d.z2)))
        throw DegenerateDiscriminant("double root");
    if (d.z1 == C(0.0) || d.z2 == C(0.0)) throw DegenerateDiscriminant("root at the origin");
    const C lambda = C(0.0, 1.0) * std::sqrt(d.c2);
    QuadDiff qd(lambda, d.z1, d.z2);
    // Factorisation check at a few points.
    for (const C z : {C(1.0, 1.0), C(-0.7, 0.3), C(0.2, -2.0)}) {
        const C lhs = -eq.discriminant_at(z);
        const C rhs = lambda * lambda * (z - d.z1) * (z - d.z2);
        if (std::abs(lhs - rhs) > 1e-8 * (std::abs(lhs) + std::abs(rhs) + 1e-300))
            throw NumericalFailure("discriminant factorisation check failed");
    }
    return qd;
}

struct DensityResult {
    std::vector<double> weights; // per polyline segment, all >= 0
    double total_mass = 0.0;
};

// Arc-length density (1/2pi) |sqrt(D(z))| / |z|^2 integrated along a short
// trajectory of the associated differential, midpoint rule per segment (the
// sqrt vanishes at the endpoints, so midpoints avoid both zeros).
inline DensityResult density_along(const AlgebraicEquation& eq, const TrajectoryPath& traj) {
    const Discriminant d = discriminant(eq);
    const auto& pts = traj.path.points;
    if (pts.size() < 2) throw BadInput("trajectory too short");
    const double scale = std::abs(d.z1 - d.z2);
    const auto near = [&](C p, C root) { return std::abs(p - root) < 1e-3 * scale; };
    const bool forward = near(pts.front(), d.z1) && near(pts.back(), d.z2);
    const bool backward = near(pts.front(), d.z2) && near(pts.back(), d.z1);
    if (!forward && !backward) throw NotShortTrajectory();

    DensityResult out;
    out.weights.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const C mid = 0.5 * (pts[i] + pts[i + 1]);
        const double dz = std::abs(pts[i + 1] - pts[i]);
        const double w =
            std::sqrt(std::abs(eq.discriminant_at(mid))) / std::norm(mid) * dz / (2.0 * pi);
        out.weights.push_back(w);
        out.total_mass += w;
    }
    return out;
}

// Branch of sqrt(D) continued from the normalisation sqrt(D) ~ sqrt(p^2-4r) z
// at infinity down to the point `at`, along a ray that stays clear of the
// support curve. Advisory check for the homotopy class of the support.
inline C continued_sqrt_discriminant(const AlgebraicEquation& eq, const TrajectoryPath& support,
                                     C at) {
    const Discriminant d = discriminant(eq);
    const double scale = std::max({std::abs(d.z1), std::abs(d.z2), 1.0});
    const double far = 1e4 * scale;
    // Pick a ray direction through `at` whose far segment misses the support.
    C dir = unit(at == C(0.0) ? C(-1.0, 0.3) : at);
    for (int k = 0; k < 64; ++k) {
        const C cand = dir * std::polar(1.0, 2.0 * pi * double(k) / 64.0);
        Path ray{{at + cand * (0.05 * scale), at + cand * far}, false};
        bool clear = true;
        for (const C& p : support.path.points)
            if (point_path_distance(p, ray) < 0.05 * scale) clear = false;
        if (clear) {
            dir = cand;
            break;
        }
    }
    const C z_far = at + dir * far;
    C w_far = std::sqrt(eq.discriminant_at(z_far));
    const C target = std::sqrt(d.c2) * z_far;
    if (std::abs(w_far - target) > std::abs(w_far + target)) w_far = -w_far;
    auto f = [&](C z) { return eq.discriminant_at(z); };
    return continue_sqrt_segment(f, z_far, w_far, at);
}

} // namespace qdflow
