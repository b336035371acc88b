#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qdflow/branch.hpp"
#include "qdflow/ode.hpp"
#include "qdflow/parallel.hpp"
#include "qdflow/path.hpp"
#include "qdflow/quaddiff.hpp"
#include "qdflow/quadrature.hpp"

namespace qdflow {

enum class TrajKind { horizontal, vertical };

inline const char* to_string(TrajKind k) {
    return k == TrajKind::horizontal ? "horizontal" : "vertical";
}

struct Launch {
    C origin;     // zero (or regular start point)
    double angle; // requested exit direction
    bool from_zero;
};

struct Endpoint {
    enum class Kind { hits_zero, to_origin, to_infinity, closed, truncated };
    Kind kind;
    C zero{};                // hits_zero: which zero was reached
    double distance = 0.0;   // hits_zero: final distance to it
    double origin_angle = 0.0; // to_origin: asymptotic direction arg(z)
    InfinityForm form = InfinityForm::radial; // to_infinity
    std::string note;        // truncated: diagnostic
};

inline const char* to_string(Endpoint::Kind k) {
    switch (k) {
        case Endpoint::Kind::hits_zero: return "hits_zero";
        case Endpoint::Kind::to_origin: return "to_origin";
        case Endpoint::Kind::to_infinity: return "to_infinity";
        case Endpoint::Kind::closed: return "closed";
        default: return "truncated";
    }
}

struct TrajectoryPath {
    Path path;
    TrajKind kind = TrajKind::horizontal;
    Launch launch{};
    Endpoint endpoint{};
    double arc_length = 0.0;
    bool short_member = false; // half of a registered short trajectory
};

struct TraceOptions {
    double path_tol = 1e-9;      // per-step ODE error tolerance
    double zero_capture = 1e-8;  // stop radius around a zero
    double closed_radius = 1e-8; // re-approach radius that closes a loop
    double origin_radius = 1e-6; // |z| threshold for to_origin
    int origin_descent = 50;     // consecutive shrinking-|z| steps required
    double rmax_factor = 1e6;    // R_max = rmax_factor * max(|a|,|b|,1)
    double budget = 0.0;         // arc-length budget; 0 = 20 * R_max
    double max_step_rel = 0.25;  // step cap relative to distance to singular points
    double launch_offset_rel = 1e-6; // offset from a zero, times max(1,|a-b|)
    // A differential with two poles has no recurrent trajectories, so a path
    // that keeps swinging past the zeros is drift circling a separatrix loop;
    // stop it after this many flybys (and cap the raw step count as backstop).
    int max_flybys = 8;
    long max_steps = 400000;

    double r_max(const QuadDiff& qd) const { return rmax_factor * qd.geometry_scale(); }
    double effective_budget(const QuadDiff& qd) const {
        return budget > 0.0 ? budget : 20.0 * r_max(qd);
    }
};

// Unit direction field dz/ds = conj(w)/|w| (times i for the orthogonal
// foliation), w the branch-tracked sqrt(phi). Integrates with the embedded
// pair, step-halving on branch ambiguity, and classifies the endpoint.
inline TrajectoryPath trace(const QuadDiff& qd, C start, double direction, TrajKind kind,
                            const TraceOptions& opt = {}) {
    const C a = qd.a(), b = qd.b();
    if (std::abs(start) < 1e-12 * qd.geometry_scale()) throw LaunchFromPole();
    if (!(opt.effective_budget(qd) > 0.0)) throw BadInput("arc budget must be positive");

    TrajectoryPath out;
    out.kind = kind;

    const double ab = std::abs(a - b);
    const double offset = opt.launch_offset_rel * std::max(1.0, ab);
    std::optional<C> launch_zero;
    if (std::abs(start - a) < 1e-9 * qd.geometry_scale()) launch_zero = a;
    else if (std::abs(start - b) < 1e-9 * qd.geometry_scale()) launch_zero = b;

    C z = start;
    if (launch_zero) z = *launch_zero + std::polar(offset, direction);
    out.launch = {launch_zero ? *launch_zero : start, direction, launch_zero.has_value()};

    BranchTracker tracker;
    {
        C w0 = std::sqrt(qd.phi(z));
        const double target =
            kind == TrajKind::horizontal ? -direction : pi / 2.0 - direction;
        if (std::cos(std::arg(w0) - target) < 0.0) w0 = -w0;
        tracker.seed(w0);
    }
    auto field = [&](C p) -> C {
        const auto step = tracker.advance(qd.phi(p));
        const double m = std::abs(step.value);
        if (step.ambiguous || !(m > 0.0)) throw BranchJump{};
        C u = std::conj(step.value) / m;
        if (kind == TrajKind::vertical) u *= C(0.0, 1.0);
        return u;
    };

    const double r_max = opt.r_max(qd);
    const double budget = opt.effective_budget(qd);
    const C start_point = z;

    out.path.points.push_back(z);
    double arc = 0.0;
    double h = 0.0;
    int descent = 0;
    double prev_abs = std::abs(z);
    const double flyby_radius = 0.02 * ab;
    int flybys = 0;
    bool inside_a = false, inside_b = false;
    long steps = 0;

    auto cap = [&](C p) {
        const double d = std::min({std::abs(p), std::abs(p - a), std::abs(p - b)});
        return opt.max_step_rel * std::max(d, 1e-12);
    };
    h = 0.01 * cap(z);

    auto finish = [&](Endpoint e) {
        out.endpoint = std::move(e);
        out.arc_length = arc;
        return out;
    };

    for (;;) {
        h = std::min(std::max(h, 1e-13), cap(z));
        const C z_prev = z;
        BranchTracker saved = tracker;
        StepResult step;
        try {
            step = ode_step_adaptive(field, z, h, opt.path_tol, [&] { tracker = saved; });
        } catch (const StepUnderflow&) {
            tracker = saved;
            return finish({Endpoint::Kind::truncated, {}, 0.0, 0.0, InfinityForm::radial,
                           "step underflow at |z-a|=" + std::to_string(std::abs(z - a)) +
                               ", |z-b|=" + std::to_string(std::abs(z - b))});
        }
        z = step.z_next;
        arc += step.h_used;
        h = step.h_next;
        ++steps;
        out.path.points.push_back(z);

        const double d_a = std::abs(z - a);
        const double d_b = std::abs(z - b);
        const bool clear_of_launch = !launch_zero || arc >= 10.0 * offset;
        const bool allow_a = clear_of_launch || *launch_zero != a;
        const bool allow_b = clear_of_launch || *launch_zero != b;
        if (d_a < opt.zero_capture && allow_a)
            return finish({Endpoint::Kind::hits_zero, a, d_a});
        if (d_b < opt.zero_capture && allow_b)
            return finish({Endpoint::Kind::hits_zero, b, d_b});

        // Flyby bookkeeping: entering and leaving a small disk around a zero.
        if (allow_a) {
            if (!inside_a && d_a < flyby_radius) inside_a = true;
            else if (inside_a && d_a > 2.0 * flyby_radius) {
                inside_a = false;
                ++flybys;
            }
        }
        if (allow_b) {
            if (!inside_b && d_b < flyby_radius) inside_b = true;
            else if (inside_b && d_b > 2.0 * flyby_radius) {
                inside_b = false;
                ++flybys;
            }
        }
        if (flybys >= opt.max_flybys)
            return finish({Endpoint::Kind::truncated, {}, 0.0, 0.0, InfinityForm::radial,
                           "recurrent near-separatrix orbit"});

        const double r = std::abs(z);
        descent = r < prev_abs ? descent + 1 : 0;
        prev_abs = r;
        if (r < opt.origin_radius && descent >= opt.origin_descent)
            return finish({Endpoint::Kind::to_origin, {}, 0.0, std::arg(z)});
        if (r > r_max)
            return finish({Endpoint::Kind::to_infinity, {}, 0.0, 0.0, qd.infinity_form()});
        if (point_segment_distance(start_point, z_prev, z) < opt.closed_radius &&
            arc >= std::max(10.0 * opt.closed_radius, 3.0 * offset))
            return finish({Endpoint::Kind::closed});
        if (arc > budget)
            return finish({Endpoint::Kind::truncated, {}, 0.0, 0.0, InfinityForm::radial,
                           "arc budget exhausted"});
        if (steps >= opt.max_steps)
            return finish({Endpoint::Kind::truncated, {}, 0.0, 0.0, InfinityForm::radial,
                           "step limit reached"});
    }
}

struct ShortTrajectory {
    C from;               // zero the merged arc starts at
    C to;                 // zero it ends at
    TrajectoryPath path;  // polyline from `from` to `to`, exact zeros appended
    double mutual_gap;    // worse of the two capture distances
};

struct CriticalGraph {
    QuadDiff qd;
    std::vector<TrajectoryPath> trajectories; // 6, ordered (zero a angles asc, then b)
    std::vector<ShortTrajectory> short_trajectories;
    GateValues gate;
    ShortTrajectoryGate gate_decision;
};

namespace detail {

inline double closest_approach(const Path& p, C target) {
    return point_path_distance(target, p);
}

// Merged arc: refined polyline from the launch zero, cut at its closest
// point to the target, with the exact zeros as endpoints.
inline TrajectoryPath merge_short(const TrajectoryPath& refined, C from, C to) {
    TrajectoryPath m = refined;
    std::size_t cut = m.path.points.size() - 1;
    double best = std::abs(m.path.points.back() - to);
    for (std::size_t i = 0; i < m.path.points.size(); ++i) {
        const double d = std::abs(m.path.points[i] - to);
        if (d < best) {
            best = d;
            cut = i;
        }
    }
    m.path.points.resize(cut + 1);
    if (std::abs(m.path.points.front() - from) > 0.0)
        m.path.points.insert(m.path.points.begin(), from);
    if (std::abs(m.path.points.back() - to) > 0.0) m.path.points.push_back(to);
    m.endpoint = {Endpoint::Kind::hits_zero, to, best};
    return m;
}

} // namespace detail

// Traces the six critical trajectories, detects short ones by shooting
// (candidates from the first pass, confirmed by a tighter second pass from
// both zeros), and merges mutual hits into registered short trajectories.
inline CriticalGraph critical_graph(const QuadDiff& qd, const TraceOptions& opt = {}) {
    const C a = qd.a(), b = qd.b();
    struct Spec {
        C zero;
        C target;
        double angle;
    };
    std::vector<Spec> specs;
    for (double t : qd.launch_directions(a)) specs.push_back({a, b, t});
    for (double t : qd.launch_directions(b)) specs.push_back({b, a, t});

    CriticalGraph g{qd, std::vector<TrajectoryPath>(6), {}, qd.gate_values(),
                    qd.short_trajectory_exists()};
    parallel_for(specs.size(), [&](std::size_t i) {
        g.trajectories[i] = trace(qd, specs[i].zero, specs[i].angle, TrajKind::horizontal, opt);
    });

    const double ab = std::abs(a - b);
    const double cand_radius = 0.05 * ab;
    const double merge_radius = 1e-5 * ab;

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& t = g.trajectories[i];
        const bool hit = t.endpoint.kind == Endpoint::Kind::hits_zero &&
                         std::abs(t.endpoint.zero - specs[i].target) < 1e-9 * ab;
        if (hit || detail::closest_approach(t.path, specs[i].target) < cand_radius)
            candidates.push_back(i);
    }

    // Shooting alone is noisy near the opposite zero: re-trace candidates with
    // 10x tighter tolerance and stop inside the merge radius.
    TraceOptions fine = opt;
    fine.path_tol = opt.path_tol / 10.0;
    fine.zero_capture = std::max(merge_radius, 1e-13);
    std::vector<TrajectoryPath> refined(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t k) {
        const auto& s = specs[candidates[k]];
        refined[k] = trace(qd, s.zero, s.angle, TrajKind::horizontal, fine);
    });

    struct Confirmed {
        std::size_t spec;
        TrajectoryPath merged;
        double gap;
        bool used = false;
    };
    std::vector<Confirmed> from_a, from_b;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const auto& s = specs[candidates[k]];
        const auto& t = refined[k];
        if (t.endpoint.kind != Endpoint::Kind::hits_zero) continue;
        if (std::abs(t.endpoint.zero - s.target) > 1e-9 * ab) continue;
        if (t.endpoint.distance >= merge_radius * (1.0 + 1e-9)) continue;
        Confirmed c{candidates[k], detail::merge_short(t, s.zero, s.target),
                    t.endpoint.distance};
        (candidates[k] < 3 ? from_a : from_b).push_back(std::move(c));
    }

    // Mutual confirmation: pair each a-side hit with the geometrically nearest
    // b-side hit (the two sides trace the same leaf in opposite directions).
    for (auto& ca : from_a) {
        double best = std::numeric_limits<double>::infinity();
        Confirmed* match = nullptr;
        for (auto& cb : from_b) {
            if (cb.used) continue;
            const double d = hausdorff_distance(ca.merged.path, cb.merged.path);
            if (d < best) {
                best = d;
                match = &cb;
            }
        }
        if (!match || best > 0.1 * ab) continue;
        match->used = true;
        g.short_trajectories.push_back(
            {a, b, ca.merged, std::max(ca.gap, match->gap)});
        g.trajectories[ca.spec] = ca.merged;
        g.trajectories[match->spec] = match->merged;
        g.trajectories[ca.spec].short_member = true;
        g.trajectories[match->spec].short_member = true;
    }
    return g;
}

// Largest drift of the primitive Im (or Re, for vertical paths) of
// lambda*sqrt((t-a)(t-b))/t^2 along the committed polyline; a trajectory of
// the differential keeps it constant.
inline double trajectory_constancy_deviation(const QuadDiff& qd, const TrajectoryPath& traj,
                                             int nodes_per_segment = 16) {
    BranchTracker tracker;
    auto f = [&](C t) -> C {
        const C g = (t - qd.a()) * (t - qd.b());
        if (!tracker.seeded()) tracker.seed(std::sqrt(g));
        return qd.lambda() * tracker.advance(g).value / (t * t);
    };
    const auto& pts = traj.path.points;
    C acc = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Path seg{{pts[i], pts[i + 1]}, false};
        acc += integrate_path(f, seg, nodes_per_segment);
        const double v =
            traj.kind == TrajKind::horizontal ? acc.imag() : acc.real();
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

} // namespace qdflow
