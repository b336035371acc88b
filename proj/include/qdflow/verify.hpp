#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdflow/bessel.hpp"
#include "qdflow/branch.hpp"
#include "qdflow/parallel.hpp"
#include "qdflow/quaddiff.hpp"
#include "qdflow/quadrature.hpp"
#include "qdflow/rng.hpp"
#include "qdflow/trace.hpp"

namespace qdflow {

// Quadrature cross-check of the closed-form periods over the contour of the
// direct homotopy class: a clockwise stadium around the segment [a,b] that
// does not encircle the origin. Which closed form the contour realises is
// decided by the sign sigma that the sqrt branch (normalised ~ z at infinity)
// carries into z = 0: sigma = +1 lands on -period(plus)/lambda, sigma = -1 on
// +period(minus)/lambda. The other class differs by exactly 2*pi*i*lambda.
struct PeriodOracle {
    C quadrature;  // lambda/2 times the contour integral
    C closed_form; // sigma-selected signed period
    int sigma;
    double rel_error;
};

inline PeriodOracle period_oracle(const QuadDiff& qd, int arc_segments = 24,
                                  int nodes_per_segment = 16) {
    const C a = qd.a(), b = qd.b();
    const C mid = 0.5 * (a + b);
    const double d0 = point_segment_distance(C(0.0), a, b);
    const double clearance = std::min(0.45 * d0, std::abs(a - b));
    if (!(clearance > 1e-6 * qd.geometry_scale()))
        throw BadInput("segment too close to the origin for a clear contour");

    auto g = [&](C z) { return (z - a) * (z - b); };
    const double far = 1e3 * (qd.geometry_scale() + std::abs(a - b));
    auto seed_at = [&](C z_far) {
        C w = std::sqrt(g(z_far));
        const C target = z_far - mid;
        if (std::abs(w - target) > std::abs(w + target)) w = -w;
        return w;
    };

    Path contour = make_stadium_path(a, b, clearance, arc_segments).reversed(); // clockwise
    const C start = contour.points.front();
    const C z_far_seed = mid + unit(start - mid) * far;
    const C w_start = continue_sqrt_segment(g, z_far_seed, seed_at(z_far_seed), start);

    BranchTracker tracker(w_start);
    const C integral = integrate_path(
        [&](C z) { return tracker.advance(g(z)).value / (z * z); }, contour, nodes_per_segment);
    const C w_back = tracker.advance(g(start)).value;
    if (std::abs(w_back - w_start) > 1e-6 * std::abs(w_start))
        throw NumericalFailure("branch did not return after the closed circuit");

    // Branch landing sign at the origin, continued along a ray clear of the cut.
    C s0;
    {
        // The segment subtends an angle < pi from the origin, so some ray out
        // of 0 keeps a safe distance from it.
        C dir = unit(-mid);
        double best = -1.0;
        for (int k = 0; k < 64; ++k) {
            const C cand = unit(-mid) * std::polar(1.0, 2.0 * pi * double(k) / 64.0);
            double clear = std::numeric_limits<double>::infinity();
            for (int s = 0; s <= 32; ++s) {
                const C p = a + (double(s) / 32.0) * (b - a);
                clear = std::min(clear, point_segment_distance(p, C(0.0), cand * far));
            }
            if (clear > best) {
                best = clear;
                dir = cand;
            }
        }
        if (best < 0.3 * d0) throw NumericalFailure("no clear ray from the origin to infinity");
        const C z_far0 = dir * far;
        s0 = continue_sqrt_segment(g, z_far0, seed_at(z_far0), C(0.0));
    }
    const C sab = qd.sqrt_ab();
    const int sigma = std::abs(s0 - sab) < std::abs(s0 + sab) ? 1 : -1;

    PeriodOracle out;
    out.sigma = sigma;
    out.quadrature = qd.lambda() * integral * 0.5;
    out.closed_form = sigma > 0 ? -qd.period(PeriodSign::plus) : qd.period(PeriodSign::minus);
    out.rel_error = std::abs(out.quadrature - out.closed_form) / std::abs(out.closed_form);
    return out;
}

// Random (lambda, a, b) with both zeros in an annulus and the segment [a,b]
// clear of the origin (so the oracle contour stays >= 0.1 away from it).
inline QuadDiff sample_period_config(SampleRng& rng) {
    for (;;) {
        const C a = rng.annulus(0.2, 5.0);
        const C b = rng.annulus(0.2, 5.0);
        if (std::abs(a - b) < 0.2) continue;
        if (point_segment_distance(C(0.0), a, b) < 0.25) continue;
        const C lambda = rng.annulus(0.5, 2.0);
        return QuadDiff(lambda, a, b);
    }
}

// Gate-agreement sample: either constructed to fire (arg lambda solved so one
// gate value is purely imaginary) or kept safely off the threshold.
inline QuadDiff sample_gate_config(SampleRng& rng, bool fire) {
    for (;;) {
        const C a = rng.annulus(0.3, 3.0);
        const C b = rng.annulus(0.3, 3.0);
        if (std::abs(a - b) < 0.3) continue;
        if (std::min(std::abs(a), std::abs(b)) < 0.2) continue;
        const double mag = rng.uniform(0.5, 2.0);
        if (fire) {
            const C sa = std::sqrt(a), sb = std::sqrt(b);
            const C u = rng.uniform() < 0.5 ? (sa + sb) * (sa + sb) / (sa * sb)
                                            : (sa - sb) * (sa - sb) / (sa * sb);
            const double beta = pi / 2.0 - std::arg(u);
            return QuadDiff(std::polar(mag, beta), a, b);
        }
        const C lambda = std::polar(mag, rng.uniform(0.0, 2.0 * pi));
        const QuadDiff qd(lambda, a, b);
        const GateValues v = qd.gate_values();
        const double scale = std::max({1.0, std::abs(v.v_plus), std::abs(v.v_minus)});
        if (std::min(std::abs(v.v_plus.real()), std::abs(v.v_minus.real())) > 0.05 * scale)
            return qd;
    }
}

struct CheckLine {
    std::string name;
    bool pass;
    double worst;
    std::string detail;
};

inline std::vector<CheckLine> verify_periods(int samples, std::uint64_t seed) {
    SampleRng rng(seed);
    std::vector<QuadDiff> configs;
    configs.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) configs.push_back(sample_period_config(rng));

    std::vector<double> oracle_err(configs.size()), diff_err(configs.size());
    parallel_for(configs.size(), [&](std::size_t i) {
        const QuadDiff& qd = configs[i];
        oracle_err[i] = period_oracle(qd).rel_error;
        const C diff = qd.period(PeriodSign::plus) - qd.period(PeriodSign::minus) -
                       C(0.0, 2.0 * pi) * qd.lambda();
        diff_err[i] = std::abs(diff) / std::abs(C(0.0, 2.0 * pi) * qd.lambda());
    });
    double worst_oracle = 0.0, worst_diff = 0.0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        worst_oracle = std::max(worst_oracle, oracle_err[i]);
        worst_diff = std::max(worst_diff, diff_err[i]);
    }
    return {{"period quadrature oracle", worst_oracle <= 1e-8, worst_oracle,
             std::to_string(samples) + " samples, tol 1e-8"},
            {"period difference = 2*pi*i*lambda", worst_diff <= 1e-10, worst_diff,
             "tol 1e-10"}};
}

struct GateAgreement {
    int agree = 0;
    int total = 0;
    double worst_disagree_fraction = 0.0; // |Re v|/scale on disagreeing samples
};

inline GateAgreement gate_agreement(int samples, std::uint64_t seed,
                                    const TraceOptions& opt = {}) {
    SampleRng rng(seed);
    std::vector<QuadDiff> configs;
    configs.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) configs.push_back(sample_gate_config(rng, i % 2 == 0));

    std::vector<int> ok(configs.size(), 0);
    std::vector<double> fraction(configs.size(), 0.0);
    parallel_for(configs.size(), [&](std::size_t i) {
        const QuadDiff& qd = configs[i];
        const bool gate = qd.short_trajectory_exists().exists;
        const bool geom = !critical_graph(qd, opt).short_trajectories.empty();
        ok[i] = gate == geom;
        const GateValues v = qd.gate_values();
        const double scale = std::max({1.0, std::abs(v.v_plus), std::abs(v.v_minus)});
        fraction[i] =
            std::min(std::abs(v.v_plus.real()), std::abs(v.v_minus.real())) / scale;
    });
    GateAgreement result;
    result.total = samples;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        if (ok[i]) ++result.agree;
        else result.worst_disagree_fraction = std::max(result.worst_disagree_fraction, fraction[i]);
    }
    return result;
}

inline std::vector<CheckLine> verify_gates(int samples, std::uint64_t seed) {
    const GateAgreement r = gate_agreement(samples, seed);
    const bool pass = r.agree >= r.total - (r.total / 100) &&
                      (r.agree == r.total || r.worst_disagree_fraction < 1e-3);
    return {{"gate/trace agreement", pass, double(r.total - r.agree),
             std::to_string(r.agree) + "/" + std::to_string(r.total) + " agree"}};
}

inline std::vector<CheckLine> verify_bessel(std::uint64_t seed) {
    SampleRng rng(seed);
    auto rand_alpha = [&] { return C(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)); };
    auto rand_z = [&] { return C(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)); };

    double worst_rec = 0.0, worst_ode = 0.0, worst_lag = 0.0, worst_lead = 0.0;
    for (int s = 0; s < 50; ++s) {
        const int n = 1 + int(rng.uniform() * 24.9);
        const C alpha = rand_alpha();
        C z = rand_z();
        if (std::abs(z) < 0.05) z += C(0.3, 0.2);
        worst_rec = std::max(worst_rec, recurrence_residual(n, alpha, z));
        worst_ode = std::max(worst_ode, ode_residual(bessel_coeffs(n, alpha), z));
        worst_lag = std::max(worst_lag, laguerre_link_residual(n, alpha, z));

        // Leading coefficients of the corrected recurrence must match exactly.
        const C w = 2.0 * double(n) + alpha;
        const C lhs = (double(n) + alpha - 1.0) * (w - 2.0) * falling_factorial(w, n + 1);
        const C rhs = w * (w - 2.0) * (w - 1.0) * falling_factorial(w - 2.0, n);
        worst_lead = std::max(worst_lead,
                              std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
    }

    double worst_vieta = 0.0;
    for (int n : {10, 40, 80}) {
        const BesselPolynomial p = bessel_coeffs(n, C(3.0 * n));
        const EmpiricalMeasure m = bessel_zeros(p);
        C sum = 0.0, prod = 1.0;
        for (const C& z : m.points) {
            sum += z;
            prod *= z;
        }
        const C sum_ref = -p.coeffs[p.coeffs.size() - 2] / p.coeffs.back();
        const C prod_ref = (n % 2 == 0 ? 1.0 : -1.0) * p.coeffs.front() / p.coeffs.back();
        worst_vieta = std::max(worst_vieta, std::abs(sum - sum_ref) / std::abs(sum_ref));
        worst_vieta = std::max(worst_vieta, std::abs(prod - prod_ref) / std::abs(prod_ref));
    }

    return {{"recurrence residual (n <= 25)", worst_rec <= 1e-10, worst_rec, "tol 1e-10"},
            {"differential equation residual", worst_ode <= 1e-10, worst_ode, "tol 1e-10"},
            {"laguerre link residual", worst_lag <= 1e-10, worst_lag, "tol 1e-10"},
            {"recurrence leading coefficients", worst_lead <= 1e-12, worst_lead, "tol 1e-12"},
            {"vieta zero sum/product (n=10,40,80)", worst_vieta <= 1e-8, worst_vieta,
             "tol 1e-8"}};
}

} // namespace qdflow
