#pragma once

#include <algorithm>
#include <cmath>

#include "qdflow/complex_util.hpp"
#include "qdflow/errors.hpp"

namespace qdflow {

// Thrown by direction fields when a stage evaluation cannot continue the
// square-root branch unambiguously; the stepper treats it as a rejected step
// and halves h.
struct BranchJump {};

struct StepResult {
    C z_next;
    double h_used;
    double h_next;
    double error;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,  0.0,        7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

template <class Field>
void dp54_attempt(Field&& f, C z, double h, C& z5, double& err) {
    C k[7];
    for (int s = 0; s < 7; ++s) {
        C zi = z;
        for (int j = 0; j < s; ++j) zi += h * dp_a[s][j] * k[j];
        k[s] = f(zi);
    }
    z5 = z;
    C z4 = z;
    for (int s = 0; s < 7; ++s) {
        z5 += h * dp_b5[s] * k[s];
        z4 += h * dp_b4[s] * k[s];
    }
    err = std::abs(z5 - z4);
}

} // namespace detail

// One accepted embedded Runge-Kutta step of the direction field: retries with
// smaller h until the error estimate satisfies err <= tol*max(1,|z|), then
// proposes h_next by the usual safety rule. `on_reject` runs before every
// retry so callers can roll back stateful fields (branch trackers).
template <class Field, class OnReject>
StepResult ode_step_adaptive(Field&& field, C z, double h, double tol, OnReject&& on_reject) {
    if (!(h > 0.0) || !(tol > 0.0)) throw BadInput("step size and tolerance must be positive");
    const double tol_scaled = tol * std::max(1.0, std::abs(z));
    for (;;) {
        if (h < 1e-14) throw StepUnderflow(z, h);
        C z5{};
        double err = 0.0;
        bool jumped = false;
        try {
            detail::dp54_attempt(field, z, h, z5, err);
        } catch (const BranchJump&) {
            jumped = true;
        }
        if (jumped || !is_finite(z5) || !std::isfinite(err)) {
            on_reject();
            h *= 0.5;
            continue;
        }
        if (err <= tol_scaled) {
            const double grow =
                err > 0.0 ? std::clamp(0.9 * std::pow(tol_scaled / err, 0.2), 0.2, 5.0) : 5.0;
            return {z5, h, h * grow, err};
        }
        on_reject();
        h *= std::clamp(0.9 * std::pow(tol_scaled / err, 0.2), 0.2, 1.0);
    }
}

template <class Field>
StepResult ode_step_adaptive(Field&& field, C z, double h, double tol) {
    return ode_step_adaptive(field, z, h, tol, [] {});
}

} // namespace qdflow
