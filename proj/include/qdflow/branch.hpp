#pragma once

#include <cmath>
#include <complex>

#include "qdflow/complex_util.hpp"
#include "qdflow/errors.hpp"

namespace qdflow {

// Carries the last committed value of sqrt(f) along a path so that the next
// evaluation can pick the root on the same sheet. One tracker per tracing
// job; trackers are plain values and cheap to snapshot/restore around
// rejected integration steps.
class BranchTracker {
public:
    BranchTracker() = default;
    explicit BranchTracker(C seed) { this->seed(seed); }

    void seed(C w) {
        value_ = w;
        seeded_ = true;
    }

    bool seeded() const { return seeded_; }
    C current() const {
        if (!seeded_) throw TrackerUninitialized();
        return value_;
    }

    // The two roots of f are +-r; commit the one nearer the current value.
    // `ambiguous` reports |w - cur| >= 0.5 |w + cur|, the signal that the
    // caller's step spans too much of a turn around a branch point and should
    // be halved before trusting the continuation.
    struct Step {
        C value;
        bool ambiguous;
    };

    Step advance(C f) {
        if (!seeded_) throw TrackerUninitialized();
        C w = std::sqrt(f);
        const double keep = std::abs(w - value_);
        const double flip = std::abs(w + value_);
        if (flip < keep) w = -w;
        const bool ambiguous = std::abs(w - value_) >= 0.5 * std::abs(w + value_);
        value_ = w;
        return {w, ambiguous};
    }

private:
    C value_{};
    bool seeded_ = false;
};

// Square root of f on the sheet the tracker is following.
inline C sqrt_continuous(C f, BranchTracker& tracker) {
    return tracker.advance(f).value;
}

// Continue sqrt(f(z)) from (z0, w0) to z1 along the straight segment,
// bisecting the subdivision until no step is ambiguous. Returns the branch
// value at z1.
template <class F>
C continue_sqrt_segment(F&& f, C z0, C w0, C z1) {
    for (int steps = 16; steps <= (1 << 20); steps *= 2) {
        BranchTracker t(w0);
        bool ok = true;
        for (int k = 1; k <= steps && ok; ++k) {
            const C z = z0 + (z1 - z0) * (double(k) / double(steps));
            if (t.advance(f(z)).ambiguous) ok = false;
        }
        if (ok) return t.current();
    }
    throw NumericalFailure("branch continuation failed: path too close to a branch point");
}

} // namespace qdflow
