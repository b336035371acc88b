#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qdflow/branch.hpp"
#include "qdflow/ode.hpp"
#include "qdflow/quadrature.hpp"
#include "qdflow/rng.hpp"

using namespace qdflow;

TEST_CASE("sqrt_continuous keeps the seeded branch") {
    BranchTracker plus(C(2.1, 0.0));
    CHECK(std::abs(sqrt_continuous(C(4.0, 0.0), plus) - C(2.0, 0.0)) < 1e-15);

    BranchTracker minus(C(-1.9, 0.0));
    CHECK(std::abs(sqrt_continuous(C(4.0, 0.0), minus) - C(-2.0, 0.0)) < 1e-15);
}

TEST_CASE("sqrt_continuous requires a seed") {
    BranchTracker t;
    CHECK_THROWS_AS(sqrt_continuous(C(4.0, 0.0), t), TrackerUninitialized);
}

TEST_CASE("monodromy of sqrt around the origin") {
    // f(t) = e^{it}, t: 0 -> 2pi in 100 steps; the tracked root follows
    // e^{it/2} and lands on -1.
    BranchTracker t(C(1.0, 0.0));
    const int steps = 100;
    for (int k = 1; k <= steps; ++k) {
        const double s = 2.0 * pi * double(k) / double(steps);
        const C w = sqrt_continuous(std::polar(1.0, s), t);
        CHECK(std::abs(w - std::polar(1.0, s / 2.0)) < 1e-12);
    }
    CHECK(std::abs(t.current() - C(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("branch continuity along random loops off the branch point") {
    SampleRng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const C center = rng.annulus(1.5, 3.0);
        const double radius = rng.uniform(0.2, 0.45 * std::abs(center));
        BranchTracker t(std::sqrt(center + radius));
        C prev = t.current();
        for (int k = 1; k <= 400; ++k) {
            const double s = 2.0 * pi * double(k) / 400.0;
            auto step = t.advance(center + std::polar(radius, s));
            CHECK_FALSE(step.ambiguous);
            CHECK(std::abs(step.value - prev) < std::abs(step.value + prev));
            prev = step.value;
        }
    }
}

TEST_CASE("integrate_path: constant integrand over a segment") {
    Path seg{{C(0.0, 0.0), C(1.0, 1.0)}, false};
    const C v = integrate_path([](C) { return C(1.0, 0.0); }, seg);
    CHECK(std::abs(v - C(1.0, 1.0)) < 1e-14);
}

TEST_CASE("integrate_path: residue of 1/z on the unit circle") {
    const Path circle = make_circle_path(C(0.0), 1.0, 32, true);
    const C v = integrate_path([](C z) { return 1.0 / z; }, circle);
    CHECK(std::abs(v - C(0.0, 2.0 * pi)) < 1e-12);
}

TEST_CASE("quadrature convergence: doubling nodes gains a decade") {
    // A coarse square around the pole keeps the per-segment rule honest.
    Path square{{C(1.0, 1.0), C(-1.0, 1.0), C(-1.0, -1.0), C(1.0, -1.0), C(1.0, 1.0)}, true};
    const C exact(0.0, 2.0 * pi);
    double prev_err = -1.0;
    for (int nodes : {2, 4, 8, 16, 32}) {
        const C v = integrate_path([](C z) { return 1.0 / z; }, square, nodes);
        const double err = std::abs(v - exact);
        if (prev_err > 0.0 && prev_err > 1e-12) CHECK(err <= prev_err / 10.0);
        prev_err = err;
    }
    CHECK(prev_err < 1e-12);
}

TEST_CASE("integrate_path rejects non-finite samples") {
    Path seg{{C(-1.0, 0.0), C(1.0, 0.0)}, false};
    CHECK_THROWS_AS(
        integrate_path([](C z) { return C(1.0, 0.0) / (z - C(0.123, 0.0)) /
                                        C(0.0, 0.0); },
                       seg),
        NonFiniteSample);
}

TEST_CASE("branch-tracked contour integral around [1,4]") {
    // Clockwise stadium around the segment [1,4], branch ~ z at infinity.
    // Continuation lands with sqrt((z-1)(z-4)) = -2 at the origin, so the
    // circuit realises i*pi*(sqrt(a)-sqrt(b))^2/sqrt(ab) = i*pi/2; the other
    // homotopy class differs by 4*pi*i, giving the companion value 9*i*pi/2.
    const C a(1.0, 0.0), b(4.0, 0.0);
    auto g = [&](C z) { return (z - a) * (z - b); };
    auto run = [&](int arc_segments, int nodes) {
        Path contour = make_stadium_path(a, b, 0.5, arc_segments).reversed();
        const C start = contour.points.front();
        const C z_far = C(1e4, 0.0);
        C w_far = std::sqrt(g(z_far));
        if (std::abs(w_far - z_far) > std::abs(w_far + z_far)) w_far = -w_far;
        BranchTracker t(continue_sqrt_segment(g, z_far, w_far, start));
        return integrate_path([&](C z) { return t.advance(g(z)).value / (z * z); }, contour,
                              nodes);
    };
    const C coarse = run(24, 16);
    const C fine = run(48, 24);
    CHECK(std::abs(coarse - fine) < 1e-10);
    CHECK(std::abs(coarse - C(0.0, pi / 2.0)) < 1e-10);
    CHECK(std::abs(coarse + C(0.0, 4.0 * pi) - C(0.0, 4.5 * pi)) < 1e-10);
}

TEST_CASE("ode step on a constant field is exact") {
    const auto r = ode_step_adaptive([](C) { return C(1.0, 0.0); }, C(0.0), 0.1, 1e-9);
    CHECK(r.z_next == C(0.1, 0.0));
    CHECK(r.h_used == 0.1);
}

TEST_CASE("circle flow returns to its start") {
    auto field = [](C z) { return C(0.0, 1.0) * z / std::abs(z); };
    C z(1.0, 0.0);
    double arc = 0.0, h = 0.05;
    while (arc < 2.0 * pi) {
        const auto r = ode_step_adaptive(field, z, std::min(h, 2.0 * pi - arc), 1e-10);
        z = r.z_next;
        arc += r.h_used;
        h = r.h_next;
    }
    CHECK(std::abs(z - C(1.0, 0.0)) < 1e-8);
}

TEST_CASE("ode reversibility on a smooth field") {
    auto dir = [](C z) { return unit(C(1.0, 0.0) + 0.3 * std::sin(z.real()) * C(0.0, 1.0)); };
    C z(0.2, -0.4);
    const C z0 = z;
    std::vector<double> steps;
    double h = 0.05;
    for (int k = 0; k < 200; ++k) {
        const auto r = ode_step_adaptive(dir, z, h, 1e-10);
        z = r.z_next;
        h = r.h_next;
        steps.push_back(r.h_used);
    }
    auto back = [&](C p) { return -dir(p); };
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        // retrace the same arc lengths with the negated field
        double remaining = *it;
        while (remaining > 0.0) {
            const auto r = ode_step_adaptive(back, z, remaining, 1e-10);
            z = r.z_next;
            remaining -= r.h_used;
        }
    }
    CHECK(std::abs(z - z0) < 1e-6);
}

TEST_CASE("step collapse approaching a simple zero") {
    // The field 1/sqrt(z-1), followed into the zero along its attracting
    // ray: the speed grows like d^{-1/2}, so resolving the approach forces
    // h ~ d^{3/2} and the step size underflows while the point is still
    // of order 1e-10 away from the singularity.
    BranchTracker tracker;
    auto field = [&](C z) -> C {
        const C f = z - C(1.0, 0.0);
        if (!tracker.seeded()) tracker.seed(std::sqrt(f));
        const auto s = tracker.advance(f);
        if (s.ambiguous || s.value == C(0.0)) throw BranchJump{};
        return 1.0 / s.value;
    };
    C z = C(1.0, 0.0) + std::polar(0.5, -2.0 * pi / 3.0);
    double h = 0.01;
    bool underflow = false;
    double final_d = 1.0;
    try {
        for (int k = 0; k < 100000; ++k) {
            BranchTracker saved = tracker;
            const auto r = ode_step_adaptive(field, z, h, 1e-9, [&] { tracker = saved; });
            z = r.z_next;
            h = r.h_next;
        }
    } catch (const StepUnderflow&) {
        underflow = true;
        final_d = std::abs(z - C(1.0, 0.0));
    }
    CHECK(underflow);
    CHECK(final_d >= 1e-10);
    CHECK(final_d < 1e-6);
}
