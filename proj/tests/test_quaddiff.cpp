#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qdflow/quaddiff.hpp"
#include "qdflow/rng.hpp"
#include "qdflow/verify.hpp"

using namespace qdflow;

TEST_CASE("construction accepts valid parameters") {
    CHECK_NOTHROW(qd_new(C(0.0, 1.0), C(1.0, 0.0), C(4.0, 0.0)));
    // the figure-2 configuration: lambda^2 = -2-i
    CHECK_NOTHROW(qd_new(std::sqrt(C(-2.0, -1.0)), C(1.0, -1.0), C(0.0, 1.0)));
}

TEST_CASE("construction rejects degenerate parameters") {
    try {
        qd_new(C(1.0), C(1.0), C(1.0));
        FAIL("expected DegenerateParameters");
    } catch (const DegenerateParameters& e) {
        CHECK(e.constraint == "a = b");
    }
    CHECK_THROWS_AS(qd_new(C(0.0), C(1.0), C(2.0)), DegenerateParameters);
    CHECK_THROWS_AS(qd_new(C(1.0), C(0.0), C(2.0)), DegenerateParameters);
    CHECK_THROWS_AS(qd_new(C(1.0), C(2.0), C(1e-14, 0.0)), DegenerateParameters);
}

TEST_CASE("critical point inventory") {
    const QuadDiff qd(C(0.0, 1.0), C(1.0, 0.0), C(4.0, 0.0));
    const auto cps = qd.critical_points();
    REQUIRE(cps.size() == 4);
    int zeros = 0, poles = 0;
    for (const auto& cp : cps)
        (cp.kind == CriticalPoint::Kind::simple_zero ? zeros : poles) += cp.order;
    CHECK(zeros == 2);
    CHECK(poles == 6);
    CHECK(zeros - poles == -4);
    CHECK(cps[2].order == 4);
    CHECK(cps[3].at_infinity);
    CHECK(cps[3].order == 2);
}

TEST_CASE("infinity form by the argument of lambda") {
    CHECK(qd_new(C(2.0, 0.0), C(1.0), C(2.0)).infinity_form() == InfinityForm::radial);
    CHECK(qd_new(C(0.0, 3.0), C(1.0), C(2.0)).infinity_form() == InfinityForm::circular);
    CHECK(qd_new(C(1.0, 1.0), C(1.0), C(2.0)).infinity_form() == InfinityForm::log_spiral);
}

TEST_CASE("gate values on real zeros") {
    const GateValues imag_case = qd_new(C(0.0, 1.0), C(1.0), C(4.0)).gate_values();
    CHECK(std::abs(imag_case.v_plus - C(0.0, 4.5)) < 1e-14);
    CHECK(std::abs(imag_case.v_minus - C(0.0, 0.5)) < 1e-14);

    const GateValues real_case = qd_new(C(1.0), C(1.0), C(4.0)).gate_values();
    CHECK(std::abs(real_case.v_plus - C(4.5, 0.0)) < 1e-14);
    CHECK(std::abs(real_case.v_minus - C(0.5, 0.0)) < 1e-14);
}

TEST_CASE("gate values of the A = 3 family differential") {
    // zeta_-+ = (-3 -+ 4i)/25 and lambda = 5i put both gate values on the
    // imaginary axis, the set {4i, -16i}.
    const QuadDiff qd(C(0.0, 5.0), C(-3.0, -4.0) / 25.0, C(-3.0, 4.0) / 25.0);
    const GateValues v = qd.gate_values();
    const bool direct = std::abs(v.v_plus - C(0.0, 4.0)) < 1e-12 &&
                        std::abs(v.v_minus - C(0.0, -16.0)) < 1e-12;
    const bool swapped = std::abs(v.v_minus - C(0.0, 4.0)) < 1e-12 &&
                         std::abs(v.v_plus - C(0.0, -16.0)) < 1e-12;
    CHECK((direct || swapped));
    CHECK(std::abs(v.v_plus.real()) < 1e-12);
    CHECK(std::abs(v.v_minus.real()) < 1e-12);
}

TEST_CASE("short trajectory gate") {
    CHECK(qd_new(C(0.0, 1.0), C(1.0), C(4.0)).short_trajectory_exists().branch ==
          GateBranch::both);
    CHECK_FALSE(qd_new(C(1.0), C(1.0), C(4.0)).short_trajectory_exists().exists);

    // A = -1 + 0.1i: zeta_-+(A) with lambda = i(A+2); exactly one branch fires.
    const C A(-1.0, 0.1);
    const C root = std::sqrt(A + 1.0);
    const C ap2 = A + 2.0;
    const C zm = (-A - 2.0 * C(0.0, 1.0) * root) / (ap2 * ap2);
    const C zp = (-A + 2.0 * C(0.0, 1.0) * root) / (ap2 * ap2);
    const auto gate = qd_new(C(0.0, 1.0) * ap2, zm, zp).short_trajectory_exists();
    CHECK(gate.exists);
    CHECK((gate.branch == GateBranch::plus || gate.branch == GateBranch::minus));
}

TEST_CASE("closed-form periods for a = 1, b = 4") {
    const QuadDiff qd(C(1.0), C(1.0), C(4.0));
    CHECK(std::abs(qd.period(PeriodSign::plus) - C(0.0, 9.0 * pi / 4.0)) < 1e-14);
    CHECK(std::abs(qd.period(PeriodSign::minus) - C(0.0, pi / 4.0)) < 1e-14);
}

TEST_CASE("period difference is 2 pi i lambda") {
    SampleRng rng(5);
    for (int k = 0; k < 50; ++k) {
        const C a = rng.annulus(0.2, 5.0);
        const C b = rng.annulus(0.2, 5.0);
        if (std::abs(a - b) < 1e-3) continue;
        const QuadDiff qd(rng.annulus(0.3, 2.0), a, b);
        const C diff = qd.period(PeriodSign::plus) - qd.period(PeriodSign::minus);
        const C expect = C(0.0, 2.0 * pi) * qd.lambda();
        CHECK(std::abs(diff - expect) <= 1e-10 * std::abs(expect));
    }
}

TEST_CASE("period quadrature oracle on the reference configuration") {
    const QuadDiff qd(C(1.0), C(1.0), C(4.0));
    const PeriodOracle o = period_oracle(qd);
    CHECK(o.rel_error < 1e-10);
    // With the straight cut [1,4], the branch normalised ~ z at infinity
    // lands at -2 when continued to the origin: the contour realises the
    // minus-class period i pi/4.
    CHECK(o.sigma == -1);
    CHECK(std::abs(o.closed_form - qd.period(PeriodSign::minus)) < 1e-14);
    CHECK(std::abs(o.quadrature - C(0.0, pi / 4.0)) < 1e-10);
}

TEST_CASE("period oracle over random configurations") {
    SampleRng rng(7);
    for (int k = 0; k < 25; ++k) {
        const QuadDiff qd = sample_period_config(rng);
        const PeriodOracle o = period_oracle(qd);
        CHECK(o.rel_error <= 1e-8);
    }
}

TEST_CASE("residue identity of the contour computation") {
    SampleRng rng(19);
    for (int k = 0; k < 100; ++k) {
        const C a = rng.annulus(0.2, 5.0);
        const C b = rng.annulus(0.2, 5.0);
        if (std::abs(a - b) < 1e-3) continue;
        const C sab = std::sqrt(a) * std::sqrt(b);
        const C lhs = C(0.0, pi) * (sab * (a + b) - 2.0 * a * b) / (2.0 * a * b);
        const C sa = std::sqrt(a), sb = std::sqrt(b);
        const C rhs = C(0.0, pi / 2.0) * (sa - sb) * (sa - sb) / sab;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("launch directions at real zeros") {
    const QuadDiff qd(C(1.0), C(1.0), C(-1.0));
    const auto at_a = qd.launch_directions(C(1.0));
    CHECK(std::abs(at_a[0] - 0.0) < 1e-12);
    CHECK(std::abs(at_a[1] - 2.0 * pi / 3.0) < 1e-12);
    CHECK(std::abs(at_a[2] - 4.0 * pi / 3.0) < 1e-12);

    const auto at_b = qd.launch_directions(C(-1.0));
    CHECK(std::abs(at_b[0] - pi / 3.0) < 1e-12);
    CHECK(std::abs(at_b[1] - pi) < 1e-12);
    CHECK(std::abs(at_b[2] - 5.0 * pi / 3.0) < 1e-12);
}

TEST_CASE("launch directions: pairwise gaps and rotation equivariance") {
    SampleRng rng(23);
    for (int k = 0; k < 30; ++k) {
        const C a = rng.annulus(0.3, 3.0);
        const C b = rng.annulus(0.3, 3.0);
        if (std::abs(a - b) < 0.2) continue;
        const C lambda = rng.annulus(0.5, 2.0);
        const QuadDiff qd(lambda, a, b);
        const auto base = qd.launch_directions(a);
        CHECK(std::abs(angle_gap(base[0], base[1]) - 2.0 * pi / 3.0) < 1e-9);
        CHECK(std::abs(angle_gap(base[1], base[2]) - 2.0 * pi / 3.0) < 1e-9);

        const double beta = rng.uniform(0.0, 2.0 * pi);
        const QuadDiff rotated(lambda * std::polar(1.0, beta), a, b);
        for (const double t : rotated.launch_directions(a)) {
            double best = 10.0;
            for (const double s : base) best = std::min(best, angle_gap(t + 2.0 * beta / 3.0, s));
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("gate values are invariant under zero rescaling") {
    SampleRng rng(31);
    for (int k = 0; k < 30; ++k) {
        const C a = rng.annulus(0.3, 3.0);
        const C b = rng.annulus(0.3, 3.0);
        if (std::abs(a - b) < 0.2) continue;
        const C lambda = rng.annulus(0.5, 2.0);
        const double t = rng.uniform(0.3, 4.0);
        const GateValues v0 = QuadDiff(lambda, a, b).gate_values();
        const GateValues v1 = QuadDiff(lambda, t * a, t * b).gate_values();
        CHECK(std::abs(v0.v_plus - v1.v_plus) < 1e-10 * std::abs(v0.v_plus));
        CHECK(std::abs(v0.v_minus - v1.v_minus) < 1e-10 * std::abs(v0.v_minus));
    }
}
