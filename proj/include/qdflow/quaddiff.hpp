#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "qdflow/complex_util.hpp"
#include "qdflow/errors.hpp"

namespace qdflow {

enum class InfinityForm { radial, circular, log_spiral };

inline const char* to_string(InfinityForm f) {
    switch (f) {
        case InfinityForm::radial: return "radial";
        case InfinityForm::circular: return "circular";
        default: return "log_spiral";
    }
}

struct CriticalPoint {
    enum class Kind { simple_zero, pole };
    C location;       // ignored when at_infinity
    bool at_infinity; // the order-2 pole
    Kind kind;
    int order; // zeros +1, origin pole 4, infinity pole 2

    // Signed multiplicity as it enters the polygon sum rule.
    int signed_multiplicity() const { return kind == Kind::simple_zero ? order : -order; }
};

struct GateValues {
    C v_plus;
    C v_minus;
};

enum class GateBranch { none, plus, minus, both };

inline const char* to_string(GateBranch b) {
    switch (b) {
        case GateBranch::none: return "none";
        case GateBranch::plus: return "plus";
        case GateBranch::minus: return "minus";
        default: return "both";
    }
}

struct ShortTrajectoryGate {
    bool exists;
    GateBranch branch;
};

enum class PeriodSign { plus, minus };

// The differential lambda^2 (z-a)(z-b) / z^4 dz^2 on the sphere: two simple
// zeros a and b, a pole of order 4 at the origin and one of order 2 at
// infinity.
class QuadDiff {
public:
    QuadDiff(C lambda, C a, C b) : lambda_(lambda), a_(a), b_(b) {
        if (lambda == C(0.0)) throw DegenerateParameters("lambda = 0");
        if (std::abs(a) < 1e-10) throw DegenerateParameters("a = 0");
        if (std::abs(b) < 1e-10) throw DegenerateParameters("b = 0");
        if (std::abs(a - b) < 1e-10 * std::max(std::abs(a), std::abs(b)))
            throw DegenerateParameters("a = b");
    }

    C lambda() const { return lambda_; }
    C a() const { return a_; }
    C b() const { return b_; }

    C phi(C z) const {
        const C z2 = z * z;
        return lambda_ * lambda_ * (z - a_) * (z - b_) / (z2 * z2);
    }

    std::array<CriticalPoint, 4> critical_points() const {
        return {CriticalPoint{a_, false, CriticalPoint::Kind::simple_zero, 1},
                CriticalPoint{b_, false, CriticalPoint::Kind::simple_zero, 1},
                CriticalPoint{C(0.0), false, CriticalPoint::Kind::pole, 4},
                CriticalPoint{C(0.0), true, CriticalPoint::Kind::pole, 2}};
    }

    InfinityForm infinity_form() const {
        const double m = std::abs(lambda_);
        if (std::abs(lambda_.imag()) <= 1e-12 * m) return InfinityForm::radial;
        if (std::abs(lambda_.real()) <= 1e-12 * m) return InfinityForm::circular;
        return InfinityForm::log_spiral;
    }

    // sqrt(ab) is fixed as the product of principal roots throughout; a global
    // flip of that choice negates both gate values.
    C sqrt_ab() const { return std::sqrt(a_) * std::sqrt(b_); }

    GateValues gate_values() const {
        const C sa = std::sqrt(a_);
        const C sb = std::sqrt(b_);
        const C s = sa * sb;
        return {lambda_ * (sa + sb) * (sa + sb) / s, lambda_ * (sa - sb) * (sa - sb) / s};
    }

    ShortTrajectoryGate short_trajectory_exists(double tol = 1e-9) const {
        if (!(tol > 0.0)) throw BadInput("gate tolerance must be positive");
        const GateValues v = gate_values();
        const double scale = std::max({1.0, std::abs(v.v_plus), std::abs(v.v_minus)});
        const bool plus = std::abs(v.v_plus.real()) < tol * scale;
        const bool minus = std::abs(v.v_minus.real()) < tol * scale;
        GateBranch br = GateBranch::none;
        if (plus && minus) br = GateBranch::both;
        else if (plus) br = GateBranch::plus;
        else if (minus) br = GateBranch::minus;
        return {plus || minus, br};
    }

    // Closed form of lambda * int_gamma sqrt((z-a)(z-b))/z^2 dz over the two
    // homotopy classes of arcs joining the zeros in C*. The leading sign is
    // fixed to +; the class labels tie to the root-sign choice, and
    // period(plus) - period(minus) == 2*pi*i*lambda always.
    C period(PeriodSign sign) const {
        const GateValues v = gate_values();
        const C val = sign == PeriodSign::plus ? v.v_plus : v.v_minus;
        return C(0.0, pi / 2.0) * val;
    }

    // d(phi)/dz at a simple zero, where only the vanishing factor contributes.
    C phi_prime_at_zero(C zero) const {
        const C z2 = zero * zero;
        if (std::abs(zero - a_) <= std::abs(zero - b_))
            return lambda_ * lambda_ * (a_ - b_) / (z2 * z2);
        return lambda_ * lambda_ * (b_ - a_) / (z2 * z2);
    }

    // The three trajectory directions out of a zero: solutions of
    // 3*theta + arg(phi'(zero)) = 0 (mod 2*pi), returned ascending in [0,2*pi).
    std::array<double, 3> launch_directions(C zero) const {
        const double base = -std::arg(phi_prime_at_zero(zero)) / 3.0;
        std::array<double, 3> t{wrap_angle(base), wrap_angle(base + 2.0 * pi / 3.0),
                                wrap_angle(base + 4.0 * pi / 3.0)};
        std::sort(t.begin(), t.end());
        return t;
    }

    double geometry_scale() const { return std::max({std::abs(a_), std::abs(b_), 1.0}); }

private:
    C lambda_, a_, b_;
};

inline QuadDiff qd_new(C lambda, C a, C b) { return QuadDiff(lambda, a, b); }

} // namespace qdflow
