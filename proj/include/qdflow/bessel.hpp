#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qdflow/complex_util.hpp"
#include "qdflow/errors.hpp"
#include "qdflow/motherbody.hpp"
#include "qdflow/quaddiff.hpp"
#include "qdflow/trace.hpp"

namespace qdflow {

// Falling factorial x(x-1)...(x-k+1).
inline C falling_factorial(C x, int k) {
    C p = 1.0;
    for (int j = 0; j < k; ++j) p *= x - double(j);
    return p;
}

// Generalised binomial coefficient C(x, m) for complex x, integer m >= 0.
inline C binomial(C x, int m) {
    C p = 1.0;
    for (int j = 0; j < m; ++j) p *= (x - double(j)) / double(j + 1);
    return p;
}

// Coefficients C(n,k) (n+k+alpha-2)^(k) in the monomial basis, ascending.
struct BesselPolynomial {
    int n = 0;
    C alpha{};
    std::vector<C> coeffs;
};

inline BesselPolynomial bessel_coeffs(int n, C alpha) {
    if (n < 0) throw BadInput("degree must be nonnegative");
    BesselPolynomial p{n, alpha, std::vector<C>(static_cast<std::size_t>(n) + 1)};
    p.coeffs[0] = 1.0;
    for (int k = 1; k <= n; ++k)
        p.coeffs[static_cast<std::size_t>(k)] =
            p.coeffs[static_cast<std::size_t>(k - 1)] *
            (double(n - k + 1) / double(k)) * (double(n + k - 2) + alpha);
    return p;
}

struct BesselEval {
    C value, derivative, second;
};

// Horner evaluation of B, B', B''. Coefficients are pre-scaled by the largest
// magnitude to delay overflow and the result rescaled; a non-finite rescale
// reports EvalOverflow.
inline BesselEval bessel_eval(const BesselPolynomial& p, C z) {
    double scale = 0.0;
    for (const C& c : p.coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return {0.0, 0.0, 0.0};
    C v = 0.0, d = 0.0, s = 0.0;
    for (std::size_t i = p.coeffs.size(); i-- > 0;) {
        s = s * z + d;
        d = d * z + v;
        v = v * z + p.coeffs[i] / scale;
    }
    BesselEval out{v * scale, d * scale, 2.0 * s * scale};
    if (!is_finite(out.value) || !is_finite(out.derivative) || !is_finite(out.second))
        throw EvalOverflow();
    return out;
}

// |z^2 B'' + (alpha z + 1) B' - n (n + alpha - 1) B| over the magnitude of
// the three terms.
inline double ode_residual(const BesselPolynomial& p, C z) {
    if (p.n < 1) throw BadInput("ODE residual needs degree >= 1");
    const BesselEval e = bessel_eval(p, z);
    const C t1 = z * z * e.second;
    const C t2 = (p.alpha * z + 1.0) * e.derivative;
    const C t3 = -double(p.n) * (double(p.n) + p.alpha - 1.0) * e.value;
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
    const double r = std::abs(t1 + t2 + t3);
    return scale > 0.0 ? r / scale : r;
}

// Residual of the degree-consistent three-term recurrence
//   (n+alpha-1)(2n+alpha-2) B_{n+1}
//     = ((2n+alpha)(2n+alpha-2) z + alpha - 2)(2n+alpha-1) B_n
//       + n(2n+alpha) B_{n-1}.
// The printed source has B_n on the left, which degree counting rules out;
// the leading-coefficient identity pins the B_{n+1} reading.
inline double recurrence_residual(int n, C alpha, C z) {
    if (n < 1) throw BadInput("recurrence residual needs n >= 1");
    const C b_next = bessel_eval(bessel_coeffs(n + 1, alpha), z).value;
    const C b_cur = bessel_eval(bessel_coeffs(n, alpha), z).value;
    const C b_prev = bessel_eval(bessel_coeffs(n - 1, alpha), z).value;
    const C w = 2.0 * double(n) + alpha;
    const C lhs = (double(n) + alpha - 1.0) * (w - 2.0) * b_next;
    const C rhs = ((w * (w - 2.0)) * z + alpha - 2.0) * (w - 1.0) * b_cur +
                  double(n) * w * b_prev;
    const double scale = std::abs(lhs) + std::abs(rhs);
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
}

// Laguerre polynomial from its explicit sum, complex upper binomial argument.
inline C laguerre_eval(int n, C beta, C x) {
    C acc = 0.0;
    double kfact = 1.0;
    C xk = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            kfact *= double(k);
            xk *= -x;
        }
        acc += binomial(double(n) + beta, n - k) * xk / kfact;
    }
    return acc;
}

// Relative residual of the rescaled-Laguerre identity
//   B_n^(alpha)(z) = n! (-z)^n L_n^(-2n-alpha+1)(1/z).
// Convention (argument 1/z, prefactor n!(-1)^n) resolved symbolically at
// n = 1: B_1 = 1 + alpha z and 1!(-z) L_1^(-alpha-1)(1/z) = -z(-alpha - 1/z).
inline double laguerre_link_residual(int n, C alpha, C z) {
    if (z == C(0.0)) throw OriginEvaluation();
    const C lhs = bessel_eval(bessel_coeffs(n, alpha), z).value;
    double nfact = 1.0;
    for (int k = 2; k <= n; ++k) nfact *= double(k);
    const C rhs = nfact * std::pow(-z, double(n)) *
                  laguerre_eval(n, -2.0 * double(n) - alpha + 1.0, 1.0 / z);
    const double scale = std::abs(lhs) + std::abs(rhs);
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
}

// Uniform probability measure on a finite point set.
struct EmpiricalMeasure {
    std::vector<C> points;
    double weight() const { return points.empty() ? 0.0 : 1.0 / double(points.size()); }
};

// All zeros by Aberth-Ehrlich simultaneous iteration on the max-normalised
// coefficients: initial guesses on a Cauchy-bound circle with golden-angle
// spacing, convergence when every correction drops under 1e-12 (1 + |z|),
// every zero certified against the local coefficient scale.
inline EmpiricalMeasure bessel_zeros(const BesselPolynomial& poly) {
    const int n = poly.n;
    if (n < 1) throw BadInput("zero finding needs degree >= 1");
    double scale = 0.0;
    for (const C& c : poly.coeffs) scale = std::max(scale, std::abs(c));
    const C lead = poly.coeffs.back();
    if (lead == C(0.0) || !(scale > 0.0)) throw BadInput("leading coefficient vanishes");

    std::vector<C> c(poly.coeffs.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = poly.coeffs[i] / scale;

    double radius = 0.0;
    for (int k = 0; k < n; ++k) {
        const double ratio = std::abs(poly.coeffs[static_cast<std::size_t>(k)] / lead);
        radius = std::max(radius, std::pow(ratio, 1.0 / double(n - k)));
    }
    radius += 1.0;

    const double golden = pi * (3.0 - std::sqrt(5.0));
    std::vector<C> roots(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        roots[static_cast<std::size_t>(j)] = std::polar(radius, golden * double(j) + 0.5);

    auto eval = [&](C z, C& value, C& deriv) {
        value = 0.0;
        deriv = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) {
            deriv = deriv * z + value;
            value = value * z + c[i];
        }
    };

    const int max_sweeps = 500;
    double worst = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_corr = 0.0;
        for (int i = 0; i < n; ++i) {
            C& zi = roots[static_cast<std::size_t>(i)];
            C value, deriv;
            eval(zi, value, deriv);
            if (value == C(0.0)) continue;
            if (deriv == C(0.0)) {
                zi += C(1e-8, 1e-8);
                continue;
            }
            const C newton = value / deriv;
            C repulse = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) repulse += 1.0 / (zi - roots[static_cast<std::size_t>(j)]);
            const C denom = 1.0 - newton * repulse;
            const C corr = denom == C(0.0) ? newton : newton / denom;
            zi -= corr;
            max_corr = std::max(max_corr, std::abs(corr) / (1.0 + std::abs(zi)));
        }
        worst = max_corr;
        if (max_corr < 1e-12) break;
        if (sweep == max_sweeps - 1) throw NoConvergence(max_sweeps, worst);
    }

    for (const C& z : roots) {
        C value, deriv;
        eval(z, value, deriv);
        double local = 0.0, zp = 1.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            local += std::abs(c[i]) * zp;
            zp *= std::abs(z);
        }
        if (std::abs(value) > 1e-8 * local) throw NoConvergence(max_sweeps, std::abs(value) / local);
    }

    EmpiricalMeasure m;
    m.points = std::move(roots);
    std::sort(m.points.begin(), m.points.end(), [](C u, C v) {
        return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
    });
    return m;
}

// (1/n) sum 1/(z - z_k); equals the normalised logarithmic derivative
// B'(z) / (n B(z)) when the points are the zeros of B.
inline C cauchy_transform(const EmpiricalMeasure& m, C z) {
    if (m.points.empty()) throw BadInput("empty measure");
    C acc = 0.0;
    for (const C& p : m.points) {
        if (std::abs(z - p) < 1e-9) throw SupportCollision();
        acc += 1.0 / (z - p);
    }
    return acc * m.weight();
}

// Varying-parameter family: alpha_n = A n, A away from -1 and -2.
class FamilyParameter {
public:
    explicit FamilyParameter(C A) : A_(A) {
        if (std::abs(A + 1.0) < 1e-9) throw DegenerateParameters("A = -1");
        if (std::abs(A + 2.0) < 1e-9) throw DegenerateParameters("A = -2");
    }
    C value() const { return A_; }

private:
    C A_;
};

inline AlgebraicEquation family_equation(const FamilyParameter& A) {
    return AlgebraicEquation(-A.value(), C(-1.0), -(A.value() + 1.0));
}

inline QuadDiff family_quaddiff(const FamilyParameter& A) {
    return to_quaddiff(family_equation(A));
}

// |z^2 C^2 + (A z + 1) C - A - 1| with C the Cauchy transform of the zeros of
// B_n^(An); z must stay away from the zero cluster.
inline double algebraic_residual(const FamilyParameter& A, int n, C z) {
    const EmpiricalMeasure m = bessel_zeros(bessel_coeffs(n, A.value() * double(n)));
    const C c = cauchy_transform(m, z);
    return std::abs(z * z * c * c + (A.value() * z + 1.0) * c - A.value() - 1.0);
}

struct OverlayStats {
    double max_dist = 0.0;
    double mean_dist = 0.0;
};

// Distance statistics between the zeros of B_n^(An) and the traced short
// trajectory (or the union of both, for real A), normalised by the
// trajectory diameter.
inline OverlayStats overlay_distance(const FamilyParameter& A, int n,
                                     const TraceOptions& opt = {}) {
    if (n < 1) throw BadInput("overlay needs n >= 1");
    const CriticalGraph g = critical_graph(family_quaddiff(A), opt);
    if (g.short_trajectories.empty()) throw NoShortTrajectory();

    std::vector<C> support_vertices;
    for (const auto& st : g.short_trajectories)
        support_vertices.insert(support_vertices.end(), st.path.path.points.begin(),
                                st.path.path.points.end());
    const double diameter = max_pairwise_distance(support_vertices);
    if (!(diameter > 0.0)) throw NumericalFailure("degenerate trajectory diameter");

    const EmpiricalMeasure m = bessel_zeros(bessel_coeffs(n, A.value() * double(n)));
    OverlayStats stats;
    for (const C& z : m.points) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& st : g.short_trajectories)
            d = std::min(d, point_path_distance(z, st.path.path));
        stats.max_dist = std::max(stats.max_dist, d);
        stats.mean_dist += d;
    }
    stats.mean_dist /= double(m.points.size());
    stats.max_dist /= diameter;
    stats.mean_dist /= diameter;
    return stats;
}

} // namespace qdflow
