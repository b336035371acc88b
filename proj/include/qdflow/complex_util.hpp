#pragma once

#include <cmath>
#include <complex>

namespace qdflow {

using C = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

inline bool is_finite(C z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Angle wrapped into [0, 2*pi).
inline double wrap_angle(double t) {
    t = std::fmod(t, 2.0 * pi);
    if (t < 0.0) t += 2.0 * pi;
    return t;
}

// Smallest absolute difference between two angles.
inline double angle_gap(double s, double t) {
    double d = wrap_angle(s - t);
    return std::min(d, 2.0 * pi - d);
}

inline C unit(C z) {
    const double m = std::abs(z);
    return m > 0.0 ? z / m : C(1.0, 0.0);
}

} // namespace qdflow
