#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qdflow {

// Base for everything thrown by the library. Parameter/input problems derive
// from BadInput (CLI exit code 2), numerical breakdowns from NumericalFailure
// (CLI exit code 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BadInput : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class TrackerUninitialized : public BadInput {
public:
    TrackerUninitialized() : BadInput("branch tracker used before seeding") {}
};

class NonFiniteSample : public NumericalFailure {
public:
    explicit NonFiniteSample(std::complex<double> at)
        : NumericalFailure("integrand returned a non-finite value at (" +
                           std::to_string(at.real()) + ", " + std::to_string(at.imag()) + ")") {}
};

class StepUnderflow : public NumericalFailure {
public:
    StepUnderflow(std::complex<double> at, double h)
        : NumericalFailure("adaptive step size underflow (h = " + std::to_string(h) + ")"),
          location(at), step(h) {}
    std::complex<double> location;
    double step;
};

class DegenerateParameters : public BadInput {
public:
    explicit DegenerateParameters(const std::string& which)
        : BadInput("degenerate parameters: " + which), constraint(which) {}
    std::string constraint;
};

class LaunchFromPole : public BadInput {
public:
    LaunchFromPole() : BadInput("cannot launch a trajectory from the pole at the origin") {}
};

class OriginEvaluation : public BadInput {
public:
    OriginEvaluation() : BadInput("evaluation at z = 0 is not defined") {}
};

class DegenerateDiscriminant : public BadInput {
public:
    explicit DegenerateDiscriminant(const std::string& why)
        : BadInput("degenerate discriminant: " + why) {}
};

class NotShortTrajectory : public BadInput {
public:
    NotShortTrajectory() : BadInput("path endpoints are not the two roots of the discriminant") {}
};

class NoShortTrajectory : public NumericalFailure {
public:
    NoShortTrajectory() : NumericalFailure("no short trajectory found for these parameters") {}
};

class NoConvergence : public NumericalFailure {
public:
    NoConvergence(int sweeps, double worst)
        : NumericalFailure("root finder failed to converge after " + std::to_string(sweeps) +
                           " sweeps (worst residual " + std::to_string(worst) + ")"),
          worst_residual(worst) {}
    double worst_residual;
};

class SupportCollision : public BadInput {
public:
    SupportCollision() : BadInput("evaluation point collides with a support point") {}
};

class OpenBoundary : public BadInput {
public:
    explicit OpenBoundary(double gap)
        : BadInput("face boundary does not close (gap " + std::to_string(gap) + ")") {}
};

class EmptyScene : public BadInput {
public:
    EmptyScene() : BadInput("scene has no curves and no markers") {}
};

class EvalOverflow : public NumericalFailure {
public:
    EvalOverflow() : NumericalFailure("polynomial evaluation overflowed double range") {}
};

} // namespace qdflow
