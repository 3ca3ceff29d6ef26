#pragma once

#include <stdexcept>
#include <string>

namespace goldenrule {

// Precondition on a physical parameter or energy lies outside its domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Argument outside the guarded evaluation range of a special function.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// An operation was asked for an envelope kind it has no formula for.
class UnsupportedShape : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The spectrum is degenerate at the requested energy (zero total density).
class DegenerateSpectrum : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Base for failures of the numerical machinery itself; maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature did not meet its tolerance. Carries the best estimate reached.
class ToleranceFailure : public NumericalError {
public:
    ToleranceFailure(const std::string& what, double estimate, double error_estimate)
        : NumericalError(what), estimate_(estimate), error_estimate_(error_estimate) {}
    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

// Step size underflow in the ODE integrator. `phase_per_step` is the largest
// |omega_fi| * dt at the point of failure.
class StiffnessError : public NumericalError {
public:
    StiffnessError(const std::string& what, double t, double dt, double phase_per_step)
        : NumericalError(what), t_(t), dt_(dt), phase_per_step_(phase_per_step) {}
    double time() const noexcept { return t_; }
    double step() const noexcept { return dt_; }
    double phase_per_step() const noexcept { return phase_per_step_; }

private:
    double t_;
    double dt_;
    double phase_per_step_;
};

// A discretized continuum is too coarse for the requested time window
// (revivals at 2*pi/level_spacing enter the fit window).
class DiscretizationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Finite integration window is too small: result drifts with the window.
class WindowError : public NumericalError {
public:
    WindowError(const std::string& what, double drift) : NumericalError(what), drift_(drift) {}
    double drift() const noexcept { return drift_; }

private:
    double drift_;
};

[[noreturn]] void throw_domain(const std::string& where, const std::string& what);

}  // namespace goldenrule
