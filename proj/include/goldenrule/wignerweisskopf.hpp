#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "goldenrule/dynamics.hpp"

namespace goldenrule {

// f(w) = |V_m(w)|^2 D(w) on a compact support [lo, hi] containing omega_i.
class CouplingFunction {
public:
    static CouplingFunction flat(double c, double omega_i, double below, double above);
    // c + slope (w - omega_i)
    static CouplingFunction linear(double c, double slope, double omega_i, double below, double above);
    // c (w / w0)^n on [lo, hi]
    static CouplingFunction power_law(double c, double w0, double n, double lo, double hi, double omega_i);
    // Linear interpolation; omega_i must not sit on an interior knot where the
    // slope changes.
    static CouplingFunction tabulated(std::vector<double> omega, std::vector<double> f, double omega_i);
    // CSV with header `omega,f`.
    static CouplingFunction load(const std::filesystem::path& path, double omega_i);

    double operator()(double w) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double omega_i() const { return omega_i_; }
    const std::vector<double>& kinks() const { return kinks_; }

private:
    CouplingFunction(std::function<double(double)> f, double lo, double hi, double omega_i,
                     std::vector<double> kinks);
    std::function<double(double)> f_;
    double lo_, hi_, omega_i_;
    std::vector<double> kinks_;
};

struct WWResult {
    double decay_rate;    // r
    double energy_shift;  // Delta E_i
    cplx omega_bar() const { return {0.5 * decay_rate, energy_shift}; }
};

double ww_rate(const CouplingFunction& f);

// -PV int f(w) / (w - omega_i) dw by symmetric-window subtraction around omega_i.
double principal_value_shift(const CouplingFunction& f, double rel_tol = 1e-8);

// Same quantity from the regularization int f / (w - omega_i - i s eps) with
// eps -> 0 by Richardson extrapolation; s = +1 or -1. The real part gives the
// shift (returned as -Re), the imaginary part tends to s pi f(omega_i).
struct SmearedShift {
    double shift;
    double imaginary;
    double extrapolation_error;
};
SmearedShift principal_value_shift_smeared(const CouplingFunction& f, int sign, double eps0 = 0.0,
                                           int levels = 7);

WWResult ww_analytic(const CouplingFunction& f);

struct WWPoint {
    double t;
    double p;  // |c_i|^2 = e^{-rt}
    cplx c_i;  // e^{-rt/2} e^{-i dE t}
};
std::vector<WWPoint> ww_decay_curve(const WWResult& result, const std::vector<double>& t_grid);

struct WWValidateOptions {
    std::size_t n_levels = 4001;
    std::optional<double> span;  // frequency window width; default: the support of f
    double tol = 1e-9;
    double fit_begin = 2.0;  // in units of 1/r
    double fit_end = 6.0;
};

struct WWValidation {
    double fitted_r;
    double fitted_shift;
    double residual_log;    // rms residual of the ln|c_i| line fit
    double residual_phase;  // rms residual of the phase line fit
    double spacing;
    AmplitudeTrajectory trajectory;
};

// Coupled integration of the discretized f with a constant coupling switched
// on at t = 0; line fits of ln|c_i| and arg c_i over [fit_begin, fit_end]/r.
// Throws DiscretizationError if revivals reach the fit window.
WWValidation nonperturbative_validate(const CouplingFunction& f, const WWValidateOptions& opt = {});

}  // namespace goldenrule
