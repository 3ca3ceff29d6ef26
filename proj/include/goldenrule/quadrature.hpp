#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace goldenrule::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

template <typename T>
struct Result {
    T value{};
    double error = 0.0;
    int intervals = 0;
};

using RealResult = Result<double>;
using ComplexResult = Result<std::complex<double>>;

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

// Globally adaptive Gauss-Kronrod (10/21) on [a,b]. Throws ToleranceFailure
// when the interval budget is exhausted before the tolerance is met.
RealResult integrate(const RealFn& f, double a, double b, const Options& opt = {});
ComplexResult integrate(const ComplexFn& f, double a, double b, const Options& opt = {});

// Same, with the range split at the given interior break points first
// (kinks, singular-looking points, peaks). Points outside (a,b) are ignored.
RealResult integrate(const RealFn& f, double a, double b, std::span<const double> breaks,
                     const Options& opt = {});
ComplexResult integrate(const ComplexFn& f, double a, double b, std::span<const double> breaks,
                        const Options& opt = {});

// Integrand with an oscillatory factor of angular frequency `omega` (in the
// integration variable). The range is cut into whole periods measured from
// `anchor`, each period integrated adaptively and consecutive periods summed
// in pairs. Used when omega * (b - a) is large.
ComplexResult integrate_periods(const ComplexFn& f, double a, double b, double anchor,
                                double omega, const Options& opt = {});

// Adaptive Simpson on [a,b] to absolute tolerance `tol`.
double simpson(const RealFn& f, double a, double b, double tol, int max_depth = 50);

}  // namespace goldenrule::quad
