#pragma once

#include <filesystem>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

namespace goldenrule {

// D(E) = D0 * (E / E0)^n, defined for E > 0.
struct PowerLawDos {
    double D0 = 1.0;
    double E0 = 1.0;
    double n = 0.0;
};

struct ConstantDos {
    double D0 = 1.0;
};

// Linear interpolation between knots; support is [E.front(), E.back()].
struct TabulatedDos {
    std::vector<double> E;
    std::vector<double> D;
};

using DensityOfStates = std::variant<PowerLawDos, ConstantDos, TabulatedDos>;

// Validating constructors (throw DomainError on invariant violations).
DensityOfStates make_power_law(double D0, double E0, double n);
DensityOfStates make_constant(double D0);
DensityOfStates make_tabulated(std::vector<double> E, std::vector<double> D);
// Two-column CSV with header `E,D`.
DensityOfStates load_tabulated_dos(const std::filesystem::path& path);

struct Support {
    double lo;
    double hi;  // may be +inf
    bool lo_open;
    bool contains(double E) const { return (lo_open ? E > lo : E >= lo) && E <= hi; }
};

Support support(const DensityOfStates& dos);
double dos_value(const DensityOfStates& dos, double E);
// dD/dE. Tabulated: slope of the adjacent segment (right one at interior knots).
double dos_derivative(const DensityOfStates& dos, double E);

// Normalized Lorentzian (1/pi) G / (E^2 + G^2).
double lorentzian(double E, double Gamma);

// Finite set of levels standing in for the continuum. weights[k] approximates
// the measure D(E) dE attached to level k.
struct DiscretizedContinuum {
    std::vector<double> energies;
    std::vector<double> weights;
    double center = 0.0;
    double lower = 0.0;  // window [lower, upper]
    double upper = 0.0;
    double spacing = 0.0;
    std::size_t center_index = 0;

    std::size_t size() const { return energies.size(); }
    double halfwidth() const { return 0.5 * (upper - lower); }
};

// Uniform grid on [center-W, center+W] with a level at the center. Weights are
// D(E_k) dE with endpoint corrections (Gregory 3/8, 7/6, 23/24 for n >= 7,
// trapezoid below that) so that sum(weights) reproduces the integral of D.
DiscretizedContinuum discretize(const DensityOfStates& dos, double center, double halfwidth,
                                std::size_t n_levels);

// Asymmetric window [center-below, center+above] with the given level spacing.
// `below` and `above` are rounded to whole multiples of the spacing.
DiscretizedContinuum discretize_window(const DensityOfStates& dos, double center, double below,
                                       double above, double spacing);

// Same grid construction for an arbitrary non-negative density (e.g. a
// coupling function |V|^2 D).
DiscretizedContinuum discretize_function(const std::function<double(double)>& density, double center,
                                         double below, double above, double spacing);

// |dE / d ln D| = D / |D'|. A constant density has no finite scale; that case
// is carried as a flag, never as a floating infinity.
struct LogDerivativeScale {
    bool infinite = false;
    double value = 0.0;
    bool one_sided = false;  // tabulated knot or edge: one-sided estimate

    static LogDerivativeScale unbounded() { return {true, 0.0, false}; }
};

LogDerivativeScale dos_log_derivative_scale(const DensityOfStates& dos, double E);

}  // namespace goldenrule
