#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "goldenrule/spectrum.hpp"

namespace goldenrule {

using cplx = std::complex<double>;

// Envelope shapes. Times are measured from Envelope::t_ref.
struct RisingExp {
    double gamma;
};
struct TwoSidedExp {
    double gamma_minus;
    double gamma_plus;
    double v_minus = 1.0;
    double v_plus = 1.0;
};
// V / (tau sqrt(pi)) exp(-(t/tau)^2): unit area for V = 1.
struct GaussianPulse {
    double tau;
};
// Support [-T/2, T/2).
struct RectangularPulse {
    double T;
};
struct Segment {
    double duration;
    double level;
};
// Consecutive segments starting at t_ref; zero outside.
struct PiecewiseConstant {
    std::vector<Segment> segments;
};
struct ExpTerm {
    double gamma;
    double weight;
};
struct ExpSuperposition {
    std::vector<ExpTerm> terms;
};
// 2 e^{gamma t} cos(omega t) = e^{gamma t} (e^{-i omega t} + e^{+i omega t}).
struct HarmonicRisingExp {
    double gamma;
    double omega;
};

using EnvelopeShape = std::variant<RisingExp, TwoSidedExp, GaussianPulse, RectangularPulse,
                                   PiecewiseConstant, ExpSuperposition, HarmonicRisingExp>;

struct Envelope {
    EnvelopeShape shape;
    double t_ref = 0.0;
};

// Throws DomainError on non-positive rate constants, empty lists or
// superposition weights that do not sum to 1.
void validate(const Envelope& env);
std::string shape_name(const Envelope& env);

// V(t) for an envelope scaled by V0.
double evaluate(const Envelope& env, double V0, double t);

// One term A e^{lambda t} of the early-time expansion of V(t) (absolute time).
struct ExpComponent {
    cplx amplitude;
    cplx lambda;
};

// Exact representation of V(t) for t <= t_ref as a sum of complex exponentials.
// Empty for shapes that vanish before their support (Gaussian is treated as
// zero before start_time()).
std::vector<ExpComponent> early_components(const Envelope& env, double V0);

// Recommended integration start: V(t0)/V_peak <= 1e-6 for exponential
// shapes (exactly represented by early_components), or before the support.
double start_time(const Envelope& env);
// Times where V(t) or its derivative jumps.
std::vector<double> breakpoints(const Envelope& env);

// Fourier transform of the unit shape, s~(omega) = int s(t) e^{+i omega t} dt,
// with time measured from t_ref.
cplx spectral_shape(const Envelope& env, double omega);
// |s~(omega)|^2 for TwoSidedExp (v- = v+ = 1), Gaussian and Rectangular.
double spectral_shape_sq(const Envelope& env, double omega);

// Matrix-element models. The value m(E) multiplies the envelope: V_fi(t) =
// evaluate(env, V0, t) * m(E_f).
class Profile {
public:
    Profile() = default;
    explicit Profile(double constant) : constant_(constant) {}
    Profile(std::vector<double> E, std::vector<double> value);
    double operator()(double E) const;
    bool tabulated() const { return !E_.empty(); }
    double constant() const { return constant_; }

private:
    double constant_ = 1.0;
    std::vector<double> E_;
    std::vector<double> value_;
};

struct ConstantCoupling {
    double Vm = 1.0;
};
struct EnergyDependentCoupling {
    Profile Vm;
};
struct Channel {
    std::string label;
    Profile Vm;
    DensityOfStates D;
};
struct ChannelledCoupling {
    std::vector<Channel> channels;
};

using MatrixElementModel = std::variant<ConstantCoupling, EnergyDependentCoupling, ChannelledCoupling>;

// CSV with columns sigma,E,V,D: one channel per distinct sigma, tabulated in E.
MatrixElementModel load_channelled(const std::filesystem::path& path);

struct AveragedCoupling {
    double Vm_sq;
    double total_D;  // 0 for non-channelled models (caller supplies the DOS)
};

// Channel-weighted mean of |V_m|^2 and total density at E.
AveragedCoupling averaged_sq_matrix_element(const MatrixElementModel& model, double E);

// Effective coupling magnitude sqrt(<|V_m|^2>) at E, used for one level of a
// discretized continuum: with V_ff' = 0 the channels at one energy couple to
// the initial state only through this bright combination.
double effective_coupling(const MatrixElementModel& model, double E);

}  // namespace goldenrule
