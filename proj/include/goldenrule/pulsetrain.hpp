#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "goldenrule/dynamics.hpp"
#include "goldenrule/quadrature.hpp"

namespace goldenrule {

// One pulse of a train. The envelope's own t_ref is replaced by `center`.
struct Pulse {
    double center;
    Envelope env;
    double V0;
};

struct PulseTrain {
    std::vector<Pulse> pulses;

    std::vector<double> separations() const;
    Drive drive() const;
    double start_time() const;
    double end_time() const;
};

// Time interval outside which |V| < 1e-16 of its peak. Throws UnsupportedShape
// for shapes with no finite extent.
std::pair<double, double> pulse_extent(const Envelope& env);

// Normalized overlap int |V_a V_b| dt / sqrt(int V_a^2 int V_b^2).
double pulse_overlap(const Pulse& a, const Pulse& b);

// Centers strictly increasing, consecutive overlaps <= max_overlap.
void validate(const PulseTrain& train, double max_overlap = 1e-6);

// Change of c_f caused by a pulse in isolation:
// -i m(E_f) V~(omega_fi) c_i with V~(w) = V0 e^{i w t_ref} s~(w), E_f = E_i + omega_fi.
cplx pulse_kick(const Envelope& env, double V0, const MatrixElementModel& model, double omega_fi,
                cplx c_i, double E_i = 0.0);

// Integration window for the cross-term integral when the DOS support is unbounded.
struct Window {
    double lo;
    double hi;
};

// I(T) = int D(w_f) |s~(w_f - w_i)|^2 e^{i (w_f - w_i) T} dw_f, by adaptive
// quadrature split at w_i, with whole-period summation when T * span > 50.
cplx cross_term_integral(const Envelope& env, const DensityOfStates& dos, double omega_i, double T,
                         std::optional<Window> window = std::nullopt, const quad::Options& opt = {1e-13, 1e-10, 20000});

// Closed forms with D taken at w_i and the range extended to the whole axis.
// Exponential pair: pi (g+ + g-) / (g+ - g-) [e^{-g- T}/g- - e^{-g+ T}/g+] D,
// limit 2 pi e^{-g T} (1 + g T) / g at g+ = g-; Gaussian: sqrt(2 pi)/tau
// e^{-T^2/2tau^2} D; rectangular: 0 (exact for T >= pulse width).
cplx cross_term_closed_form(const Envelope& env, double D_at_omega_i, double T);

struct AdditivityResult {
    double defect;       // |a - b| / a
    double full;         // (a) sum_f w_f |c_f|^2 after the train, coupled integration
    double additive;     // (b) sum over pulses of kicks scaled by p_i at each center
    std::vector<double> p_at_centers;
    AmplitudeTrajectory trajectory;
};

AdditivityResult additivity_defect(const PulseTrain& train, const DiscretizedContinuum& continuum,
                                   const MatrixElementModel& model, double tol = 1e-9);

struct DecayCurve {
    std::vector<double> times;
    std::vector<double> p_i;
    std::vector<double> rbar;
};

// p_i(t) = p0 exp(-int_{t_0}^t rbar), exponent by adaptive Simpson (1e-10).
DecayCurve generalized_decay(const std::function<double(double)>& rbar, double p0,
                             const std::vector<double>& t_grid);
// rbar(t) = 2 pi |V(t)|^2 <|m(E_i)|^2> D(E_i) for the train's drive.
DecayCurve generalized_decay(const PulseTrain& train, const MatrixElementModel& model,
                             const DensityOfStates& dos, double E_i, double p0,
                             const std::vector<double>& t_grid);

std::string decay_curve_csv(const DecayCurve& curve, const std::vector<std::string>& header = {});

}  // namespace goldenrule
