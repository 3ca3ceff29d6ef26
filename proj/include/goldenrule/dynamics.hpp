#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "goldenrule/ode.hpp"
#include "goldenrule/perturbation.hpp"
#include "goldenrule/spectrum.hpp"

namespace goldenrule {

// Sum of scaled envelopes: V(t) = sum_k evaluate(env_k, V0_k, t).
struct DriveTerm {
    Envelope env;
    double V0;
};

class Drive {
public:
    Drive() = default;
    Drive(const Envelope& env, double V0) : terms_{{env, V0}} {}
    explicit Drive(std::vector<DriveTerm> terms) : terms_(std::move(terms)) {}

    double operator()(double t) const;
    // Exponential components of V(t) before the earliest term starts; used
    // to seed c_f at the start time.
    std::vector<ExpComponent> early_components() const;
    double start_time() const;
    std::vector<double> breakpoints() const;
    const std::vector<DriveTerm>& terms() const { return terms_; }

private:
    std::vector<DriveTerm> terms_;
};

enum class Mode { first_order, coupled };

struct IntegrateOptions {
    Mode mode = Mode::first_order;
    double tol = 1e-9;
    // Spacing of the stored observation grid. 0 selects 2*pi/(20 max|omega_fi|).
    double sample_spacing = 0.0;
    // Times at which the full c_f vector is kept.
    std::vector<double> snapshot_times;
    // Seed c_f(t0) from the exponential early-time components of the drive.
    bool seed = true;
};

struct Snapshot {
    double t;
    cplx c_i;
    std::vector<cplx> c_f;  // interaction-picture amplitudes per level
};

struct AmplitudeTrajectory {
    DiscretizedContinuum continuum;
    Mode mode = Mode::first_order;
    double tol = 0.0;
    double spacing = 0.0;  // observation grid spacing
    std::vector<double> times;
    std::vector<cplx> c_i;
    std::vector<double> population;  // sum_f w_f |c_f|^2
    std::vector<Snapshot> snapshots;
    ode::Stats stats;
    double max_norm_defect = 0.0;  // coupled mode: max | |c_i|^2 + P - 1 |

    const Snapshot& snapshot(double t) const;
};

// Amplitude equations in the interaction picture (V_ff' = 0), with the level
// couplings V_fi(t) = V(t) * m(E_f) and omega_fi = E_f - center. First-order
// mode freezes c_i = 1.
AmplitudeTrajectory integrate(const DiscretizedContinuum& continuum, const Drive& drive,
                              const MatrixElementModel& model, double t0, double t1,
                              const IntegrateOptions& opt = {});
AmplitudeTrajectory integrate(const DiscretizedContinuum& continuum, const Envelope& env, double V0,
                              const MatrixElementModel& model, double t0, double t1,
                              const IntegrateOptions& opt = {});

struct RateEstimate {
    double value;
    bool edge;  // one-sided stencil used
};

// d/dt sum_f w_f |c_f|^2 by a 4th-order finite difference on the observation grid.
RateEstimate transition_rate(const AmplitudeTrajectory& traj, double t);
// Linear interpolation helpers on the observation grid.
double population_at(const AmplitudeTrajectory& traj, double t);
cplx ci_at(const AmplitudeTrajectory& traj, double t);

// -i V e^{(i w + g) t} / (i w + g)
cplx analytic_cf_rising_exp(double V_fi, double omega_fi, double gamma, double t);

double golden_rule_rate(double Vm_sq, double D_at_Ei);

// 2 pi |V(t)|^2 <|m(E_i)|^2> D(E_i). Channelled models supply their own total
// density; otherwise `dos` is used.
double golden_rule_following(const Drive& drive, const MatrixElementModel& model,
                             const DensityOfStates& dos, double E_i, double t);
double golden_rule_following(const Envelope& env, double V0, const MatrixElementModel& model,
                             const DensityOfStates& dos, double E_i, double t);

struct Depletion {
    double analytic;  // pi |V_m(t)|^2 D / Gamma
    double integral;  // int_{-inf}^t of the following rate
};
Depletion depletion(const Envelope& env, double V0, double Vm_sq, double D, double Gamma, double t);

struct ValidityReport {
    double rate = 0.0;
    double left_margin = 0.0;   // (r/2) / gamma
    double right_margin = 0.0;  // gamma / |dE/dlnD|, 0 for an unbounded scale
    LogDerivativeScale scale;
    double threshold = 0.1;
    bool pass = false;
};
ValidityReport validity_report(double Vm_sq, const DensityOfStates& dos, double E_i, double gamma,
                               double threshold = 0.1);

struct RateReport {
    double t = 0.0;
    double r_numeric = 0.0;
    double r_analytic = 0.0;
    double following_ratio = 0.0;
    double depletion = 0.0;
    double validity_left_margin = 0.0;
    double validity_right_margin = 0.0;
    bool pass = false;
};

struct HarmonicPrediction {
    double rate = 0.0;
    bool absorption = false;  // E_i + omega inside the DOS support
    bool emission = false;    // E_i - omega inside the DOS support
    double neglected_bound = 0.0;  // gamma / (2 omega)
    bool no_channel() const { return !absorption && !emission; }
};
HarmonicPrediction harmonic_rate_prediction(double Vm_sq, const DensityOfStates& dos, double E_i,
                                            double omega_carrier, double gamma = 0.0);

// 2 pi |sum_k w_k V0 e^{gamma_k t}|^2 Vm_sq D(E_i)
double superposition_rate_prediction(const Envelope& env, double V0, double Vm_sq, double D_at_Ei,
                                     double t);

// Columns t, re_ci, im_ci, norm_ci_sq, sum_cf_sq, r_numeric, r_analytic, following_ratio.
// `predict` gives r_analytic(t); `header` lines are written as comments.
std::string trajectory_csv(const AmplitudeTrajectory& traj, const std::function<double(double)>& predict,
                           const std::vector<std::string>& header = {}, std::size_t stride = 1);

}  // namespace goldenrule
