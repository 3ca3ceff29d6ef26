#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "goldenrule/dynamics.hpp"
#include "goldenrule/spectrum.hpp"

namespace goldenrule::scenario {

// Every violation found while loading a config, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

enum class Kind {
    golden_rule,
    two_sided_pulse,
    harmonic,
    superposition,
    pulse_train,
    decay_law,
    ww,
    airy_check,
    ionization,
    validity_sweep,
    cross_terms,
    energy_normalization,
};

std::string kind_name(Kind k);
std::optional<Kind> parse_kind(const std::string& s);
std::vector<Kind> all_kinds();

// Continuum shared by the amplitude-equation kinds. Energies in absolute
// units; the halfwidth is given as a multiple of the kind's rate constant.
struct ContinuumSpec {
    DensityOfStates dos = ConstantDos{1.0};
    double E_i = 0.0;
    double halfwidth_factor = 50.0;
    std::size_t n_levels = 2001;
};

struct GoldenRuleParams {
    ContinuumSpec continuum;
    double gamma = 1.0;
    double rate_fraction = 0.01;  // r = rate_fraction * gamma at t = 0
    double t_end = 2.0;           // in units of 1/gamma
    double depletion_limit = 0.1;
    Mode mode = Mode::first_order;
    double tolerance = 0.02;
};

struct MarginPoint {
    double left_margin;
    double bound;
    bool above;  // error must exceed the bound instead of staying below it
};

struct ValiditySweepParams {
    ContinuumSpec continuum{ConstantDos{1.0}, 0.0, 400.0, 16001};
    double rate = 1.0;  // r at t = 0
    std::vector<MarginPoint> points;
};

struct TwoSidedParams {
    ContinuumSpec continuum{ConstantDos{1.0}, 0.0, 100.0, 4001};
    double gamma_plus = 1.0;
    std::vector<double> gamma_minus{0.5, 2.0};
    double V0 = 0.1;
    double window_begin = 3.0;  // in units of 1/gamma_plus
    double window_end = 5.0;
    double edge_tolerance = 0.02;
    double decay_tolerance = 0.03;
};

struct HarmonicParams {
    ContinuumSpec continuum{PowerLawDos{1.0, 100.0, 0.5}, 100.0, 90.0, 3601};
    double gamma = 1.0;
    double carrier_factor = 20.0;  // omega = carrier_factor * gamma
    double V0 = 1e-3;
    std::vector<double> times{-2.0, -1.0, 0.0, 0.5};  // in units of 1/gamma
    double tolerance = 0.02;
};

struct SuperpositionParams {
    ContinuumSpec continuum{ConstantDos{1.0}, 0.0, 50.0, 6001};  // halfwidth in units of the largest gamma
    std::vector<ExpTerm> terms{{0.01, 0.5}, {0.03, 0.5}};
    double rate_fraction = 0.01;  // r(0) relative to the smallest gamma
    double t_begin = -300.0;
    double t_end = 50.0;
    std::size_t checkpoints = 36;
    double tolerance = 0.02;
};

struct PulseTrainParams {
    std::size_t pulses = 10;
    double tau = 1.0;
    double separation = 6.0;  // in units of tau
    double final_population = 0.5;
    double D = 1.0;
    double halfwidth = 10.0;  // in units of 1/tau
    double level_spacing = 0.02;  // in units of 1/tau
    double additivity_tolerance = 1e-3;
    double decay_tolerance = 0.02;
};

struct DecayLawParams {
    double tau = 1.0;  // Gaussian pulse
    double final_population = 0.2;
    double D = 1.0;
    double halfwidth = 20.0;  // in units of 1/tau
    double level_spacing = 0.02;
    double tolerance = 0.02;
};

struct CouplingSpec {
    std::string kind = "flat";  // flat, linear or file
    double slope = 0.0;         // linear: df/domega in units of f(omega_i)/r
    std::filesystem::path file;
};

struct WWParams {
    CouplingSpec coupling;
    double rate = 1.0;
    double omega_i = 2000.0;
    double below = 100.0;  // support edges, in units of r
    double above = 100.0;
    double spacing_fraction = 0.05;  // level spacing in units of r
    double min_scale_ratio = 1e3;    // omega_i / r
    double fit_begin = 2.0;
    double fit_end = 6.0;
    double pointwise_begin = 2.0;
    double pointwise_end = 5.0;
    double rate_tolerance = 0.02;
    double pointwise_tolerance = 0.03;
    double shift_tolerance = 0.05;
};

struct AiryCheckParams {
    double F = 1.0;
    double m = 1.0;
    double E1 = 0.0;
    std::vector<double> kernel_widths{0.5, 0.25};  // in units of F a
    double overlap_tolerance = 0.01;
    std::size_t oracle_points = 50;
    double x_min = -10.0;
    double x_max = 5.0;
    double oracle_tolerance = 1e-8;
};

struct IonizationParams {
    double kappa = 1.0;
    double m = 1.0;
    double F = 0.05;
    int box_level = 400;
    double weak_field_limit = 0.1;
    double tolerance = 0.03;
    double identity_tolerance = 1e-6;
    std::size_t dump_points = 2001;
};

struct CrossTermsParams {
    double D = 1.0;
    double gamma_minus = 0.5;
    double gamma_plus = 1.0;
    double tau = 1.0;
    double width = 1.0;
    std::vector<double> exp_separations{0.0, 1.0, 2.0, 4.0, 6.0};
    std::vector<double> gaussian_separations{0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<double> rect_separations{1.0, 2.0, 3.0, 4.0, 5.0};
    double exp_window = 2000.0;
    double gaussian_window = 50.0;
    double rect_window = 100.0;
    double tolerance = 0.01;
    double rect_tolerance = 0.02;
};

struct EnergyNormalizationParams {
    double V0 = 0.1;
    double b = 1.0;
    double m = 1.0;
    double k = 1.3;
    double area = 50.0;
    int n_angles = 256;
    double tolerance = 1e-6;
};

using KindParams = std::variant<GoldenRuleParams, TwoSidedParams, HarmonicParams, SuperpositionParams,
                                PulseTrainParams, DecayLawParams, WWParams, AiryCheckParams, IonizationParams,
                                ValiditySweepParams, CrossTermsParams, EnergyNormalizationParams>;

struct ScenarioConfig {
    std::string name;
    Kind kind = Kind::golden_rule;
    std::string description;
    std::filesystem::path output_dir;
    double tol = 1e-9;             // integrator tolerance
    double sample_spacing = 0.0;   // observation grid, 0 = automatic
    std::size_t csv_stride = 1;
    KindParams params;
    std::string canonical;  // normalized config text the hash is taken over
    std::uint64_t hash = 0;

    std::string hash_hex() const;
};

// A value forced onto a numeric leaf, addressed by a dotted path such as
// `golden_rule.gamma`.
struct Override {
    std::string path;
    double value;
};

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".",
                            const std::vector<Override>& overrides = {});
ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

std::uint64_t fnv1a(const std::string& s);

}  // namespace goldenrule::scenario
