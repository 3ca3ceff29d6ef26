#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "goldenrule/airy.hpp"
#include "goldenrule/csv.hpp"
#include "goldenrule/errors.hpp"
#include "goldenrule/fieldstates.hpp"
#include "goldenrule/pulsetrain.hpp"
#include "goldenrule/quadrature.hpp"
#include "goldenrule/scenario/runner.hpp"
#include "goldenrule/wignerweisskopf.hpp"

namespace goldenrule::scenario {
namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::string label(double x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

json header_json(const ScenarioConfig& cfg)
{
    return {{"scenario", cfg.name}, {"kind", kind_name(cfg.kind)}, {"config_hash", cfg.hash_hex()}};
}

IntegrateOptions options(const ScenarioConfig& cfg, Mode mode)
{
    IntegrateOptions o;
    o.mode = mode;
    o.tol = cfg.tol;
    o.sample_spacing = cfg.sample_spacing;
    return o;
}

// A run longer than the revival time of the level grid would show the
// discreteness of the continuum.
void check_revival(const DiscretizedContinuum& c, double t0, double t1)
{
    const double revival = 2.0 * kPi / c.spacing;
    if (t1 - t0 >= revival) {
        std::ostringstream os;
        os << "run length " << (t1 - t0) << " reaches the revival time " << revival << " of the level grid";
        throw DiscretizationError(os.str());
    }
}

double worst_ratio(const std::vector<double>& ratios)
{
    double worst = 1.0;
    for (double r : ratios)
        if (!(std::abs(r - 1.0) <= std::abs(worst - 1.0))) worst = r;
    return worst;
}

// ---- golden_rule ----------------------------------------------------------

ExperimentOutput golden_rule(const ScenarioConfig& cfg, const GoldenRuleParams& p)
{
    const auto& cs = p.continuum;
    const double D = dos_value(cs.dos, cs.E_i);
    const double V0 = std::sqrt(p.rate_fraction * p.gamma / (2.0 * kPi * D));
    const Envelope env{RisingExp{p.gamma}, 0.0};
    const ConstantCoupling model{1.0};
    const auto c = discretize(cs.dos, cs.E_i, cs.halfwidth_factor * p.gamma, cs.n_levels);
    const double t0 = start_time(env), t1 = p.t_end / p.gamma;
    check_revival(c, t0, t1);
    const auto traj = integrate(c, env, V0, model, t0, t1, options(cfg, p.mode));

    auto predict = [&](double t) { return golden_rule_following(env, V0, model, cs.dos, cs.E_i, t); };
    std::vector<double> ratios;
    for (double t : traj.times) {
        if (depletion(env, V0, 1.0, D, p.gamma, t).analytic >= p.depletion_limit) continue;
        const auto r = transition_rate(traj, t);
        if (!r.edge) ratios.push_back(r.value / predict(t));
    }
    if (ratios.empty()) throw NumericalError("no sample inside the depletion window");

    const auto v = validity_report(1.0 * V0 * V0, cs.dos, cs.E_i, p.gamma);
    json rep = header_json(cfg);
    rep["rate_at_t0"] = predict(0.0);
    rep["left_margin"] = v.left_margin;
    rep["right_margin"] = v.right_margin;
    rep["samples_compared"] = ratios.size();
    rep["worst_following_ratio"] = worst_ratio(ratios);
    rep["rhs_evaluations"] = traj.stats.rhs_evaluations;

    ExperimentOutput out;
    out.metrics.push_back(within("following_ratio", worst_ratio(ratios), 1.0, p.tolerance));
    out.artifacts.push_back({"trajectory.csv", trajectory_csv(traj, predict, provenance(cfg), cfg.csv_stride)});
    out.artifacts.push_back({"golden_rule.json", rep.dump(2) + "\n"});
    return out;
}

// ---- validity_sweep -------------------------------------------------------

std::string margin_metric(double m) { return "following_error_margin_" + label(m); }

ExperimentOutput validity_sweep(const ScenarioConfig& cfg, const ValiditySweepParams& p)
{
    const auto& cs = p.continuum;
    const double D = dos_value(cs.dos, cs.E_i);
    const double V0 = std::sqrt(p.rate / (2.0 * kPi * D));
    const ConstantCoupling model{1.0};
    ExperimentOutput out;
    std::vector<std::vector<double>> rows;
    for (const auto& pt : p.points) {
        const double gamma = p.rate / (2.0 * pt.left_margin);
        const Envelope env{RisingExp{gamma}, 0.0};
        const auto c = discretize(cs.dos, cs.E_i, cs.halfwidth_factor * gamma, cs.n_levels);
        const double t0 = start_time(env), t1 = 0.5 / gamma;
        check_revival(c, t0, t1);
        const auto traj = integrate(c, env, V0, model, t0, t1, options(cfg, Mode::coupled));
        const double ratio = transition_rate(traj, 0.0).value / golden_rule_following(env, V0, model, cs.dos, cs.E_i, 0.0);
        const double err = std::abs(ratio - 1.0);
        out.metrics.push_back(pt.above ? above(margin_metric(pt.left_margin), err, pt.bound)
                                       : within(margin_metric(pt.left_margin), err, 0.0, pt.bound));
        rows.push_back({pt.left_margin, gamma, ratio, err, std::norm(ci_at(traj, 0.0)), traj.max_norm_defect});
    }
    out.artifacts.push_back({"validity.csv", csv::render({"left_margin", "gamma", "following_ratio", "error",
                                                          "norm_ci_sq", "max_norm_defect"},
                                                         rows, provenance(cfg))});
    return out;
}

// ---- two_sided_pulse ------------------------------------------------------

ExperimentOutput two_sided(const ScenarioConfig& cfg, const TwoSidedParams& p)
{
    const auto& cs = p.continuum;
    const ConstantCoupling model{1.0};
    const auto c = discretize(cs.dos, cs.E_i, cs.halfwidth_factor * p.gamma_plus, cs.n_levels);
    const double tb = p.window_begin / p.gamma_plus, te = p.window_end / p.gamma_plus;
    const int n_eval = 41;
    std::vector<double> ts;
    for (int j = 0; j < n_eval; ++j) ts.push_back(tb + (te - tb) * j / (n_eval - 1));

    ExperimentOutput out;
    std::vector<std::vector<double>> rates;
    std::vector<double> expected;
    double decay_err = 0.0;
    for (std::size_t k = 0; k < p.gamma_minus.size(); ++k) {
        const Envelope env{TwoSidedExp{p.gamma_minus[k], p.gamma_plus, 1.0, 1.0}, 0.0};
        const double t0 = start_time(env), t1 = te + 0.5 / p.gamma_plus;
        check_revival(c, t0, t1);
        const auto traj = integrate(c, env, p.V0, model, t0, t1, options(cfg, Mode::first_order));
        // r(0+) e^{-2 gamma+ t}
        const double r0 = golden_rule_following(env, p.V0, model, cs.dos, cs.E_i, 0.0);
        std::vector<double> r;
        expected.clear();
        for (double t : ts) {
            r.push_back(transition_rate(traj, t).value);
            expected.push_back(r0 * std::exp(-2.0 * p.gamma_plus * t));
            decay_err = std::max(decay_err, std::abs(r.back() / expected.back() - 1.0));
        }
        rates.push_back(std::move(r));
        auto predict = [&](double t) { return golden_rule_following(env, p.V0, model, cs.dos, cs.E_i, t); };
        out.artifacts.push_back({"trajectory_" + std::to_string(k) + ".csv",
                                 trajectory_csv(traj, predict, provenance(cfg), cfg.csv_stride)});
    }
    double edge = 0.0;
    for (std::size_t k = 1; k < rates.size(); ++k)
        for (std::size_t j = 0; j < ts.size(); ++j) edge = std::max(edge, std::abs(rates[k][j] / rates[0][j] - 1.0));

    std::vector<std::string> head{"t", "r_expected"};
    for (double g : p.gamma_minus) head.push_back("r_gamma_minus_" + label(g));
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < ts.size(); ++j) {
        std::vector<double> row{ts[j], expected[j]};
        for (const auto& r : rates) row.push_back(r[j]);
        rows.push_back(row);
    }
    out.artifacts.push_back({"trailing_edge.csv", csv::render(head, rows, provenance(cfg))});
    out.metrics.push_back(within("edge_dependence", edge, 0.0, p.edge_tolerance));
    out.metrics.push_back(within("trailing_decay_error", decay_err, 0.0, p.decay_tolerance));
    return out;
}

// ---- harmonic -------------------------------------------------------------

ExperimentOutput harmonic(const ScenarioConfig& cfg, const HarmonicParams& p)
{
    const auto& cs = p.continuum;
    const double omega = p.carrier_factor * p.gamma;
    const ConstantCoupling model{1.0};
    const Envelope env{HarmonicRisingExp{p.gamma, omega}, 0.0};
    const auto hp = harmonic_rate_prediction(1.0, cs.dos, cs.E_i, omega, p.gamma);
    if (hp.no_channel()) throw_domain("harmonic", "neither E_i + omega nor E_i - omega lies in the DOS support");
    const auto c = discretize(cs.dos, cs.E_i, cs.halfwidth_factor * p.gamma, cs.n_levels);
    const double period = 2.0 * kPi / omega;
    const double t0 = start_time(env);
    const double t1 = *std::max_element(p.times.begin(), p.times.end()) / p.gamma + period;
    check_revival(c, t0, t1);
    const auto traj = integrate(c, env, p.V0, model, t0, t1, options(cfg, Mode::first_order));

    auto predict = [&](double t) { return hp.rate * p.V0 * p.V0 * std::exp(2.0 * p.gamma * t); };
    std::vector<double> ratios;
    std::vector<std::vector<double>> rows;
    for (double ts : p.times) {
        // average over one carrier period removes the 2 omega interference
        const double t = ts / p.gamma;
        const int n = 64;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double tt = t - 0.5 * period + (k + 0.5) * period / n;
            s += transition_rate(traj, tt).value / predict(tt);
        }
        ratios.push_back(s / n);
        rows.push_back({t, ratios.back()});
    }
    ExperimentOutput out;
    out.metrics.push_back(within("rate_ratio", worst_ratio(ratios), 1.0, p.tolerance + hp.neglected_bound));
    out.artifacts.push_back({"period_average.csv", csv::render({"t", "averaged_ratio"}, rows, provenance(cfg))});
    out.artifacts.push_back({"trajectory.csv", trajectory_csv(traj, predict, provenance(cfg), cfg.csv_stride)});
    return out;
}

// ---- superposition --------------------------------------------------------

ExperimentOutput superposition(const ScenarioConfig& cfg, const SuperpositionParams& p)
{
    const auto& cs = p.continuum;
    double gmin = p.terms.front().gamma, gmax = gmin;
    for (const auto& t : p.terms) {
        gmin = std::min(gmin, t.gamma);
        gmax = std::max(gmax, t.gamma);
    }
    const double D = dos_value(cs.dos, cs.E_i);
    const double V0 = std::sqrt(p.rate_fraction * gmin / (2.0 * kPi * D));
    const Envelope env{ExpSuperposition{p.terms}, 0.0};
    const ConstantCoupling model{1.0};
    const auto c = discretize(cs.dos, cs.E_i, cs.halfwidth_factor * gmax, cs.n_levels);
    const double t0 = start_time(env), t1 = p.t_end + 0.1 / gmin;
    check_revival(c, t0, t1);
    const auto traj = integrate(c, env, V0, model, t0, t1, options(cfg, Mode::first_order));
    auto predict = [&](double t) { return superposition_rate_prediction(env, V0, 1.0, D, t); };
    std::vector<double> ratios;
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < p.checkpoints; ++j) {
        const double t = p.t_begin + (p.t_end - p.t_begin) * j / (p.checkpoints - 1);
        const double rn = transition_rate(traj, t).value;
        ratios.push_back(rn / predict(t));
        rows.push_back({t, rn, predict(t), ratios.back()});
    }
    ExperimentOutput out;
    out.metrics.push_back(within("rate_ratio", worst_ratio(ratios), 1.0, p.tolerance));
    out.artifacts.push_back(
        {"checkpoints.csv", csv::render({"t", "r_numeric", "r_analytic", "ratio"}, rows, provenance(cfg))});
    out.artifacts.push_back({"trajectory.csv", trajectory_csv(traj, predict, provenance(cfg), cfg.csv_stride)});
    return out;
}

// ---- pulse_train / decay_law ----------------------------------------------

DiscretizedContinuum flat_continuum(double D, double halfwidth, double spacing)
{
    const auto half = static_cast<std::size_t>(std::llround(halfwidth / spacing));
    return discretize(make_constant(D), 0.0, half * spacing, 2 * half + 1);
}

// V0 giving each unit-area Gaussian pulse a depletion exponent `exponent`.
double gaussian_amplitude(double tau, double D, double exponent)
{
    return std::sqrt(exponent * tau * std::sqrt(2.0 * kPi) / (2.0 * kPi * D));
}

struct DecayComparison {
    double max_error = 0.0;
    std::string csv;
};

DecayComparison compare_decay(const ScenarioConfig& cfg, const PulseTrain& train, const AmplitudeTrajectory& traj,
                              double D, double dt)
{
    std::vector<double> grid;
    const double t_end = std::min(train.end_time(), traj.times.back());
    for (double t = train.start_time(); t <= t_end; t += dt) grid.push_back(t);
    const auto dos = make_constant(D);
    const auto curve = generalized_decay(train, ConstantCoupling{1.0}, dos, 0.0, 1.0, grid);
    DecayComparison cmp;
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double pn = std::norm(ci_at(traj, grid[k]));
        cmp.max_error = std::max(cmp.max_error, std::abs(pn / curve.p_i[k] - 1.0));
        rows.push_back({grid[k], pn, curve.p_i[k], curve.rbar[k]});
    }
    cmp.csv = csv::render({"t", "p_numeric", "p_decay_law", "rbar"}, rows, provenance(cfg));
    return cmp;
}

ExperimentOutput pulse_train(const ScenarioConfig& cfg, const PulseTrainParams& p)
{
    const double V0 = gaussian_amplitude(p.tau, p.D, std::log(1.0 / p.final_population) / p.pulses);
    PulseTrain train;
    for (std::size_t k = 0; k < p.pulses; ++k)
        train.pulses.push_back({k * p.separation * p.tau, Envelope{GaussianPulse{p.tau}, 0.0}, V0});
    validate(train);
    const auto c = flat_continuum(p.D, p.halfwidth / p.tau, p.level_spacing / p.tau);
    check_revival(c, train.start_time(), train.end_time());
    const auto res = additivity_defect(train, c, ConstantCoupling{1.0}, cfg.tol);
    const auto cmp = compare_decay(cfg, train, res.trajectory, p.D, 0.05 * p.tau);

    json rep = header_json(cfg);
    rep["full"] = res.full;
    rep["additive"] = res.additive;
    rep["defect"] = res.defect;
    rep["p_at_centers"] = res.p_at_centers;
    rep["final_population"] = std::norm(res.trajectory.c_i.back());

    ExperimentOutput out;
    out.metrics.push_back(within("additivity_defect", res.defect, 0.0, p.additivity_tolerance));
    out.metrics.push_back(within("decay_law_error", cmp.max_error, 0.0, p.decay_tolerance));
    out.artifacts.push_back({"decay.csv", cmp.csv});
    out.artifacts.push_back({"pulse_train.json", rep.dump(2) + "\n"});
    return out;
}

ExperimentOutput decay_law(const ScenarioConfig& cfg, const DecayLawParams& p)
{
    const double V0 = gaussian_amplitude(p.tau, p.D, std::log(1.0 / p.final_population));
    PulseTrain train;
    train.pulses.push_back({0.0, Envelope{GaussianPulse{p.tau}, 0.0}, V0});
    const auto c = flat_continuum(p.D, p.halfwidth / p.tau, p.level_spacing / p.tau);
    check_revival(c, train.start_time(), train.end_time());
    IntegrateOptions o = options(cfg, Mode::coupled);
    o.seed = false;
    const auto traj = integrate(c, train.drive(), ConstantCoupling{1.0}, train.start_time(), train.end_time(), o);
    const auto cmp = compare_decay(cfg, train, traj, p.D, 0.02 * p.tau);
    ExperimentOutput out;
    out.metrics.push_back(within("decay_law_error", cmp.max_error, 0.0, p.tolerance));
    out.artifacts.push_back({"decay.csv", cmp.csv});
    return out;
}

// ---- ww -------------------------------------------------------------------

ExperimentOutput ww(const ScenarioConfig& cfg, const WWParams& p)
{
    const double c0 = p.rate / (2.0 * kPi);
    const double below = p.below * p.rate, above = p.above * p.rate;
    const CouplingFunction f =
        p.coupling.kind == "linear" ? CouplingFunction::linear(c0, p.coupling.slope * c0 / p.rate, p.omega_i, below, above)
        : p.coupling.kind == "file" ? CouplingFunction::load(p.coupling.file, p.omega_i)
                                    : CouplingFunction::flat(c0, p.omega_i, below, above);
    const auto an = ww_analytic(f);
    const double r = an.decay_rate;

    WWValidateOptions o;
    const double spacing = p.spacing_fraction * p.rate;
    o.n_levels = static_cast<std::size_t>(std::llround((f.hi() - f.lo()) / spacing)) + 1;
    o.tol = cfg.tol;
    o.fit_begin = p.fit_begin;
    o.fit_end = p.fit_end;
    const auto v = nonperturbative_validate(f, o);

    double pointwise = 0.0;
    for (std::size_t j = 0; j < v.trajectory.times.size(); ++j) {
        const double t = v.trajectory.times[j];
        if (t < p.pointwise_begin / r || t > p.pointwise_end / r) continue;
        pointwise = std::max(pointwise, std::abs(std::norm(v.trajectory.c_i[j]) / std::exp(-r * t) - 1.0));
    }
    // relative to the shift, or to r / 100 when the shift itself is tiny
    const double scale = std::max(std::abs(an.energy_shift), 0.01 * r);
    const double shift_err = std::abs(v.fitted_shift - an.energy_shift) / scale;

    json rep = header_json(cfg);
    rep["r_analytic"] = r;
    rep["shift_analytic"] = an.energy_shift;
    rep["r_fitted"] = v.fitted_r;
    rep["shift_fitted"] = v.fitted_shift;
    rep["shift_smeared"] = principal_value_shift_smeared(f, 1).shift;
    rep["residuals"] = {{"log_abs_ci", v.residual_log}, {"phase", v.residual_phase}, {"pointwise", pointwise}};
    rep["level_spacing"] = v.spacing;
    rep["n_levels"] = o.n_levels;

    ExperimentOutput out;
    out.metrics.push_back(within("rate_ratio", v.fitted_r / r, 1.0, p.rate_tolerance));
    out.metrics.push_back(within("pointwise_error", pointwise, 0.0, p.pointwise_tolerance));
    out.metrics.push_back(within("shift_error", shift_err, 0.0, p.shift_tolerance));
    auto predict = [&](double t) { return r * std::exp(-r * t); };
    out.artifacts.push_back({"ww.json", rep.dump(2) + "\n"});
    out.artifacts.push_back({"trajectory.csv", trajectory_csv(v.trajectory, predict, provenance(cfg), cfg.csv_stride)});
    return out;
}

// ---- airy_check -----------------------------------------------------------

// Ai(x) = Im(U) / pi, U = e^{i pi/3} int_0^inf exp(-u^3/3 - x u e^{i pi/3}) du,
// the steepest-descent rotation of the contour integral.
double airy_by_quadrature(double x)
{
    const cplx w = std::polar(1.0, kPi / 3.0);
    auto g = [&](double u) { return std::exp(-u * u * u / 3.0 - x * u * w); };
    const double breaks[] = {0.5, 1.0, 2.0, 3.0, 4.0, 6.0};
    const auto r = quad::integrate(quad::ComplexFn(g), 0.0, 12.0, breaks, {1e-13, 1e-12, 4000});
    return (w * r.value).imag() / kPi;
}

ExperimentOutput airy_check(const ScenarioConfig& cfg, const AiryCheckParams& p)
{
    ExperimentOutput out;
    const double a = field_length(p.F, p.m);
    json rep = header_json(cfg);
    for (double w : p.kernel_widths) {
        const auto r = smeared_overlap(p.E1, w * p.F * a, p.F, p.m);
        out.metrics.push_back(within("overlap_ratio_" + label(w), r.ratio, 1.0, p.overlap_tolerance));
        rep["overlaps"].push_back(
            {{"kernel_width", w}, {"ratio", r.ratio}, {"drift", r.drift}, {"window", {r.window.lo, r.window.hi}}});
    }
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    for (std::size_t j = 0; j < p.oracle_points; ++j) {
        const double x = p.oracle_points == 1 ? p.x_min
                                              : p.x_min + (p.x_max - p.x_min) * j / (p.oracle_points - 1);
        const double ai = airy_ai(x), q = airy_by_quadrature(x);
        worst = std::max(worst, std::abs(ai - q));
        rows.push_back({x, ai, q, ai - q});
    }
    out.metrics.push_back(within("airy_oracle_error", worst, 0.0, p.oracle_tolerance));
    out.artifacts.push_back({"airy_oracle.csv", csv::render({"x", "ai", "quadrature", "difference"}, rows, provenance(cfg))});
    out.artifacts.push_back({"airy_check.json", rep.dump(2) + "\n"});
    return out;
}

// ---- ionization -----------------------------------------------------------

ExperimentOutput ionization(const ScenarioConfig& cfg, const IonizationParams& p)
{
    const BoundState1D b{p.kappa, p.m};
    const auto toy = toy_ionization_rate(b, p.F);
    const auto box = box_quantized_rate(b, p.F, p.box_level);
    const double Eb = b.energy();
    const double a = field_length(p.F, p.m);
    const double weak = p.F / (p.kappa * std::abs(Eb));

    json rep = header_json(cfg);
    rep["rate"] = toy.rate;
    rep["matrix_element"] = toy.matrix_element;
    rep["identity_matrix_element"] = toy.identity_matrix_element;
    rep["bound_overlap"] = toy.bound_overlap;
    rep["box"] = {{"rate", box.rate}, {"wall", box.wall}, {"level", box.level}, {"density", box.density}};
    rep["precondition_flags"] = {{"weak_field", toy.weak_field}, {"field_ratio", weak},
                                 {"within_limit", weak <= p.weak_field_limit}};

    ExperimentOutput out;
    out.metrics.push_back(within("box_rate_ratio", box.rate / toy.rate, 1.0, p.tolerance));
    out.metrics.push_back(
        within("identity_ratio", toy.matrix_element / toy.identity_matrix_element, 1.0, p.identity_tolerance));
    out.artifacts.push_back({"ionization.json", rep.dump(2) + "\n"});
    const double xt = -Eb / p.F;
    out.artifacts.push_back({"wavefunction.csv", wavefunction_csv(Eb, p.F, p.m, xt - 30.0 * a, xt + 60.0 * a,
                                                                   static_cast<int>(p.dump_points), provenance(cfg))});
    return out;
}

// ---- cross_terms ----------------------------------------------------------

ExperimentOutput cross_terms(const ScenarioConfig& cfg, const CrossTermsParams& p)
{
    const auto dos = make_constant(p.D);
    std::vector<std::vector<double>> rows;
    auto rel_sweep = [&](const Envelope& env, const std::vector<double>& Ts, double window, double id) {
        double worst = 0.0;
        for (double T : Ts) {
            const cplx I = cross_term_integral(env, dos, 0.0, T, Window{-window, window});
            const cplx C = cross_term_closed_form(env, p.D, T);
            worst = std::max(worst, std::abs(I - C) / std::abs(C));
            rows.push_back({id, T, I.real(), I.imag(), C.real()});
        }
        return worst;
    };
    const double e = rel_sweep(Envelope{TwoSidedExp{p.gamma_minus, p.gamma_plus, 1.0, 1.0}, 0.0}, p.exp_separations,
                               p.exp_window, 0.0);
    const double g = rel_sweep(Envelope{GaussianPulse{p.tau}, 0.0}, p.gaussian_separations, p.gaussian_window, 1.0);
    double rect = 0.0;
    const Envelope re{RectangularPulse{p.width}, 0.0};
    for (double T : p.rect_separations) {
        const cplx I = cross_term_integral(re, dos, 0.0, T, Window{-p.rect_window, p.rect_window});
        rect = std::max(rect, std::abs(I) / (2.0 * kPi * p.width * p.D));
        rows.push_back({2.0, T, I.real(), I.imag(), 0.0});
    }
    ExperimentOutput out;
    out.metrics.push_back(within("exponential_max_rel_error", e, 0.0, p.tolerance));
    out.metrics.push_back(within("gaussian_max_rel_error", g, 0.0, p.tolerance));
    out.metrics.push_back(within("rectangular_max_normalized", rect, 0.0, p.rect_tolerance));
    std::vector<std::string> head = provenance(cfg);
    head.push_back("shape: 0 two-sided exponential, 1 gaussian, 2 rectangular");
    out.artifacts.push_back(
        {"cross_terms.csv", csv::render({"shape", "T", "re_integral", "im_integral", "closed_form"}, rows, head)});
    return out;
}

// ---- energy_normalization -------------------------------------------------

ExperimentOutput energy_normalization(const ScenarioConfig& cfg, const EnergyNormalizationParams& p)
{
    const Scatterer2D s{p.V0, p.b, p.m, p.k, p.area};
    const double a = scattering_rate_energy_normalized(s, p.n_angles);
    const double b = scattering_rate_explicit_dos(s, p.n_angles);
    const double x = 2.0 * p.k * p.k * p.b * p.b;
    const double oracle = 4.0 * kPi * kPi * p.m * std::pow(p.b, 4) * p.V0 * p.V0 * std::exp(-x) *
                          std::cyl_bessel_i(0.0, x) / p.area;
    json rep = header_json(cfg);
    rep["rate_energy_normalized"] = a;
    rep["rate_explicit_dos"] = b;
    rep["rate_closed_form"] = oracle;
    ExperimentOutput out;
    out.metrics.push_back(within("route_agreement", std::abs(a - b) / std::abs(b), 0.0, p.tolerance));
    out.metrics.push_back(within("closed_form_agreement", std::abs(b - oracle) / std::abs(oracle), 0.0, p.tolerance));
    out.artifacts.push_back({"energy_normalization.json", rep.dump(2) + "\n"});
    return out;
}

}  // namespace

Metric within(std::string name, double value, double target, double tolerance)
{
    return {std::move(name), value, target, tolerance, Relation::within,
            std::isfinite(value) && std::abs(value - target) <= tolerance};
}

Metric above(std::string name, double value, double bound)
{
    return {std::move(name), value, bound, 0.0, Relation::above, std::isfinite(value) && value > bound};
}

std::vector<std::string> provenance(const ScenarioConfig& cfg)
{
    return {"scenario: " + cfg.name, "kind: " + kind_name(cfg.kind), "config_hash: " + cfg.hash_hex()};
}

std::vector<std::string> declared_metrics(const ScenarioConfig& cfg)
{
    switch (cfg.kind) {
    case Kind::golden_rule: return {"following_ratio"};
    case Kind::validity_sweep: {
        std::vector<std::string> v;
        for (const auto& pt : std::get<ValiditySweepParams>(cfg.params).points) v.push_back(margin_metric(pt.left_margin));
        return v;
    }
    case Kind::two_sided_pulse: return {"edge_dependence", "trailing_decay_error"};
    case Kind::harmonic: return {"rate_ratio"};
    case Kind::superposition: return {"rate_ratio"};
    case Kind::pulse_train: return {"additivity_defect", "decay_law_error"};
    case Kind::decay_law: return {"decay_law_error"};
    case Kind::ww: return {"rate_ratio", "pointwise_error", "shift_error"};
    case Kind::airy_check: {
        std::vector<std::string> v;
        for (double w : std::get<AiryCheckParams>(cfg.params).kernel_widths) v.push_back("overlap_ratio_" + label(w));
        v.push_back("airy_oracle_error");
        return v;
    }
    case Kind::ionization: return {"box_rate_ratio", "identity_ratio"};
    case Kind::cross_terms:
        return {"exponential_max_rel_error", "gaussian_max_rel_error", "rectangular_max_normalized"};
    case Kind::energy_normalization: return {"route_agreement", "closed_form_agreement"};
    }
    return {};
}

ExperimentOutput run_experiment(const ScenarioConfig& cfg)
{
    return std::visit(
        [&](const auto& p) -> ExperimentOutput {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, GoldenRuleParams>) return golden_rule(cfg, p);
            else if constexpr (std::is_same_v<P, ValiditySweepParams>) return validity_sweep(cfg, p);
            else if constexpr (std::is_same_v<P, TwoSidedParams>) return two_sided(cfg, p);
            else if constexpr (std::is_same_v<P, HarmonicParams>) return harmonic(cfg, p);
            else if constexpr (std::is_same_v<P, SuperpositionParams>) return superposition(cfg, p);
            else if constexpr (std::is_same_v<P, PulseTrainParams>) return pulse_train(cfg, p);
            else if constexpr (std::is_same_v<P, DecayLawParams>) return decay_law(cfg, p);
            else if constexpr (std::is_same_v<P, WWParams>) return ww(cfg, p);
            else if constexpr (std::is_same_v<P, AiryCheckParams>) return airy_check(cfg, p);
            else if constexpr (std::is_same_v<P, IonizationParams>) return ionization(cfg, p);
            else if constexpr (std::is_same_v<P, CrossTermsParams>) return cross_terms(cfg, p);
            else return energy_normalization(cfg, p);
        },
        cfg.params);
}

}  // namespace goldenrule::scenario
