#include "goldenrule/pulsetrain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "goldenrule/csv.hpp"
#include "goldenrule/errors.hpp"

namespace goldenrule {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTail = 37.0;  // e^{-37} ~ 1e-16

Envelope centered(const Pulse& p)
{
    Envelope e = p.env;
    e.t_ref = p.center;
    return e;
}

}  // namespace

std::vector<double> PulseTrain::separations() const
{
    std::vector<double> out;
    for (std::size_t k = 1; k < pulses.size(); ++k) out.push_back(pulses[k].center - pulses[k - 1].center);
    return out;
}

Drive PulseTrain::drive() const
{
    std::vector<DriveTerm> terms;
    for (const auto& p : pulses) terms.push_back({centered(p), p.V0});
    return Drive(std::move(terms));
}

double PulseTrain::start_time() const
{
    double t = HUGE_VAL;
    for (const auto& p : pulses) t = std::min(t, pulse_extent(centered(p)).first);
    return t;
}

double PulseTrain::end_time() const
{
    double t = -HUGE_VAL;
    for (const auto& p : pulses) t = std::max(t, pulse_extent(centered(p)).second);
    return t;
}

std::pair<double, double> pulse_extent(const Envelope& env)
{
    const double c = env.t_ref;
    if (const auto* e = std::get_if<TwoSidedExp>(&env.shape))
        return {c - kTail / e->gamma_minus, c + kTail / e->gamma_plus};
    if (const auto* e = std::get_if<GaussianPulse>(&env.shape))
        return {c - std::sqrt(kTail) * e->tau, c + std::sqrt(kTail) * e->tau};
    if (const auto* e = std::get_if<RectangularPulse>(&env.shape)) return {c - 0.5 * e->T, c + 0.5 * e->T};
    if (const auto* e = std::get_if<PiecewiseConstant>(&env.shape)) {
        double d = 0.0;
        for (const auto& s : e->segments) d += s.duration;
        return {c, c + d};
    }
    throw UnsupportedShape(shape_name(env) + " has no finite extent and cannot be part of a pulse train");
}

double pulse_overlap(const Pulse& a, const Pulse& b)
{
    const Envelope ea = centered(a), eb = centered(b);
    const auto [la, ha] = pulse_extent(ea);
    const auto [lb, hb] = pulse_extent(eb);
    auto sq_norm = [](const Envelope& e, double lo, double hi) {
        auto bp = breakpoints(e);
        return quad::integrate(quad::RealFn([&e](double t) {
                                   const double v = evaluate(e, 1.0, t);
                                   return v * v;
                               }),
                               lo, hi, bp, {1e-300, 1e-10, 4000})
            .value;
    };
    const double lo = std::max(la, lb), hi = std::min(ha, hb);
    if (!(hi > lo)) return 0.0;
    auto bp = breakpoints(ea);
    const auto bb = breakpoints(eb);
    bp.insert(bp.end(), bb.begin(), bb.end());
    std::sort(bp.begin(), bp.end());
    const double cross =
        quad::integrate(quad::RealFn([&](double t) { return std::abs(evaluate(ea, 1.0, t) * evaluate(eb, 1.0, t)); }),
                        lo, hi, bp, {1e-300, 1e-8, 4000})
            .value;
    return cross / std::sqrt(sq_norm(ea, la, ha) * sq_norm(eb, lb, hb));
}

void validate(const PulseTrain& train, double max_overlap)
{
    if (train.pulses.empty()) throw_domain("PulseTrain", "no pulses");
    for (std::size_t k = 0; k < train.pulses.size(); ++k) {
        validate(train.pulses[k].env);
        (void)pulse_extent(train.pulses[k].env);
        if (k == 0) continue;
        const auto& a = train.pulses[k - 1];
        const auto& b = train.pulses[k];
        if (!(b.center > a.center)) throw_domain("PulseTrain", "centers must be strictly increasing");
        const double ov = pulse_overlap(a, b);
        if (ov > max_overlap) {
            std::ostringstream os;
            os << "pulses " << k - 1 << " and " << k << " overlap (normalized overlap " << ov << " > "
               << max_overlap << ")";
            throw_domain("PulseTrain", os.str());
        }
    }
}

cplx pulse_kick(const Envelope& env, double V0, const MatrixElementModel& model, double omega_fi, cplx c_i,
                double E_i)
{
    const double m = effective_coupling(model, E_i + omega_fi);
    const cplx Vt = V0 * std::exp(cplx(0.0, omega_fi * env.t_ref)) * spectral_shape(env, omega_fi);
    return cplx(0.0, -1.0) * m * Vt * c_i;
}

cplx cross_term_integral(const Envelope& env, const DensityOfStates& dos, double omega_i, double T,
                         std::optional<Window> window, const quad::Options& opt)
{
    if (T < 0.0) throw_domain("cross_term_integral", "separation T must be >= 0");
    (void)spectral_shape_sq(env, 0.0);  // rejects unsupported shapes early
    const auto sup = support(dos);
    double lo = sup.lo, hi = sup.hi;
    if (window) {
        lo = std::max(lo, window->lo);
        hi = std::min(hi, window->hi);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw_domain("cross_term_integral", "unbounded density-of-states support needs an explicit window");
    if (sup.lo_open && lo <= sup.lo) lo = std::nextafter(sup.lo, HUGE_VAL);
    if (!(omega_i > lo && omega_i < hi)) throw_domain("cross_term_integral", "omega_i must lie inside the window");

    auto f = [&](double w) {
        const double x = w - omega_i;
        return dos_value(dos, w) * spectral_shape_sq(env, x) * std::exp(cplx(0.0, x * T));
    };
    const quad::ComplexFn fn(f);
    const bool oscillatory = T * (hi - lo) > 50.0;
    auto side = [&](double a, double b) {
        if (oscillatory) return quad::integrate_periods(fn, a, b, omega_i, T, opt);
        // a few break points around the peak help the first bisections
        std::vector<double> br;
        for (double s : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
            br.push_back(omega_i - s * (b - a));
            br.push_back(omega_i + s * (b - a));
        }
        std::sort(br.begin(), br.end());
        return quad::integrate(fn, a, b, br, opt);
    };
    const auto left = side(lo, omega_i);
    const auto right = side(omega_i, hi);
    return left.value + right.value;
}

cplx cross_term_closed_form(const Envelope& env, double D, double T)
{
    if (T < 0.0) throw_domain("cross_term_closed_form", "separation T must be >= 0");
    if (const auto* e = std::get_if<TwoSidedExp>(&env.shape)) {
        if (e->v_minus != e->v_plus) throw UnsupportedShape("cross_term_closed_form: needs v_minus == v_plus");
        const double gm = e->gamma_minus, gp = e->gamma_plus;
        const double amp = e->v_plus * e->v_plus * D;
        const double d = gp - gm;
        if (std::abs(d) <= 1e-6 * std::max(gp, gm)) {
            // equal-rate limit at the mean rate; error O(d^2)
            const double g = 0.5 * (gp + gm);
            const double x = g * T;
            const double base = 2.0 * kPi * std::exp(-x) * (1.0 + x) / g;
            return amp * base;
        }
        return amp * kPi * (gp + gm) / d * (std::exp(-gm * T) / gm - std::exp(-gp * T) / gp);
    }
    if (const auto* e = std::get_if<GaussianPulse>(&env.shape))
        return D * std::sqrt(2.0 * kPi) / e->tau * std::exp(-0.5 * T * T / (e->tau * e->tau));
    if (std::holds_alternative<RectangularPulse>(env.shape)) return 0.0;
    throw UnsupportedShape("cross_term_closed_form: unsupported shape " + shape_name(env));
}

AdditivityResult additivity_defect(const PulseTrain& train, const DiscretizedContinuum& continuum,
                                   const MatrixElementModel& model, double tol)
{
    validate(train);
    AdditivityResult res;
    const double t0 = train.start_time();
    const double t1 = train.end_time();
    IntegrateOptions o;
    o.mode = Mode::coupled;
    o.tol = tol;
    o.seed = false;
    res.trajectory = integrate(continuum, train.drive(), model, t0, t1, o);
    res.full = res.trajectory.population.back();

    double sum = 0.0;
    for (const auto& p : train.pulses) {
        const double pi = std::norm(ci_at(res.trajectory, p.center));
        res.p_at_centers.push_back(pi);
        const Envelope e = centered(p);
        for (std::size_t k = 0; k < continuum.size(); ++k) {
            const double w = continuum.energies[k] - continuum.center;
            sum += continuum.weights[k] * std::norm(pulse_kick(e, p.V0, model, w, 1.0, continuum.center)) * pi;
        }
    }
    res.additive = sum;
    res.defect = std::abs(res.full - res.additive) / res.full;
    return res;
}

DecayCurve generalized_decay(const std::function<double(double)>& rbar, double p0, const std::vector<double>& t_grid)
{
    if (!(p0 > 0.0 && p0 <= 1.0)) throw_domain("generalized_decay", "p0 must lie in (0, 1]");
    if (t_grid.empty()) throw_domain("generalized_decay", "empty time grid");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1])) throw_domain("generalized_decay", "time grid must be increasing");
    DecayCurve c;
    c.times = t_grid;
    auto checked = [&rbar](double t) {
        const double r = rbar(t);
        if (r < 0.0 || !std::isfinite(r)) {
            std::ostringstream os;
            os << "rate " << r << " at t=" << t << " is negative or not finite";
            throw_domain("generalized_decay", os.str());
        }
        return r;
    };
    double exponent = 0.0;
    const double span = t_grid.back() - t_grid.front();
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (k > 0) {
            const double a = t_grid[k - 1], b = t_grid[k];
            const double share = span > 0.0 ? (b - a) / span : 1.0;
            exponent += quad::simpson(quad::RealFn(checked), a, b, 1e-10 * std::max(share, 1e-6));
        }
        c.rbar.push_back(checked(t_grid[k]));
        c.p_i.push_back(p0 * std::exp(-exponent));
    }
    return c;
}

DecayCurve generalized_decay(const PulseTrain& train, const MatrixElementModel& model, const DensityOfStates& dos,
                             double E_i, double p0, const std::vector<double>& t_grid)
{
    const Drive d = train.drive();
    return generalized_decay([&](double t) { return golden_rule_following(d, model, dos, E_i, t); }, p0, t_grid);
}

std::string decay_curve_csv(const DecayCurve& curve, const std::vector<std::string>& header)
{
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < curve.times.size(); ++k) rows.push_back({curve.times[k], curve.p_i[k], curve.rbar[k]});
    return csv::render({"t", "p_i", "rbar"}, rows, header);
}

}  // namespace goldenrule
