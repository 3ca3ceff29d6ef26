#include "goldenrule/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "goldenrule/csv.hpp"
#include "goldenrule/errors.hpp"
#include "goldenrule/quadrature.hpp"

namespace goldenrule {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kAnchorEvery = 128;

// Per-level constants of the amplitude system.
struct Levels {
    std::vector<double> omega;  // E_f - E_i
    std::vector<double> g;      // sqrt(w_f) m(E_f)
    std::vector<double> sqrt_w;
    double spacing;
    double max_omega;
};

Levels make_levels(const DiscretizedContinuum& c, const MatrixElementModel& model)
{
    Levels L;
    const std::size_t n = c.size();
    L.omega.resize(n);
    L.g.resize(n);
    L.sqrt_w.resize(n);
    L.spacing = c.spacing;
    L.max_omega = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        L.omega[k] = c.energies[k] - c.center;
        L.sqrt_w[k] = std::sqrt(c.weights[k]);
        L.g[k] = L.sqrt_w[k] * effective_coupling(model, c.energies[k]);
        L.max_omega = std::max(L.max_omega, std::abs(L.omega[k]));
    }
    return L;
}

// Fills (re, im) of e^{i omega_k t} using a rotation recurrence re-anchored
// every kAnchorEvery levels.
void phases(const Levels& L, double t, std::vector<double>& re, std::vector<double>& im)
{
    const std::size_t n = L.omega.size();
    const double sr = std::cos(L.spacing * t), si = std::sin(L.spacing * t);
    for (std::size_t k0 = 0; k0 < n; k0 += kAnchorEvery) {
        double zr = std::cos(L.omega[k0] * t), zi = std::sin(L.omega[k0] * t);
        const std::size_t k1 = std::min(n, k0 + kAnchorEvery);
        for (std::size_t k = k0; k < k1; ++k) {
            re[k] = zr;
            im[k] = zi;
            const double nr = zr * sr - zi * si;
            zi = zr * si + zi * sr;
            zr = nr;
        }
    }
}

}  // namespace

double Drive::operator()(double t) const
{
    double v = 0.0;
    for (const auto& term : terms_) v += evaluate(term.env, term.V0, t);
    return v;
}

std::vector<ExpComponent> Drive::early_components() const
{
    std::vector<ExpComponent> out;
    for (const auto& term : terms_) {
        auto c = goldenrule::early_components(term.env, term.V0);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

double Drive::start_time() const
{
    if (terms_.empty()) return 0.0;
    double t = goldenrule::start_time(terms_.front().env);
    for (const auto& term : terms_) t = std::min(t, goldenrule::start_time(term.env));
    return t;
}

std::vector<double> Drive::breakpoints() const
{
    std::vector<double> out;
    for (const auto& term : terms_) {
        auto b = goldenrule::breakpoints(term.env);
        out.insert(out.end(), b.begin(), b.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const Snapshot& AmplitudeTrajectory::snapshot(double t) const
{
    for (const auto& s : snapshots)
        if (std::abs(s.t - t) <= 1e-12 * std::max(1.0, std::abs(t))) return s;
    std::ostringstream os;
    os << "no snapshot stored at t=" << t;
    throw DomainError(os.str());
}

AmplitudeTrajectory integrate(const DiscretizedContinuum& continuum, const Drive& drive,
                              const MatrixElementModel& model, double t0, double t1,
                              const IntegrateOptions& opt)
{
    if (!(t1 > t0)) throw_domain("integrate", "need t0 < t1");
    if (!(opt.tol >= 1e-12 && opt.tol <= 1e-4)) throw_domain("integrate", "tol must lie in [1e-12, 1e-4]");
    if (continuum.size() == 0) throw_domain("integrate", "empty continuum");

    const Levels L = make_levels(continuum, model);
    const std::size_t n = continuum.size();
    const bool coupled = opt.mode == Mode::coupled;
    const std::size_t off = coupled ? 1 : 0;

    AmplitudeTrajectory traj;
    traj.continuum = continuum;
    traj.mode = opt.mode;
    traj.tol = opt.tol;

    // observation grid
    double h = opt.sample_spacing > 0.0 ? opt.sample_spacing
                                        : kTwoPi / (20.0 * std::max(L.max_omega, 1e-300));
    const double steps = std::ceil((t1 - t0) / h);
    if (steps > 2e7) throw_domain("integrate", "observation grid too fine for the time span");
    const auto N = static_cast<std::size_t>(std::max(1.0, steps));
    traj.spacing = (t1 - t0) / static_cast<double>(N);
    traj.times.resize(N + 1);
    for (std::size_t j = 0; j <= N; ++j) traj.times[j] = t0 + static_cast<double>(j) * traj.spacing;
    traj.times.back() = t1;
    traj.c_i.reserve(N + 1);
    traj.population.reserve(N + 1);

    // initial state
    ode::State y(n + off, cplx{0.0, 0.0});
    if (coupled) y[0] = 1.0;
    if (opt.seed) {
        const auto comps = drive.early_components();
        for (std::size_t k = 0; k < n; ++k) {
            cplx cf = 0.0;
            for (const auto& c : comps) {
                const cplx z = cplx(0.0, L.omega[k]) + c.lambda;
                cf += c.amplitude * std::exp(z * t0) / z;
            }
            y[off + k] = cplx(0.0, -1.0) * L.g[k] * cf;
        }
    }

    std::vector<double> snaps = opt.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    for (double s : snaps)
        if (s < t0 || s > t1) throw_domain("integrate", "snapshot time outside [t0, t1]");

    std::size_t next_sample = 0, next_snap = 0;
    auto record = [&](double t, auto&& component) {
        cplx ci = coupled ? component(0) : cplx(1.0, 0.0);
        double P = 0.0;
        for (std::size_t k = 0; k < n; ++k) P += std::norm(component(off + k));
        traj.c_i.push_back(ci);
        traj.population.push_back(P);
        if (coupled) traj.max_norm_defect = std::max(traj.max_norm_defect, std::abs(std::norm(ci) + P - 1.0));
        (void)t;
    };
    auto snapshot = [&](double t, auto&& component) {
        Snapshot s{t, coupled ? component(0) : cplx(1.0, 0.0), std::vector<cplx>(n)};
        for (std::size_t k = 0; k < n; ++k) s.c_f[k] = component(off + k) / L.sqrt_w[k];
        traj.snapshots.push_back(std::move(s));
    };
    {
        auto comp = [&y](std::size_t i) { return y[i]; };
        while (next_sample <= N && traj.times[next_sample] <= t0) record(traj.times[next_sample++], comp);
        while (next_snap < snaps.size() && snaps[next_snap] <= t0) snapshot(snaps[next_snap++], comp);
    }

    std::vector<double> zr(n), zi(n);
    double seg_end = t1;
    auto rhs = [&](double t, std::span<const cplx> yy, std::span<cplx> dy) {
        const double V = drive(t >= seg_end ? std::nextafter(seg_end, -HUGE_VAL) : t);
        phases(L, t, zr, zi);
        if (!coupled) {
            for (std::size_t k = 0; k < n; ++k) {
                const double a = L.g[k] * V;  // -i a z
                dy[k] = cplx(a * zi[k], -a * zr[k]);
            }
            return;
        }
        const double cr = yy[0].real(), cim = yy[0].imag();
        double sr = 0.0, si = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double ar = yy[1 + k].real(), ai = yy[1 + k].imag();
            // conj(z) a
            sr += L.g[k] * (zr[k] * ar + zi[k] * ai);
            si += L.g[k] * (zr[k] * ai - zi[k] * ar);
            // -i g V z c_i
            const double pr = zr[k] * cr - zi[k] * cim, pi = zr[k] * cim + zi[k] * cr;
            const double a = L.g[k] * V;
            dy[1 + k] = cplx(a * pi, -a * pr);
        }
        dy[0] = cplx(V * si, -V * sr);
    };

    ode::Options oo;
    oo.rtol = opt.tol;
    oo.atol = opt.tol * 1e-3;
    oo.max_frequency = L.max_omega;

    auto observer = [&](const ode::DenseInterval& d) {
        auto comp = [&d](double t) { return [&d, t](std::size_t i) { return d.at(i, t); }; };
        while (next_sample <= N && traj.times[next_sample] <= d.end()) {
            const double t = traj.times[next_sample++];
            record(t, comp(t));
        }
        while (next_snap < snaps.size() && snaps[next_snap] <= d.end()) {
            const double t = snaps[next_snap++];
            snapshot(t, comp(t));
        }
    };

    std::vector<double> cuts{t0};
    for (double b : drive.breakpoints())
        if (b > t0 && b < t1) cuts.push_back(b);
    cuts.push_back(t1);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        seg_end = cuts[s + 1];
        const auto st = ode::integrate(rhs, y, cuts[s], cuts[s + 1], oo, observer);
        traj.stats.accepted += st.accepted;
        traj.stats.rejected += st.rejected;
        traj.stats.rhs_evaluations += st.rhs_evaluations;
    }
    // guard against rounding at the final sample
    {
        auto comp = [&y](std::size_t i) { return y[i]; };
        while (next_sample <= N) record(traj.times[next_sample++], comp);
        while (next_snap < snaps.size()) snapshot(snaps[next_snap++], comp);
    }
    return traj;
}

AmplitudeTrajectory integrate(const DiscretizedContinuum& continuum, const Envelope& env, double V0,
                              const MatrixElementModel& model, double t0, double t1,
                              const IntegrateOptions& opt)
{
    validate(env);
    return integrate(continuum, Drive(env, V0), model, t0, t1, opt);
}

namespace {

// 5-point centered derivative at node j.
double d_centered(const std::vector<double>& P, std::size_t j, double h)
{
    return (P[j - 2] - 8.0 * P[j - 1] + 8.0 * P[j + 1] - P[j + 2]) / (12.0 * h);
}

double d_forward(const std::vector<double>& P, std::size_t j, double h)
{
    return (-25.0 * P[j] + 48.0 * P[j + 1] - 36.0 * P[j + 2] + 16.0 * P[j + 3] - 3.0 * P[j + 4]) / (12.0 * h);
}

double d_backward(const std::vector<double>& P, std::size_t j, double h)
{
    return (25.0 * P[j] - 48.0 * P[j - 1] + 36.0 * P[j - 2] - 16.0 * P[j - 3] + 3.0 * P[j - 4]) / (12.0 * h);
}

// Cubic Lagrange through nodes j-1..j+2 at fractional position u in [0,1).
template <class F>
auto cubic(F&& f, std::size_t j, double u)
{
    const double wm = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double w0 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    const double w1 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    const double w2 = (u + 1.0) * u * (u - 1.0) / 6.0;
    return wm * f(j - 1) + w0 * f(j) + w1 * f(j + 1) + w2 * f(j + 2);
}

std::pair<std::size_t, double> locate(const AmplitudeTrajectory& tr, double t)
{
    const double t0 = tr.times.front(), t1 = tr.times.back();
    if (t < t0 || t > t1) {
        std::ostringstream os;
        os << "time " << t << " outside trajectory span [" << t0 << ", " << t1 << "]";
        throw DomainError(os.str());
    }
    const double x = (t - t0) / tr.spacing;
    auto j = static_cast<std::size_t>(std::floor(x));
    j = std::min(j, tr.times.size() - 1);
    return {j, x - static_cast<double>(j)};
}

}  // namespace

RateEstimate transition_rate(const AmplitudeTrajectory& tr, double t)
{
    const auto& P = tr.population;
    const std::size_t M = P.size();
    if (M < 5) throw DomainError("transition_rate: trajectory has fewer than 5 samples");
    const double h = tr.spacing;
    auto [j, u] = locate(tr, t);
    if (j >= 3 && j + 5 <= M) {
        if (u == 0.0) return {d_centered(P, j, h), false};
        return {cubic([&](std::size_t k) { return d_centered(P, k, h); }, j, u), false};
    }
    // near an edge: nearest node, one-sided stencil where needed
    std::size_t k = u < 0.5 ? j : std::min(j + 1, M - 1);
    if (k >= 2 && k + 2 < M) return {d_centered(P, k, h), true};
    if (k < 2) return {d_forward(P, k, h), true};
    return {d_backward(P, k, h), true};
}

double population_at(const AmplitudeTrajectory& tr, double t)
{
    const auto& P = tr.population;
    auto [j, u] = locate(tr, t);
    if (u == 0.0) return P[j];
    if (j >= 1 && j + 2 < P.size()) return cubic([&](std::size_t k) { return P[k]; }, j, u);
    return P[j] + u * (P[j + 1] - P[j]);
}

cplx ci_at(const AmplitudeTrajectory& tr, double t)
{
    const auto& c = tr.c_i;
    auto [j, u] = locate(tr, t);
    if (u == 0.0) return c[j];
    if (j >= 1 && j + 2 < c.size()) return cubic([&](std::size_t k) { return c[k]; }, j, u);
    return c[j] + u * (c[j + 1] - c[j]);
}

cplx analytic_cf_rising_exp(double V_fi, double omega_fi, double gamma, double t)
{
    if (!(gamma > 0.0)) throw_domain("analytic_cf_rising_exp", "gamma must be > 0");
    const cplx z(gamma, omega_fi);
    return cplx(0.0, -1.0) * V_fi * std::exp(z * t) / z;
}

double golden_rule_rate(double Vm_sq, double D_at_Ei)
{
    if (!(Vm_sq >= 0.0) || !(D_at_Ei >= 0.0) || !std::isfinite(Vm_sq) || !std::isfinite(D_at_Ei))
        throw_domain("golden_rule_rate", "inputs must be finite and non-negative");
    return kTwoPi * Vm_sq * D_at_Ei;
}

double golden_rule_following(const Drive& drive, const MatrixElementModel& model,
                             const DensityOfStates& dos, double E_i, double t)
{
    const auto avg = averaged_sq_matrix_element(model, E_i);
    const double D = std::holds_alternative<ChannelledCoupling>(model) ? avg.total_D : dos_value(dos, E_i);
    const double V = drive(t);
    return kTwoPi * V * V * avg.Vm_sq * D;
}

double golden_rule_following(const Envelope& env, double V0, const MatrixElementModel& model,
                             const DensityOfStates& dos, double E_i, double t)
{
    return golden_rule_following(Drive(env, V0), model, dos, E_i, t);
}

Depletion depletion(const Envelope& env, double V0, double Vm_sq, double D, double Gamma, double t)
{
    if (!(Gamma > 0.0)) throw_domain("depletion", "Gamma must be > 0");
    const double V = evaluate(env, V0, t);
    Depletion out;
    out.analytic = std::numbers::pi * V * V * Vm_sq * D / Gamma;
    const double ts = start_time(env);
    const double lo = ts - std::max(0.0, env.t_ref - ts);
    if (t <= lo) {
        out.integral = 0.0;
        return out;
    }
    auto rate = [&](double s) {
        const double v = evaluate(env, V0, s);
        return kTwoPi * v * v * Vm_sq * D;
    };
    std::vector<double> br;
    for (double b : breakpoints(env))
        if (b > lo && b < t) br.push_back(b);
    out.integral = quad::integrate(quad::RealFn(rate), lo, t, br, {1e-300, 1e-12, 4000}).value;
    return out;
}

ValidityReport validity_report(double Vm_sq, const DensityOfStates& dos, double E_i, double gamma,
                               double threshold)
{
    if (!(gamma > 0.0)) throw_domain("validity_report", "gamma must be > 0");
    ValidityReport r;
    r.rate = golden_rule_rate(Vm_sq, dos_value(dos, E_i));
    r.left_margin = 0.5 * r.rate / gamma;
    r.scale = dos_log_derivative_scale(dos, E_i);
    r.right_margin = r.scale.infinite ? 0.0 : gamma / r.scale.value;
    r.threshold = threshold;
    r.pass = r.left_margin < threshold && r.right_margin < threshold;
    return r;
}

HarmonicPrediction harmonic_rate_prediction(double Vm_sq, const DensityOfStates& dos, double E_i,
                                            double omega, double gamma)
{
    HarmonicPrediction p;
    const auto sup = support(dos);
    double D = 0.0;
    if (sup.contains(E_i + omega)) {
        p.absorption = true;
        D += dos_value(dos, E_i + omega);
    }
    if (sup.contains(E_i - omega)) {
        p.emission = true;
        D += dos_value(dos, E_i - omega);
    }
    p.rate = kTwoPi * Vm_sq * D;
    p.neglected_bound = omega > 0.0 ? gamma / (2.0 * omega) : 0.0;
    return p;
}

double superposition_rate_prediction(const Envelope& env, double V0, double Vm_sq, double D_at_Ei, double t)
{
    if (!std::holds_alternative<ExpSuperposition>(env.shape))
        throw UnsupportedShape("superposition_rate_prediction needs an ExpSuperposition envelope");
    const double V = evaluate(env, V0, t);
    return kTwoPi * V * V * Vm_sq * D_at_Ei;
}

std::string trajectory_csv(const AmplitudeTrajectory& tr, const std::function<double(double)>& predict,
                           const std::vector<std::string>& header, std::size_t stride)
{
    std::vector<std::vector<double>> rows;
    stride = std::max<std::size_t>(1, stride);
    for (std::size_t j = 0; j < tr.times.size(); j += stride) {
        const double t = tr.times[j];
        const double r = transition_rate(tr, t).value;
        const double ra = predict ? predict(t) : 0.0;
        rows.push_back({t, tr.c_i[j].real(), tr.c_i[j].imag(), std::norm(tr.c_i[j]), tr.population[j], r, ra,
                        ra != 0.0 ? r / ra : 0.0});
    }
    return csv::render({"t", "re_ci", "im_ci", "norm_ci_sq", "sum_cf_sq", "r_numeric", "r_analytic",
                        "following_ratio"},
                       rows, header);
}

}  // namespace goldenrule
