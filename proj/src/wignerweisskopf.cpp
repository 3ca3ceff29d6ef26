#include "goldenrule/wignerweisskopf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "goldenrule/csv.hpp"
#include "goldenrule/errors.hpp"
#include "goldenrule/quadrature.hpp"

namespace goldenrule {
namespace {

constexpr double kPi = std::numbers::pi;

void check_window(double lo, double hi, double omega_i)
{
    if (!(lo < hi)) throw_domain("CouplingFunction", "empty support");
    if (!(omega_i > lo && omega_i < hi))
        throw_domain("CouplingFunction", "omega_i must lie strictly inside the support (edge)");
}

struct Line {
    double slope;
    double intercept;
    double rms;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double ss = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = y[k] - (icpt + slope * x[k]);
        ss += r * r;
    }
    return {slope, icpt, std::sqrt(ss / n)};
}

}  // namespace

CouplingFunction::CouplingFunction(std::function<double(double)> f, double lo, double hi, double omega_i,
                                   std::vector<double> kinks)
    : f_(std::move(f)), lo_(lo), hi_(hi), omega_i_(omega_i), kinks_(std::move(kinks))
{
    check_window(lo_, hi_, omega_i_);
    for (double w : {lo_, omega_i_, hi_, 0.5 * (lo_ + omega_i_), 0.5 * (omega_i_ + hi_)})
        if (!(f_(w) >= 0.0) || !std::isfinite(f_(w))) throw_domain("CouplingFunction", "f must be finite and >= 0");
}

CouplingFunction CouplingFunction::flat(double c, double omega_i, double below, double above)
{
    return {[c](double) { return c; }, omega_i - below, omega_i + above, omega_i, {}};
}

CouplingFunction CouplingFunction::linear(double c, double slope, double omega_i, double below, double above)
{
    return {[=](double w) { return c + slope * (w - omega_i); }, omega_i - below, omega_i + above, omega_i, {}};
}

CouplingFunction CouplingFunction::power_law(double c, double w0, double n, double lo, double hi, double omega_i)
{
    if (!(lo > 0.0) || !(w0 > 0.0)) throw_domain("CouplingFunction", "power law needs positive frequencies");
    return {[=](double w) { return c * std::pow(w / w0, n); }, lo, hi, omega_i, {}};
}

CouplingFunction CouplingFunction::tabulated(std::vector<double> omega, std::vector<double> f, double omega_i)
{
    Profile p(omega, f);
    for (std::size_t k = 1; k + 1 < omega.size(); ++k) {
        if (omega[k] != omega_i) continue;
        const double sl = (f[k] - f[k - 1]) / (omega[k] - omega[k - 1]);
        const double sr = (f[k + 1] - f[k]) / (omega[k + 1] - omega[k]);
        if (std::abs(sl - sr) > 1e-12 * std::max(std::abs(sl), std::abs(sr)))
            throw_domain("CouplingFunction", "f is not differentiable at omega_i");
    }
    const double lo = omega.front(), hi = omega.back();
    std::vector<double> kinks(omega.begin() + 1, omega.end() - 1);
    return {[p](double w) { return p(w); }, lo, hi, omega_i, kinks};
}

CouplingFunction CouplingFunction::load(const std::filesystem::path& path, double omega_i)
{
    const auto t = csv::read(path);
    return tabulated(t.column("omega"), t.column("f"), omega_i);
}

double CouplingFunction::operator()(double w) const
{
    if (w < lo_ || w > hi_) return 0.0;
    return f_(w);
}

double ww_rate(const CouplingFunction& f) { return 2.0 * kPi * f(f.omega_i()); }

double principal_value_shift(const CouplingFunction& f, double rel_tol)
{
    const double wi = f.omega_i();
    const double delta = std::min(wi - f.lo(), f.hi() - wi);
    quad::Options o{1e-300, rel_tol * 1e-2, 20000};

    // odd part on the symmetric window: int_0^delta [f(wi+x) - f(wi-x)] / x dx
    std::vector<double> br;
    for (double k : f.kinks())
        if (std::abs(k - wi) < delta) br.push_back(std::abs(k - wi));
    std::sort(br.begin(), br.end());
    auto inner_fn = [&](double x) {
        if (x == 0.0) return 0.0;
        return (f(wi + x) - f(wi - x)) / x;
    };
    const double inner = quad::integrate(quad::RealFn(inner_fn), 0.0, delta, br, o).value;

    // outer remainder on the longer side
    double outer = 0.0;
    const double a = wi - f.lo(), b = f.hi() - wi;
    auto g = [&](double w) { return f(w) / (w - wi); };
    std::vector<double> kb(f.kinks().begin(), f.kinks().end());
    if (b > a) outer = quad::integrate(quad::RealFn(g), wi + delta, f.hi(), kb, o).value;
    if (a > b) outer = quad::integrate(quad::RealFn(g), f.lo(), wi - delta, kb, o).value;
    return -(inner + outer);
}

SmearedShift principal_value_shift_smeared(const CouplingFunction& f, int sign, double eps0, int levels)
{
    if (sign != 1 && sign != -1) throw_domain("principal_value_shift_smeared", "sign must be +1 or -1");
    if (levels < 2) throw_domain("principal_value_shift_smeared", "need at least two levels");
    const double wi = f.omega_i();
    const double delta = std::min(wi - f.lo(), f.hi() - wi);
    if (eps0 <= 0.0) eps0 = 0.05 * delta;
    const double s = sign;

    auto value = [&](double eps) {
        std::vector<double> br(f.kinks().begin(), f.kinks().end());
        for (double m : {-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0}) br.push_back(wi + m * eps);
        std::sort(br.begin(), br.end());
        auto h = [&](double w) {
            const cplx z(w - wi, -s * eps);
            return cplx(f(w)) / z;
        };
        return quad::integrate(quad::ComplexFn(h), f.lo(), f.hi(), br, {1e-300, 1e-13, 40000}).value;
    };

    // Neville table in eps (eps_k = eps0 / 2^k), extrapolated to eps = 0
    std::vector<double> eps(levels);
    std::vector<cplx> T(levels);
    for (int k = 0; k < levels; ++k) {
        eps[k] = eps0 / std::pow(2.0, k);
        T[k] = value(eps[k]);
    }
    cplx prev = T[levels - 1];
    std::vector<cplx> P = T;
    cplx last_diff = 0.0;
    for (int m = 1; m < levels; ++m) {
        for (int k = levels - 1; k >= m; --k) P[k] = (eps[k - m] * P[k] - eps[k] * P[k - 1]) / (eps[k - m] - eps[k]);
        last_diff = P[levels - 1] - prev;
        prev = P[levels - 1];
    }
    return {-P[levels - 1].real(), P[levels - 1].imag(), std::abs(last_diff)};
}

WWResult ww_analytic(const CouplingFunction& f) { return {ww_rate(f), principal_value_shift(f)}; }

std::vector<WWPoint> ww_decay_curve(const WWResult& res, const std::vector<double>& t_grid)
{
    std::vector<WWPoint> out;
    for (double t : t_grid) {
        if (t < 0.0) throw_domain("ww_decay_curve", "t must be >= 0");
        out.push_back({t, std::exp(-res.decay_rate * t),
                       std::exp(-0.5 * res.decay_rate * t) * std::exp(cplx(0.0, -res.energy_shift * t))});
    }
    return out;
}

WWValidation nonperturbative_validate(const CouplingFunction& f, const WWValidateOptions& opt)
{
    const double r = ww_rate(f);
    if (!(r > 0.0)) throw_domain("nonperturbative_validate", "f(omega_i) must be > 0");
    const double wi = f.omega_i();
    double below = wi - f.lo(), above = f.hi() - wi;
    if (opt.span) {
        const double half = 0.5 * *opt.span;
        below = std::min(below, half);
        above = std::min(above, half);
    }
    if (opt.n_levels < 4001) throw_domain("nonperturbative_validate", "n_levels must be >= 4001");
    if (below + above < 200.0 * r) throw_domain("nonperturbative_validate", "span must be >= 200 r");
    const double spacing = (below + above) / static_cast<double>(opt.n_levels - 1);
    if (spacing > r / 20.0) throw_domain("nonperturbative_validate", "level spacing must be <= r/20");
    const double t_fit0 = opt.fit_begin / r, t_fit1 = opt.fit_end / r;
    if (2.0 * kPi / spacing <= t_fit1) {
        std::ostringstream os;
        os << "revival time 2 pi/d_omega = " << 2.0 * kPi / spacing << " inside the fit window (ends at "
           << t_fit1 << ")";
        throw DiscretizationError(os.str());
    }

    const auto cont = discretize_function([&f](double w) { return f(w); }, wi, below, above, spacing);
    Envelope on{PiecewiseConstant{{{t_fit1 * 1.5, 1.0}}}, 0.0};
    IntegrateOptions io;
    io.mode = Mode::coupled;
    io.tol = opt.tol;
    io.seed = false;
    WWValidation v;
    v.spacing = spacing;
    v.trajectory = integrate(cont, Drive(on, 1.0), ConstantCoupling{1.0}, 0.0, t_fit1, io);
    const auto& tr = v.trajectory;

    std::vector<double> ts, lnc, ph;
    double prev_phase = 0.0, offset = 0.0;
    bool first = true;
    double last_abs = HUGE_VAL;
    for (std::size_t j = 0; j < tr.times.size(); ++j) {
        const double t = tr.times[j];
        const double a = std::abs(tr.c_i[j]);
        // |c_i| must keep decaying; allow integrator-level noise
        if (t >= t_fit0 && a > last_abs * (1.0 + 1e-6) + 1e-9) {
            std::ostringstream os;
            os << "|c_i| increases at t=" << t << " (revival); continuum too coarse";
            throw DiscretizationError(os.str());
        }
        if (t >= t_fit0) last_abs = a;
        double p = std::arg(tr.c_i[j]);
        if (!first) {
            while (p + offset - prev_phase > kPi) offset -= 2.0 * kPi;
            while (p + offset - prev_phase < -kPi) offset += 2.0 * kPi;
        }
        p += offset;
        prev_phase = p;
        first = false;
        if (t < t_fit0) continue;
        ts.push_back(t);
        lnc.push_back(std::log(a));
        ph.push_back(p);
    }
    if (ts.size() < 10) throw DomainError("nonperturbative_validate: fit window holds too few samples");
    const auto L = fit_line(ts, lnc);
    const auto P = fit_line(ts, ph);
    v.fitted_r = -2.0 * L.slope;
    v.fitted_shift = -P.slope;
    v.residual_log = L.rms;
    v.residual_phase = P.rms;
    return v;
}

}  // namespace goldenrule
