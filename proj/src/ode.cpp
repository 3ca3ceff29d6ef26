#include "goldenrule/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "goldenrule/errors.hpp"

namespace goldenrule::ode {
namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense output
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double error_norm(const State& y0, const State& y1, const State& err, const Options& opt)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < y0.size(); ++i) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        sum += std::norm(err[i]) / (sc * sc);
    }
    return std::sqrt(sum / static_cast<double>(std::max<std::size_t>(1, y0.size())));
}

double initial_step(const Rhs& rhs, double t0, const State& y0, const State& f0, double dir_span,
                    const Options& opt, Stats& stats)
{
    // Hairer-Norsett-Wanner starting step heuristic
    const std::size_t n = y0.size();
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = opt.atol + opt.rtol * std::abs(y0[i]);
        dnf += std::norm(f0[i]) / (sk * sk);
        dny += std::norm(y0[i]) / (sk * sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min({h, opt.max_step, dir_span});
    State y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h * f0[i];
    rhs(t0 + h, y1, f1);
    ++stats.rhs_evaluations;
    double der2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = opt.atol + opt.rtol * std::abs(y0[i]);
        der2 += std::norm(f1[i] - f0[i]) / (sk * sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3)
                                     : std::pow(0.01 / der12, 1.0 / 5.0);
    return std::min({100.0 * h, h1, opt.max_step, dir_span});
}

}  // namespace

void DenseInterval::evaluate(double t, std::span<cplx> out) const
{
    const double th = (t - t0_) / h_;
    const double th1 = 1.0 - th;
    for (std::size_t i = 0; i < r1_.size(); ++i)
        out[i] = r1_[i] + th * (r2_[i] + th1 * (r3_[i] + th * (r4_[i] + th1 * r5_[i])));
}

Stats integrate(const Rhs& rhs, State& y, double t0, double t1, const Options& opt,
                const StepObserver& observer)
{
    Stats stats;
    if (!(t1 > t0)) return stats;
    const std::size_t n = y.size();
    State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
    State r1(n), r2(n), r3(n), r4(n), r5(n);

    rhs(t0, y, k1);
    ++stats.rhs_evaluations;
    double h = opt.initial_step > 0.0 ? opt.initial_step
                                      : initial_step(rhs, t0, y, k1, t1 - t0, opt, stats);
    double t = t0;
    double err_old = 1e-4;
    bool last_rejected = false;
    constexpr double beta = 0.04;
    constexpr double expo1 = 0.2 - beta * 0.75;
    constexpr double safe = 0.9;

    while (t < t1) {
        if (stats.accepted + stats.rejected >= opt.max_steps) {
            std::ostringstream os;
            os << "ODE integration exceeded " << opt.max_steps << " steps at t=" << t;
            throw StiffnessError(os.str(), t, h, opt.max_frequency * h);
        }
        const double hmin = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < hmin) {
            std::ostringstream os;
            os << "step size underflow at t=" << t << " (dt=" << h
               << ", largest |omega_fi|*dt=" << opt.max_frequency * h << ")";
            throw StiffnessError(os.str(), t, h, opt.max_frequency * h);
        }
        if (t + h > t1 || t + 1.01 * h >= t1) h = t1 - t;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double tph = t + h;
        rhs(tph, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(tph, ynew, k7);
        stats.rhs_evaluations += 6;
        for (std::size_t i = 0; i < n; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

        const double e = error_norm(y, ynew, err, opt);
        const double fac11 = std::pow(e, expo1);
        double fac = fac11 / std::pow(err_old, beta);
        fac = std::clamp(fac / safe, 1.0 / 10.0, 5.0);
        double hnew = h / fac;

        if (e <= 1.0) {
            err_old = std::max(e, 1e-4);
            for (std::size_t i = 0; i < n; ++i) {
                const cplx ydiff = ynew[i] - y[i];
                const cplx bspl = h * k1[i] - ydiff;
                r1[i] = y[i];
                r2[i] = ydiff;
                r3[i] = bspl;
                r4[i] = ydiff - h * k7[i] - bspl;
                r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            if (observer) observer(DenseInterval(t, h, r1, r2, r3, r4, r5));
            std::swap(k1, k7);
            std::swap(y, ynew);
            t = (h == t1 - t) ? t1 : tph;
            ++stats.accepted;
            if (last_rejected) hnew = std::min(hnew, h);
            last_rejected = false;
        } else {
            hnew = h / std::min(1.0 / 0.2, fac11 / safe);
            ++stats.rejected;
            last_rejected = true;
        }
        h = std::min(hnew, opt.max_step);
    }
    return stats;
}

}  // namespace goldenrule::ode
