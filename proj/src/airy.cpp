#include "goldenrule/airy.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "goldenrule/errors.hpp"

namespace goldenrule {
namespace {

// Regions: Maclaurin series on [kSeriesLo, kSeriesHi]; Taylor continuation of
// Ai'' = x Ai downward from the asymptotic value at kAsymLo on
// (kSeriesHi, kAsymLo]; decaying asymptotic expansion above kAsymLo;
// oscillatory expansion below kSeriesLo.
constexpr double kSeriesLo = -8.0;
constexpr double kSeriesHi = 5.0;
constexpr double kAsymLo = 9.0;
constexpr double kGuard = 200.0;
constexpr double kNodeStep = 0.25;

using ld = long double;

void guard(double x)
{
    if (!(std::abs(x) <= kGuard)) {
        std::ostringstream os;
        os << "airy: argument " << x << " outside [-200, 200]";
        throw RangeError(os.str());
    }
}

struct Pair {
    ld f;
    ld fp;
};

// Ai = c1 f - c2 g with f, g the even/odd-type Maclaurin solutions.
Pair series(ld x)
{
    static const ld c1 = 1.0L / (std::cbrt(9.0L) * std::tgamma(2.0L / 3.0L));
    static const ld c2 = 1.0L / (std::cbrt(3.0L) * std::tgamma(1.0L / 3.0L));
    const ld x3 = x * x * x;
    // f = sum t_k, t_0 = 1, t_k = t_{k-1} x^3 / ((3k-1)(3k))
    // g = sum s_k, s_0 = x, s_k = s_{k-1} x^3 / ((3k)(3k+1))
    ld f = 1.0L, g = x, fp = 0.0L, gp = 1.0L;
    ld t = 1.0L, s = x;
    for (int k = 1; k < 200; ++k) {
        const ld tk = t * x3 / ((3.0L * k - 1.0L) * (3.0L * k));
        const ld sk = s * x3 / ((3.0L * k) * (3.0L * k + 1.0L));
        // derivatives: d/dx x^{3k} = 3k x^{3k-1}
        fp += (x != 0.0L) ? tk * (3.0L * k) / x : 0.0L;
        gp += (x != 0.0L) ? sk * (3.0L * k + 1.0L) / x : 0.0L;
        f += tk;
        g += sk;
        t = tk;
        s = sk;
        if (std::abs(tk) < 1e-22L * std::abs(f) && std::abs(sk) < 1e-22L * (std::abs(g) + 1e-300L)) break;
    }
    return {c1 * f - c2 * g, c1 * fp - c2 * gp};
}

// u_k coefficients of the asymptotic expansions, v_k for the derivative.
struct Coeffs {
    std::array<ld, 60> u{}, v{};
    Coeffs()
    {
        u[0] = 1.0L;
        v[0] = 1.0L;
        for (int k = 1; k < 60; ++k) {
            u[k] = u[k - 1] * (6.0L * k - 5.0L) * (6.0L * k - 3.0L) * (6.0L * k - 1.0L) /
                   ((2.0L * k - 1.0L) * 216.0L * k);
            v[k] = -u[k] * (6.0L * k + 1.0L) / (6.0L * k - 1.0L);
        }
    }
};
const Coeffs& coeffs()
{
    static const Coeffs c;
    return c;
}

// Sum of alternating series a_k (-1)^k / z^k truncated at its smallest term.
ld asym_sum(const std::array<ld, 60>& a, ld z)
{
    ld sum = 0.0L, term_prev = HUGE_VALL, zk = 1.0L;
    for (int k = 0; k < 60; ++k) {
        const ld term = a[k] / zk;
        if (std::abs(term) > std::abs(term_prev)) break;
        sum += (k % 2 ? -term : term);
        if (std::abs(term) < 1e-21L * std::abs(sum)) break;
        term_prev = term;
        zk *= z;
    }
    return sum;
}

// Scaled pair: Ai e^{zeta}, Ai' e^{zeta} for x >= kAsymLo.
Pair asym_decay_scaled(ld x)
{
    const ld zeta = 2.0L / 3.0L * x * std::sqrt(x);
    const ld q = std::sqrt(x);
    const ld r = std::sqrt(q);  // x^{1/4}
    const ld spi = std::sqrt(std::numbers::pi_v<ld>);
    const auto& c = coeffs();
    return {asym_sum(c.u, zeta) / (2.0L * spi * r), -r * asym_sum(c.v, zeta) / (2.0L * spi)};
}

// Oscillatory region x <= kSeriesLo.
Pair asym_oscillatory(ld x)
{
    const ld z = -x;
    const ld zeta = 2.0L / 3.0L * z * std::sqrt(z);
    const ld r = std::sqrt(std::sqrt(z));
    const ld spi = std::sqrt(std::numbers::pi_v<ld>);
    const auto& c = coeffs();
    // even/odd partial sums: sum (-1)^k a_{2k} / zeta^{2k}, sum (-1)^k a_{2k+1} / zeta^{2k+1}
    auto split = [zeta](const std::array<ld, 60>& a, ld& even, ld& odd) {
        even = 0.0L;
        odd = 0.0L;
        ld zk = 1.0L, prev = HUGE_VALL;
        for (int k = 0; k < 60; ++k) {
            const ld term = a[k] / zk;
            if (std::abs(term) > std::abs(prev)) break;
            const int j = k / 2;
            const ld sgn = (j % 2) ? -1.0L : 1.0L;
            (k % 2 ? odd : even) += sgn * term;
            if (std::abs(term) < 1e-21L) break;
            prev = term;
            zk *= zeta;
        }
    };
    ld ue, uo, ve, vo;
    split(c.u, ue, uo);
    split(c.v, ve, vo);
    const ld ph = zeta - std::numbers::pi_v<ld> / 4.0L;
    const ld cs = std::cos(ph), sn = std::sin(ph);
    return {(cs * ue + sn * uo) / (spi * r), r * (sn * ve - cs * vo) / spi};
}

// Taylor step for y'' = x y from (x0, y0, y0') by h.
Pair taylor(ld x0, Pair p, ld h)
{
    // a_{n+2} (n+2)(n+1) = x0 a_n + a_{n-1}
    std::array<ld, 80> a{};
    a[0] = p.f;
    a[1] = p.fp;
    a[2] = x0 * a[0] / 2.0L;
    for (int n = 1; n + 2 < 80; ++n) a[n + 2] = (x0 * a[n] + a[n - 1]) / ((n + 2.0L) * (n + 1.0L));
    ld y = 0.0L, yp = 0.0L, hk = 1.0L;
    for (int n = 0; n < 80; ++n) {
        y += a[n] * hk;
        if (n + 1 < 80) yp += (n + 1.0L) * a[n + 1] * hk;
        hk *= h;
    }
    return {y, yp};
}

// Nodes at kAsymLo - j * kNodeStep down to kSeriesHi, unscaled values.
struct Nodes {
    static constexpr int count = static_cast<int>((kAsymLo - kSeriesHi) / kNodeStep) + 1;
    std::array<Pair, count> p;
    Nodes()
    {
        const Pair s = asym_decay_scaled(kAsymLo);
        const ld e = std::exp(-2.0L / 3.0L * kAsymLo * std::sqrt(static_cast<ld>(kAsymLo)));
        p[0] = {s.f * e, s.fp * e};
        for (int j = 1; j < count; ++j) {
            const ld x0 = kAsymLo - (j - 1) * kNodeStep;
            // two half steps per node for margin
            Pair q = taylor(x0, p[j - 1], -0.5L * kNodeStep);
            p[j] = taylor(x0 - 0.5L * kNodeStep, q, -0.5L * kNodeStep);
        }
    }
};
const Nodes& nodes()
{
    static const Nodes n;
    return n;
}

Pair continuation(ld x)
{
    const auto& n = nodes();
    int j = static_cast<int>(std::floor((kAsymLo - x) / kNodeStep));
    if (j < 0) j = 0;
    if (j >= Nodes::count) j = Nodes::count - 1;
    const ld x0 = kAsymLo - j * kNodeStep;
    return taylor(x0, n.p[j], x - x0);
}

Pair evaluate(double x)
{
    guard(x);
    if (x < kSeriesLo) return asym_oscillatory(x);
    if (x <= kSeriesHi) return series(x);
    if (x <= kAsymLo) return continuation(x);
    const Pair s = asym_decay_scaled(x);
    const ld e = std::exp(-2.0L / 3.0L * x * std::sqrt(static_cast<ld>(x)));
    return {s.f * e, s.fp * e};
}

}  // namespace

double airy_ai(double x) { return static_cast<double>(evaluate(x).f); }

double airy_ai_prime(double x) { return static_cast<double>(evaluate(x).fp); }

double airy_ai_scaled(double x)
{
    guard(x);
    if (x <= 0.0) return airy_ai(x);
    if (x > kAsymLo) return static_cast<double>(asym_decay_scaled(x).f);
    const ld e = std::exp(2.0L / 3.0L * x * std::sqrt(static_cast<ld>(x)));
    return static_cast<double>(evaluate(x).f * e);
}

double airy_ai_zero(int n)
{
    if (n < 1) throw DomainError("airy_ai_zero: index must be >= 1");
    // asymptotic initial guess, then Newton on Ai
    const double t = 3.0 * std::numbers::pi * (4.0 * n - 1.0) / 8.0;
    const double t2 = 1.0 / (t * t);
    double z = -std::pow(t, 2.0 / 3.0) * (1.0 + t2 * (5.0 / 48.0 - t2 * (5.0 / 36.0)));
    guard(z);
    for (int it = 0; it < 50; ++it) {
        const Pair p = evaluate(z);
        const double dz = static_cast<double>(p.f / p.fp);
        z -= dz;
        if (std::abs(dz) < 1e-15 * std::abs(z)) break;
    }
    return z;
}

}  // namespace goldenrule
