#include "goldenrule/fieldstates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "goldenrule/airy.hpp"
#include "goldenrule/csv.hpp"
#include "goldenrule/errors.hpp"
#include "goldenrule/perturbation.hpp"
#include "goldenrule/dynamics.hpp"
#include "goldenrule/quadrature.hpp"

namespace goldenrule {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxXi = 196.0;

void check_field(double F, double m)
{
    if (!(F > 0.0) || !std::isfinite(F)) throw_domain("uniform field", "F must be finite and > 0");
    if (!(m > 0.0) || !std::isfinite(m)) throw_domain("uniform field", "m must be finite and > 0");
}

// Fourier transform of exp(-r^2/(2 b^2)) V0 in 2D.
double gaussian_ft(const Scatterer2D& s, double q)
{
    return 2.0 * kPi * s.b * s.b * s.V0 * std::exp(-0.5 * q * q * s.b * s.b);
}

void check_scatterer(const Scatterer2D& s, int n)
{
    if (!(s.b > 0.0) || !(s.m > 0.0) || !(s.k > 0.0) || !(s.area > 0.0))
        throw_domain("Scatterer2D", "b, m, k and area must be > 0");
    if (n < 8) throw_domain("Scatterer2D", "need at least 8 angles");
}

}  // namespace

double field_length(double F, double m)
{
    check_field(F, m);
    return std::cbrt(1.0 / (2.0 * m * F));
}

UniformFieldState make_uniform_field_state(double F, double m, double E)
{
    return {F, m, field_length(F, m), E};
}

double field_wavefunction(double x, double E, double F, double m)
{
    const double a = field_length(F, m);
    return airy_ai(-(x + E / F) / a) / (a * std::sqrt(F));
}

OverlapResult smeared_overlap(double E1, double sigma, double F, double m, std::optional<XWindow> window,
                              double drift_tol)
{
    const double a = field_length(F, m);
    if (sigma <= 0.0) sigma = 0.5 * F * a;
    const double s_hat = sigma / (F * a);  // kernel width in units of the Airy argument
    const double spread = 8.0 * sigma;     // E' range on each side
    const double x_turn = -E1 / F;

    XWindow w;
    if (window) {
        w = *window;
    } else {
        const double xi_wave = std::pow(3.0 * kPi * 40.0, 2.0 / 3.0);
        const double xi_decay = 13.0 / (s_hat * s_hat);
        const double depth = std::min(kMaxXi - spread / (F * a), std::max(xi_wave, xi_decay));
        w = {x_turn - 30.0 * a - spread / F, x_turn + depth * a};
    }
    if (!(w.hi > w.lo)) throw_domain("smeared_overlap", "empty window");

    const double norm = 1.0 / (sigma * std::sqrt(2.0 * kPi));
    auto kernel = [&](double e) { return norm * std::exp(-0.5 * e * e / (sigma * sigma)); };
    auto phi = [&](double x) {
        auto g = [&](double Ep) { return kernel(Ep - E1) * field_wavefunction(x, Ep, F, m); };
        const double br[] = {E1 - 2.0 * sigma, E1, E1 + 2.0 * sigma};
        return quad::integrate(quad::RealFn(g), E1 - spread, E1 + spread, br, {1e-14 * norm, 1e-10, 4000}).value;
    };
    auto integrand = [&](double x) { return field_wavefunction(x, E1, F, m) * phi(x); };

    // cut into pieces of a few local wavelengths so no piece is very oscillatory
    std::vector<double> cuts;
    const double cut = w.hi - 0.2 * (w.hi - w.lo);
    for (double x = x_turn; x < w.hi; x += 2.0 * a) cuts.push_back(x);
    cuts.push_back(cut);
    std::sort(cuts.begin(), cuts.end());
    const quad::Options o{1e-13 * norm, 1e-9, 200000};
    const double near = quad::integrate(quad::RealFn(integrand), w.lo, cut, cuts, o).value;
    const double far = quad::integrate(quad::RealFn(integrand), cut, w.hi, cuts, o).value;

    OverlapResult r;
    r.G = near + far;
    r.ratio = r.G / norm;
    r.drift = std::abs(far / r.G);
    r.window = w;
    if (r.drift > drift_tol) {
        std::ostringstream os;
        os << "smeared_overlap: result drifts by " << r.drift << " over the last fifth of the window";
        throw WindowError(os.str(), r.drift);
    }
    return r;
}

double energy_normalize_planewave(double D)
{
    if (!(D > 0.0)) throw_domain("energy_normalize_planewave", "D must be > 0");
    return 2.0 * kPi * std::sqrt(D);
}

double scattering_rate_energy_normalized(const Scatterer2D& s, int n)
{
    check_scatterer(s, n);
    // density per unit area, energy and angle for E = k^2/2m
    const double D = s.m / (4.0 * kPi * kPi);
    const double factor = energy_normalize_planewave(D);
    const double dphi = 2.0 * kPi / n;
    double rate = 0.0;
    for (int j = 0; j < n; ++j) {
        const double phi = j * dphi;
        const double q = 2.0 * s.k * std::sin(0.5 * phi);
        // <k|V|i> with <k|k'> = delta(k - k') and a box-normalized initial state
        const double vk = gaussian_ft(s, q) / (2.0 * kPi * std::sqrt(s.area));
        const double ve = factor * vk;
        rate += 2.0 * kPi * ve * ve * dphi;
    }
    return rate;
}

double scattering_rate_explicit_dos(const Scatterer2D& s, int n)
{
    check_scatterer(s, n);
    const double E = s.k * s.k / (2.0 * s.m);
    const double dphi = 2.0 * kPi / n;
    // box states e^{ikr}/sqrt(A): per-angle density A m / (2 pi)^2 per unit energy
    const double Dbox = s.area * s.m / (4.0 * kPi * kPi) * dphi;
    ChannelledCoupling model;
    for (int j = 0; j < n; ++j) {
        const double phi = j * dphi;
        const double q = 2.0 * s.k * std::sin(0.5 * phi);
        const double v = gaussian_ft(s, q) / s.area;
        model.channels.push_back({std::to_string(j), Profile(v), make_constant(Dbox)});
    }
    const auto avg = averaged_sq_matrix_element(model, E);
    return golden_rule_rate(avg.Vm_sq, avg.total_D);
}

namespace {

XWindow ionization_window(const BoundState1D& b, double F, double a)
{
    const double Eb = b.energy();
    const double x_turn = -Eb / F;
    const double reach = 40.0 / b.kappa;
    XWindow w{-reach, std::max(x_turn, 0.0) + reach};
    w.lo = std::max(w.lo, x_turn - kMaxXi * a);
    w.hi = std::min(w.hi, x_turn + kMaxXi * a);
    return w;
}

double bound_wavefunction(const BoundState1D& b, double x) { return std::sqrt(b.kappa) * std::exp(-b.kappa * std::abs(x)); }

}  // namespace

IonizationResult toy_ionization_rate(const BoundState1D& b, double F, std::optional<XWindow> window)
{
    if (!(b.kappa > 0.0) || !(b.m > 0.0)) throw_domain("toy_ionization_rate", "kappa and m must be > 0");
    const double a = field_length(F, b.m);
    const double Eb = b.energy();
    if (!(Eb < 0.0)) throw_domain("toy_ionization_rate", "bound-state energy must be negative");
    IonizationResult r;
    r.window = window ? *window : ionization_window(b, F, a);
    const double x_turn = -Eb / F;
    auto psi = [&](double x) { return field_wavefunction(x, Eb, F, b.m); };
    std::vector<double> br{0.0, x_turn};
    for (double x = x_turn; x < r.window.hi; x += 4.0 * a) br.push_back(x);
    std::sort(br.begin(), br.end());
    const quad::Options o{1e-300, 1e-11, 20000};
    r.matrix_element =
        quad::integrate(quad::RealFn([&](double x) { return psi(x) * (-F * x) * bound_wavefunction(b, x); }),
                        r.window.lo, r.window.hi, br, o)
            .value;
    r.bound_overlap =
        quad::integrate(quad::RealFn([&](double x) { return psi(x) * bound_wavefunction(b, x); }), r.window.lo,
                        r.window.hi, br, o)
            .value;
    r.identity_matrix_element = -(b.kappa / b.m) * std::sqrt(b.kappa) * psi(0.0);
    r.rate = 2.0 * kPi * r.matrix_element * r.matrix_element;
    r.weak_field = F / (b.kappa * std::abs(Eb)) <= 0.1;
    return r;
}

BoxResult box_quantized_rate(const BoundState1D& b, double F, int level)
{
    if (level < 2) throw_domain("box_quantized_rate", "level index must be >= 2");
    const double a = field_length(F, b.m);
    const double Eb = b.energy();
    const double zn = airy_ai_zero(level);
    // level n at E_b: -(L + E_b/F)/a = a_n
    const double L = -Eb / F - a * zn;
    auto level_energy = [&](int n) { return -F * L - F * a * airy_ai_zero(n); };
    const double dE = level_energy(level + 1) - level_energy(level - 1);

    // unit-normalized box state: Ai(-(x + E/F)/a) / sqrt(a Ai'(a_n)^2) on x < L
    const double nrm = std::sqrt(a) * std::abs(airy_ai_prime(zn));
    auto phi = [&](double x) { return airy_ai(-(x + Eb / F) / a) / nrm; };
    const double x_turn = -Eb / F;
    const double lo = std::max(-40.0 / b.kappa, x_turn - kMaxXi * a);
    const double hi = std::min(L, std::max(x_turn, 0.0) + 40.0 / b.kappa);
    std::vector<double> br{0.0, x_turn};
    for (double x = x_turn; x < hi; x += 4.0 * a) br.push_back(x);
    std::sort(br.begin(), br.end());
    const double M = quad::integrate(quad::RealFn([&](double x) {
                                         return phi(x) * (-F * x) * std::sqrt(b.kappa) * std::exp(-b.kappa * std::abs(x));
                                     }),
                                     lo, hi, br, {1e-300, 1e-11, 20000})
                         .value;
    BoxResult r;
    r.wall = L;
    r.level = level;
    r.density = 2.0 / dE;
    r.matrix_element = M;
    r.rate = golden_rule_rate(M * M, r.density);
    return r;
}

std::string wavefunction_csv(double E, double F, double m, double x0, double x1, int n,
                             const std::vector<std::string>& header)
{
    if (n < 2) throw_domain("wavefunction_csv", "need at least two points");
    std::vector<std::vector<double>> rows;
    for (int j = 0; j < n; ++j) {
        const double x = x0 + (x1 - x0) * j / (n - 1);
        rows.push_back({x, field_wavefunction(x, E, F, m)});
    }
    return csv::render({"x", "psi"}, rows, header);
}

}  // namespace goldenrule
