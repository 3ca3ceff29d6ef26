#include "goldenrule/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "goldenrule/csv.hpp"
#include "goldenrule/errors.hpp"

namespace goldenrule {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t segment(const TabulatedDos& t, double E)
{
    auto it = std::upper_bound(t.E.begin(), t.E.end(), E);
    std::size_t k = static_cast<std::size_t>(it - t.E.begin());
    if (k == 0) k = 1;
    if (k >= t.E.size()) k = t.E.size() - 1;
    return k - 1;
}

void require_in_support(const DensityOfStates& dos, double E, const char* where)
{
    if (!support(dos).contains(E)) {
        std::ostringstream os;
        os << "energy " << E << " outside density-of-states support";
        throw_domain(where, os.str());
    }
}

// Endpoint correction factors for the composite rule on a uniform grid.
std::vector<double> rule_factors(std::size_t n)
{
    std::vector<double> f(n, 1.0);
    if (n >= 7) {
        constexpr double g[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
        for (std::size_t k = 0; k < 3; ++k) {
            f[k] = g[k];
            f[n - 1 - k] = g[k];
        }
    } else {
        f.front() = 0.5;
        f.back() = 0.5;
    }
    return f;
}

DiscretizedContinuum build(const std::function<double(double)>& density, double center,
                           std::size_t below_steps, std::size_t above_steps, double spacing)
{
    DiscretizedContinuum c;
    const std::size_t n = below_steps + above_steps + 1;
    c.center = center;
    c.spacing = spacing;
    c.center_index = below_steps;
    c.lower = center - static_cast<double>(below_steps) * spacing;
    c.upper = center + static_cast<double>(above_steps) * spacing;
    c.energies.resize(n);
    c.weights.resize(n);
    const auto f = rule_factors(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double E =
            center + (static_cast<double>(k) - static_cast<double>(below_steps)) * spacing;
        c.energies[k] = E;
        c.weights[k] = f[k] * density(E) * spacing;
    }
    c.energies[below_steps] = center;
    return c;
}

DiscretizedContinuum build(const DensityOfStates& dos, double center, std::size_t below_steps,
                           std::size_t above_steps, double spacing)
{
    require_in_support(dos, center - static_cast<double>(below_steps) * spacing, "discretize");
    require_in_support(dos, center + static_cast<double>(above_steps) * spacing, "discretize");
    return build([&dos](double E) { return dos_value(dos, E); }, center, below_steps, above_steps,
                 spacing);
}

}  // namespace

DensityOfStates make_power_law(double D0, double E0, double n)
{
    if (!(D0 > 0.0)) throw_domain("PowerLaw", "amplitude D0 must be > 0");
    if (!(E0 > 0.0)) throw_domain("PowerLaw", "reference energy E0 must be > 0");
    if (!std::isfinite(n)) throw_domain("PowerLaw", "exponent must be finite");
    return PowerLawDos{D0, E0, n};
}

DensityOfStates make_constant(double D0)
{
    if (!(D0 > 0.0)) throw_domain("Constant", "D0 must be > 0");
    return ConstantDos{D0};
}

DensityOfStates make_tabulated(std::vector<double> E, std::vector<double> D)
{
    if (E.size() != D.size()) throw_domain("Tabulated", "E and D lengths differ");
    if (E.size() < 2) throw_domain("Tabulated", "need at least two knots");
    for (std::size_t k = 0; k < E.size(); ++k) {
        if (!(D[k] > 0.0)) throw_domain("Tabulated", "D must be > 0 at every knot");
        if (k > 0 && !(E[k] > E[k - 1])) throw_domain("Tabulated", "energies must be strictly increasing");
    }
    return TabulatedDos{std::move(E), std::move(D)};
}

DensityOfStates load_tabulated_dos(const std::filesystem::path& path)
{
    const auto t = csv::read(path);
    return make_tabulated(t.column("E"), t.column("D"));
}

Support support(const DensityOfStates& dos)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(overloaded{
                          [](const PowerLawDos&) { return Support{0.0, inf, true}; },
                          [](const ConstantDos&) { return Support{-inf, inf, false}; },
                          [](const TabulatedDos& t) { return Support{t.E.front(), t.E.back(), false}; },
                      },
                      dos);
}

double dos_value(const DensityOfStates& dos, double E)
{
    require_in_support(dos, E, "dos_value");
    return std::visit(overloaded{
                          [E](const PowerLawDos& p) { return p.D0 * std::pow(E / p.E0, p.n); },
                          [](const ConstantDos& c) { return c.D0; },
                          [E](const TabulatedDos& t) {
                              const auto k = segment(t, E);
                              const double s = (E - t.E[k]) / (t.E[k + 1] - t.E[k]);
                              return t.D[k] + s * (t.D[k + 1] - t.D[k]);
                          },
                      },
                      dos);
}

double dos_derivative(const DensityOfStates& dos, double E)
{
    require_in_support(dos, E, "dos_derivative");
    return std::visit(overloaded{
                          [E](const PowerLawDos& p) {
                              return p.n == 0.0 ? 0.0 : p.D0 * p.n * std::pow(E / p.E0, p.n - 1.0) / p.E0;
                          },
                          [](const ConstantDos&) { return 0.0; },
                          [E](const TabulatedDos& t) {
                              const auto k = segment(t, E);
                              return (t.D[k + 1] - t.D[k]) / (t.E[k + 1] - t.E[k]);
                          },
                      },
                      dos);
}

double lorentzian(double E, double Gamma)
{
    if (!(Gamma > 0.0)) throw_domain("lorentzian", "Gamma must be > 0");
    return Gamma / (std::numbers::pi * (E * E + Gamma * Gamma));
}

DiscretizedContinuum discretize(const DensityOfStates& dos, double center, double halfwidth,
                                std::size_t n_levels)
{
    if (n_levels < 3 || n_levels % 2 == 0) throw_domain("discretize", "n_levels must be odd and >= 3");
    if (!(halfwidth > 0.0)) throw_domain("discretize", "halfwidth must be > 0");
    const std::size_t half = (n_levels - 1) / 2;
    auto c = build(dos, center, half, half, halfwidth / static_cast<double>(half));
    // pin the ends exactly
    c.lower = center - halfwidth;
    c.upper = center + halfwidth;
    c.energies.front() = c.lower;
    c.energies.back() = c.upper;
    return c;
}

DiscretizedContinuum discretize_window(const DensityOfStates& dos, double center, double below,
                                       double above, double spacing)
{
    if (!(spacing > 0.0)) throw_domain("discretize_window", "spacing must be > 0");
    if (!(below > 0.0) || !(above > 0.0)) throw_domain("discretize_window", "window must extend both sides");
    const auto nb = static_cast<std::size_t>(std::llround(below / spacing));
    const auto na = static_cast<std::size_t>(std::llround(above / spacing));
    if (nb + na + 1 < 3) throw_domain("discretize_window", "window holds fewer than 3 levels");
    return build(dos, center, nb, na, spacing);
}

DiscretizedContinuum discretize_function(const std::function<double(double)>& density, double center,
                                         double below, double above, double spacing)
{
    if (!(spacing > 0.0)) throw_domain("discretize_function", "spacing must be > 0");
    if (!(below > 0.0) || !(above > 0.0)) throw_domain("discretize_function", "window must extend both sides");
    const auto nb = static_cast<std::size_t>(std::llround(below / spacing));
    const auto na = static_cast<std::size_t>(std::llround(above / spacing));
    auto c = build(density, center, nb, na, spacing);
    for (double w : c.weights)
        if (!(w >= 0.0) || !std::isfinite(w)) throw_domain("discretize_function", "density must be finite and >= 0");
    return c;
}

LogDerivativeScale dos_log_derivative_scale(const DensityOfStates& dos, double E)
{
    require_in_support(dos, E, "dos_log_derivative_scale");
    if (std::holds_alternative<ConstantDos>(dos)) return LogDerivativeScale::unbounded();
    if (const auto* p = std::get_if<PowerLawDos>(&dos)) {
        if (p->n == 0.0) return LogDerivativeScale::unbounded();
        return {false, E / std::abs(p->n), false};
    }
    const auto& t = std::get<TabulatedDos>(dos);
    const double d = dos_derivative(dos, E);
    bool one_sided = false;
    for (double knot : t.E)
        if (knot == E) one_sided = true;
    if (d == 0.0) return {true, 0.0, one_sided};
    return {false, dos_value(dos, E) / std::abs(d), one_sided};
}

}  // namespace goldenrule
