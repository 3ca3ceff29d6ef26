#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "goldenrule/errors.hpp"
#include "goldenrule/quadrature.hpp"
#include "goldenrule/wignerweisskopf.hpp"

using namespace goldenrule;
constexpr double pi = std::numbers::pi;

TEST_SUITE("wignerweisskopf")
{
    TEST_CASE("decay rate")
    {
        CHECK(ww_rate(CouplingFunction::flat(0.0, 100.0, 10.0, 10.0)) == 0.0);
        CHECK(ww_rate(CouplingFunction::flat(0.01 / (2 * pi), 100.0, 10.0, 10.0)) == doctest::Approx(0.01));
        const auto pl = CouplingFunction::power_law(0.2, 50.0, 1.5, 10.0, 90.0, 40.0);
        CHECK(ww_rate(pl) == doctest::Approx(golden_rule_rate(0.2 * std::pow(0.8, 1.5), 1.0)));
    }

    TEST_CASE("principal-value shift closed forms")
    {
        CHECK(std::abs(principal_value_shift(CouplingFunction::flat(0.3, 100.0, 20.0, 20.0))) < 1e-12);
        const double c = 0.05, a = 50.0, b = 150.0;
        CHECK(principal_value_shift(CouplingFunction::flat(c, 1000.0, a, b)) ==
              doctest::Approx(-c * std::log(b / a)).epsilon(1e-9));
        // f = 1 + s (w - w_i) on a symmetric support: only the slope survives
        const double s = 0.02, h = 30.0;
        CHECK(principal_value_shift(CouplingFunction::linear(1.0, s, 500.0, h, h)) ==
              doctest::Approx(-2 * h * s).epsilon(1e-9));
    }

    TEST_CASE("shift by quadrature with the singular point excised symmetrically")
    {
        // independent route: subtract f(w_i) analytically, integrate the rest plainly
        const auto f = CouplingFunction::power_law(0.1, 10.0, 0.5, 2.0, 30.0, 10.0);
        const double wi = 10.0, fi = f(wi);
        auto g = [&](double w) { return w == wi ? 0.0 : (f(w) - fi) / (w - wi); };
        const double br[] = {wi};
        const double rest = quad::integrate(quad::RealFn(g), 2.0, 30.0, br, {1e-14, 1e-12, 4000}).value;
        const double oracle = -(rest + fi * std::log((30.0 - wi) / (wi - 2.0)));
        CHECK(principal_value_shift(f) == doctest::Approx(oracle).epsilon(1e-8));
        CHECK(principal_value_shift_smeared(f, +1).shift == doctest::Approx(oracle).epsilon(1e-7));
        const auto m = principal_value_shift_smeared(f, -1);
        CHECK(m.shift == doctest::Approx(oracle).epsilon(1e-7));
        CHECK(m.imaginary == doctest::Approx(-pi * fi).epsilon(1e-6));
    }

    TEST_CASE("analytic decay curve")
    {
        const WWResult r{0.5, 0.1};
        const auto pts = ww_decay_curve(r, {0.0, 2.0});
        CHECK(pts[0].p == 1.0);
        CHECK(pts[1].p == doctest::Approx(std::exp(-1.0)));
        CHECK(std::arg(pts[1].c_i) == doctest::Approx(-0.2));
    }

    TEST_CASE("tabulated coupling rejects a kink at the initial frequency")
    {
        CHECK_THROWS_AS(CouplingFunction::tabulated({0.0, 1.0, 2.0}, {1.0, 2.0, 1.0}, 1.0), DomainError);
        CHECK_NOTHROW(CouplingFunction::tabulated({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0}, 1.0));
        const auto p = std::filesystem::temp_directory_path() / "goldenrule_f.csv";
        std::ofstream(p) << "omega,f\n0,1\n4,1\n";
        CHECK(CouplingFunction::load(p, 2.0)(3.0) == doctest::Approx(1.0));
        CHECK(CouplingFunction::load(p, 2.0)(5.0) == 0.0);
        std::filesystem::remove(p);
    }

    TEST_CASE("nonperturbative check on a symmetric flat band")
    {
        const double r = 1.0;
        const auto f = CouplingFunction::flat(r / (2 * pi), 2000.0, 100.0, 100.0);
        WWValidateOptions o;
        o.n_levels = 4001;
        const auto v = nonperturbative_validate(f, o);
        CHECK(v.fitted_r == doctest::Approx(r).epsilon(0.02));
        CHECK(std::abs(v.fitted_shift) < 0.02 * r);
    }

    TEST_CASE("coarse level grid is refused")
    {
        const auto f = CouplingFunction::flat(1.0 / (2 * pi), 2000.0, 100.0, 100.0);
        WWValidateOptions o;
        o.n_levels = 4001;
        o.fit_end = 200.0;  // past the revival at 2 pi / d_omega ~ 126 / r
        CHECK_THROWS_AS(nonperturbative_validate(f, o), DiscretizationError);
        o.fit_end = 10.0;
        o.n_levels = 4001;
        CHECK_THROWS_AS(nonperturbative_validate(CouplingFunction::flat(1.0 / (2 * pi), 2000.0, 300.0, 300.0), o),
                        DomainError);
    }
}
