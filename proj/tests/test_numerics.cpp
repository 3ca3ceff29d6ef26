#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "goldenrule/csv.hpp"
#include "goldenrule/errors.hpp"
#include "goldenrule/lorentzian_fit.hpp"
#include "goldenrule/ode.hpp"
#include "goldenrule/quadrature.hpp"

using namespace goldenrule;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

TEST_SUITE("numerics")
{
    TEST_CASE("gauss-kronrod on smooth and kinked integrands")
    {
        CHECK(quad::integrate(quad::RealFn([](double x) { return std::sin(x); }), 0.0, pi).value ==
              doctest::Approx(2.0).epsilon(1e-13));
        const double br[] = {0.3};
        const auto r = quad::integrate(quad::RealFn([](double x) { return std::abs(x - 0.3); }), 0.0, 1.0, br);
        CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-13));
        const auto c = quad::integrate(quad::ComplexFn([](double x) { return std::exp(cplx(0, x)); }), 0.0, 2 * pi);
        CHECK(std::abs(c.value) < 1e-12);
    }

    TEST_CASE("whole-period summation of an oscillatory integrand")
    {
        const double w = 20.0, L = 50.0;
        auto f = [&](double x) { return std::exp(cplx(-x, w * x)); };
        const auto r = quad::integrate_periods(quad::ComplexFn(f), 0.0, L, 0.0, w, {1e-14, 1e-12, 20000});
        const cplx exact = (1.0 - std::exp(cplx(-1.0, w) * L)) / cplx(1.0, -w);
        CHECK(std::abs(r.value - exact) < 1e-12);
    }

    TEST_CASE("budget exhaustion raises ToleranceFailure with the estimate")
    {
        auto f = [](double x) { return std::sin(1.0 / x); };
        CHECK_THROWS_AS(quad::integrate(quad::RealFn(f), 1e-6, 1.0, {0.0, 1e-15, 5}), ToleranceFailure);
    }

    TEST_CASE("adaptive simpson")
    {
        CHECK(quad::simpson([](double x) { return x * x * x * x; }, 0.0, 1.0, 1e-12) ==
              doctest::Approx(0.2).epsilon(1e-11));
    }

    TEST_CASE("dormand-prince: oscillator and decay with dense output")
    {
        const double w = 3.0;
        ode::State y{cplx(1.0, 0.0), cplx(1.0, 0.0)};
        auto rhs = [&](double, std::span<const cplx> u, std::span<cplx> du) {
            du[0] = cplx(0.0, w) * u[0];
            du[1] = -u[1];
        };
        double worst = 0.0;
        auto obs = [&](const ode::DenseInterval& d) {
            const double tm = 0.5 * (d.begin() + d.end());
            worst = std::max(worst, std::abs(d.at(0, tm) - std::exp(cplx(0.0, w * tm))));
            worst = std::max(worst, std::abs(d.at(1, tm) - std::exp(-tm)));
        };
        const auto st = ode::integrate(rhs, y, 0.0, 10.0, {1e-10, 1e-13}, obs);
        CHECK(std::abs(y[0] - std::exp(cplx(0.0, 30.0))) < 1e-8);
        CHECK(std::abs(y[1] - std::exp(-10.0)) < 1e-10);
        CHECK(worst < 1e-8);
        CHECK(st.accepted > 0);
    }

    TEST_CASE("csv round trip and atomic write")
    {
        const double x = 0.1 + 0.2;
        CHECK(std::stod(csv::number(x)) == x);
        const std::string text = csv::render({"a", "b"}, {{1.0, x}, {-2.5, 1e-300}}, {"note"});
        CHECK(text.rfind("# note\na,b\n", 0) == 0);
        std::istringstream in(text);
        const auto t = csv::parse(in);
        REQUIRE(t.rows.size() == 2);
        CHECK(t.column("b")[0] == x);
        CHECK(t.rows[1][1] == 1e-300);
        CHECK_THROWS_AS(t.index("c"), DomainError);

        const auto dir = std::filesystem::temp_directory_path() / "goldenrule_csv_test";
        std::filesystem::create_directories(dir);
        csv::write_atomic(dir / "t.csv", text);
        CHECK(csv::read(dir / "t.csv").rows.size() == 2);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("lorentzian fit recovers a synthetic line")
    {
        std::vector<double> x, y;
        const double A = 2.0, x0 = 0.3, w = 0.7;
        for (int k = -200; k <= 200; ++k) {
            x.push_back(0.05 * k);
            y.push_back(A * w / (pi * ((x.back() - x0) * (x.back() - x0) + w * w)));
        }
        const auto f = fit_lorentzian(x, y, {1.0, 0.0, 1.0});
        CHECK(f.converged);
        CHECK(f.amplitude == doctest::Approx(A).epsilon(1e-8));
        CHECK(f.center == doctest::Approx(x0).epsilon(1e-8));
        CHECK(f.width == doctest::Approx(w).epsilon(1e-8));
    }
}
