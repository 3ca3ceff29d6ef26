#include <doctest.h>

#include <cmath>
#include <numbers>
#include <tuple>

#include "goldenrule/airy.hpp"
#include "goldenrule/errors.hpp"
#include "goldenrule/fieldstates.hpp"

using namespace goldenrule;
constexpr double pi = std::numbers::pi;

TEST_SUITE("fieldstates")
{
    TEST_CASE("wavefunction at the turning point and field scaling")
    {
        const double F = 0.3, m = 2.0, E = -1.2;
        const double a = field_length(F, m);
        CHECK(field_wavefunction(-E / F, E, F, m) == doctest::Approx(airy_ai(0.0) / (a * std::sqrt(F))));
        CHECK(field_length(2 * F, m) == doctest::Approx(a * std::pow(2.0, -1.0 / 3.0)));
        const double ratio = field_wavefunction(-E / (2 * F), E, 2 * F, m) / field_wavefunction(-E / F, E, F, m);
        CHECK(ratio == doctest::Approx(std::pow(2.0, 1.0 / 3.0) / std::sqrt(2.0)));
        CHECK_THROWS_AS(field_length(0.0, 1.0), DomainError);
    }

    TEST_CASE("smeared orthonormality")
    {
        const double F = 1.0, m = 1.0, a = field_length(F, m);
        const auto base = smeared_overlap(0.0, 0.5 * F * a, F, m);
        CHECK(base.ratio == doctest::Approx(1.0).epsilon(0.01));
        // translation: shifting E1 only moves the window
        const auto moved = smeared_overlap(3.7, 0.5 * F * a, F, m);
        CHECK(moved.ratio == doctest::Approx(base.ratio).epsilon(0.01));
        CHECK(moved.window.lo == doctest::Approx(base.window.lo - 3.7 / F));
        // a window ending early in the allowed region is caught by the drift check
        CHECK_THROWS_AS(smeared_overlap(0.0, 0.5 * F * a, F, m, XWindow{-10.0, 3.0}), WindowError);
    }

    TEST_CASE("energy-normalization factor")
    {
        CHECK(energy_normalize_planewave(1.0 / (4 * pi * pi)) == doctest::Approx(1.0));
        CHECK(energy_normalize_planewave(4.0) == doctest::Approx(2.0 * energy_normalize_planewave(1.0)));
        CHECK_THROWS_AS(energy_normalize_planewave(0.0), DomainError);
    }

    TEST_CASE("2D scattering: both routes and the Bessel closed form")
    {
        for (const Scatterer2D s : {Scatterer2D{0.1, 1.0, 1.0, 1.3, 50.0}, Scatterer2D{-0.4, 0.5, 2.0, 3.0, 7.0}}) {
            const double a = scattering_rate_energy_normalized(s);
            const double b = scattering_rate_explicit_dos(s);
            const double x = 2 * s.k * s.k * s.b * s.b;
            const double oracle = 4 * pi * pi * s.m * std::pow(s.b, 4) * s.V0 * s.V0 * std::exp(-x) *
                                  std::cyl_bessel_i(0.0, x) / s.area;
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
            CHECK(b == doctest::Approx(oracle).epsilon(1e-10));
        }
    }

    TEST_CASE("toy ionization")
    {
        const BoundState1D b{1.0, 1.0};
        const auto r = toy_ionization_rate(b, 0.05);
        CHECK(r.weak_field);
        CHECK(r.matrix_element == doctest::Approx(r.identity_matrix_element).epsilon(1e-8));
        CHECK(box_quantized_rate(b, 0.05).rate == doctest::Approx(r.rate).epsilon(0.03));
        // weaker field, smaller rate, down to nothing
        double prev = r.rate;
        for (double F : {0.04, 0.03, 0.02, 0.01}) {
            const double now = toy_ionization_rate(b, F).rate;
            CHECK(now < prev);
            prev = now;
        }
        CHECK(prev < 1e-20);
        // deeper binding suppresses the rate
        prev = toy_ionization_rate({0.8, 1.0}, 0.02).rate;
        for (double kappa : {0.9, 1.0, 1.2, 1.5}) {
            const double now = toy_ionization_rate({kappa, 1.0}, 0.02).rate;
            CHECK(now < prev);
            prev = now;
        }
    }

    TEST_CASE("box oracle for other masses and depths")
    {
        for (auto [kappa, m, F] : {std::tuple{0.8, 2.0, 0.01}, std::tuple{1.5, 0.5, 0.3}}) {
            const BoundState1D b{kappa, m};
            REQUIRE(F / (kappa * std::abs(b.energy())) <= 0.1);
            CHECK(box_quantized_rate(b, F).rate == doctest::Approx(toy_ionization_rate(b, F).rate).epsilon(0.03));
        }
    }
}
