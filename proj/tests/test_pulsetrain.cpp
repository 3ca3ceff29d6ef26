#include <doctest.h>

#include <cmath>
#include <numbers>

#include "goldenrule/errors.hpp"
#include "goldenrule/pulsetrain.hpp"

using namespace goldenrule;
constexpr double pi = std::numbers::pi;

TEST_SUITE("pulsetrain")
{
    TEST_CASE("kick examples")
    {
        const ConstantCoupling one{1.0};
        CHECK(std::abs(pulse_kick({RectangularPulse{2.5}}, 0.3, one, 0.0, 1.0) - cplx(0.0, -0.75)) < 1e-14);
        CHECK(std::abs(pulse_kick({GaussianPulse{0.7}}, 0.3, one, 0.0, 1.0) - cplx(0.0, -0.3)) < 1e-14);
        CHECK(pulse_kick({GaussianPulse{0.7}}, 0.3, one, 2.0, 0.0) == cplx(0.0, 0.0));
    }

    TEST_CASE("kick equals the first-order amplitude change of an isolated pulse")
    {
        const double tau = 1.0, V0 = 1e-3, center = 3.0;
        const Envelope env{GaussianPulse{tau}, center};
        const auto c = discretize(make_constant(1.0), 0.0, 6.0, 121);
        IntegrateOptions o;
        o.tol = 1e-11;
        o.snapshot_times = {center + 8 * tau};
        const auto tr = integrate(c, env, V0, ConstantCoupling{1.0}, center - 8 * tau, center + 8 * tau, o);
        const auto& s = tr.snapshot(center + 8 * tau);
        double worst = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const cplx kick = pulse_kick(env, V0, ConstantCoupling{1.0}, c.energies[k], 1.0);
            worst = std::max(worst, std::abs(s.c_f[k] - kick));
        }
        CHECK(worst < 1e-9);
    }

    TEST_CASE("cross-term closed forms")
    {
        // gamma+ + gamma- = 1 makes the two-sided value pi D / (gamma+ gamma-)
        CHECK(cross_term_closed_form({TwoSidedExp{0.25, 0.75}}, 2.0, 0.0).real() ==
              doctest::Approx(pi * 2.0 / (0.25 * 0.75)));
        CHECK(cross_term_closed_form({TwoSidedExp{0.5, 0.5}}, 1.0, 0.0).real() == doctest::Approx(pi / 0.25));
        CHECK(cross_term_closed_form({GaussianPulse{2.0}}, 1.5, 0.0).real() ==
              doctest::Approx(std::sqrt(2 * pi) * 1.5 / 2.0));
        CHECK(cross_term_closed_form({GaussianPulse{2.0}}, 1.0, 3.0).real() ==
              doctest::Approx(std::sqrt(2 * pi) / 2.0 * std::exp(-0.5 * 9.0 / 4.0)));
        // equal-rate limit is continuous
        const double a = cross_term_closed_form({TwoSidedExp{0.8, 0.8}}, 1.0, 1.3).real();
        const double b = cross_term_closed_form({TwoSidedExp{0.8, 0.8 * (1 + 1e-7)}}, 1.0, 1.3).real();
        CHECK(a == doctest::Approx(b).epsilon(1e-6));
    }

    TEST_CASE("cross-term integral against closed forms")
    {
        const auto flat = make_constant(1.0);
        for (auto [gm, gp] : {std::pair{0.5, 1.0}, std::pair{0.7, 0.7}, std::pair{0.25, 0.75}})
            for (double T : {0.0, 1.0, 3.0}) {
                const Envelope env{TwoSidedExp{gm, gp}};
                const cplx I = cross_term_integral(env, flat, 0.0, T, Window{-3000, 3000});
                const cplx C = cross_term_closed_form(env, 1.0, T);
                CHECK(std::abs(I - C) / std::abs(C) < 1e-3);
            }
        for (double T : {0.0, 2.0, 4.0}) {
            const Envelope env{GaussianPulse{0.5}};
            const cplx I = cross_term_integral(env, flat, 0.0, T, Window{-100, 100});
            CHECK(std::abs(I - cross_term_closed_form(env, 1.0, T)) < 1e-8);
        }
        const Envelope rect{RectangularPulse{1.0}};
        for (double T : {1.0, 2.5, 5.0})
            CHECK(std::abs(cross_term_integral(rect, flat, 0.0, T, Window{-100, 100})) / (2 * pi * 1.0) < 0.02);
        CHECK_THROWS_AS(cross_term_integral(rect, flat, 0.0, 1.0), DomainError);
    }

    TEST_CASE("train validation")
    {
        PulseTrain t;
        t.pulses = {{0.0, {GaussianPulse{1.0}}, 1.0}, {1.0, {GaussianPulse{1.0}}, 1.0}};
        CHECK_THROWS_AS(validate(t), DomainError);
        t.pulses[1].center = 8.0;
        CHECK_NOTHROW(validate(t));
        CHECK(t.separations() == std::vector<double>{8.0});
        CHECK(pulse_overlap(t.pulses[0], t.pulses[1]) < 1e-6);
    }

    TEST_CASE("additivity")
    {
        const auto c = discretize(make_constant(1.0), 0.0, 10.0, 1001);
        const double V0 = 0.15;
        const ConstantCoupling one{1.0};
        PulseTrain single;
        single.pulses = {{0.0, {GaussianPulse{1.0}}, V0}};
        // a lone pulse differs only through depletion inside the pulse, so the
        // relative defect is O(V0^2) once V0 is small
        CHECK(additivity_defect(single, c, one, 1e-10).defect < 1e-3);
        single.pulses[0].V0 = 0.0375;
        const double d1 = additivity_defect(single, c, one, 1e-11).defect;
        single.pulses[0].V0 = 0.01875;
        const double d2 = additivity_defect(single, c, one, 1e-11).defect;
        CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.1));

        PulseTrain two;
        two.pulses = {{0.0, {GaussianPulse{1.0}}, V0}, {6.0, {GaussianPulse{1.0}}, V0}};
        CHECK(additivity_defect(two, c, one, 1e-9).defect < 1e-3);

        // contiguous rectangles: r T small, T W large
        PulseTrain rect;
        const double T = 4.0, V = 0.02;
        rect.pulses = {{0.0, {RectangularPulse{T}}, V}, {T, {RectangularPulse{T}}, V}};
        const auto wide = discretize(make_constant(1.0), 0.0, 40.0, 4001);
        const double r = golden_rule_rate(V * V, 1.0);
        REQUIRE(r * T < 0.1);
        REQUIRE(1.0 / (T * 40.0) < 0.1);
        CHECK(additivity_defect(rect, wide, one, 1e-9).defect < 0.05);
    }

    TEST_CASE("generalized decay law")
    {
        std::vector<double> grid;
        for (int k = 0; k <= 100; ++k) grid.push_back(0.1 * k);
        const auto c = generalized_decay([](double) { return 0.3; }, 1.0, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK(c.p_i[k] == doctest::Approx(std::exp(-0.3 * grid[k])));
        const auto z = generalized_decay([](double) { return 0.0; }, 0.7, grid);
        CHECK(z.p_i.back() == 0.7);
        std::vector<double> long_grid{0.0, 50.0};
        const double r = 0.2, g = 0.5;
        const auto e = generalized_decay([&](double t) { return r * std::exp(-2 * g * t); }, 0.9, long_grid);
        CHECK(e.p_i.back() == doctest::Approx(0.9 * std::exp(-r / (2 * g))).epsilon(1e-9));
    }
}
