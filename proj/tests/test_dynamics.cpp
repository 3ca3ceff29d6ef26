#include <doctest.h>

#include <cmath>
#include <numbers>

#include "goldenrule/dynamics.hpp"
#include "goldenrule/errors.hpp"
#include "goldenrule/quadrature.hpp"

using namespace goldenrule;
constexpr double pi = std::numbers::pi;

TEST_SUITE("dynamics")
{
    TEST_CASE("zero perturbation leaves the initial state alone")
    {
        const auto c = discretize(make_constant(1.0), 0.0, 10.0, 201);
        IntegrateOptions o;
        o.mode = Mode::coupled;
        o.snapshot_times = {1.0};
        const auto tr = integrate(c, Envelope{RisingExp{1.0}}, 0.0, ConstantCoupling{1.0}, -5.0, 1.0, o);
        for (auto ci : tr.c_i) CHECK(std::abs(ci - 1.0) == 0.0);
        for (auto cf : tr.snapshot(1.0).c_f) CHECK(std::abs(cf) == 0.0);
        CHECK(transition_rate(tr, 0.0).value == 0.0);
    }

    TEST_CASE("one resonant level: Rabi oscillation")
    {
        DiscretizedContinuum c;
        c.energies = {0.0};
        c.weights = {1.0};
        c.spacing = 1.0;
        c.lower = c.upper = 0.0;
        const double V = 0.7;
        const Envelope env{PiecewiseConstant{{{20.0, 1.0}}}, 0.0};
        IntegrateOptions o;
        o.mode = Mode::coupled;
        o.tol = 1e-11;
        o.sample_spacing = 0.01;
        const auto tr = integrate(c, env, V, ConstantCoupling{1.0}, 0.0, 10.0, o);
        double worst = 0.0;
        for (std::size_t j = 0; j < tr.times.size(); ++j)
            worst = std::max(worst, std::abs(std::norm(tr.c_i[j]) - std::pow(std::cos(V * tr.times[j]), 2)));
        CHECK(worst < 1e-8);
    }

    TEST_CASE("first-order amplitudes match the rising-exponential closed form")
    {
        const double g = 1.0, V0 = 0.05, tol = 1e-9;
        const auto c = discretize(make_constant(1.0), 0.0, 20.0, 401);
        const Envelope env{RisingExp{g}};
        IntegrateOptions o;
        o.tol = tol;
        o.snapshot_times = {-3.0, 0.0, 1.0};
        const auto tr = integrate(c, env, V0, ConstantCoupling{1.0}, start_time(env), 1.0, o);
        for (double t : o.snapshot_times) {
            const auto& s = tr.snapshot(t);
            double worst = 0.0, scale = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                const cplx exact = analytic_cf_rising_exp(V0, c.energies[k], g, t);
                worst = std::max(worst, std::abs(s.c_f[k] - exact));
                scale = std::max(scale, std::abs(exact));
            }
            CHECK(worst <= 10 * tol * scale);
        }
    }

    TEST_CASE("closed-form amplitude examples")
    {
        const cplx c = analytic_cf_rising_exp(1.0, 0.0, 1.0, 0.0);
        CHECK(std::abs(c - cplx(0.0, -1.0)) < 1e-15);
        for (double t : {-1.0, 0.5})
            CHECK(std::norm(analytic_cf_rising_exp(0.3, 0.0, 2.0, t)) ==
                  doctest::Approx(std::pow(0.3 / 2.0, 2) * std::exp(4.0 * t)));
        // d|c_f|^2/dt at t = 0 is 2 pi V^2 Lorentzian(omega, gamma)
        const double w = 3.0, g = 0.5, h = 1e-5;
        const double d = (std::norm(analytic_cf_rising_exp(1.0, w, g, h)) - std::norm(analytic_cf_rising_exp(1.0, w, g, -h))) / (2 * h);
        CHECK(d == doctest::Approx(2 * 0.5 / 9.25).epsilon(1e-8));
        CHECK(d == doctest::Approx(2 * pi * lorentzian(w, g)).epsilon(1e-8));
    }

    TEST_CASE("static golden-rule rate")
    {
        CHECK(golden_rule_rate(0.0, 1.0) == 0.0);
        CHECK(golden_rule_rate(0.01, 1.0) == doctest::Approx(0.06283).epsilon(1e-4));
        const ChannelledCoupling m{{{"a", Profile(0.3), make_constant(2.0)}, {"b", Profile(1.1), make_constant(0.5)}}};
        const auto avg = averaged_sq_matrix_element(m, 0.0);
        CHECK(golden_rule_rate(avg.Vm_sq, avg.total_D) ==
              doctest::Approx(2 * pi * (0.09 * 2.0 + 1.21 * 0.5)).epsilon(1e-14));
    }

    TEST_CASE("quasi-adiabatic following prediction")
    {
        const auto dos = make_constant(2.0);
        const Envelope r{RisingExp{0.4}};
        CHECK(golden_rule_following(r, 0.1, ConstantCoupling{0.5}, dos, 0.0, 0.0) ==
              doctest::Approx(golden_rule_rate(0.01 * 0.25, 2.0)));
        const Envelope g{GaussianPulse{1.5}};
        CHECK(golden_rule_following(g, 1.0, ConstantCoupling{1.0}, dos, 0.0, 1.5) ==
              doctest::Approx(std::exp(-2.0) * golden_rule_following(g, 1.0, ConstantCoupling{1.0}, dos, 0.0, 0.0)));
        CHECK(golden_rule_following(r, 0.0, ConstantCoupling{1.0}, dos, 0.0, 0.0) == 0.0);
    }

    TEST_CASE("depletion")
    {
        const Envelope env{RisingExp{1.0}};
        const double V0 = 0.04, D = 1.0;
        const auto d = depletion(env, V0, 1.0, D, 1.0, 0.5);
        CHECK(d.analytic == doctest::Approx(d.integral).epsilon(0.01));
        // independent quadrature of the following rate
        const double q = quad::integrate(
                             quad::RealFn([&](double t) { return 2 * pi * std::pow(evaluate(env, V0, t), 2) * D; }),
                             -40.0, 0.5)
                             .value;
        CHECK(d.integral == doctest::Approx(q).epsilon(1e-8));
        CHECK(depletion(env, V0, 1.0, D, 0.5, 0.5).analytic == doctest::Approx(2 * d.analytic));
        CHECK(depletion(env, 0.0, 1.0, D, 1.0, 0.0).analytic == 0.0);
    }

    TEST_CASE("validity margins")
    {
        const auto lin = make_power_law(1.0, 100.0, 1.0);
        const auto v = validity_report(0.02 / (2 * pi), lin, 100.0, 1.0);
        CHECK(v.left_margin == doctest::Approx(0.01));
        CHECK(v.right_margin == doctest::Approx(0.01));
        CHECK(v.pass);
        const auto flat = validity_report(1.0 / pi, make_constant(1.0), 0.0, 1.0);
        CHECK(flat.left_margin == doctest::Approx(1.0));
        CHECK(flat.right_margin == 0.0);
        CHECK(flat.scale.infinite);
        CHECK_FALSE(flat.pass);
    }

    TEST_CASE("harmonic prediction")
    {
        const auto flat = make_constant(1.0);
        CHECK(harmonic_rate_prediction(0.01, flat, 0.0, 0.0).rate == doctest::Approx(2 * golden_rule_rate(0.01, 1.0)));
        const auto h = harmonic_rate_prediction(0.01, flat, 5.0, 2.0, 0.1);
        CHECK(h.rate == doctest::Approx(2 * golden_rule_rate(0.01, 1.0)));
        CHECK(h.neglected_bound == doctest::Approx(0.025));
        const auto pl = make_power_law(1.0, 1.0, 1.0);
        const auto one = harmonic_rate_prediction(0.01, pl, 1.0, 2.0);
        CHECK(one.absorption);
        CHECK_FALSE(one.emission);
        CHECK(one.rate == doctest::Approx(golden_rule_rate(0.01, 3.0)));
    }

    TEST_CASE("superposition prediction")
    {
        const auto flat = make_constant(1.0);
        const Envelope single{ExpSuperposition{{{0.3, 1.0}}}};
        const Envelope same{ExpSuperposition{{{0.3, 0.4}, {0.3, 0.6}}}};
        for (double t : {-2.0, 0.0, 1.0}) {
            const double ref = golden_rule_following({RisingExp{0.3}}, 0.2, ConstantCoupling{1.0}, flat, 0.0, t);
            CHECK(superposition_rate_prediction(single, 0.2, 1.0, 1.0, t) == doctest::Approx(ref));
            CHECK(superposition_rate_prediction(same, 0.2, 1.0, 1.0, t) == doctest::Approx(ref));
        }
        CHECK_THROWS_AS(superposition_rate_prediction({RisingExp{1.0}}, 1.0, 1.0, 1.0, 0.0), UnsupportedShape);
    }

    TEST_CASE("coupled-mode decay under a constant drive")
    {
        // flat band, drive switched on at t = 0: |c_i|^2 = exp(-r t) once the transient is over
        const double V = 0.05, D = 1.0, r = 2 * pi * V * V * D;
        const auto c = discretize(make_constant(D), 0.0, 40.0, 16001);
        IntegrateOptions o;
        o.mode = Mode::coupled;
        const Envelope env{PiecewiseConstant{{{400.0, 1.0}}}, 0.0};
        const auto tr = integrate(c, env, V, ConstantCoupling{1.0}, 0.0, 4.0 / r, o);
        const double t1 = 2.0 / r, t2 = 4.0 / r * 0.99;
        const double fitted = -std::log(std::norm(ci_at(tr, t2)) / std::norm(ci_at(tr, t1))) / (t2 - t1);
        CHECK(fitted == doctest::Approx(r).epsilon(0.02));
        CHECK(tr.max_norm_defect < 1e-7);
    }

    TEST_CASE("trajectory export columns")
    {
        const auto c = discretize(make_constant(1.0), 0.0, 5.0, 51);
        const Envelope env{RisingExp{1.0}};
        const auto tr = integrate(c, env, 0.01, ConstantCoupling{1.0}, -3.0, 0.0);
        const auto text = trajectory_csv(tr, nullptr, {"h"});
        CHECK(text.find("t,re_ci,im_ci,norm_ci_sq,sum_cf_sq,r_numeric,r_analytic,following_ratio") != std::string::npos);
        CHECK(text.rfind("# h\n", 0) == 0);
    }
}
