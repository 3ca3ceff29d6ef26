#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "goldenrule/errors.hpp"
#include "goldenrule/perturbation.hpp"
#include "goldenrule/quadrature.hpp"

using namespace goldenrule;
constexpr double pi = std::numbers::pi;

namespace {
// Fourier transform by brute-force quadrature, an oracle independent of the
// closed forms.
cplx numeric_transform(const Envelope& env, double w, double lo, double hi)
{
    auto f = [&](double t) { return evaluate(env, 1.0, t + env.t_ref) * std::exp(cplx(0.0, w * t)); };
    std::vector<double> br;
    for (double b : breakpoints(env)) br.push_back(b - env.t_ref);
    for (double t = lo; t < hi; t += 1.0) br.push_back(t);
    std::sort(br.begin(), br.end());
    return quad::integrate(quad::ComplexFn(f), lo, hi, br, {1e-14, 1e-12, 20000}).value;
}
}  // namespace

TEST_SUITE("perturbation")
{
    TEST_CASE("envelope values")
    {
        CHECK(evaluate({RisingExp{2.0}}, 1.0, 0.0) == doctest::Approx(1.0));
        CHECK(evaluate({GaussianPulse{1.0}}, std::sqrt(pi), 0.0) == doctest::Approx(1.0));
        CHECK(evaluate({TwoSidedExp{1.0, 2.0, 1.0, 3.0}}, 1.0, -1.0) == doctest::Approx(std::exp(-1.0)));
        CHECK(evaluate({TwoSidedExp{1.0, 2.0, 1.0, 3.0}}, 1.0, 1.0) == doctest::Approx(3.0 * std::exp(-2.0)));
        CHECK(evaluate({RectangularPulse{2.0}, 5.0}, 1.5, 5.9) == doctest::Approx(1.5));
        CHECK(evaluate({RectangularPulse{2.0}, 5.0}, 1.5, 6.1) == 0.0);
        const Envelope pw{PiecewiseConstant{{{1.0, 2.0}, {1.0, -1.0}}}, 0.0};
        CHECK(evaluate(pw, 1.0, 0.5) == 2.0);
        CHECK(evaluate(pw, 1.0, 1.5) == -1.0);
        CHECK(evaluate(pw, 1.0, 2.5) == 0.0);
        CHECK(evaluate({HarmonicRisingExp{0.5, 3.0}}, 1.0, 0.0) == doctest::Approx(2.0));
    }

    TEST_CASE("squared spectral shape examples")
    {
        CHECK(spectral_shape_sq({GaussianPulse{2.0}}, 0.0) == doctest::Approx(1.0));
        CHECK(spectral_shape_sq({RectangularPulse{3.0}}, 0.0) == doctest::Approx(9.0));
        CHECK(spectral_shape_sq({TwoSidedExp{1.0, 1.0}}, 1.0) == doctest::Approx(1.0));
        CHECK_THROWS_AS(spectral_shape_sq({RisingExp{1.0}}, 0.0), UnsupportedShape);
    }

    TEST_CASE("closed-form transforms match quadrature")
    {
        const std::vector<std::pair<Envelope, std::pair<double, double>>> cases{
            {{TwoSidedExp{0.7, 1.3, 1.0, 2.0}, 0.4}, {-60.0, 40.0}},
            {{GaussianPulse{0.8}, -1.0}, {-10.0, 10.0}},
            {{RectangularPulse{1.5}, 2.0}, {-1.0, 1.0}},
            {{PiecewiseConstant{{{0.5, 1.0}, {1.0, 0.25}}}, 0.0}, {0.0, 1.5}},
        };
        for (const auto& [env, range] : cases)
            for (double w : {0.0, 0.3, 2.0, 7.5}) {
                const cplx exact = spectral_shape(env, w);
                const cplx num = numeric_transform(env, w, range.first, range.second);
                CHECK(std::abs(exact - num) < 1e-9 * std::max(1.0, std::abs(exact)));
            }
    }

    TEST_CASE("early components reproduce the envelope before t_ref")
    {
        const std::vector<Envelope> envs{{RisingExp{0.8}, 1.0},
                                         {TwoSidedExp{0.5, 2.0, 1.5, 1.0}, -2.0},
                                         {ExpSuperposition{{{0.1, 0.25}, {0.3, 0.75}}}, 0.0},
                                         {HarmonicRisingExp{0.2, 5.0}, 0.0}};
        for (const auto& env : envs)
            for (double dt : {-0.1, -1.0, -3.7}) {
                const double t = env.t_ref + dt;
                cplx sum = 0.0;
                for (const auto& c : early_components(env, 0.3)) sum += c.amplitude * std::exp(c.lambda * t);
                CHECK(std::abs(sum - evaluate(env, 0.3, t)) < 1e-12);
            }
        CHECK(early_components({GaussianPulse{1.0}}, 1.0).empty());
    }

    TEST_CASE("start time suppresses exponential envelopes by 1e-6")
    {
        const Envelope env{RisingExp{0.5}, 2.0};
        CHECK(evaluate(env, 1.0, start_time(env)) == doctest::Approx(1e-6));
        CHECK(start_time({GaussianPulse{2.0}, 1.0}) == doctest::Approx(-15.0));
    }

    TEST_CASE("validation")
    {
        CHECK_THROWS_AS(validate({RisingExp{-1.0}}), DomainError);
        CHECK_THROWS_AS(validate({ExpSuperposition{{{0.1, 0.5}, {0.2, 0.4}}}}), DomainError);
        CHECK_THROWS_AS(validate({PiecewiseConstant{{}}}), DomainError);
        CHECK_NOTHROW(validate({ExpSuperposition{{{0.1, 0.5}, {0.2, 0.5}}}}));
    }

    TEST_CASE("channel-averaged matrix elements")
    {
        const ChannelledCoupling equal{{{"a", Profile(1.0), make_constant(0.3)}, {"b", Profile(1.0), make_constant(2.0)}}};
        CHECK(averaged_sq_matrix_element(equal, 0.0).Vm_sq == doctest::Approx(1.0));
        const ChannelledCoupling split{{{"a", Profile(1.0), make_constant(3.0)}, {"b", Profile(0.0), make_constant(1.0)}}};
        const auto avg = averaged_sq_matrix_element(split, 0.0);
        CHECK(avg.Vm_sq == doctest::Approx(0.75));
        CHECK(avg.total_D == doctest::Approx(4.0));
        CHECK(effective_coupling(split, 0.0) == doctest::Approx(std::sqrt(0.75)));

        // continuous angle with V(phi) = cos(phi) and uniform density
        ChannelledCoupling angle;
        const int n = 720;
        for (int k = 0; k < n; ++k)
            angle.channels.push_back({std::to_string(k), Profile(std::cos(2 * pi * k / n)), make_constant(1.0 / n)});
        CHECK(averaged_sq_matrix_element(angle, 0.0).Vm_sq == doctest::Approx(0.5).epsilon(1e-12));
    }

    TEST_CASE("channelled model from csv with energy dependence")
    {
        const auto p = std::filesystem::temp_directory_path() / "goldenrule_channels.csv";
        std::ofstream(p) << "sigma,E,V,D\n0,0,1,1\n0,2,3,1\n1,0,2,0.5\n1,2,2,0.5\n";
        const auto m = load_channelled(p);
        const auto avg = averaged_sq_matrix_element(m, 1.0);
        // channel 0: V = 2, D = 1; channel 1: V = 2, D = 0.5
        CHECK(avg.Vm_sq == doctest::Approx(4.0));
        CHECK(avg.total_D == doctest::Approx(1.5));
        std::filesystem::remove(p);
    }
}
