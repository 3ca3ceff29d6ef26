#include <doctest.h>

#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <numbers>

#include "goldenrule/airy.hpp"
#include "goldenrule/errors.hpp"

using namespace goldenrule;

TEST_SUITE("airy")
{
    TEST_CASE("values at the origin")
    {
        CHECK(airy_ai(0.0) == doctest::Approx(0.3550280539).epsilon(1e-10));
        CHECK(airy_ai(0.0) == doctest::Approx(std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0)).epsilon(1e-15));
        CHECK(airy_ai_prime(0.0) == doctest::Approx(-std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0)).epsilon(1e-15));
    }

    TEST_CASE("agreement with boost")
    {
        double worst_abs = 0.0, worst_rel = 0.0, worst_dabs = 0.0;
        for (double x = -40.0; x <= 5.0; x += 0.0137) {
            worst_abs = std::max(worst_abs, std::abs(airy_ai(x) - boost::math::airy_ai(x)));
            worst_dabs = std::max(worst_dabs, std::abs(airy_ai_prime(x) - boost::math::airy_ai_prime(x)) /
                                                  std::max(1.0, std::sqrt(std::abs(x))));
        }
        for (double x = 5.0; x <= 100.0; x += 0.173)
            worst_rel = std::max(worst_rel, std::abs(airy_ai(x) / boost::math::airy_ai(x) - 1.0));
        CHECK(worst_abs < 1e-12);
        CHECK(worst_dabs < 1e-11);
        CHECK(worst_rel < 1e-11);
    }

    TEST_CASE("defining equation Ai'' = x Ai")
    {
        const double h = 1e-3;
        double worst = 0.0;
        for (double x = -10.0; x <= 5.0; x += 0.05) {
            const double d2 = (airy_ai(x + h) - 2 * airy_ai(x) + airy_ai(x - h)) / (h * h);
            // truncation h^2/12 Ai'''' with Ai'''' = 2 Ai' + x^2 Ai
            worst = std::max(worst, std::abs(d2 - x * airy_ai(x)) / std::max(1.0, x * x));
        }
        CHECK(worst < 1e-6);
        // derivative consistency, fourth-order stencil
        double dworst = 0.0;
        for (double x = -10.0; x <= 5.0; x += 0.05) {
            const double d = (airy_ai(x - 2 * h) - 8 * airy_ai(x - h) + 8 * airy_ai(x + h) - airy_ai(x + 2 * h)) / (12 * h);
            dworst = std::max(dworst, std::abs(d - airy_ai_prime(x)));
        }
        CHECK(dworst < 1e-8);
    }

    TEST_CASE("monotone decay on the positive axis")
    {
        double prev = airy_ai(0.0);
        for (double x = 0.01; x <= 30.0; x += 0.01) {
            const double v = airy_ai(x);
            CHECK(v < prev);
            CHECK(v > 0.0);
            prev = v;
        }
    }

    TEST_CASE("scaled variant and zeros")
    {
        for (double x : {1.0, 10.0, 50.0})
            CHECK(airy_ai_scaled(x) ==
                  doctest::Approx(boost::math::airy_ai(x) * std::exp(2.0 / 3.0 * std::pow(x, 1.5))).epsilon(1e-11));
        // Ai(150) underflows; asymptotic series to second order instead
        const double x = 150.0, z = 2.0 / 3.0 * std::pow(x, 1.5);
        const double series = (1.0 - (5.0 / 72.0) / z + (385.0 / 10368.0) / (z * z)) /
                              (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25));
        CHECK(airy_ai_scaled(x) == doctest::Approx(series).epsilon(1e-10));
        for (int n : {1, 2, 10, 400})
            CHECK(airy_ai_zero(n) == doctest::Approx(boost::math::airy_ai_zero<double>(n)).epsilon(1e-13));
        CHECK_THROWS_AS(airy_ai(250.0), RangeError);
        CHECK_THROWS_AS(airy_ai(-250.0), RangeError);
        CHECK_THROWS_AS(airy_ai_zero(0), DomainError);
    }
}
