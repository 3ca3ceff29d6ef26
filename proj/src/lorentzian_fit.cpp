#include "goldenrule/lorentzian_fit.hpp"

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "goldenrule/errors.hpp"

namespace goldenrule {
namespace {

struct Residuals : Eigen::DenseFunctor<double> {
    std::span<const double> x, y;
    double scale;  // residuals are divided by the peak of y

    Residuals(std::span<const double> x_, std::span<const double> y_, double s)
        : Eigen::DenseFunctor<double>(3, static_cast<int>(x_.size())), x(x_), y(y_), scale(s) {}

    // p = (A, x0, w)
    int operator()(const InputType& p, ValueType& r) const
    {
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double d = x[k] - p[1];
            r[static_cast<Eigen::Index>(k)] =
                (p[0] * p[2] / (std::numbers::pi * (d * d + p[2] * p[2])) - y[k]) / scale;
        }
        return 0;
    }

    int df(const InputType& p, JacobianType& J) const
    {
        for (std::size_t k = 0; k < x.size(); ++k) {
            const auto i = static_cast<Eigen::Index>(k);
            const double d = x[k] - p[1];
            const double q = d * d + p[2] * p[2];
            const double L = p[2] / (std::numbers::pi * q);
            J(i, 0) = L / scale;
            J(i, 1) = p[0] * p[2] * 2.0 * d / (std::numbers::pi * q * q) / scale;
            J(i, 2) = p[0] * (q - 2.0 * p[2] * p[2]) / (std::numbers::pi * q * q) / scale;
        }
        return 0;
    }
};

}  // namespace

LorentzianFit fit_lorentzian(std::span<const double> x, std::span<const double> y,
                             const LorentzianGuess& guess, int max_iterations, double xtol)
{
    if (x.size() != y.size() || x.size() < 3) throw_domain("fit_lorentzian", "need >= 3 matching points");
    if (!(guess.width > 0.0)) throw_domain("fit_lorentzian", "initial width must be > 0");
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) throw_domain("fit_lorentzian", "data identically zero");

    Residuals f(x, y, peak);
    Eigen::LevenbergMarquardt<Residuals> lm(f);
    lm.setXtol(xtol);
    lm.setFtol(1e-14);
    lm.setMaxfev(max_iterations);
    Eigen::VectorXd p(3);
    p << guess.amplitude, guess.center, guess.width;
    const auto status = lm.minimize(p);

    Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
    f(p, r);
    LorentzianFit out;
    out.amplitude = p[0];
    out.center = p[1];
    out.width = std::abs(p[2]);
    out.iterations = static_cast<int>(lm.iterations());
    out.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                    status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall;
    out.rms_residual = peak * std::sqrt(r.squaredNorm() / static_cast<double>(x.size()));
    return out;
}

}  // namespace goldenrule
