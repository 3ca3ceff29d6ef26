#pragma once

#include <span>

namespace goldenrule {

// y = A * w / (pi ((x - x0)^2 + w^2)), fitted by damped least squares.
struct LorentzianFit {
    double amplitude;
    double center;
    double width;
    int iterations;
    bool converged;
    double rms_residual;
};

struct LorentzianGuess {
    double amplitude;
    double center;
    double width;
};

LorentzianFit fit_lorentzian(std::span<const double> x, std::span<const double> y,
                             const LorentzianGuess& guess, int max_iterations = 200,
                             double xtol = 1e-10);

}  // namespace goldenrule
