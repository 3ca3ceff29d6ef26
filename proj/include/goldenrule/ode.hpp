#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace goldenrule::ode {

using cplx = std::complex<double>;
using State = std::vector<cplx>;
using Rhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dydt)>;

struct Options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0 = automatic
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 20'000'000;
    // Largest oscillation frequency present in the right-hand side. Only used
    // to report |omega| * dt when the step size underflows.
    double max_frequency = 0.0;
};

// Continuous extension of one accepted Dormand-Prince step (4th order).
class DenseInterval {
public:
    DenseInterval(double t0, double h, const State& r1, const State& r2, const State& r3,
                  const State& r4, const State& r5)
        : t0_(t0), h_(h), r1_(r1), r2_(r2), r3_(r3), r4_(r4), r5_(r5) {}

    double begin() const { return t0_; }
    double end() const { return t0_ + h_; }
    std::size_t size() const { return r1_.size(); }

    cplx at(std::size_t i, double t) const
    {
        const double th = (t - t0_) / h_;
        const double th1 = 1.0 - th;
        return r1_[i] + th * (r2_[i] + th1 * (r3_[i] + th * (r4_[i] + th1 * r5_[i])));
    }
    void evaluate(double t, std::span<cplx> out) const;

private:
    double t0_;
    double h_;
    const State& r1_;
    const State& r2_;
    const State& r3_;
    const State& r4_;
    const State& r5_;
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
};

using StepObserver = std::function<void(const DenseInterval&)>;

// Adaptive Dormand-Prince 5(4) from t0 to t1 (t1 > t0). `y` is advanced in
// place. The observer sees every accepted step with its dense interpolant.
// Throws StiffnessError when the step size underflows.
Stats integrate(const Rhs& rhs, State& y, double t0, double t1, const Options& opt,
                const StepObserver& observer);

}  // namespace goldenrule::ode
