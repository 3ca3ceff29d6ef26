#include "goldenrule/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "goldenrule/errors.hpp"

namespace goldenrule::quad {
namespace {

constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067366216, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd Kronrod nodes 1,3,5,7,9
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <typename T>
struct Piece {
    double a;
    double b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

template <typename T, typename F>
Piece<T> gk21(const F& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T kron = fc * kWgk[10];
    T gauss{};
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        kron += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

template <typename T, typename F>
Result<T> adapt(const F& f, std::span<const double> cuts, const Options& opt)
{
    std::priority_queue<Piece<T>> heap;
    T total{};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] == cuts[i]) continue;
        auto p = gk21<T>(f, cuts[i], cuts[i + 1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int count = static_cast<int>(heap.size());
    while (!heap.empty() && err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (count >= opt.max_intervals) {
            std::ostringstream os;
            os << "adaptive quadrature did not converge on [" << cuts.front() << ", " << cuts.back()
               << "]: error estimate " << err << " after " << count << " intervals";
            double mag = std::abs(total);
            if constexpr (std::is_same_v<T, double>) mag = total;
            throw ToleranceFailure(os.str(), mag, err);
        }
        const Piece<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval can no longer be split in double precision; accept it
            heap.push({worst.a, worst.b, worst.value, 0.0});
            err -= worst.error;
            continue;
        }
        auto left = gk21<T>(f, worst.a, mid);
        auto right = gk21<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // recompute the sum from the pieces to shed accumulated rounding
    T sum{};
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    return {sum, esum, count};
}

std::vector<double> make_cuts(double a, double b, std::span<const double> breaks)
{
    std::vector<double> cuts{a};
    for (double x : breaks)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

template <typename T, typename F>
Result<T> oriented(const F& f, double a, double b, std::span<const double> breaks,
                   const Options& opt)
{
    if (a == b) return {};
    if (a > b) {
        auto r = adapt<T>(f, make_cuts(b, a, breaks), opt);
        r.value = -r.value;
        return r;
    }
    return adapt<T>(f, make_cuts(a, b, breaks), opt);
}

double simpson_rec(const RealFn& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) {
        std::ostringstream os;
        os << "adaptive Simpson reached maximum depth on [" << a << ", " << b << "]";
        throw ToleranceFailure(os.str(), left + right + delta / 15.0, std::abs(delta));
    }
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

RealResult integrate(const RealFn& f, double a, double b, const Options& opt)
{
    return oriented<double>(f, a, b, {}, opt);
}

ComplexResult integrate(const ComplexFn& f, double a, double b, const Options& opt)
{
    return oriented<std::complex<double>>(f, a, b, {}, opt);
}

RealResult integrate(const RealFn& f, double a, double b, std::span<const double> breaks,
                     const Options& opt)
{
    return oriented<double>(f, a, b, breaks, opt);
}

ComplexResult integrate(const ComplexFn& f, double a, double b, std::span<const double> breaks,
                        const Options& opt)
{
    return oriented<std::complex<double>>(f, a, b, breaks, opt);
}

ComplexResult integrate_periods(const ComplexFn& f, double a, double b, double anchor,
                                double omega, const Options& opt)
{
    if (omega == 0.0) return integrate(f, a, b, opt);
    const double period = 2.0 * M_PI / std::abs(omega);
    std::vector<double> cuts{a};
    double k = std::floor((a - anchor) / period) + 1.0;
    for (double x = anchor + k * period; x < b; x = anchor + (++k) * period) cuts.push_back(x);
    cuts.push_back(b);

    const std::size_t n = cuts.size() - 1;
    Options local = opt;
    local.abs_tol = opt.abs_tol / std::sqrt(static_cast<double>(n));
    ComplexResult out;
    for (std::size_t i = 0; i < n; i += 2) {
        std::complex<double> pair{};
        const std::size_t last = std::min(i + 2, n);
        for (std::size_t j = i; j < last; ++j) {
            auto r = adapt<std::complex<double>>(f, std::vector<double>{cuts[j], cuts[j + 1]}, local);
            pair += r.value;
            out.error += r.error;
            out.intervals += r.intervals;
        }
        out.value += pair;
    }
    return out;
}

double simpson(const RealFn& f, double a, double b, double tol, int max_depth)
{
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace goldenrule::quad
