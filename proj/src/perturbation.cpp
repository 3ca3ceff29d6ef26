#include "goldenrule/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "goldenrule/csv.hpp"
#include "goldenrule/errors.hpp"

namespace goldenrule {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const double kLn1e6 = std::log(1e6);
constexpr cplx I{0.0, 1.0};

void positive(double x, const char* shape, const char* field)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw_domain(shape, std::string(field) + " must be finite and > 0");
}

}  // namespace

void validate(const Envelope& env)
{
    std::visit(overloaded{
                   [](const RisingExp& s) { positive(s.gamma, "RisingExp", "gamma"); },
                   [](const TwoSidedExp& s) {
                       positive(s.gamma_minus, "TwoSidedExp", "gamma_minus");
                       positive(s.gamma_plus, "TwoSidedExp", "gamma_plus");
                   },
                   [](const GaussianPulse& s) { positive(s.tau, "Gaussian", "tau"); },
                   [](const RectangularPulse& s) { positive(s.T, "Rectangular", "T"); },
                   [](const PiecewiseConstant& s) {
                       if (s.segments.empty()) throw_domain("PiecewiseConstant", "no segments");
                       for (const auto& g : s.segments) positive(g.duration, "PiecewiseConstant", "duration");
                   },
                   [](const ExpSuperposition& s) {
                       if (s.terms.empty()) throw_domain("ExpSuperposition", "no terms");
                       double sum = 0.0;
                       for (const auto& k : s.terms) {
                           positive(k.gamma, "ExpSuperposition", "gamma");
                           sum += k.weight;
                       }
                       if (std::abs(sum - 1.0) > 1e-12) throw_domain("ExpSuperposition", "weights must sum to 1");
                   },
                   [](const HarmonicRisingExp& s) {
                       positive(s.gamma, "HarmonicRisingExp", "gamma");
                       positive(s.omega, "HarmonicRisingExp", "omega");
                   },
               },
               env.shape);
}

std::string shape_name(const Envelope& env)
{
    static const char* names[] = {"RisingExp",         "TwoSidedExp",      "Gaussian",
                                  "Rectangular",       "PiecewiseConstant", "ExpSuperposition",
                                  "HarmonicRisingExp"};
    return names[env.shape.index()];
}

double evaluate(const Envelope& env, double V0, double t)
{
    const double s = t - env.t_ref;
    return V0 * std::visit(overloaded{
                               [s](const RisingExp& e) { return std::exp(e.gamma * s); },
                               [s](const TwoSidedExp& e) {
                                   return s < 0.0 ? e.v_minus * std::exp(e.gamma_minus * s)
                                                  : e.v_plus * std::exp(-e.gamma_plus * s);
                               },
                               [s](const GaussianPulse& e) {
                                   const double u = s / e.tau;
                                   return std::exp(-u * u) / (e.tau * std::sqrt(std::numbers::pi));
                               },
                               [s](const RectangularPulse& e) {
                                   return (s >= -0.5 * e.T && s < 0.5 * e.T) ? 1.0 : 0.0;
                               },
                               [s](const PiecewiseConstant& e) {
                                   double a = 0.0;
                                   if (s < 0.0) return 0.0;
                                   for (const auto& g : e.segments) {
                                       if (s < a + g.duration) return g.level;
                                       a += g.duration;
                                   }
                                   return 0.0;
                               },
                               [s](const ExpSuperposition& e) {
                                   double v = 0.0;
                                   for (const auto& k : e.terms) v += k.weight * std::exp(k.gamma * s);
                                   return v;
                               },
                               [s](const HarmonicRisingExp& e) {
                                   return 2.0 * std::exp(e.gamma * s) * std::cos(e.omega * s);
                               },
                           },
                           env.shape);
}

std::vector<ExpComponent> early_components(const Envelope& env, double V0)
{
    const double t0 = env.t_ref;
    // A e^{lambda (t - t_ref)} = (A e^{-lambda t_ref}) e^{lambda t}
    auto comp = [t0](cplx A, cplx lambda) { return ExpComponent{A * std::exp(-lambda * t0), lambda}; };
    std::vector<ExpComponent> out;
    std::visit(overloaded{
                   [&](const RisingExp& e) { out.push_back(comp(V0, e.gamma)); },
                   [&](const TwoSidedExp& e) { out.push_back(comp(V0 * e.v_minus, e.gamma_minus)); },
                   [&](const ExpSuperposition& e) {
                       for (const auto& k : e.terms) out.push_back(comp(V0 * k.weight, k.gamma));
                   },
                   [&](const HarmonicRisingExp& e) {
                       out.push_back(comp(V0, cplx(e.gamma, e.omega)));
                       out.push_back(comp(V0, cplx(e.gamma, -e.omega)));
                   },
                   [](const auto&) {},
               },
               env.shape);
    return out;
}

double start_time(const Envelope& env)
{
    return env.t_ref +
           std::visit(overloaded{
                          [](const RisingExp& e) { return -kLn1e6 / e.gamma; },
                          [](const TwoSidedExp& e) { return -kLn1e6 / e.gamma_minus; },
                          [](const GaussianPulse& e) { return -8.0 * e.tau; },
                          [](const RectangularPulse& e) { return -0.5 * e.T; },
                          [](const PiecewiseConstant&) { return 0.0; },
                          [](const ExpSuperposition& e) {
                              double g = e.terms.front().gamma;
                              for (const auto& k : e.terms) g = std::min(g, k.gamma);
                              return -kLn1e6 / g;
                          },
                          [](const HarmonicRisingExp& e) { return -kLn1e6 / e.gamma; },
                      },
                      env.shape);
}

std::vector<double> breakpoints(const Envelope& env)
{
    std::vector<double> out;
    std::visit(overloaded{
                   [&](const TwoSidedExp&) { out.push_back(env.t_ref); },
                   [&](const RectangularPulse& e) {
                       out.push_back(env.t_ref - 0.5 * e.T);
                       out.push_back(env.t_ref + 0.5 * e.T);
                   },
                   [&](const PiecewiseConstant& e) {
                       double a = env.t_ref;
                       out.push_back(a);
                       for (const auto& g : e.segments) out.push_back(a += g.duration);
                   },
                   [](const auto&) {},
               },
               env.shape);
    return out;
}

cplx spectral_shape(const Envelope& env, double w)
{
    return std::visit(
        overloaded{
            [w](const TwoSidedExp& e) {
                return e.v_minus / cplx(e.gamma_minus, w) + e.v_plus / cplx(e.gamma_plus, -w);
            },
            [w](const GaussianPulse& e) { return cplx(std::exp(-0.25 * w * w * e.tau * e.tau)); },
            [w](const RectangularPulse& e) {
                const double x = 0.5 * w * e.T;
                // 2 sin(wT/2)/w, analytic limit T at w = 0
                return cplx(std::abs(x) < 1e-4 ? e.T * (1.0 - x * x / 6.0) : 2.0 * std::sin(x) / w);
            },
            [w](const PiecewiseConstant& e) {
                cplx sum = 0.0;
                double a = 0.0;
                for (const auto& g : e.segments) {
                    const double b = a + g.duration;
                    // int_a^b e^{iws} ds
                    const double h = 0.5 * w * g.duration;
                    const cplx piece = std::abs(h) < 1e-4
                                           ? g.duration * (1.0 - h * h / 6.0) * std::exp(I * w * (0.5 * (a + b)))
                                           : (std::exp(I * w * b) - std::exp(I * w * a)) / (I * w);
                    sum += g.level * piece;
                    a = b;
                }
                return sum;
            },
            [&env](const auto&) -> cplx {
                throw UnsupportedShape("spectral shape undefined for " + shape_name(env) +
                                       " (not integrable over all time)");
            },
        },
        env.shape);
}

double spectral_shape_sq(const Envelope& env, double w)
{
    return std::visit(overloaded{
                          [w](const TwoSidedExp& e) {
                              if (e.v_minus != e.v_plus)
                                  throw UnsupportedShape("spectral_shape_sq: TwoSidedExp needs v_minus == v_plus");
                              const double gs = e.gamma_minus + e.gamma_plus;
                              return e.v_plus * e.v_plus * gs * gs /
                                     ((w * w + e.gamma_minus * e.gamma_minus) * (w * w + e.gamma_plus * e.gamma_plus));
                          },
                          [w](const GaussianPulse& e) { return std::exp(-0.5 * w * w * e.tau * e.tau); },
                          [&env, w](const RectangularPulse&) { return std::norm(spectral_shape(env, w)); },
                          [&env](const auto&) -> double {
                              throw UnsupportedShape("spectral_shape_sq: unsupported shape " + shape_name(env));
                          },
                      },
                      env.shape);
}

Profile::Profile(std::vector<double> E, std::vector<double> value) : E_(std::move(E)), value_(std::move(value))
{
    if (E_.size() != value_.size() || E_.size() < 2) throw_domain("Profile", "need >= 2 matching knots");
    for (std::size_t k = 1; k < E_.size(); ++k)
        if (!(E_[k] > E_[k - 1])) throw_domain("Profile", "energies must be strictly increasing");
    for (double v : value_)
        if (!std::isfinite(v)) throw_domain("Profile", "values must be finite");
}

double Profile::operator()(double E) const
{
    if (E_.empty()) return constant_;
    if (E < E_.front() || E > E_.back()) {
        std::ostringstream os;
        os << "energy " << E << " outside tabulated range [" << E_.front() << ", " << E_.back() << "]";
        throw_domain("Profile", os.str());
    }
    auto it = std::upper_bound(E_.begin(), E_.end(), E);
    std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - E_.begin()), 1, E_.size() - 1) - 1;
    const double s = (E - E_[k]) / (E_[k + 1] - E_[k]);
    return value_[k] + s * (value_[k + 1] - value_[k]);
}

MatrixElementModel load_channelled(const std::filesystem::path& path)
{
    const auto t = csv::read(path);
    const auto is = t.index("sigma"), iE = t.index("E"), iV = t.index("V"), iD = t.index("D");
    std::map<double, std::vector<const std::vector<double>*>> by_channel;
    for (const auto& r : t.rows) by_channel[r[is]].push_back(&r);
    ChannelledCoupling model;
    for (auto& [sigma, rows] : by_channel) {
        std::sort(rows.begin(), rows.end(), [iE](auto* a, auto* b) { return (*a)[iE] < (*b)[iE]; });
        std::vector<double> E, V, D;
        for (const auto* r : rows) {
            E.push_back((*r)[iE]);
            V.push_back((*r)[iV]);
            D.push_back((*r)[iD]);
        }
        std::ostringstream label;
        label << sigma;
        model.channels.push_back(Channel{label.str(), Profile(E, V), make_tabulated(E, D)});
    }
    if (model.channels.empty()) throw_domain("load_channelled", "no channels in " + path.string());
    return model;
}

AveragedCoupling averaged_sq_matrix_element(const MatrixElementModel& model, double E)
{
    return std::visit(overloaded{
                          [](const ConstantCoupling& c) { return AveragedCoupling{c.Vm * c.Vm, 0.0}; },
                          [E](const EnergyDependentCoupling& c) {
                              const double v = c.Vm(E);
                              return AveragedCoupling{v * v, 0.0};
                          },
                          [E](const ChannelledCoupling& c) {
                              if (c.channels.empty()) throw_domain("averaged_sq_matrix_element", "no channels");
                              double num = 0.0, den = 0.0;
                              for (const auto& ch : c.channels) {
                                  const double d = dos_value(ch.D, E);
                                  const double v = ch.Vm(E);
                                  num += v * v * d;
                                  den += d;
                              }
                              if (!(den > 0.0)) {
                                  std::ostringstream os;
                                  os << "total density of states vanishes at E=" << E;
                                  throw DegenerateSpectrum(os.str());
                              }
                              return AveragedCoupling{num / den, den};
                          },
                      },
                      model);
}

double effective_coupling(const MatrixElementModel& model, double E)
{
    if (const auto* c = std::get_if<ConstantCoupling>(&model)) return c->Vm;
    if (const auto* c = std::get_if<EnergyDependentCoupling>(&model)) return c->Vm(E);
    return std::sqrt(averaged_sq_matrix_element(model, E).Vm_sq);
}

}  // namespace goldenrule
