#include "goldenrule/scenario/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "goldenrule/errors.hpp"
#include "goldenrule/perturbation.hpp"
#include "goldenrule/pulsetrain.hpp"

namespace goldenrule::scenario {
namespace {

std::string join(const std::vector<std::string>& v)
{
    std::string s = "invalid scenario config:";
    for (const auto& p : v) s += "\n  " + p;
    return s;
}

struct Check {
    const char* desc;
    std::function<bool(double)> ok;
};

const Check any{"", [](double) { return true; }};
const Check positive{"must be > 0", [](double x) { return x > 0.0; }};
const Check nonnegative{"must be >= 0", [](double x) { return x >= 0.0; }};
const Check unit_open{"must lie in (0, 1)", [](double x) { return x > 0.0 && x < 1.0; }};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Typed access to one mapping node; remembers which keys were read so the
// rest can be reported as unknown.
class Block {
public:
    Block(const YAML::Node& node, std::string prefix, std::vector<std::string>& errs)
        : node_(node), prefix_(std::move(prefix)), errs_(errs)
    {
        if (node_ && !node_.IsMap() && !node_.IsNull()) {
            error("", "must be a mapping");
            ok_ = false;
        }
    }

    bool ok() const { return ok_; }
    bool has(const std::string& key) const { return ok_ && node_ && node_.IsMap() && node_[key]; }

    const YAML::Node raw(const std::string& key)
    {
        seen_.insert(key);
        if (!has(key)) return YAML::Node(YAML::NodeType::Undefined);
        return node_[key];
    }

    double number(const std::string& key, double def, const Check& c = any)
    {
        const YAML::Node n = raw(key);
        if (!n) return def;
        double v = def;
        if (!to_number(n, key, v)) return def;
        if (!c.ok(v)) error(key, std::string(c.desc) + " (got " + fmt(v) + ")");
        return v;
    }

    std::size_t count(const std::string& key, std::size_t def, std::size_t min)
    {
        const double v = number(key, static_cast<double>(def));
        if (v != std::floor(v) || v < static_cast<double>(min)) {
            error(key, "must be an integer >= " + std::to_string(min) + " (got " + fmt(v) + ")");
            return def;
        }
        return static_cast<std::size_t>(v);
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> def, const Check& c = any)
    {
        const YAML::Node n = raw(key);
        if (!n) return def;
        if (!n.IsSequence() || n.size() == 0) {
            error(key, "must be a non-empty list of numbers");
            return def;
        }
        std::vector<double> out;
        for (std::size_t j = 0; j < n.size(); ++j) {
            double v = 0.0;
            const std::string k = key + "[" + std::to_string(j) + "]";
            if (!to_number(n[j], k, v)) continue;
            if (!c.ok(v)) error(k, std::string(c.desc) + " (got " + fmt(v) + ")");
            out.push_back(v);
        }
        return out;
    }

    std::string text(const std::string& key, const std::string& def, const std::vector<std::string>& allowed = {})
    {
        const YAML::Node n = raw(key);
        if (!n) return def;
        if (!n.IsScalar()) {
            error(key, "must be a string");
            return def;
        }
        const std::string v = n.Scalar();
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            error(key, "must be one of {" + list + "} (got '" + v + "')");
            return def;
        }
        return v;
    }

    Block child(const std::string& key) { return Block(raw(key), path(key), errs_); }

    void finish() const
    {
        if (!ok_ || !node_ || !node_.IsMap()) return;
        for (const auto& kv : node_) {
            const std::string k = kv.first.as<std::string>();
            if (!seen_.count(k)) errs_.push_back(path(k) + ": unknown key");
        }
    }

    void error(const std::string& key, const std::string& what) const
    {
        errs_.push_back((key.empty() ? prefix_ : path(key)) + ": " + what);
    }

    std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    std::vector<std::string>& errors() const { return errs_; }

private:
    bool to_number(const YAML::Node& n, const std::string& key, double& v) const
    {
        if (!n.IsScalar()) {
            error(key, "must be a number");
            return false;
        }
        try {
            v = n.as<double>();
        } catch (const YAML::Exception&) {
            error(key, "must be a number (got '" + n.Scalar() + "')");
            return false;
        }
        if (!std::isfinite(v)) {
            error(key, "must be finite");
            return false;
        }
        return true;
    }

    YAML::Node node_;
    std::string prefix_;
    std::vector<std::string>& errs_;
    std::set<std::string> seen_;
    bool ok_ = true;
};

// Runs a module constructor or validator, turning its DomainError into a
// config error at `where`.
template <class F>
void guarded(Block& b, const std::string& where, F&& f)
{
    try {
        f();
    } catch (const std::exception& e) {
        b.error(where, e.what());
    }
}

DensityOfStates parse_dos(Block b, const std::filesystem::path& base, const DensityOfStates& def)
{
    if (!b.ok()) return def;
    const std::string kind = b.text("kind", "", {"constant", "power_law", "tabulated"});
    DensityOfStates out = def;
    if (kind == "constant") {
        const double D0 = b.number("D0", 1.0, positive);
        guarded(b, "D0", [&] { out = make_constant(D0); });
    } else if (kind == "power_law") {
        const double D0 = b.number("D0", 1.0, positive);
        const double E0 = b.number("E0", 1.0, positive);
        const double n = b.number("n", 0.0);
        guarded(b, "", [&] { out = make_power_law(D0, E0, n); });
    } else if (kind == "tabulated") {
        const std::string file = b.text("file", "");
        if (file.empty())
            b.error("file", "required for a tabulated density");
        else
            guarded(b, "file", [&] { out = load_tabulated_dos(base / file); });
    } else if (!b.has("kind")) {
        b.error("kind", "required");
    }
    b.finish();
    return out;
}

ContinuumSpec parse_continuum(Block b, const std::filesystem::path& base, ContinuumSpec c)
{
    if (!b.ok()) return c;
    if (b.has("dos")) c.dos = parse_dos(b.child("dos"), base, c.dos);
    c.E_i = b.number("E_i", c.E_i);
    c.halfwidth_factor = b.number("halfwidth_factor", c.halfwidth_factor, positive);
    c.n_levels = b.count("n_levels", c.n_levels, 3);
    if (c.n_levels % 2 == 0) b.error("n_levels", "must be odd so that a level sits at E_i");
    b.finish();
    return c;
}

// The discretization must fit inside the DOS support.
void check_window(Block& b, const ContinuumSpec& c, double W)
{
    guarded(b, "continuum", [&] { (void)discretize(c.dos, c.E_i, W, c.n_levels); });
}

Mode parse_mode(Block& b, Mode def)
{
    const std::string m = b.text("mode", def == Mode::coupled ? "coupled" : "first_order", {"first_order", "coupled"});
    return m == "coupled" ? Mode::coupled : Mode::first_order;
}

GoldenRuleParams parse_golden_rule(Block b, const std::filesystem::path& base)
{
    GoldenRuleParams p;
    p.continuum = parse_continuum(b.child("continuum"), base, p.continuum);
    p.gamma = b.number("gamma", p.gamma, positive);
    p.rate_fraction = b.number("rate_fraction", p.rate_fraction, unit_open);
    p.t_end = b.number("t_end", p.t_end);
    p.depletion_limit = b.number("depletion_limit", p.depletion_limit, unit_open);
    p.mode = parse_mode(b, p.mode);
    p.tolerance = b.number("tolerance", p.tolerance, positive);
    if (p.gamma > 0.0) {
        check_window(b, p.continuum, p.continuum.halfwidth_factor * p.gamma);
        guarded(b, "continuum.E_i", [&] {
            if (dos_value(p.continuum.dos, p.continuum.E_i) <= 0.0) throw_domain("E_i", "zero density of states");
        });
    }
    b.finish();
    return p;
}

ValiditySweepParams parse_validity_sweep(Block b, const std::filesystem::path& base)
{
    ValiditySweepParams p;
    p.continuum = parse_continuum(b.child("continuum"), base, p.continuum);
    p.rate = b.number("rate", p.rate, positive);
    const YAML::Node pts = b.raw("points");
    if (!pts || !pts.IsSequence() || pts.size() == 0) {
        b.error("points", "must be a non-empty list of {left_margin, max_error | min_error}");
    } else {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            Block q(pts[j], b.path("points[" + std::to_string(j) + "]"), b.errors());
            MarginPoint mp{q.number("left_margin", 0.0, positive), 0.0, false};
            const bool has_max = q.has("max_error"), has_min = q.has("min_error");
            if (has_max == has_min) q.error("", "needs exactly one of max_error, min_error");
            if (has_max) mp.bound = q.number("max_error", 0.0, positive);
            if (has_min) {
                mp.bound = q.number("min_error", 0.0, positive);
                mp.above = true;
            }
            q.finish();
            p.points.push_back(mp);
        }
    }
    for (const auto& mp : p.points)
        if (mp.left_margin > 0.0)
            check_window(b, p.continuum, p.continuum.halfwidth_factor * p.rate / (2.0 * mp.left_margin));
    b.finish();
    return p;
}

TwoSidedParams parse_two_sided(Block b, const std::filesystem::path& base)
{
    TwoSidedParams p;
    p.continuum = parse_continuum(b.child("continuum"), base, p.continuum);
    p.gamma_plus = b.number("gamma_plus", p.gamma_plus, positive);
    p.gamma_minus = b.numbers("gamma_minus", p.gamma_minus, positive);
    if (p.gamma_minus.size() < 2) b.error("gamma_minus", "needs at least two values to compare");
    p.V0 = b.number("V0", p.V0, positive);
    p.window_begin = b.number("window_begin", p.window_begin, positive);
    p.window_end = b.number("window_end", p.window_end, positive);
    if (p.window_end <= p.window_begin) b.error("window_end", "must exceed window_begin");
    p.edge_tolerance = b.number("edge_tolerance", p.edge_tolerance, positive);
    p.decay_tolerance = b.number("decay_tolerance", p.decay_tolerance, positive);
    if (p.gamma_plus > 0.0) check_window(b, p.continuum, p.continuum.halfwidth_factor * p.gamma_plus);
    b.finish();
    return p;
}

HarmonicParams parse_harmonic(Block b, const std::filesystem::path& base)
{
    HarmonicParams p;
    p.continuum = parse_continuum(b.child("continuum"), base, p.continuum);
    p.gamma = b.number("gamma", p.gamma, positive);
    p.carrier_factor = b.number("carrier_factor", p.carrier_factor, positive);
    p.V0 = b.number("V0", p.V0, positive);
    p.times = b.numbers("times", p.times);
    p.tolerance = b.number("tolerance", p.tolerance, positive);
    // here the halfwidth is absolute: it has to cover E_i +- omega
    const double W = p.continuum.halfwidth_factor * p.gamma;
    const double omega = p.carrier_factor * p.gamma;
    if (W < omega + 10.0 * p.gamma)
        b.error("continuum.halfwidth_factor", "window must reach past E_i +- omega by at least 10 gamma");
    check_window(b, p.continuum, W);
    b.finish();
    return p;
}

SuperpositionParams parse_superposition(Block b, const std::filesystem::path& base)
{
    SuperpositionParams p;
    p.continuum = parse_continuum(b.child("continuum"), base, p.continuum);
    const YAML::Node t = b.raw("terms");
    if (t) {
        p.terms.clear();
        if (!t.IsSequence() || t.size() == 0) b.error("terms", "must be a non-empty list of {gamma, weight}");
        else
            for (std::size_t j = 0; j < t.size(); ++j) {
                Block q(t[j], b.path("terms[" + std::to_string(j) + "]"), b.errors());
                p.terms.push_back({q.number("gamma", 1.0, positive), q.number("weight", 1.0)});
                q.finish();
            }
    }
    guarded(b, "terms", [&] { validate(Envelope{ExpSuperposition{p.terms}, 0.0}); });
    p.rate_fraction = b.number("rate_fraction", p.rate_fraction, unit_open);
    p.t_begin = b.number("t_begin", p.t_begin);
    p.t_end = b.number("t_end", p.t_end);
    if (p.t_end <= p.t_begin) b.error("t_end", "must exceed t_begin");
    p.checkpoints = b.count("checkpoints", p.checkpoints, 2);
    p.tolerance = b.number("tolerance", p.tolerance, positive);
    double gmax = 0.0;
    for (const auto& term : p.terms) gmax = std::max(gmax, term.gamma);
    if (gmax > 0.0) check_window(b, p.continuum, p.continuum.halfwidth_factor * gmax);
    b.finish();
    return p;
}

PulseTrainParams parse_pulse_train(Block b)
{
    PulseTrainParams p;
    p.pulses = b.count("pulses", p.pulses, 1);
    p.tau = b.number("tau", p.tau, positive);
    p.separation = b.number("separation", p.separation, positive);
    p.final_population = b.number("final_population", p.final_population, unit_open);
    p.D = b.number("D", p.D, positive);
    p.halfwidth = b.number("halfwidth", p.halfwidth, positive);
    p.level_spacing = b.number("level_spacing", p.level_spacing, positive);
    p.additivity_tolerance = b.number("additivity_tolerance", p.additivity_tolerance, positive);
    p.decay_tolerance = b.number("decay_tolerance", p.decay_tolerance, positive);
    if (p.separation > 0.0 && p.tau > 0.0 && p.pulses > 1) {
        Envelope e{GaussianPulse{p.tau}, 0.0};
        const double ov = pulse_overlap({0.0, e, 1.0}, {p.separation * p.tau, e, 1.0});
        if (ov > 1e-6) b.error("separation", "pulses overlap (normalized overlap " + fmt(ov) + " > 1e-6)");
    }
    if (p.level_spacing > 0.0 && 2.0 * std::numbers::pi / p.level_spacing < (p.pulses + 8.0) * p.separation)
        b.error("level_spacing", "revival time 2 pi / spacing is shorter than the train");
    b.finish();
    return p;
}

DecayLawParams parse_decay_law(Block b)
{
    DecayLawParams p;
    p.tau = b.number("tau", p.tau, positive);
    p.final_population = b.number("final_population", p.final_population, unit_open);
    p.D = b.number("D", p.D, positive);
    p.halfwidth = b.number("halfwidth", p.halfwidth, positive);
    p.level_spacing = b.number("level_spacing", p.level_spacing, positive);
    p.tolerance = b.number("tolerance", p.tolerance, positive);
    b.finish();
    return p;
}

WWParams parse_ww(Block b, const std::filesystem::path& base)
{
    WWParams p;
    {
        Block c = b.child("coupling");
        if (c.ok()) {
            p.coupling.kind = c.text("kind", "flat", {"flat", "linear", "file"});
            p.coupling.slope = c.number("slope", 0.0);
            const std::string file = c.text("file", "");
            if (p.coupling.kind == "file") {
                if (file.empty()) c.error("file", "required for kind 'file'");
                p.coupling.file = base / file;
            }
            c.finish();
        }
    }
    p.rate = b.number("rate", p.rate, positive);
    p.omega_i = b.number("omega_i", p.omega_i, positive);
    p.below = b.number("below", p.below, positive);
    p.above = b.number("above", p.above, positive);
    p.spacing_fraction = b.number("spacing_fraction", p.spacing_fraction, positive);
    p.min_scale_ratio = b.number("min_scale_ratio", p.min_scale_ratio, positive);
    p.fit_begin = b.number("fit_begin", p.fit_begin, nonnegative);
    p.fit_end = b.number("fit_end", p.fit_end, positive);
    p.pointwise_begin = b.number("pointwise_begin", p.pointwise_begin, nonnegative);
    p.pointwise_end = b.number("pointwise_end", p.pointwise_end, positive);
    p.rate_tolerance = b.number("rate_tolerance", p.rate_tolerance, positive);
    p.pointwise_tolerance = b.number("pointwise_tolerance", p.pointwise_tolerance, positive);
    p.shift_tolerance = b.number("shift_tolerance", p.shift_tolerance, positive);
    if (p.fit_end <= p.fit_begin) b.error("fit_end", "must exceed fit_begin");
    if (p.pointwise_end <= p.pointwise_begin) b.error("pointwise_end", "must exceed pointwise_begin");
    if (p.rate > 0.0 && p.omega_i / p.rate < p.min_scale_ratio)
        b.error("omega_i", "omega_i / rate = " + fmt(p.omega_i / p.rate) + " is below min_scale_ratio");
    if (p.omega_i <= p.below * p.rate) b.error("below", "support must stay at positive frequencies");
    b.finish();
    return p;
}

AiryCheckParams parse_airy(Block b)
{
    AiryCheckParams p;
    p.F = b.number("F", p.F, positive);
    p.m = b.number("m", p.m, positive);
    p.E1 = b.number("E1", p.E1);
    p.kernel_widths = b.numbers("kernel_widths", p.kernel_widths, positive);
    p.overlap_tolerance = b.number("overlap_tolerance", p.overlap_tolerance, positive);
    p.oracle_points = b.count("oracle_points", p.oracle_points, 1);
    p.x_min = b.number("x_min", p.x_min);
    p.x_max = b.number("x_max", p.x_max);
    if (p.x_max <= p.x_min) b.error("x_max", "must exceed x_min");
    if (p.x_min < -30.0 || p.x_max > 30.0) b.error("x_min", "oracle range is limited to [-30, 30]");
    p.oracle_tolerance = b.number("oracle_tolerance", p.oracle_tolerance, positive);
    b.finish();
    return p;
}

IonizationParams parse_ionization(Block b)
{
    IonizationParams p;
    p.kappa = b.number("kappa", p.kappa, positive);
    p.m = b.number("m", p.m, positive);
    p.F = b.number("F", p.F, positive);
    p.box_level = static_cast<int>(b.count("box_level", static_cast<std::size_t>(p.box_level), 2));
    p.weak_field_limit = b.number("weak_field_limit", p.weak_field_limit, positive);
    p.tolerance = b.number("tolerance", p.tolerance, positive);
    p.identity_tolerance = b.number("identity_tolerance", p.identity_tolerance, positive);
    p.dump_points = b.count("dump_points", p.dump_points, 2);
    if (p.kappa > 0.0 && p.m > 0.0) {
        const double Eb = -p.kappa * p.kappa / (2.0 * p.m);
        const double w = p.F / (p.kappa * std::abs(Eb));
        if (w > p.weak_field_limit)
            b.error("F", "F / (kappa |E_b|) = " + fmt(w) + " exceeds weak_field_limit " + fmt(p.weak_field_limit));
    }
    b.finish();
    return p;
}

CrossTermsParams parse_cross_terms(Block b)
{
    CrossTermsParams p;
    p.D = b.number("D", p.D, positive);
    p.gamma_minus = b.number("gamma_minus", p.gamma_minus, positive);
    p.gamma_plus = b.number("gamma_plus", p.gamma_plus, positive);
    p.tau = b.number("tau", p.tau, positive);
    p.width = b.number("width", p.width, positive);
    p.exp_separations = b.numbers("exp_separations", p.exp_separations, nonnegative);
    p.gaussian_separations = b.numbers("gaussian_separations", p.gaussian_separations, nonnegative);
    p.rect_separations = b.numbers("rect_separations", p.rect_separations, nonnegative);
    p.exp_window = b.number("exp_window", p.exp_window, positive);
    p.gaussian_window = b.number("gaussian_window", p.gaussian_window, positive);
    p.rect_window = b.number("rect_window", p.rect_window, positive);
    p.tolerance = b.number("tolerance", p.tolerance, positive);
    p.rect_tolerance = b.number("rect_tolerance", p.rect_tolerance, positive);
    for (double T : p.rect_separations) {
        if (T < p.width) b.error("rect_separations", "separations must be at least the pulse width");
        if (T * p.rect_window <= 50.0) b.error("rect_window", "needs T * window > 50 for every separation");
    }
    b.finish();
    return p;
}

EnergyNormalizationParams parse_energy_normalization(Block b)
{
    EnergyNormalizationParams p;
    p.V0 = b.number("V0", p.V0);
    p.b = b.number("b", p.b, positive);
    p.m = b.number("m", p.m, positive);
    p.k = b.number("k", p.k, positive);
    p.area = b.number("area", p.area, positive);
    p.n_angles = static_cast<int>(b.count("n_angles", static_cast<std::size_t>(p.n_angles), 8));
    p.tolerance = b.number("tolerance", p.tolerance, positive);
    b.finish();
    return p;
}

void apply_override(YAML::Node root, const Override& o, std::vector<std::string>& errs)
{
    std::vector<std::string> parts;
    std::stringstream ss(o.path);
    for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
    if (parts.empty()) {
        errs.push_back("override: empty path");
        return;
    }
    YAML::Node cur = root;
    for (std::size_t j = 0; j + 1 < parts.size(); ++j) {
        YAML::Node next = cur[parts[j]];
        if (next && !next.IsMap()) {
            errs.push_back(o.path + ": '" + parts[j] + "' is not a section");
            return;
        }
        cur.reset(next);
    }
    YAML::Node leaf = cur[parts.back()];
    if (leaf && leaf.IsDefined() && !leaf.IsNull()) {
        double dummy;
        if (!leaf.IsScalar() || !YAML::convert<double>::decode(leaf, dummy)) {
            errs.push_back(o.path + ": not a numeric leaf");
            return;
        }
    }
    cur[parts.back()] = fmt(o.value);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems) : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

std::string kind_name(Kind k)
{
    switch (k) {
    case Kind::golden_rule: return "golden_rule";
    case Kind::two_sided_pulse: return "two_sided_pulse";
    case Kind::harmonic: return "harmonic";
    case Kind::superposition: return "superposition";
    case Kind::pulse_train: return "pulse_train";
    case Kind::decay_law: return "decay_law";
    case Kind::ww: return "ww";
    case Kind::airy_check: return "airy_check";
    case Kind::ionization: return "ionization";
    case Kind::validity_sweep: return "validity_sweep";
    case Kind::cross_terms: return "cross_terms";
    case Kind::energy_normalization: return "energy_normalization";
    }
    return "?";
}

std::vector<Kind> all_kinds()
{
    return {Kind::golden_rule, Kind::two_sided_pulse, Kind::harmonic,    Kind::superposition,
            Kind::pulse_train, Kind::decay_law,       Kind::ww,          Kind::airy_check,
            Kind::ionization,  Kind::validity_sweep,  Kind::cross_terms, Kind::energy_normalization};
}

std::optional<Kind> parse_kind(const std::string& s)
{
    for (Kind k : all_kinds())
        if (kind_name(k) == s) return k;
    return std::nullopt;
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string ScenarioConfig::hash_hex() const
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                            const std::vector<Override>& overrides)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError({std::string("syntax: ") + e.what()});
    }
    if (!root.IsMap()) throw ConfigError({"top level must be a mapping"});

    std::vector<std::string> errs;
    for (const auto& o : overrides) apply_override(root, o, errs);
    if (!errs.empty()) throw ConfigError(errs);

    ScenarioConfig cfg;
    cfg.canonical = YAML::Dump(root);
    cfg.hash = fnv1a(cfg.canonical);

    Block top(root, "", errs);
    cfg.name = top.text("name", "");
    if (cfg.name.empty()) top.error("name", "required");
    for (char c : cfg.name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
            top.error("name", "may contain only letters, digits, '_' and '-'");
            break;
        }
    cfg.description = top.text("description", "");
    const std::string kind = top.text("kind", "");
    const auto k = parse_kind(kind);
    if (!k) {
        std::string list;
        for (Kind kk : all_kinds()) list += (list.empty() ? "" : ", ") + kind_name(kk);
        top.error("kind", kind.empty() ? "required" : "unknown kind '" + kind + "' (expected one of " + list + ")");
    }
    cfg.output_dir = top.text("output", "out/" + cfg.name);
    {
        Block integ = top.child("integrator");
        if (integ.ok()) {
            cfg.tol = integ.number("tol", cfg.tol, positive);
            cfg.sample_spacing = integ.number("sample_spacing", cfg.sample_spacing, nonnegative);
            integ.finish();
        }
    }
    cfg.csv_stride = top.count("csv_stride", 1, 1);

    if (k) {
        cfg.kind = *k;
        const std::string key = kind_name(*k);
        if (!top.has(key)) top.error(key, "parameter block for kind '" + key + "' is missing");
        Block b = top.child(key);
        switch (*k) {
        case Kind::golden_rule: cfg.params = parse_golden_rule(b, base_dir); break;
        case Kind::validity_sweep: cfg.params = parse_validity_sweep(b, base_dir); break;
        case Kind::two_sided_pulse: cfg.params = parse_two_sided(b, base_dir); break;
        case Kind::harmonic: cfg.params = parse_harmonic(b, base_dir); break;
        case Kind::superposition: cfg.params = parse_superposition(b, base_dir); break;
        case Kind::pulse_train: cfg.params = parse_pulse_train(b); break;
        case Kind::decay_law: cfg.params = parse_decay_law(b); break;
        case Kind::ww: cfg.params = parse_ww(b, base_dir); break;
        case Kind::airy_check: cfg.params = parse_airy(b); break;
        case Kind::ionization: cfg.params = parse_ionization(b); break;
        case Kind::cross_terms: cfg.params = parse_cross_terms(b); break;
        case Kind::energy_normalization: cfg.params = parse_energy_normalization(b); break;
        }
    }
    top.finish();
    if (!errs.empty()) throw ConfigError(errs);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides)
{
    std::ifstream in(path);
    if (!in) throw ConfigError({path.string() + ": cannot open"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path(), overrides);
}

}  // namespace goldenrule::scenario
