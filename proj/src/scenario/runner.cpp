#include "goldenrule/scenario/runner.hpp"

#include <chrono>
#include <json.hpp>

#include "goldenrule/csv.hpp"
#include "goldenrule/errors.hpp"

namespace goldenrule::scenario {

bool RunSummary::pass() const
{
    for (const auto& m : metrics)
        if (!m.pass) return false;
    return !metrics.empty();
}

const Metric& RunSummary::metric(const std::string& n) const
{
    for (const auto& m : metrics)
        if (m.name == n) return m;
    throw std::out_of_range("no metric named '" + n + "' in scenario " + name);
}

std::string RunSummary::to_json() const
{
    nlohmann::ordered_json j;
    j["scenario"] = name;
    j["kind"] = kind_name(kind);
    j["config_hash"] = config_hash;
    j["pass"] = pass();
    j["wall_time_s"] = wall_time;
    nlohmann::ordered_json ms = nlohmann::ordered_json::object();
    for (const auto& m : metrics) {
        ms[m.name] = {{"value", m.value},
                      {"target", m.target},
                      {"tolerance", m.tolerance},
                      {"relation", m.relation == Relation::within ? "|value-target|<=tolerance" : "value>target"},
                      {"pass", m.pass}};
    }
    j["metrics"] = ms;
    return j.dump(2) + "\n";
}

RunSummary run(const ScenarioConfig& cfg, bool write)
{
    const auto start = std::chrono::steady_clock::now();
    const std::string context = "scenario '" + cfg.name + "' (" + kind_name(cfg.kind) + "): ";
    ExperimentOutput out;
    try {
        out = run_experiment(cfg);
    } catch (const DomainError& e) {
        throw ScenarioFailure(context + e.what(), 2);
    } catch (const DegenerateSpectrum& e) {
        throw ScenarioFailure(context + e.what(), 2);
    } catch (const UnsupportedShape& e) {
        throw ScenarioFailure(context + e.what(), 2);
    } catch (const std::exception& e) {
        throw ScenarioFailure(context + e.what(), 3);
    }

    const auto declared = declared_metrics(cfg);
    bool same = declared.size() == out.metrics.size();
    for (std::size_t k = 0; same && k < declared.size(); ++k) same = declared[k] == out.metrics[k].name;
    if (!same) throw std::logic_error(context + "reported metrics differ from the declared set");

    RunSummary s;
    s.name = cfg.name;
    s.kind = cfg.kind;
    s.metrics = std::move(out.metrics);
    s.config_hash = cfg.hash_hex();
    s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (write) {
        try {
            std::filesystem::create_directories(cfg.output_dir);
            for (const auto& a : out.artifacts) csv::write_atomic(cfg.output_dir / a.filename, a.content);
            csv::write_atomic(cfg.output_dir / "summary.json", s.to_json());
        } catch (const std::exception& e) {
            throw ScenarioFailure(context + "writing output: " + e.what(), 2);
        }
    }
    return s;
}

RunSummary run_file(const std::filesystem::path& config_path, bool write)
{
    return run(load_config(config_path), write);
}

}  // namespace goldenrule::scenario
