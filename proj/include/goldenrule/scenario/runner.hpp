#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "goldenrule/scenario/config.hpp"

namespace goldenrule::scenario {

enum class Relation {
    within,  // |value - target| <= tolerance
    above,   // value > target
};

struct Metric {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    Relation relation = Relation::within;
    bool pass = false;
};

Metric within(std::string name, double value, double target, double tolerance);
Metric above(std::string name, double value, double bound);

struct Artifact {
    std::string filename;
    std::string content;
};

struct ExperimentOutput {
    std::vector<Metric> metrics;
    std::vector<Artifact> artifacts;
};

// Metric names a scenario of this config must report, in order.
std::vector<std::string> declared_metrics(const ScenarioConfig& cfg);

// Executes the experiment without touching the file system.
ExperimentOutput run_experiment(const ScenarioConfig& cfg);

// Comment lines identifying the scenario and config hash.
std::vector<std::string> provenance(const ScenarioConfig& cfg);

struct RunSummary {
    std::string name;
    Kind kind = Kind::golden_rule;
    std::vector<Metric> metrics;
    double wall_time = 0.0;
    std::string config_hash;

    bool pass() const;
    const Metric& metric(const std::string& name) const;
    std::string to_json() const;
};

// Failure while executing a scenario, with the scenario named in the message
// and the CLI exit code it maps to (2 config/domain, 3 numerical).
class ScenarioFailure : public std::runtime_error {
public:
    ScenarioFailure(const std::string& what, int exit_code) : std::runtime_error(what), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

// Runs the scenario; with `write` the artifacts and summary.json go to
// cfg.output_dir (written atomically).
RunSummary run(const ScenarioConfig& cfg, bool write = true);
RunSummary run_file(const std::filesystem::path& config_path, bool write = true);

// 0 pass, 1 metric failure.
inline int exit_code(const RunSummary& s) { return s.pass() ? 0 : 1; }

}  // namespace goldenrule::scenario
