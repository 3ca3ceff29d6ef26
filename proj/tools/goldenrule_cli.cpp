// goldenrule: scenario runner.
//   goldenrule run <config>... [--dry-run] [--workers N]
//   goldenrule sweep <config> --axis <name> --values <v1,v2,...>
//   goldenrule validate <config>...
//   goldenrule list-scenarios [--dir DIR]
// Exit codes: 0 pass, 1 metric failure, 2 usage/config error, 3 numerical error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <mutex>

#include "goldenrule/scenario/config.hpp"
#include "goldenrule/scenario/runner.hpp"
#include "goldenrule/scenario/sweep.hpp"

#ifndef GOLDENRULE_SCENARIO_DIR
#define GOLDENRULE_SCENARIO_DIR "scenarios"
#endif

namespace sc = goldenrule::scenario;

namespace {

void print_summary(const sc::RunSummary& s)
{
    std::printf("%s %s (%s) %.2f s, config %s\n", s.pass() ? "PASS" : "FAIL", s.name.c_str(),
                sc::kind_name(s.kind).c_str(), s.wall_time, s.config_hash.c_str());
    for (const auto& m : s.metrics) {
        if (m.relation == sc::Relation::within)
            std::printf("  %-4s %-28s %.10g  (target %.6g +- %.3g)\n", m.pass ? "ok" : "FAIL", m.name.c_str(), m.value,
                        m.target, m.tolerance);
        else
            std::printf("  %-4s %-28s %.10g  (must exceed %.6g)\n", m.pass ? "ok" : "FAIL", m.name.c_str(), m.value,
                        m.target);
    }
}

int validate(const std::vector<std::string>& paths)
{
    int code = 0;
    for (const auto& p : paths) {
        try {
            const auto cfg = sc::load_config(p);
            std::printf("ok %s: %s (%s), config %s\n", p.c_str(), cfg.name.c_str(), sc::kind_name(cfg.kind).c_str(),
                        cfg.hash_hex().c_str());
        } catch (const sc::ConfigError& e) {
            std::fprintf(stderr, "%s: %s\n", p.c_str(), e.what());
            code = 2;
        }
    }
    return code;
}

int run(const std::vector<std::string>& paths, std::size_t workers)
{
    std::vector<int> codes(paths.size(), 0);
    std::mutex io;
    sc::run_jobs(paths.size(), workers, [&](std::size_t i) {
        try {
            const auto s = sc::run_file(paths[i]);
            codes[i] = sc::exit_code(s);
            std::lock_guard lock(io);
            print_summary(s);
        } catch (const sc::ConfigError& e) {
            codes[i] = 2;
            std::lock_guard lock(io);
            std::fprintf(stderr, "%s: %s\n", paths[i].c_str(), e.what());
        } catch (const sc::ScenarioFailure& e) {
            codes[i] = e.exit_code();
            std::lock_guard lock(io);
            std::fprintf(stderr, "error: %s\n", e.what());
        } catch (const std::exception& e) {
            codes[i] = 3;
            std::lock_guard lock(io);
            std::fprintf(stderr, "error: %s: %s\n", paths[i].c_str(), e.what());
        }
    });
    return *std::max_element(codes.begin(), codes.end());
}

int sweep(const std::string& path, const std::string& axis, const std::vector<double>& values, std::size_t workers)
{
    try {
        const auto r = sc::sweep(path, axis, values, workers);
        for (const auto& row : r.rows) {
            if (row.summary)
                std::printf("%s = %.10g: %s\n", axis.c_str(), row.axis_value, row.summary->pass() ? "pass" : "fail");
            else
                std::printf("%s = %.10g: error (%d) %s\n", axis.c_str(), row.axis_value, row.exit_code,
                            row.error.c_str());
        }
        std::printf("combined table: %s\n", r.csv_path.string().c_str());
        return r.exit_code();
    } catch (const sc::ConfigError& e) {
        std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
        return 2;
    }
}

int list_scenarios(const std::string& dir)
{
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir, ec))
        if (e.path().extension() == ".yaml") files.push_back(e.path());
    if (ec) {
        std::fprintf(stderr, "cannot list %s: %s\n", dir.c_str(), ec.message().c_str());
        return 2;
    }
    std::sort(files.begin(), files.end());
    int code = 0;
    for (const auto& f : files) {
        try {
            const auto cfg = sc::load_config(f);
            std::printf("%-28s %-22s %s\n", cfg.name.c_str(), sc::kind_name(cfg.kind).c_str(),
                        cfg.description.c_str());
        } catch (const sc::ConfigError& e) {
            std::printf("%-28s invalid: %s\n", f.filename().string().c_str(), e.problems().front().c_str());
            code = 2;
        }
    }
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Transition-rate scenario runner"};
    app.require_subcommand(1);
    std::size_t workers = sc::default_workers();

    std::vector<std::string> run_paths;
    bool dry_run = false;
    auto* run_cmd = app.add_subcommand("run", "run scenario configs and write their artifacts");
    run_cmd->add_option("config", run_paths, "scenario config file(s)")->required()->check(CLI::ExistingFile);
    run_cmd->add_flag("--dry-run", dry_run, "validate only");
    run_cmd->add_option("--workers", workers, "concurrent runs (default: GOLDENRULE_WORKERS or core count)")
        ->check(CLI::PositiveNumber);

    std::string sweep_path, axis;
    std::vector<double> values;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a config once per value of one numeric parameter");
    sweep_cmd->add_option("config", sweep_path, "scenario config file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--axis", axis, "dotted parameter path, e.g. golden_rule.gamma")->required();
    sweep_cmd->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep_cmd->add_option("--workers", workers, "concurrent runs")->check(CLI::PositiveNumber);

    std::vector<std::string> validate_paths;
    auto* validate_cmd = app.add_subcommand("validate", "check configs without running them");
    validate_cmd->add_option("config", validate_paths, "scenario config file(s)")->required()->check(CLI::ExistingFile);

    std::string dir = GOLDENRULE_SCENARIO_DIR;
    auto* list_cmd = app.add_subcommand("list-scenarios", "list bundled scenario configs");
    list_cmd->add_option("--dir", dir, "scenario directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*run_cmd) return dry_run ? validate(run_paths) : run(run_paths, workers);
    if (*sweep_cmd) return sweep(sweep_path, axis, values, workers);
    if (*validate_cmd) return validate(validate_paths);
    if (*list_cmd) return list_scenarios(dir);
    return 2;
}
