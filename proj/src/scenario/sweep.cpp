#include "goldenrule/scenario/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "goldenrule/csv.hpp"

namespace goldenrule::scenario {

std::size_t default_workers()
{
    if (const char* env = std::getenv("GOLDENRULE_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void run_jobs(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& job)
{
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) job(i);
    };
    if (workers == 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
}

int SweepResult::exit_code() const
{
    int worst = 0;
    for (const auto& r : rows) {
        // numerical (3) outranks config (2) outranks metric failure (1)
        worst = std::max(worst, r.exit_code);
    }
    return worst;
}

SweepResult sweep(const std::filesystem::path& config_path, const std::string& axis,
                  const std::vector<double>& values, std::size_t workers, bool write)
{
    if (values.empty()) throw ConfigError({"sweep: value list is empty"});
    // The axis itself must be valid; problems tied to particular values are
    // recorded per row instead.
    const ScenarioConfig base = load_config(config_path);
    try {
        (void)load_config(config_path, {{axis, values.front()}});
    } catch (const ConfigError& e) {
        std::vector<std::string> axis_problems;
        for (const auto& p : e.problems())
            if (p.rfind(axis + ":", 0) == 0 && p.find("unknown key") != std::string::npos) axis_problems.push_back(p);
            else if (p.find("not a numeric leaf") != std::string::npos || p.find("is not a section") != std::string::npos)
                axis_problems.push_back(p);
        if (!axis_problems.empty()) throw ConfigError(axis_problems);
    }

    SweepResult res;
    res.axis = axis;
    res.rows.resize(values.size());
    const std::filesystem::path dir = base.output_dir / ("sweep_" + axis);
    run_jobs(values.size(), workers, [&](std::size_t i) {
        SweepRow& row = res.rows[i];
        row.axis_value = values[i];
        try {
            ScenarioConfig cfg = load_config(config_path, {{axis, values[i]}});
            cfg.output_dir = dir / std::to_string(i);
            row.summary = run(cfg, write);
            row.exit_code = exit_code(*row.summary);
        } catch (const ConfigError& e) {
            row.error = e.what();
            row.exit_code = 2;
        } catch (const ScenarioFailure& e) {
            row.error = e.what();
            row.exit_code = e.exit_code();
        } catch (const std::exception& e) {
            row.error = e.what();
            row.exit_code = 3;
        }
    });
    if (write) {
        std::filesystem::create_directories(base.output_dir);
        res.csv_path = base.output_dir / ("sweep_" + axis + ".csv");
        csv::write_atomic(res.csv_path, sweep_csv(res, provenance(base)));
    }
    return res;
}

std::string sweep_csv(const SweepResult& r, const std::vector<std::string>& header)
{
    std::vector<std::string> names;
    for (const auto& row : r.rows)
        if (row.summary) {
            for (const auto& m : row.summary->metrics)
                if (std::find(names.begin(), names.end(), m.name) == names.end()) names.push_back(m.name);
        }
    std::string out;
    for (const auto& h : header) out += "# " + h + "\n";
    out += "axis_value,status";
    for (const auto& n : names) out += "," + n;
    out += ",error\n";
    for (const auto& row : r.rows) {
        out += csv::number(row.axis_value) + ",";
        out += row.summary ? (row.summary->pass() ? "pass" : "fail") : "error";
        for (const auto& n : names) {
            out += ",";
            if (!row.summary) continue;
            for (const auto& m : row.summary->metrics)
                if (m.name == n) out += csv::number(m.value);
        }
        std::string msg = row.error;
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        std::string quoted = "\"";
        for (char c : msg) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        out += "," + (msg.empty() ? std::string() : quoted + "\"") + "\n";
    }
    return out;
}

}  // namespace goldenrule::scenario
