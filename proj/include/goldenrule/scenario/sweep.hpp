#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "goldenrule/scenario/runner.hpp"

namespace goldenrule::scenario {

// Worker count from GOLDENRULE_WORKERS, else the hardware concurrency.
std::size_t default_workers();

// Calls job(0..n-1) on up to `workers` threads pulling from a shared queue.
// Exceptions escaping a job are the caller's problem: jobs should catch.
void run_jobs(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& job);

struct SweepRow {
    double axis_value = 0.0;
    std::optional<RunSummary> summary;
    std::string error;   // set when the run did not produce a summary
    int exit_code = 0;   // 0 pass, 1 metric failure, 2 config, 3 numerical
};

struct SweepResult {
    std::string axis;
    std::vector<SweepRow> rows;
    std::filesystem::path csv_path;
    int exit_code() const;  // worst row
};

// One run per value with `axis` (a dotted numeric leaf) overridden. Each run
// writes under <output>/sweep_<axis>/<index>; the combined table goes to
// <output>/sweep_<axis>.csv.
SweepResult sweep(const std::filesystem::path& config_path, const std::string& axis,
                  const std::vector<double>& values, std::size_t workers = default_workers(), bool write = true);

std::string sweep_csv(const SweepResult& r, const std::vector<std::string>& header = {});

}  // namespace goldenrule::scenario
