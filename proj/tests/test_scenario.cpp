#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "goldenrule/scenario/config.hpp"
#include "goldenrule/scenario/runner.hpp"
#include "goldenrule/scenario/sweep.hpp"

using namespace goldenrule::scenario;
namespace fs = std::filesystem;

namespace {

const fs::path scenarios = GOLDENRULE_SCENARIO_DIR;

struct TempDir {
    fs::path path;
    TempDir(const std::string& name) : path(fs::temp_directory_path() / name)
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& file, const std::string& text) const
    {
        std::ofstream(path / file) << text;
        return path / file;
    }
};

std::string read(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::string& args)
{
    const std::string cmd = std::string(GOLDENRULE_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* energy_cfg = R"(name: en
kind: energy_normalization
energy_normalization:
  V0: 0.1
  k: 1.3
)";

}  // namespace

TEST_SUITE("scenario")
{
    TEST_CASE("every bundled config validates")
    {
        int n = 0;
        for (const auto& e : fs::directory_iterator(scenarios))
            if (e.path().extension() == ".yaml") {
                CHECK_NOTHROW(load_config(e.path()));
                ++n;
            }
        CHECK(n >= 12);
    }

    TEST_CASE("all violations are reported with their field names")
    {
        try {
            parse_config(R"(name: x
kind: golden_rule
golden_rule:
  gamma: -1
  gama: 2
  rate_fraction: 3
extra: true
)");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const auto& p = e.problems();
            auto has = [&](const std::string& s) {
                return std::any_of(p.begin(), p.end(), [&](const std::string& q) { return q.rfind(s, 0) == 0; });
            };
            CHECK(has("golden_rule.gamma: must be > 0"));
            CHECK(has("golden_rule.gama: unknown key"));
            CHECK(has("golden_rule.rate_fraction"));
            CHECK(has("extra: unknown key"));
            CHECK(p.size() == 4);
        }
        CHECK_THROWS_AS(parse_config("name: x\nkind: nope\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("name: x\nkind: ww\n"), ConfigError);  // block missing
        CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
        CHECK_THROWS_AS(parse_config("name: x\nkind: ionization\nionization: {F: 0.5}\n"), ConfigError);
    }

    TEST_CASE("hash follows the content and overrides")
    {
        const auto a = parse_config(energy_cfg);
        const auto b = parse_config(energy_cfg);
        CHECK(a.hash == b.hash);
        CHECK(a.hash_hex().size() == 16);
        const auto c = parse_config(energy_cfg, ".", {{"energy_normalization.k", 1.4}});
        CHECK(c.hash != a.hash);
        CHECK(std::get<EnergyNormalizationParams>(c.params).k == 1.4);
        CHECK(fnv1a("") == 14695981039346656037ull);
        CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
        CHECK_THROWS_AS(parse_config(energy_cfg, ".", {{"energy_normalization.k.x", 1.0}}), ConfigError);
    }

    TEST_CASE("run writes artifacts with provenance and is deterministic")
    {
        TempDir dir("goldenrule_run_test");
        auto cfg = parse_config(energy_cfg);
        cfg.output_dir = dir.path / "out";
        const auto s1 = run(cfg);
        const auto s2 = run(cfg, false);
        CHECK(s1.pass());
        REQUIRE(s1.metrics.size() == s2.metrics.size());
        for (std::size_t k = 0; k < s1.metrics.size(); ++k) CHECK(s1.metrics[k].value == s2.metrics[k].value);
        const auto summary = read(cfg.output_dir / "summary.json");
        CHECK(summary.find("\"config_hash\": \"" + cfg.hash_hex() + "\"") != std::string::npos);
        CHECK(read(cfg.output_dir / "energy_normalization.json").find(cfg.hash_hex()) != std::string::npos);
        for (const auto& m : declared_metrics(cfg)) CHECK(summary.find("\"" + m + "\"") != std::string::npos);
    }

    TEST_CASE("golden_rule_basic passes its following-ratio metric")
    {
        auto cfg = load_config(scenarios / "a01_golden_rule_basic.yaml");
        const auto s = run(cfg, false);
        CHECK(s.metric("following_ratio").pass);
    }

    TEST_CASE("numerical failures carry scenario context")
    {
        auto cfg = parse_config("name: coarse\nkind: ww\nww: {fit_end: 200.0, pointwise_end: 150.0}\n");
        try {
            run(cfg, false);
            FAIL("expected ScenarioFailure");
        } catch (const ScenarioFailure& e) {
            CHECK(e.exit_code() == 3);
            CHECK(std::string(e.what()).find("coarse") != std::string::npos);
        }
    }

    TEST_CASE("sweep: per-row failures, combined table, empty list")
    {
        TempDir dir("goldenrule_sweep_test");
        const auto p = dir.write("en.yaml", std::string(energy_cfg) + "output: " + (dir.path / "out").string() + "\n");
        const auto r = sweep(p, "energy_normalization.k", {1.0, -1.0, 2.0}, 2);
        REQUIRE(r.rows.size() == 3);
        CHECK(r.rows[0].summary);
        CHECK(r.rows[1].exit_code == 2);
        CHECK(r.rows[2].summary);
        CHECK(r.exit_code() == 2);
        const auto table = read(r.csv_path);
        CHECK(table.find("axis_value,status,route_agreement,closed_form_agreement,error") != std::string::npos);
        CHECK(fs::exists(dir.path / "out" / "sweep_energy_normalization.k" / "2" / "summary.json"));
        CHECK_THROWS_AS(sweep(p, "energy_normalization.k", {}), ConfigError);
        CHECK_THROWS_AS(sweep(p, "energy_normalization.kk", {1.0}), ConfigError);
    }

    TEST_CASE("level-spacing sweep: fitted rate settles")
    {
        TempDir dir("goldenrule_ww_sweep");
        const auto p = dir.write("ww.yaml", "name: w\nkind: ww\nww: {}\n");
        const auto r = sweep(p, "ww.spacing_fraction", {0.05, 0.025, 0.0125}, 1, false);
        for (std::size_t k = 0; k + 1 < r.rows.size(); ++k) {
            REQUIRE(r.rows[k].summary);
            REQUIRE(r.rows[k + 1].summary);
            const double a = r.rows[k].summary->metric("rate_ratio").value;
            const double b = r.rows[k + 1].summary->metric("rate_ratio").value;
            CHECK(std::abs(b / a - 1.0) < 0.005);
        }
    }

    TEST_CASE("work queue visits every job once")
    {
        std::vector<int> hits(50, 0);
        run_jobs(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) CHECK(h == 1);
    }

    TEST_CASE("command-line exit codes")
    {
        TempDir dir("goldenrule_cli_test");
        const auto bad = dir.write("bad.yaml", "name: b\nkind: golden_rule\ngolden_rule: {gamma: -1}\n");
        const auto fail = dir.write("fail.yaml", std::string(energy_cfg) + "  tolerance: 1.0e-300\noutput: " +
                                                     (dir.path / "o1").string() + "\n");
        const auto num = dir.write("num.yaml", "name: n\nkind: ww\nww: {fit_end: 200.0, pointwise_end: 150.0}\noutput: " +
                                                   (dir.path / "o2").string() + "\n");
        const auto good = dir.write("good.yaml", std::string(energy_cfg) + "output: " + (dir.path / "o3").string() + "\n");
        CHECK(cli("validate " + bad.string()) == 2);
        CHECK(cli("run --dry-run " + good.string()) == 0);
        CHECK_FALSE(fs::exists(dir.path / "o3"));
        CHECK(cli("run " + good.string()) == 0);
        CHECK(fs::exists(dir.path / "o3" / "summary.json"));
        CHECK(cli("run " + fail.string()) == 1);
        CHECK(cli("run " + num.string()) == 3);
        CHECK(cli("") == 2);
        CHECK(cli("sweep " + good.string() + " --axis energy_normalization.k") == 2);
        CHECK(cli("list-scenarios --dir " + scenarios.string()) == 0);
    }
}
