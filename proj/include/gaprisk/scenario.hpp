#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaprisk/estimation.hpp"
#include "gaprisk/haircut.hpp"

namespace gaprisk {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class RunKind {
    haircut,
    ec,
    price,
    sweep_tenor,
    sweep_haircut,
    sensitivities,
    estimate_dejd,
    estimate_logou,
    historical_var,
};

struct LabeledCredit {
    std::string label;
    CreditInput credit = ImmediateDefault{};
};

/// One batch run: parsed and validated from a JSON config file.
struct ScenarioConfig {
    RunKind run = RunKind::price;
    std::string name; // output file stem
    std::uint64_t seed = 0;
    McConfig mc;
    DejdParams dejd;
    bool has_dejd = false;
    std::vector<LabeledCredit> credits;
    RepoTerms terms;
    RatingTarget target;
    bool has_target = false;
    bool normalize_tenor_sweep = false;
    std::vector<double> haircut_grid;
    std::vector<double> haircuts;
    std::vector<double> tenor_grid; // years
    std::vector<BumpSpec> bumps;
    double q = 0.999;
    double roe = 0.15;
    std::optional<double> charge_limit; // per unit principal
    // estimation inputs
    std::string data_csv;
    int window_days = 10;
    double confidence = 0.99;
    double data_dt = 1.0 / 252.0;
    double data_recovery = 0.4;

    static ScenarioConfig load(const std::string& path);
    static ScenarioConfig parse(const std::string& json_text, const std::string& origin);
};

struct RunOutput {
    std::string csv_path;
    std::string manifest_path;
    std::string csv_text;
};

/// Executes the run and writes <stem>.csv plus <stem>_manifest.json under
/// out_dir. Identical (config, seed) pairs produce byte-identical CSV text
/// independent of thread count.
RunOutput run_scenario(const ScenarioConfig& config, const std::string& out_dir);

/// CLI entry: exit 0 ok, 2 config error, 3 data error, 4 solver or
/// convergence failure. Errors are also emitted as a JSON record on stderr.
int run_cli(int argc, const char* const* argv);

} // namespace gaprisk
