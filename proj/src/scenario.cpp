#include "gaprisk/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gaprisk {

namespace {

constexpr const char* kEngineVersion = "0.1.0";

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& msg) { throw ConfigError(msg); }

double get_num(const json& j, const char* key, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        config_fail(std::string("missing numeric field '") + key + "'");
    }
    if (!j.at(key).is_number()) config_fail(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::string get_str(const json& j, const char* key, std::optional<std::string> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        config_fail(std::string("missing string field '") + key + "'");
    }
    if (!j.at(key).is_string()) config_fail(std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

RunKind parse_run_kind(const std::string& s) {
    if (s == "haircut") return RunKind::haircut;
    if (s == "ec") return RunKind::ec;
    if (s == "price") return RunKind::price;
    if (s == "sweep-tenor") return RunKind::sweep_tenor;
    if (s == "sweep-haircut") return RunKind::sweep_haircut;
    if (s == "sensitivities") return RunKind::sensitivities;
    if (s == "estimate-dejd") return RunKind::estimate_dejd;
    if (s == "estimate-logou") return RunKind::estimate_logou;
    if (s == "historical-var") return RunKind::historical_var;
    config_fail("unknown run kind '" + s + "'");
}

DejdParams parse_dejd(const json& j) {
    DejdParams p;
    p.mu = get_num(j, "mu");
    p.sigma_a = get_num(j, "sigma");
    p.jump_intensity = get_num(j, "lambda");
    p.p_up = get_num(j, "p_up");
    p.eta_up = get_num(j, "eta_up");
    p.eta_down = get_num(j, "eta_down");
    try {
        p.validate();
    } catch (const std::exception& e) {
        config_fail(std::string("dejd: ") + e.what());
    }
    return p;
}

CreditInput parse_one_credit(const json& j, const ScenarioConfig& cfg) {
    const std::string mode = get_str(j, "mode");
    if (mode == "immediate") return ImmediateDefault{};
    if (mode == "logou") {
        LogOuParams p;
        p.k = get_num(j, "k");
        p.sigma_c = get_num(j, "sigma_c");
        p.lambda0 = get_num(j, "lambda0");
        const double level = get_num(j, "y_bar_level", p.lambda0);
        if (!(level > 0.0)) config_fail("logou: y_bar_level must be positive");
        p.y_bar = std::log(level);
        try {
            p.validate();
        } catch (const std::exception& e) {
            config_fail(std::string("logou: ") + e.what());
        }
        return p;
    }
    if (mode == "cds-bootstrap") {
        if (!j.contains("quotes") || !j.at("quotes").is_array() || j.at("quotes").empty())
            config_fail("cds-bootstrap: needs a non-empty quotes array");
        std::vector<CdsQuote> quotes;
        for (const auto& q : j.at("quotes"))
            quotes.push_back({get_num(q, "tenor"), get_num(q, "spread")});
        const double recovery = get_num(j, "recovery", 0.4);
        return bootstrap_hazard(quotes, recovery);
    }
    if (mode == "calibrate") {
        const double k = get_num(j, "k");
        const double sigma_c = get_num(j, "sigma_c");
        const double tenor = get_num(j, "tenor");
        const double target = get_num(j, "target_spread");
        const double recovery = get_num(j, "recovery", 0.4);
        const int paths = static_cast<int>(get_num(j, "paths", cfg.mc.paths));
        return calibrate_lambda0(k, sigma_c, tenor, target, recovery, paths, cfg.seed);
    }
    config_fail("unknown credit mode '" + mode + "'");
}

RatingTarget parse_target(const json& j, double default_q, double default_roe) {
    RatingTarget t;
    const std::string kind = get_str(j, "kind");
    if (kind == "pd")
        t.kind = RatingTarget::Kind::first_dollar_pd;
    else if (kind == "el")
        t.kind = RatingTarget::Kind::expected_loss;
    else if (kind == "ec")
        t.kind = RatingTarget::Kind::economic_capital;
    else
        config_fail("target kind must be pd|el|ec");
    t.label = get_str(j, "label", std::string());
    if (j.contains("level_bp"))
        t.level = get_num(j, "level_bp") * 1e-4;
    else if (j.contains("level"))
        t.level = get_num(j, "level");
    else if (!t.label.empty() && t.kind == RatingTarget::Kind::expected_loss)
        t.level = builtin_el_level(t.label);
    else
        config_fail("target needs level, level_bp, or a built-in label");
    t.q = get_num(j, "q", default_q);
    t.roe = get_num(j, "roe", default_roe);
    const std::string measure = get_str(j, "measure", std::string("es"));
    if (measure == "es")
        t.measure = EcMeasure::es;
    else if (measure == "cvar")
        t.measure = EcMeasure::cvar;
    else
        config_fail("target measure must be es|cvar");
    return t;
}

std::vector<double> parse_grid(const json& j, const char* key, double scale = 1.0) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    const auto& g = j.at(key);
    if (g.is_array()) {
        for (const auto& v : g) out.push_back(v.get<double>() * scale);
    } else if (g.is_object()) {
        const double from = get_num(g, "from") * scale;
        const double to = get_num(g, "to") * scale;
        const int points = static_cast<int>(get_num(g, "points"));
        if (points < 2) config_fail(std::string(key) + ": grid needs at least 2 points");
        for (int i = 0; i < points; ++i)
            out.push_back(from + (to - from) * i / (points - 1));
    } else {
        config_fail(std::string(key) + " must be an array or {from,to,points}");
    }
    return out;
}

} // namespace

ScenarioConfig ScenarioConfig::parse(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    ScenarioConfig cfg;
    cfg.run = parse_run_kind(get_str(j, "run"));
    cfg.name = get_str(j, "name", get_str(j, "run"));
    if (!j.contains("seed") || !j.at("seed").is_number_unsigned())
        config_fail("seed is required (wall-clock seeding is not supported)");
    cfg.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        cfg.mc.paths = static_cast<int>(get_num(m, "paths", 10000));
        const double steps = get_num(m, "grid_steps_per_year", 52.0);
        if (!(steps > 0.0)) config_fail("mc.grid_steps_per_year must be positive");
        cfg.mc.grid_step = 1.0 / steps;
        cfg.mc.b_grid_points = static_cast<int>(get_num(m, "b_grid", 200));
        cfg.mc.threads = static_cast<int>(get_num(m, "threads", 0));
        cfg.mc.inversion.abs_tolerance = get_num(m, "tolerance", 1e-10);
        if (cfg.mc.paths < 1) config_fail("mc.paths must be positive");
    }
    cfg.mc.seed = cfg.seed;

    cfg.q = get_num(j, "q", 0.999);
    cfg.roe = get_num(j, "roe", 0.15);

    const bool needs_model = cfg.run == RunKind::haircut || cfg.run == RunKind::ec ||
                             cfg.run == RunKind::price || cfg.run == RunKind::sweep_tenor ||
                             cfg.run == RunKind::sweep_haircut ||
                             cfg.run == RunKind::sensitivities;

    if (needs_model) {
        if (!j.contains("dejd")) config_fail("model runs need a dejd block");
        cfg.dejd = parse_dejd(j.at("dejd"));
        cfg.has_dejd = true;

        if (!j.contains("credit")) config_fail("model runs need a credit block");
        const auto& c = j.at("credit");
        if (c.is_array()) {
            if (cfg.run != RunKind::haircut)
                config_fail("credit ladders are supported for run kind 'haircut' only");
            for (const auto& entry : c)
                cfg.credits.push_back(
                    {get_str(entry, "label", std::string()), parse_one_credit(entry, cfg)});
        } else {
            cfg.credits.push_back({get_str(c, "label", std::string()), parse_one_credit(c, cfg)});
        }

        if (!j.contains("terms")) config_fail("model runs need a terms block");
        const auto& t = j.at("terms");
        cfg.terms.haircut = get_num(t, "haircut", 0.0);
        if (t.contains("tenor_days"))
            cfg.terms.tenor = get_num(t, "tenor_days") / 252.0;
        else
            cfg.terms.tenor = get_num(t, "tenor", 1.0);
        cfg.terms.mpr = get_num(t, "mpr_days", 10.0) / 252.0;
        cfg.terms.liquidity_discount = get_num(t, "liquidity_discount", 0.0);
        cfg.terms.recovery = get_num(t, "recovery", 0.4);
        cfg.terms.correlation = get_num(t, "correlation", 0.0);
        const std::string side = get_str(t, "side", std::string("cash-lender"));
        if (side == "cash-lender")
            cfg.terms.side = RepoSide::cash_lender;
        else if (side == "securities-lender")
            cfg.terms.side = RepoSide::securities_lender;
        else
            config_fail("terms.side must be cash-lender|securities-lender");
        try {
            cfg.terms.validate();
        } catch (const std::exception& e) {
            config_fail(std::string("terms: ") + e.what());
        }
    }

    if (cfg.run == RunKind::haircut || cfg.run == RunKind::sweep_tenor) {
        if (!j.contains("target")) config_fail("this run kind needs a target block");
        cfg.target = parse_target(j.at("target"), cfg.q, cfg.roe);
        cfg.has_target = true;
        if (j.contains("target"))
            cfg.normalize_tenor_sweep = j.at("target").value("normalize", false);
    }

    if (cfg.run == RunKind::ec) {
        if (j.contains("haircuts"))
            for (const auto& v : j.at("haircuts")) cfg.haircuts.push_back(v.get<double>());
        else
            cfg.haircuts.push_back(cfg.terms.haircut);
    }

    if (cfg.run == RunKind::sweep_haircut) {
        cfg.haircut_grid = parse_grid(j, "haircut_grid");
        if (cfg.haircut_grid.empty()) config_fail("sweep-haircut needs haircut_grid");
        if (j.contains("charge_limit_bp")) cfg.charge_limit = get_num(j, "charge_limit_bp") * 1e-4;
    }

    if (cfg.run == RunKind::sweep_tenor) {
        cfg.tenor_grid = parse_grid(j, "tenor_grid_days", 1.0 / 252.0);
        if (cfg.tenor_grid.empty()) config_fail("sweep-tenor needs tenor_grid_days");
    }

    if (cfg.run == RunKind::sensitivities) {
        if (!j.contains("bumps") || !j.at("bumps").is_array() || j.at("bumps").empty())
            config_fail("sensitivities needs a bumps array");
        for (const auto& b : j.at("bumps"))
            cfg.bumps.push_back({get_str(b, "param"), get_num(b, "shift")});
    }

    if (cfg.run == RunKind::estimate_dejd || cfg.run == RunKind::estimate_logou ||
        cfg.run == RunKind::historical_var) {
        if (!j.contains("data")) config_fail("estimation runs need a data block");
        const auto& d = j.at("data");
        cfg.data_csv = get_str(d, "csv");
        cfg.window_days = static_cast<int>(get_num(d, "window_days", 10));
        cfg.confidence = get_num(d, "confidence", 0.99);
        cfg.data_dt = get_num(d, "dt_days", 1.0) / 252.0;
        cfg.data_recovery = get_num(d, "recovery", 0.4);
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

class CsvBuilder {
  public:
    explicit CsvBuilder(std::vector<std::string> header) : cols_(header.size()) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) text_ += ',';
            text_ += header[i];
        }
        text_ += '\n';
    }
    CsvBuilder& cell(const std::string& s) {
        if (col_) text_ += ',';
        text_ += s;
        ++col_;
        return *this;
    }
    CsvBuilder& cell(double v) { return cell(fmt(v)); }
    void end_row() {
        if (col_ != cols_) throw std::logic_error("csv row width mismatch");
        text_ += '\n';
        col_ = 0;
    }
    const std::string& text() const { return text_; }

  private:
    std::size_t cols_;
    std::size_t col_ = 0;
    std::string text_;
};

Scenario make_scenario(const ScenarioConfig& cfg, const CreditInput& credit) {
    Scenario s;
    s.dejd = cfg.dejd;
    s.credit = credit;
    s.terms = cfg.terms;
    s.mc = cfg.mc;
    return s;
}

std::string run_haircut(const ScenarioConfig& cfg) {
    CsvBuilder csv({"label", "target_kind", "target_level", "tenor_yr", "mpr_days", "rho",
                    "liquidity_discount", "recovery", "haircut", "metric_at_h",
                    "metric_stderr"});
    for (const auto& entry : cfg.credits) {
        Scenario s = make_scenario(cfg, entry.credit);
        FrozenPaths frozen =
            FrozenPaths::build(s.credit, s.terms.tenor, s.terms.mpr, s.mc);
        const double h = solve_haircut(cfg.target, s, frozen);
        LossEngine engine(s.dejd, s.terms, frozen, s.mc);
        ElResult el = engine.expected_loss(h);
        const char* kind = cfg.target.kind == RatingTarget::Kind::first_dollar_pd ? "pd"
                           : cfg.target.kind == RatingTarget::Kind::expected_loss  ? "el"
                                                                                    : "ec";
        csv.cell(entry.label)
            .cell(kind)
            .cell(cfg.target.level)
            .cell(s.terms.tenor)
            .cell(s.terms.mpr * 252.0)
            .cell(s.terms.correlation)
            .cell(s.terms.liquidity_discount)
            .cell(s.terms.recovery)
            .cell(h)
            .cell(el.el)
            .cell(el.stderr_);
        csv.end_row();
    }
    return csv.text();
}

std::string run_ec(const ScenarioConfig& cfg) {
    CsvBuilder csv({"haircut", "el", "el_stderr", "var_q", "es_q", "es_stderr", "ec",
                    "capital_charge", "total_charge", "q", "roe"});
    Scenario s = make_scenario(cfg, cfg.credits.front().credit);
    FrozenPaths frozen = FrozenPaths::build(s.credit, s.terms.tenor, s.terms.mpr, s.mc);
    LossEngine engine(s.dejd, s.terms, frozen, s.mc);
    for (double h : cfg.haircuts) {
        auto dist = engine.loss_tail(h);
        auto cap = economic_capital(dist, cfg.q, EcMeasure::es, cfg.roe);
        csv.cell(h)
            .cell(cap.el)
            .cell(dist.el_stderr)
            .cell(cap.var_q)
            .cell(cap.es_q)
            .cell(dist.el_stderr / (1.0 - cfg.q))
            .cell(cap.ec)
            .cell(cap.capital_charge)
            .cell(cap.total_charge)
            .cell(cfg.q)
            .cell(cfg.roe);
        csv.end_row();
    }
    return csv.text();
}

std::string run_price(const ScenarioConfig& cfg) {
    CsvBuilder csv({"haircut", "el", "el_stderr", "paths"});
    Scenario s = make_scenario(cfg, cfg.credits.front().credit);
    ElResult r = expected_loss(s.terms, s.dejd, s.credit, s.mc);
    csv.cell(s.terms.haircut).cell(r.el).cell(r.stderr_).cell(static_cast<double>(r.paths));
    csv.end_row();
    return csv.text();
}

std::string run_sweep_haircut(const ScenarioConfig& cfg) {
    CsvBuilder csv({"row_kind", "haircut", "el", "el_stderr", "var_q", "es_q", "es_stderr",
                    "ec", "capital_charge", "total_charge"});
    Scenario s = make_scenario(cfg, cfg.credits.front().credit);
    auto rows = total_charge_curve(s, cfg.haircut_grid, cfg.q, cfg.roe, EcMeasure::es);
    auto emit = [&](const std::string& kind, const ChargeRow& r) {
        csv.cell(kind)
            .cell(r.haircut)
            .cell(r.el)
            .cell(r.el_stderr)
            .cell(r.var_q)
            .cell(r.es_q)
            .cell(r.es_stderr)
            .cell(r.ec)
            .cell(r.capital_charge)
            .cell(r.total_charge);
        csv.end_row();
    };
    for (const auto& r : rows) emit("grid", r);
    if (cfg.charge_limit) {
        struct Objective {
            const char* name;
            std::optional<EcMeasure> measure;
        };
        const Objective objectives[] = {{"min_el_only", std::nullopt},
                                        {"min_cvar_plus_el", EcMeasure::cvar},
                                        {"min_es_plus_el", EcMeasure::es}};
        for (const auto& o : objectives) {
            const double h =
                min_haircut_for_charge(s, *cfg.charge_limit, cfg.q, cfg.roe, o.measure);
            auto row = total_charge_curve(s, std::vector<double>{h}, cfg.q, cfg.roe,
                                          o.measure.value_or(EcMeasure::es));
            emit(o.name, row.front());
        }
    }
    return csv.text();
}

std::string run_sweep_tenor(const ScenarioConfig& cfg) {
    CsvBuilder csv({"tenor_days", "tenor_yr", "haircut"});
    Scenario s = make_scenario(cfg, cfg.credits.front().credit);
    auto curve = maturity_sweep(s, cfg.tenor_grid, cfg.target, cfg.normalize_tenor_sweep);
    for (const auto& th : curve) {
        csv.cell(th.tenor * 252.0).cell(th.tenor).cell(th.haircut);
        csv.end_row();
    }
    return csv.text();
}

std::string run_sensitivities(const ScenarioConfig& cfg) {
    CsvBuilder csv({"param", "shift", "es_base", "es_bumped", "delta_es"});
    Scenario s = make_scenario(cfg, cfg.credits.front().credit);
    auto rows = sensitivities(s, cfg.terms.haircut, cfg.q, cfg.bumps);
    for (const auto& r : rows) {
        csv.cell(r.param).cell(r.shift).cell(r.es_base).cell(r.es_bumped).cell(r.delta_es);
        csv.end_row();
    }
    return csv.text();
}

std::string run_estimate_dejd(const ScenarioConfig& cfg) {
    CsvBuilder csv({"mu", "sigma", "lambda", "p_up", "eta_up", "eta_down", "log_likelihood",
                    "converged"});
    PriceSeries series = load_price_csv(cfg.data_csv);
    auto returns = log_returns(series, 1);
    DejdFit fit = fit_dejd(returns, cfg.data_dt, cfg.seed);
    csv.cell(fit.params.mu)
        .cell(fit.params.sigma_a)
        .cell(fit.params.jump_intensity)
        .cell(fit.params.p_up)
        .cell(fit.params.eta_up)
        .cell(fit.params.eta_down)
        .cell(fit.log_likelihood)
        .cell(fit.converged ? 1.0 : 0.0);
    csv.end_row();
    return csv.text();
}

std::string run_estimate_logou(const ScenarioConfig& cfg) {
    CsvBuilder csv({"k", "y_bar", "sigma_c", "lambda0", "y_bar_identified"});
    SpreadSeries series = load_spread_csv(cfg.data_csv);
    LogOuFit fit = fit_logou(series, cfg.data_dt, cfg.data_recovery);
    csv.cell(fit.params.k)
        .cell(fit.params.y_bar)
        .cell(fit.params.sigma_c)
        .cell(fit.params.lambda0)
        .cell(fit.y_bar_identified ? 1.0 : 0.0);
    csv.end_row();
    return csv.text();
}

std::string run_historical_var(const ScenarioConfig& cfg) {
    CsvBuilder csv({"window_days", "confidence", "var"});
    PriceSeries series = load_price_csv(cfg.data_csv);
    const double var = historical_var(series, cfg.window_days, cfg.confidence);
    csv.cell(static_cast<double>(cfg.window_days)).cell(cfg.confidence).cell(var);
    csv.end_row();
    return csv.text();
}

} // namespace

RunOutput run_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string csv;
    switch (cfg.run) {
        case RunKind::haircut: csv = run_haircut(cfg); break;
        case RunKind::ec: csv = run_ec(cfg); break;
        case RunKind::price: csv = run_price(cfg); break;
        case RunKind::sweep_tenor: csv = run_sweep_tenor(cfg); break;
        case RunKind::sweep_haircut: csv = run_sweep_haircut(cfg); break;
        case RunKind::sensitivities: csv = run_sensitivities(cfg); break;
        case RunKind::estimate_dejd: csv = run_estimate_dejd(cfg); break;
        case RunKind::estimate_logou: csv = run_estimate_logou(cfg); break;
        case RunKind::historical_var: csv = run_historical_var(cfg); break;
    }
    const auto t1 = std::chrono::steady_clock::now();

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    RunOutput out;
    out.csv_text = csv;
    out.csv_path = (fs::path(out_dir) / (cfg.name + ".csv")).string();
    out.manifest_path = (fs::path(out_dir) / (cfg.name + "_manifest.json")).string();

    std::ofstream csv_file(out.csv_path, std::ios::binary);
    if (!csv_file) throw DataError("cannot write '" + out.csv_path + "'");
    csv_file << csv;

    json manifest;
    manifest["engine_version"] = kEngineVersion;
    manifest["seed"] = cfg.seed;
    manifest["mc"] = {{"paths", cfg.mc.paths},
                      {"grid_steps_per_year", 1.0 / cfg.mc.grid_step},
                      {"b_grid", cfg.mc.b_grid_points},
                      {"threads", cfg.mc.threads},
                      {"tolerance", cfg.mc.inversion.abs_tolerance}};
    manifest["run"] = cfg.name;
    manifest["csv"] = out.csv_path;
    manifest["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();
    std::ofstream mf(out.manifest_path, std::ios::binary);
    if (!mf) throw DataError("cannot write '" + out.manifest_path + "'");
    mf << manifest.dump(2) << '\n';
    return out;
}

namespace {

int fail_json(int code, const char* kind, const std::string& message) {
    json err;
    err["error"] = {{"code", code}, {"kind", kind}, {"message", message}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return code;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    std::string command, config_path, out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    std::optional<int> paths_override, threads_override;

    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) return fail_json(2, "config", "usage: gaprisk run|validate --config <path>");
    command = args[0];
    for (std::size_t i = 1; i < args.size(); ++i) {
        auto need_value = [&](const char* flag) -> std::string {
            if (i + 1 >= args.size())
                throw ConfigError(std::string(flag) + " needs a value");
            return args[++i];
        };
        try {
            if (args[i] == "--config")
                config_path = need_value("--config");
            else if (args[i] == "--out")
                out_dir = need_value("--out");
            else if (args[i] == "--seed")
                seed_override = std::stoull(need_value("--seed"));
            else if (args[i] == "--paths")
                paths_override = std::stoi(need_value("--paths"));
            else if (args[i] == "--threads")
                threads_override = std::stoi(need_value("--threads"));
            else
                return fail_json(2, "config", "unknown option '" + args[i] + "'");
        } catch (const std::exception& e) {
            return fail_json(2, "config", e.what());
        }
    }
    if (command != "run" && command != "validate")
        return fail_json(2, "config", "unknown command '" + command + "'");
    if (config_path.empty()) return fail_json(2, "config", "--config is required");

    try {
        ScenarioConfig cfg = ScenarioConfig::load(config_path);
        if (seed_override) {
            cfg.seed = *seed_override;
            cfg.mc.seed = *seed_override;
        }
        if (paths_override) cfg.mc.paths = *paths_override;
        if (threads_override) cfg.mc.threads = *threads_override;
        if (command == "validate") {
            std::printf("ok: %s\n", config_path.c_str());
            return 0;
        }
        RunOutput out = run_scenario(cfg, out_dir);
        std::printf("wrote %s\n", out.csv_path.c_str());
        return 0;
    } catch (const ConfigError& e) {
        return fail_json(2, "config", e.what());
    } catch (const DataError& e) {
        return fail_json(3, "data", e.what());
    } catch (const UnattainableTargetError& e) {
        return fail_json(4, "solver", e.what());
    } catch (const NonMonotoneError& e) {
        return fail_json(4, "solver", e.what());
    } catch (const ConvergenceError& e) {
        return fail_json(4, "solver", e.what());
    } catch (const std::exception& e) {
        return fail_json(4, "solver", e.what());
    }
}

} // namespace gaprisk
