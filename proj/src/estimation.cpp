#include "gaprisk/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gaprisk/laplace.hpp"
#include "gaprisk/math_util.hpp"
#include "gaprisk/rng.hpp"

namespace gaprisk {

namespace {

struct RawSeries {
    std::vector<std::string> dates;
    std::vector<double> values;
};

RawSeries load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    RawSeries out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) continue; // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError(path + ": line " + std::to_string(line_no) + ": expected date,value");
        std::string date = line.substr(0, comma);
        std::string value_str = line.substr(comma + 1);
        double value;
        try {
            std::size_t used = 0;
            value = std::stod(value_str, &used);
            while (used < value_str.size() && std::isspace(static_cast<unsigned char>(value_str[used])))
                ++used;
            if (used != value_str.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw DataError(path + ": line " + std::to_string(line_no) + ": bad value '" +
                            value_str + "'");
        }
        if (!std::isfinite(value))
            throw DataError(path + ": line " + std::to_string(line_no) + ": non-finite value");
        if (!out.dates.empty() && !(date > out.dates.back()))
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": dates not strictly ascending");
        out.dates.push_back(std::move(date));
        out.values.push_back(value);
    }
    if (out.values.empty()) throw DataError(path + ": no data rows");
    return out;
}

} // namespace

PriceSeries load_price_csv(const std::string& path) {
    RawSeries raw = load_csv(path);
    for (std::size_t i = 0; i < raw.values.size(); ++i)
        if (!(raw.values[i] > 0.0))
            throw DataError(path + ": non-positive price at row " + std::to_string(i + 2));
    return PriceSeries{std::move(raw.dates), std::move(raw.values)};
}

SpreadSeries load_spread_csv(const std::string& path, const std::string& tenor_label) {
    RawSeries raw = load_csv(path);
    for (std::size_t i = 0; i < raw.values.size(); ++i)
        if (!(raw.values[i] > 0.0))
            throw DataError(path + ": non-positive spread at row " + std::to_string(i + 2));
    return SpreadSeries{std::move(raw.dates), std::move(raw.values), tenor_label};
}

std::vector<double> log_returns(const PriceSeries& series, int window_days) {
    if (window_days < 1) throw std::invalid_argument("log_returns: window must be >= 1");
    const std::size_t n = series.prices.size();
    if (n <= static_cast<std::size_t>(window_days))
        throw DataError("log_returns: series shorter than the return window");
    std::vector<double> out(n - window_days);
    for (std::size_t i = 0; i + window_days < n; ++i)
        out[i] = std::log(series.prices[i + window_days] / series.prices[i]);
    return out;
}

double historical_var(const PriceSeries& series, int window_days, double confidence) {
    auto returns = log_returns(series, window_days);
    if (returns.size() < 100)
        throw DataError("historical_var: fewer than 100 overlapping returns");
    if (!(confidence > 0.5 && confidence < 1.0))
        throw std::invalid_argument("historical_var: confidence outside (0.5,1)");
    const double q = quantile(std::move(returns), 1.0 - confidence);
    return std::max(0.0, -q);
}

double dejd_log_likelihood(const DejdParams& params, std::span<const double> returns,
                           double dt) {
    // Per-observation error far below statistical noise; the plan is built
    // once per parameter vector and shared across observations.
    InversionConfig cfg;
    cfg.abs_tolerance = 1e-11;
    cfg.max_terms = 1 << 18;
    TransformPricer pricer(params, 1.0, dt, cfg);
    const double drift = params.mu * dt;
    double ll = 0.0;
    for (double x : returns) {
        const double f = pricer.density(drift, x);
        ll += std::log(std::max(f, 1e-300));
    }
    return ll;
}

namespace {

// Bounded reparameterization keeping every optimizer iterate a valid DEJD.
struct DejdBox {
    static double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
    static double logit(double p) { return std::log(p / (1.0 - p)); }
    static double from01(double u, double lo, double hi) { return lo + (hi - lo) * u; }
    static double to01(double v, double lo, double hi) { return (v - lo) / (hi - lo); }
    static double from01_log(double u, double lo, double hi) {
        return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u);
    }
    static double to01_log(double v, double lo, double hi) {
        return (std::log(v) - std::log(lo)) / (std::log(hi) - std::log(lo));
    }

    // Bounds: at most one jump per trading day on average, jump-size rates
    // capped at 1000 (mean sizes >= 10 bp). The drift is not searched: it is
    // profiled out by pinning the fitted mean return to the sample mean,
    // which removes the drift/jump-asymmetry ridge of the DEJD likelihood.
    static DejdParams decode(std::span<const double> t, double mean_return, double dt) {
        DejdParams p;
        p.sigma_a = from01(logistic(t[0]), 0.005, 2.0);
        p.jump_intensity = from01_log(logistic(t[1]), 0.01, 252.0);
        p.p_up = from01(logistic(t[2]), 0.05, 0.95);
        p.eta_up = from01_log(logistic(t[3]), 1.5, 1000.0);
        p.eta_down = from01_log(logistic(t[4]), 0.5, 1000.0);
        const double jump_mean =
            p.jump_intensity * (p.p_up / p.eta_up - (1.0 - p.p_up) / p.eta_down);
        p.mu = std::clamp(mean_return / dt - jump_mean, -0.35, 0.45);
        return p;
    }

    static std::vector<double> encode(const DejdParams& p) {
        auto clamp01 = [](double u) { return std::clamp(u, 1e-6, 1.0 - 1e-6); };
        return {logit(clamp01(to01(p.sigma_a, 0.005, 2.0))),
                logit(clamp01(to01_log(p.jump_intensity, 0.01, 252.0))),
                logit(clamp01(to01(p.p_up, 0.05, 0.95))),
                logit(clamp01(to01_log(p.eta_up, 1.5, 1000.0))),
                logit(clamp01(to01_log(p.eta_down, 0.5, 1000.0)))};
    }
};

} // namespace

DejdFit fit_dejd(std::span<const double> returns, double dt, std::uint64_t seed,
                 int starts) {
    if (returns.size() < 500)
        throw DataError("fit_dejd: need at least 500 returns");
    if (!(dt > 0.0)) throw std::invalid_argument("fit_dejd: dt must be positive");

    double m1 = 0.0, m2 = 0.0;
    for (double x : returns) {
        m1 += x;
        m2 += x * x;
    }
    m1 /= static_cast<double>(returns.size());
    m2 /= static_cast<double>(returns.size());
    const double sd = std::sqrt(std::max(m2 - m1 * m1, 1e-12));
    const double mu0 = m1 / dt;
    const double sigma0 = sd / std::sqrt(dt);

    auto objective = [&](std::span<const double> t) {
        DejdParams p = DejdBox::decode(t, m1, dt);
        try {
            return -dejd_log_likelihood(p, returns, dt);
        } catch (const std::exception&) {
            return 1e12;
        }
    };

    std::vector<DejdParams> seeds;
    seeds.push_back({mu0, sigma0 * 0.95, 5.0, 0.5, 150.0, 150.0});
    seeds.push_back({mu0, sigma0 * 0.75, 80.0, 0.45, 170.0, 130.0});
    seeds.push_back({mu0, sigma0 * 0.85, 30.0, 0.5, 300.0, 200.0});
    RngStream jitter(seed, 0);
    while (static_cast<int>(seeds.size()) < starts) {
        DejdParams p = seeds[seeds.size() % 3];
        p.sigma_a *= std::exp(0.2 * jitter.normal());
        p.jump_intensity *= std::exp(0.7 * jitter.normal());
        p.eta_up *= std::exp(0.4 * jitter.normal());
        p.eta_down *= std::exp(0.4 * jitter.normal());
        p.p_up = std::clamp(p.p_up + 0.15 * jitter.normal(), 0.05, 0.95);
        seeds.push_back(p);
    }

    struct Candidate {
        DejdParams params;
        double ll;
        bool converged;
        bool pinned;
    };
    auto at_bound = [](const DejdParams& p) {
        return p.jump_intensity > 0.99 * 252.0 || p.p_up < 0.06 || p.p_up > 0.94 ||
               p.mu <= -0.349 || p.mu >= 0.449 || p.eta_up > 990.0 || p.eta_down > 990.0;
    };
    std::vector<Candidate> found;
    for (const auto& start : seeds) {
        auto coords = DejdBox::encode(start);
        auto res = nelder_mead(objective, coords, 0.35, 1e-9, 2500);
        DejdParams p = DejdBox::decode(res.x, m1, dt);
        found.push_back({p, -res.value, res.converged, at_bound(p)});
    }
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& c : found) top = std::max(top, c.ll);

    // The DEJD likelihood carries a flat small-jump/drift ridge whose ends
    // sit at parameter bounds; local optima within a couple of log-likelihood
    // points are statistically indistinguishable at these sample sizes. Break
    // such ties toward interior solutions, then toward fewer jumps.
    const Candidate* pick = nullptr;
    for (const auto& c : found) {
        if (c.ll < top - 2.5) continue;
        if (!pick) {
            pick = &c;
            continue;
        }
        if (c.pinned != pick->pinned) {
            if (!c.pinned) pick = &c;
            continue;
        }
        if (c.params.jump_intensity < pick->params.jump_intensity) pick = &c;
    }
    DejdFit best;
    best.params = pick->params;
    best.log_likelihood = pick->ll;
    best.converged = pick->converged;
    return best;
}

LogOuFit fit_logou(const SpreadSeries& series, double dt, double recovery) {
    if (series.spreads.size() < 250)
        throw DataError("fit_logou: need at least 250 observations");
    if (!(dt > 0.0)) throw std::invalid_argument("fit_logou: dt must be positive");
    if (recovery < 0.0 || recovery >= 1.0)
        throw std::invalid_argument("fit_logou: recovery outside [0,1)");

    const std::size_t n = series.spreads.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = std::log(series.spreads[i] / (1.0 - recovery));

    // AR(1): y_{t+1} = a + b y_t + eps.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const std::size_t m = n - 1;
    for (std::size_t i = 0; i < m; ++i) {
        sx += y[i];
        sy += y[i + 1];
        sxx += y[i] * y[i];
        sxy += y[i] * y[i + 1];
    }
    const double mx = sx / m, my = sy / m;
    const double varx = sxx / m - mx * mx;
    const double covxy = sxy / m - mx * my;
    if (!(varx > 0.0)) {
        // Constant series: no dynamics, hazard pinned at the level.
        LogOuFit out;
        out.params = LogOuParams{0.0, y.back(), 0.0, std::exp(y.back())};
        out.y_bar_identified = false;
        return out;
    }
    const double b = covxy / varx;
    const double a = my - b * mx;
    if (!(b > 0.0))
        throw DataError("fit_logou: AR(1) slope non-positive; data inconsistent with log-OU");

    double resid2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = y[i + 1] - a - b * y[i];
        resid2 += e * e;
    }
    const double s2 = resid2 / m;

    LogOuFit out;
    const double lambda0 = series.spreads.back() / (1.0 - recovery);
    if (std::abs(1.0 - b) < 1e-6) {
        // Unit root: reversion level not identified, k pinned at ~0.
        out.params = LogOuParams{0.0, mx, std::sqrt(s2 / dt), lambda0};
        out.y_bar_identified = false;
        return out;
    }
    const double k = -std::log(b) / dt;
    const double y_bar = a / (1.0 - b);
    // Exact OU step variance: s2 = sigma_c^2 (1 - b^2) / (2k).
    const double sigma_c = std::sqrt(s2 * 2.0 * k / (1.0 - b * b));
    out.params = LogOuParams{k, y_bar, sigma_c, lambda0};
    return out;
}

} // namespace gaprisk
