#include "gaprisk/credit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaprisk/math_util.hpp"

namespace gaprisk {

void LogOuParams::validate() const {
    if (!(lambda0 > 0.0)) throw std::invalid_argument("LogOuParams: lambda0 must be positive");
    if (sigma_c < 0.0) throw std::invalid_argument("LogOuParams: negative sigma_c");
    if (!std::isfinite(k) || !std::isfinite(y_bar))
        throw std::invalid_argument("LogOuParams: non-finite parameter");
}

void HazardCurve::validate() const {
    if (knot_times.size() != hazards.size() || knot_times.empty())
        throw std::invalid_argument("HazardCurve: knots and hazards must align");
    double prev = 0.0;
    for (std::size_t i = 0; i < knot_times.size(); ++i) {
        if (!(knot_times[i] > prev)) throw std::invalid_argument("HazardCurve: tenors not increasing");
        if (hazards[i] < 0.0) throw std::invalid_argument("HazardCurve: negative hazard");
        prev = knot_times[i];
    }
}

double HazardCurve::hazard_at(double t) const {
    for (std::size_t i = 0; i < knot_times.size(); ++i)
        if (t <= knot_times[i]) return hazards[i];
    return hazards.back();
}

double HazardCurve::cumulative_hazard(double t) const {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < knot_times.size(); ++i) {
        double hi = std::min(t, knot_times[i]);
        if (hi > prev) acc += hazards[i] * (hi - prev);
        if (t <= knot_times[i]) return acc;
        prev = knot_times[i];
    }
    if (t > prev) acc += hazards.back() * (t - prev);
    return acc;
}

double HazardCurve::survival_integral(double t) const {
    double acc = 0.0;
    double prev = 0.0;
    double s_prev = 1.0;
    for (std::size_t i = 0; i < knot_times.size() && prev < t; ++i) {
        double hi = std::min(t, knot_times[i]);
        double lam = hazards[i];
        double dt = hi - prev;
        if (dt > 0.0) {
            acc += lam > 0.0 ? s_prev * (-std::expm1(-lam * dt)) / lam : s_prev * dt;
            s_prev *= std::exp(-lam * dt);
        }
        prev = knot_times[i];
    }
    if (t > prev) {
        double lam = hazards.back();
        double dt = t - prev;
        acc += lam > 0.0 ? s_prev * (-std::expm1(-lam * dt)) / lam : s_prev * dt;
    }
    return acc;
}

IntensityPath simulate_path(const LogOuParams& params, std::span<const double> grid,
                            RngStream& rng) {
    params.validate();
    if (grid.size() < 2 || grid[0] != 0.0)
        throw std::invalid_argument("simulate_path: grid must start at 0");
    IntensityPath path;
    path.grid.assign(grid.begin(), grid.end());
    path.y_values.resize(grid.size());
    path.dw.resize(grid.size() - 1);
    double y = std::log(params.lambda0);
    path.y_values[0] = y;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double dt = grid[i + 1] - grid[i];
        if (!(dt > 0.0)) throw std::invalid_argument("simulate_path: grid not increasing");
        const double z = rng.normal();
        double decay, sd;
        if (std::abs(params.k) * dt < 1e-8) {
            decay = 1.0 - params.k * dt;
            sd = params.sigma_c * std::sqrt(dt);
        } else {
            decay = std::exp(-params.k * dt);
            sd = params.sigma_c * std::sqrt(-std::expm1(-2.0 * params.k * dt) / (2.0 * params.k));
        }
        y = params.y_bar + (y - params.y_bar) * decay + sd * z;
        path.y_values[i + 1] = y;
        path.dw[i] = std::sqrt(dt) * z;
    }
    return path;
}

std::vector<double> default_distribution(const IntensityPath& path) {
    const std::size_t n = path.grid.size();
    std::vector<double> out(n);
    out[0] = 0.0;
    double integral = 0.0;
    double lam_prev = std::exp(path.y_values[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double lam = std::exp(path.y_values[i]);
        integral += 0.5 * (lam_prev + lam) * (path.grid[i] - path.grid[i - 1]);
        out[i] = -std::expm1(-integral);
        lam_prev = lam;
    }
    return out;
}

namespace {

std::vector<double> uniform_grid(double tenor, int steps_per_year) {
    int n = std::max(2, static_cast<int>(std::ceil(tenor * steps_per_year)));
    std::vector<double> grid(n + 1);
    for (int i = 0; i <= n; ++i) grid[i] = tenor * i / n;
    return grid;
}

} // namespace

CdsPrice price_cds(const LogOuParams& params, double tenor, double recovery,
                   int n_paths, std::uint64_t seed, int steps_per_year) {
    if (!(tenor > 0.0)) throw std::invalid_argument("price_cds: tenor must be positive");
    if (recovery < 0.0 || recovery >= 1.0)
        throw std::invalid_argument("price_cds: recovery outside [0,1)");
    const auto grid = uniform_grid(tenor, steps_per_year);

    double sum_a = 0.0, sum_b = 0.0, sum_aa = 0.0, sum_bb = 0.0, sum_ab = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        RngStream rng(seed, static_cast<std::uint64_t>(p));
        IntensityPath path = simulate_path(params, grid, rng);
        auto dp = default_distribution(path);
        double a = dp.back();
        std::vector<double> surv(dp.size());
        for (std::size_t i = 0; i < dp.size(); ++i) surv[i] = 1.0 - dp[i];
        double b = trapezoid(path.grid, surv);
        sum_a += a;
        sum_b += b;
        sum_aa += a * a;
        sum_bb += b * b;
        sum_ab += a * b;
    }
    const double n = static_cast<double>(n_paths);
    const double ma = sum_a / n, mb = sum_b / n;
    CdsPrice out;
    out.spread = (1.0 - recovery) * ma / mb;
    // Delta-method error of the ratio estimator.
    const double va = sum_aa / n - ma * ma;
    const double vb = sum_bb / n - mb * mb;
    const double cab = sum_ab / n - ma * mb;
    const double r = ma / mb;
    double var_r = (va - 2.0 * r * cab + r * r * vb) / (mb * mb * n);
    out.stderr_ = (1.0 - recovery) * std::sqrt(std::max(var_r, 0.0));
    return out;
}

LogOuParams calibrate_lambda0(double k, double sigma_c, double tenor,
                              double target_spread, double recovery, int n_paths,
                              std::uint64_t seed, int steps_per_year) {
    if (!(target_spread > 0.0))
        throw std::invalid_argument("calibrate_lambda0: target spread must be positive");
    auto model_at = [&](double log_lambda0) {
        LogOuParams p{k, log_lambda0, sigma_c, std::exp(log_lambda0)};
        return price_cds(p, tenor, recovery, n_paths, seed, steps_per_year).spread;
    };
    const double lo = std::log(1e-6), hi = std::log(10.0);
    if (model_at(lo) > target_spread || model_at(hi) < target_spread)
        throw std::runtime_error("calibrate_lambda0: target spread outside attainable range");
    double root = bisect([&](double x) { return model_at(x) - target_spread; }, lo, hi, 1e-10);
    return LogOuParams{k, root, sigma_c, std::exp(root)};
}

double reprice_cds(const HazardCurve& curve, double tenor, double recovery) {
    double dp = curve.default_prob(tenor);
    double annuity = curve.survival_integral(tenor);
    return (1.0 - recovery) * dp / annuity;
}

HazardCurve bootstrap_hazard(std::span<const CdsQuote> quotes, double recovery) {
    if (quotes.empty()) throw std::invalid_argument("bootstrap_hazard: no quotes");
    if (recovery < 0.0 || recovery >= 1.0)
        throw std::invalid_argument("bootstrap_hazard: recovery outside [0,1)");
    HazardCurve curve;
    double prev_tenor = 0.0;
    for (const auto& q : quotes) {
        if (!(q.tenor > prev_tenor))
            throw std::invalid_argument("bootstrap_hazard: tenors must increase");
        if (!(q.spread > 0.0))
            throw std::invalid_argument("bootstrap_hazard: spreads must be positive");
        prev_tenor = q.tenor;

        curve.knot_times.push_back(q.tenor);
        curve.hazards.push_back(0.0);
        auto objective = [&](double h) {
            curve.hazards.back() = h;
            return reprice_cds(curve, q.tenor, recovery) - q.spread;
        };
        if (objective(0.0) > 0.0)
            throw std::runtime_error(
                "bootstrap_hazard: quotes imply a negative forward hazard (arbitrageable)");
        double hi = 1.0;
        while (objective(hi) < 0.0 && hi < 1e4) hi *= 2.0;
        if (objective(hi) < 0.0)
            throw std::runtime_error("bootstrap_hazard: quote unattainable");
        double root = bisect([&](double h) { return objective(h); }, 0.0, hi, 1e-15);
        curve.hazards.back() = root;
    }
    return curve;
}

} // namespace gaprisk
