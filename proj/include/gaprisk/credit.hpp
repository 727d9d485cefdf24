#pragma once

#include <span>
#include <vector>

#include "gaprisk/rng.hpp"

namespace gaprisk {

/// Log-OU default intensity: lambda(t) = exp(y(t)),
/// dy = k (y_bar - y) dt + sigma_c dW_c. Negative k (explosive spreads) is
/// allowed.
struct LogOuParams {
    double k = 0.0;       // mean reversion rate (1/yr)
    double y_bar = 0.0;   // mean reversion level of y = ln lambda
    double sigma_c = 0.0; // volatility of y (1/sqrt(yr))
    double lambda0 = 0.01;

    void validate() const;
};

/// Piecewise-constant forward hazard curve.
struct HazardCurve {
    std::vector<double> knot_times; // increasing tenors (yr)
    std::vector<double> hazards;    // forward hazard on (t_{i-1}, t_i], flat after

    void validate() const;
    double hazard_at(double t) const;
    double cumulative_hazard(double t) const;
    double survival(double t) const { return std::exp(-cumulative_hazard(t)); }
    double default_prob(double t) const { return 1.0 - survival(t); }
    /// integral of the survival function over [0, t]
    double survival_integral(double t) const;
};

/// One simulated intensity path on a fixed grid, with the Brownian
/// increments retained so the asset drift conditioning can consume them.
struct IntensityPath {
    std::vector<double> grid;     // 0 = t_0 < ... < t_n
    std::vector<double> y_values; // y(t_i)
    std::vector<double> dw;       // W_c(t_{i+1}) - W_c(t_i), size n
};

/// Exact OU transition per step; the same normal draw feeds the Brownian
/// increment so the conditional asset drift sees consistent noise.
IntensityPath simulate_path(const LogOuParams& params, std::span<const double> grid,
                            RngStream& rng);

/// Cumulative default probabilities P(t_i) = 1 - exp(-int_0^{t_i} e^y ds),
/// trapezoid on the path grid.
std::vector<double> default_distribution(const IntensityPath& path);

struct CdsQuote {
    double tenor = 0.0;  // yr
    double spread = 0.0; // par spread (1/yr)
};

struct CdsPrice {
    double spread = 0.0;
    double stderr_ = 0.0;
};

/// Par CDS spread under zero discounting and continuous premium:
/// (1-R) E[P(T)] / E[int_0^T S dt], Monte Carlo over intensity paths.
CdsPrice price_cds(const LogOuParams& params, double tenor, double recovery,
                   int n_paths, std::uint64_t seed, int steps_per_year = 52);

/// Solves lambda0 (with y_bar = ln lambda0) so the model CDS matches the
/// target spread; bisection on ln lambda0 with common random numbers.
LogOuParams calibrate_lambda0(double k, double sigma_c, double tenor,
                              double target_spread, double recovery, int n_paths,
                              std::uint64_t seed, int steps_per_year = 52);

/// Deterministic piecewise-constant hazard bootstrap; repricing each quote
/// reproduces the input spread to ~1e-12. Throws if a quote forces a
/// negative forward hazard.
HazardCurve bootstrap_hazard(std::span<const CdsQuote> quotes, double recovery);

/// Par spread of the curve for a given tenor under the same conventions.
double reprice_cds(const HazardCurve& curve, double tenor, double recovery);

} // namespace gaprisk
