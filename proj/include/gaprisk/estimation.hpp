#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaprisk/credit.hpp"
#include "gaprisk/dejd.hpp"

namespace gaprisk {

class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PriceSeries {
    std::vector<std::string> dates; // ISO-8601, ascending
    std::vector<double> prices;
};

struct SpreadSeries {
    std::vector<std::string> dates;
    std::vector<double> spreads; // par spreads (1/yr)
    std::string tenor_label;
};

/// CSV with a header row and columns date,value. Parse problems throw
/// DataError carrying the offending line number.
PriceSeries load_price_csv(const std::string& path);
SpreadSeries load_spread_csv(const std::string& path, const std::string& tenor_label = "");

/// Overlapping n-trading-day log returns ln(P_{t+n} / P_t).
std::vector<double> log_returns(const PriceSeries& series, int window_days);

/// Historical VaR as the negated empirical (1 - confidence) return quantile,
/// linear interpolation of order statistics, floored at zero. Needs at
/// least 100 overlapping returns.
double historical_var(const PriceSeries& series, int window_days,
                      double confidence = 0.99);

struct DejdFit {
    DejdParams params;
    double log_likelihood = 0.0;
    bool converged = false;
};

/// Exact DEJD transition log-likelihood of a return sample.
double dejd_log_likelihood(const DejdParams& params, std::span<const double> returns,
                           double dt);

/// Maximum likelihood fit of the DEJD transition density over dt, multi-start
/// local search in transformed (bounded) coordinates. Deterministic for a
/// fixed seed and start count.
DejdFit fit_dejd(std::span<const double> returns, double dt,
                 std::uint64_t seed = 20160218, int starts = 8);

struct LogOuFit {
    LogOuParams params;
    // False when the AR(1) slope sits at 1 and the reversion level drops out
    // of the regression; params.k is then ~0 and y_bar is the sample mean.
    bool y_bar_identified = true;
};

/// Log-OU estimation from a historical CDS spread series: hazards are
/// spread/(1-R), the AR(1) regression on ln hazard maps to (k, y_bar,
/// sigma_c) through the exact OU step, lambda0 is the last observed hazard.
LogOuFit fit_logou(const SpreadSeries& series, double dt, double recovery = 0.4);

} // namespace gaprisk
