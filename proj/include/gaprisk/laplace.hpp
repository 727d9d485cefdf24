#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaprisk/dejd.hpp"

namespace gaprisk {

/// Error controls for the two-sided transform inversion. The same
/// discretization and truncation are shared by the cdf and option values
/// produced from one plan, so per-path analytics stay mutually consistent.
struct InversionConfig {
    double abs_tolerance = 1e-10;
    int max_terms = 1 << 16;
    // Admissible range for the real abscissa at which the Lévy exponent is
    // evaluated; must lie inside (-eta_down, eta_up). NaN lets the engine
    // choose.
    double damping_lo = std::numeric_limits<double>::quiet_NaN();
    double damping_hi = std::numeric_limits<double>::quiet_NaN();

    void validate() const;
};

class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_bound(achieved) {}
    double achieved_bound;
};

/// Inversion engine for one DEJD law modulo drift. Drift enters the
/// cdf/put/call only through a displacement and a scale factor, so a single
/// pricer serves every conditional view sharing (sigma_a * vol_scale,
/// horizon, jump parameters); the Monte Carlo loss engine leans on this.
/// Immutable after construction, safe for concurrent evaluation.
class TransformPricer {
  public:
    TransformPricer(const DejdParams& params, double vol_scale, double horizon,
                    const InversionConfig& cfg = {});

    /// P(X <= x) for X with total drift `drift` over the horizon; in [0,1].
    double cdf(double drift, double x) const;
    /// E[(K - e^X)^+], undiscounted, per unit spot.
    double put(double drift, double strike) const;
    /// E[(e^X - K)^+]; finiteness needs eta_up > 1.
    double call(double drift, double strike) const;
    /// Transition density of X at x.
    double density(double drift, double x) const;
    /// E[e^X].
    double mean_exp(double drift) const;

    double tolerance() const { return cfg_.abs_tolerance; }

  private:
    // One damped trapezoidal series: value(d) = exp(rate*d) * Re sum_j
    // coefs[j] * exp(i*j*delta*d). chern_* carry the Chernoff bound used for
    // aliasing control and deep out-of-the-money shortcuts.
    struct Family {
        double rate = 0.0;
        double delta = 0.0;
        double chern_rate = 0.0;
        double chern_log = 0.0;
        std::vector<std::complex<double>> coefs;
        double eval(double d) const;
    };

    void build_left();
    void build_right();

    double psi0(double s) const;
    std::complex<double> psi0(std::complex<double> s) const;
    double jump_mgf(double s) const;

    InversionConfig cfg_;
    double horizon_ = 0.0;
    double s2_ = 0.0; // total Gaussian variance over the horizon
    double m_ = 0.0;  // expected jump count over the horizon
    double p_up_ = 0.0, eta_up_ = 2.0, eta_down_ = 1.0;
    bool deterministic_ = false;
    double exp_psi1_ = 1.0; // E[e^{X0}] of the centered law
    Family left_cdf_, left_put_, left_den_;
    Family right_surv_, right_call_, right_den_;
};

/// P(X <= x) over the horizon, within cfg.abs_tolerance, clamped to [0,1].
double return_cdf(const DriftView& view, double horizon, double x,
                  const InversionConfig& cfg = {});

/// E[(K - e^X)^+] per unit spot, undiscounted.
double put_value(const DriftView& view, double horizon, double strike_ratio,
                 const InversionConfig& cfg = {});

/// E[(e^X - K)^+] per unit spot, undiscounted.
double call_value(const DriftView& view, double horizon, double strike_ratio,
                  const InversionConfig& cfg = {});

/// Transition density of the horizon log return at x.
double transition_density(const DriftView& view, double horizon, double x,
                          const InversionConfig& cfg = {});

} // namespace gaprisk
