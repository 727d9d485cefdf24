#pragma once

#include <complex>

#include "gaprisk/rng.hpp"

namespace gaprisk {

/// Double-exponential jump-diffusion parameters for the collateral log
/// return. Jump sizes are mixed exponential: up moves at rate eta_up with
/// probability p_up, down moves at rate eta_down otherwise.
struct DejdParams {
    double mu = 0.0;             // annualized log drift (1/yr)
    double sigma_a = 0.0;        // diffusion volatility (1/sqrt(yr))
    double jump_intensity = 0.0; // Poisson rate (1/yr)
    double p_up = 0.5;
    double eta_up = 2.0;   // must exceed 1 so E[e^X] is finite
    double eta_down = 1.0; // > 0

    void validate() const;
};

/// A DEJD law with the Brownian part re-parameterized: total log drift over
/// the horizon is pinned to drift_override (dimensionless) and the diffusion
/// volatility is scaled by vol_scale. The jump component is untouched. This
/// is the conditional view of the asset once a credit Brownian path is fixed.
struct DriftView {
    DejdParams base;
    double drift_override = 0.0; // total log drift over the horizon
    double vol_scale = 1.0;      // in [0,1]

    static DriftView unconditional(const DejdParams& p, double horizon) {
        return DriftView{p, p.mu * horizon, 1.0};
    }
};

/// log E[exp(s X)] over the horizon. Finite for Re(s) in
/// (-eta_down, eta_up); throws std::domain_error at the poles.
double levy_exponent(const DriftView& view, double horizon, double s);
std::complex<double> levy_exponent(const DriftView& view, double horizon,
                                   std::complex<double> s);

/// Exact draw of the horizon log return: drift + scaled Gaussian +
/// compound Poisson of mixed-exponential jumps.
double sample_increment(const DriftView& view, double horizon, RngStream& rng);

/// Conditional view of Eq.-style wrong-way coupling: the credit Brownian
/// increment (units sqrt(yr)) shifts the drift by sigma_a * rho * increment
/// and the residual diffusion is scaled by sqrt(1 - rho^2).
DriftView conditional_view(const DejdParams& params, double rho,
                           double credit_brownian_increment, double horizon);

} // namespace gaprisk
