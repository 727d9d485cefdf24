#include "gaprisk/dejd.hpp"

#include <cmath>
#include <stdexcept>

namespace gaprisk {

void DejdParams::validate() const {
    if (!(eta_up > 1.0)) throw std::invalid_argument("DejdParams: eta_up must exceed 1");
    if (!(eta_down > 0.0)) throw std::invalid_argument("DejdParams: eta_down must be positive");
    if (jump_intensity < 0.0) throw std::invalid_argument("DejdParams: negative jump_intensity");
    if (sigma_a < 0.0) throw std::invalid_argument("DejdParams: negative sigma_a");
    if (p_up < 0.0 || p_up > 1.0) throw std::invalid_argument("DejdParams: p_up outside [0,1]");
    if (!std::isfinite(mu)) throw std::invalid_argument("DejdParams: non-finite mu");
}

namespace {

template <typename S>
S levy_exponent_impl(const DriftView& view, double horizon, S s) {
    const DejdParams& p = view.base;
    const double var = p.sigma_a * p.sigma_a * view.vol_scale * view.vol_scale * horizon;
    S out = s * view.drift_override + 0.5 * var * s * s;
    if (p.jump_intensity > 0.0) {
        const double q = 1.0 - p.p_up;
        S jump = p.p_up * p.eta_up / (p.eta_up - s) + q * p.eta_down / (p.eta_down + s) - 1.0;
        out += p.jump_intensity * horizon * jump;
    }
    return out;
}

} // namespace

double levy_exponent(const DriftView& view, double horizon, double s) {
    view.base.validate();
    if (view.base.jump_intensity > 0.0 &&
        (s >= view.base.eta_up || s <= -view.base.eta_down))
        throw std::domain_error("levy_exponent: s outside (-eta_down, eta_up)");
    return levy_exponent_impl(view, horizon, s);
}

std::complex<double> levy_exponent(const DriftView& view, double horizon,
                                   std::complex<double> s) {
    view.base.validate();
    if (view.base.jump_intensity > 0.0 &&
        (s == std::complex<double>(view.base.eta_up, 0.0) ||
         s == std::complex<double>(-view.base.eta_down, 0.0)))
        throw std::domain_error("levy_exponent: s at a pole");
    return levy_exponent_impl(view, horizon, s);
}

double sample_increment(const DriftView& view, double horizon, RngStream& rng) {
    if (!(horizon > 0.0)) throw std::invalid_argument("sample_increment: horizon must be positive");
    view.base.validate();
    const DejdParams& p = view.base;
    double x = view.drift_override;
    const double sd = p.sigma_a * view.vol_scale * std::sqrt(horizon);
    if (sd > 0.0) x += sd * rng.normal();
    if (p.jump_intensity > 0.0) {
        long n = rng.poisson(p.jump_intensity * horizon);
        for (long j = 0; j < n; ++j) {
            if (rng.uniform() < p.p_up)
                x += rng.exponential(p.eta_up);
            else
                x -= rng.exponential(p.eta_down);
        }
    }
    return x;
}

DriftView conditional_view(const DejdParams& params, double rho,
                           double credit_brownian_increment, double horizon) {
    if (std::abs(rho) > 1.0) throw std::invalid_argument("conditional_view: |rho| > 1");
    DriftView v;
    v.base = params;
    v.drift_override = params.mu * horizon + params.sigma_a * rho * credit_brownian_increment;
    v.vol_scale = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    return v;
}

} // namespace gaprisk
