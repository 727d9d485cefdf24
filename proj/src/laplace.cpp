#include "gaprisk/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace gaprisk {

namespace {

constexpr double kDeepOtmFloor = 1e-14;
constexpr double kPi = 3.14159265358979324;
constexpr double kTwoPi = 6.28318530717958648;

} // namespace

void InversionConfig::validate() const {
    if (!(abs_tolerance > 0.0))
        throw std::invalid_argument("InversionConfig: abs_tolerance must be positive");
    if (max_terms < 64)
        throw std::invalid_argument("InversionConfig: max_terms must be at least 64");
}

double TransformPricer::jump_mgf(double s) const {
    return p_up_ * eta_up_ / (eta_up_ - s) + (1.0 - p_up_) * eta_down_ / (eta_down_ + s);
}

double TransformPricer::psi0(double s) const {
    double out = 0.5 * s2_ * s * s;
    if (m_ > 0.0) out += m_ * (jump_mgf(s) - 1.0);
    return out;
}

std::complex<double> TransformPricer::psi0(std::complex<double> s) const {
    std::complex<double> out = 0.5 * s2_ * s * s;
    if (m_ > 0.0) {
        std::complex<double> jump =
            p_up_ * eta_up_ / (eta_up_ - s) + (1.0 - p_up_) * eta_down_ / (eta_down_ + s);
        out += m_ * (jump - 1.0);
    }
    return out;
}

double TransformPricer::Family::eval(double d) const {
    const std::complex<double> z = std::polar(1.0, delta * d);
    std::complex<double> phase(1.0, 0.0);
    std::complex<double> acc(0.0, 0.0);
    const std::size_t n = coefs.size();
    for (std::size_t j = 0; j < n; ++j) {
        if ((j & 127u) == 0u && j > 0u)
            phase = std::polar(1.0, delta * d * static_cast<double>(j));
        acc += coefs[j] * phase;
        phase *= z;
    }
    return std::exp(rate * d) * acc.real();
}

TransformPricer::TransformPricer(const DejdParams& params, double vol_scale,
                                 double horizon, const InversionConfig& cfg)
    : cfg_(cfg), horizon_(horizon) {
    params.validate();
    cfg_.validate();
    if (!(horizon > 0.0)) throw std::invalid_argument("TransformPricer: horizon must be positive");
    if (vol_scale < 0.0 || vol_scale > 1.0)
        throw std::invalid_argument("TransformPricer: vol_scale outside [0,1]");

    const double sigma_eff = params.sigma_a * vol_scale;
    s2_ = sigma_eff * sigma_eff * horizon;
    m_ = params.jump_intensity * horizon;
    p_up_ = params.p_up;
    eta_up_ = params.eta_up;
    eta_down_ = params.eta_down;

    if (s2_ <= 0.0) {
        if (m_ > 0.0)
            throw std::domain_error(
                "TransformPricer: jump law with zero diffusion is outside the inversion domain");
        deterministic_ = true;
        return;
    }

    exp_psi1_ = std::exp(psi0(1.0));
    build_left();
    build_right();
}

namespace {

struct PlanScalars {
    double a = 0.0;     // contour damping abscissa
    double tilde = 0.0; // Chernoff abscissa controlling the amplified aliases
    double delta = 0.0; // frequency step
    int n_terms = 0;
};

// Picks abscissa, frequency step and truncation so the aliasing and
// truncation error bounds each stay below eps/2. `pole` is the distance to
// the nearest transform singularity on the damping side (infinite when the
// relevant exponential tail is absent). `psi_at` evaluates the centered
// exponent on the damping side; `log_c1` bounds (in logs) the inverted
// function on the undamped side. All bound arithmetic is done in logs.
PlanScalars choose_plan(double eps, double s2, double pole, double log_c1,
                        const std::function<double(double)>& psi_at, int max_terms) {
    PlanScalars out;
    const double sigma = std::sqrt(s2);
    const double big_l = std::log(6.0 / eps);
    const double cap = std::isfinite(pole) ? 0.5 * pole : std::numeric_limits<double>::infinity();
    out.a = std::min(cap, std::sqrt(2.0 * big_l) / sigma);
    if (!(out.a > 0.0)) throw std::domain_error("inversion: empty damping interval");

    // Cancellation guard: series coefficients scale like exp(psi(a)), and
    // the summation loses ~eps_machine of that scale, so keep the exponent
    // small enough that the float noise stays below the tolerance.
    const double a_floor = 0.05 * out.a;
    while (psi_at(out.a) > 11.5 && out.a > a_floor) out.a *= 0.9;

    const double r = std::isfinite(pole) ? std::min(out.a, 0.5 * (pole - out.a)) : out.a;
    out.tilde = out.a + r;
    const double log_c2 = psi_at(out.tilde);

    double h = std::max((std::max(log_c1, 0.0) + std::log(8.0 / eps)) / out.a,
                        (std::max(log_c2, 0.0) + std::log(8.0 / eps)) / r);
    for (int i = 0; i < 200; ++i) {
        const double t1 = std::exp(log_c1 - out.a * h);
        const double t2 = std::exp(log_c2 - r * h);
        const double alias =
            t1 / (1.0 - std::exp(-out.a * h)) + t2 / (1.0 - std::exp(-r * h));
        if (alias <= 0.5 * eps) break;
        h *= 1.2;
    }
    out.delta = kTwoPi / h;

    // Truncation remainder after N terms in the loosest (density) form:
    // (1/pi) exp(r0 - s2 V^2 / 2) / (s2 V), V = N * delta.
    const double r0 = psi_at(out.a);
    auto log_rem = [&](int n) {
        const double v = n * out.delta;
        return r0 - 0.5 * s2 * v * v - std::log(kPi * s2 * v);
    };
    const double v0 =
        std::sqrt(2.0 * std::max(r0 + std::log(2.0 / eps) + 4.0, 1.0) / s2);
    int n = std::max(8, static_cast<int>(std::ceil(v0 / out.delta)));
    while (n <= max_terms && log_rem(n) > std::log(0.5 * eps))
        n = static_cast<int>(std::ceil(n * 1.15)) + 1;
    if (n > max_terms) {
        const double achieved = std::exp(std::max(log_rem(max_terms), -700.0));
        throw ConvergenceError("inversion: tolerance unmet at max_terms", achieved);
    }
    out.n_terms = n;
    return out;
}

} // namespace

void TransformPricer::build_left() {
    const double eps = cfg_.abs_tolerance;
    double pole = (m_ > 0.0 && p_up_ < 1.0) ? eta_down_ : std::numeric_limits<double>::infinity();
    if (std::isfinite(cfg_.damping_lo) && cfg_.damping_lo < 0.0)
        pole = std::min(pole, -2.0 * cfg_.damping_lo);

    // The density series reuses this plan; its aliasing constant carries an
    // extra factor sup f <= 1/sqrt(2 pi s2), folded in here.
    const double log_fmax = std::max(0.0, -0.5 * std::log(kTwoPi * s2_));
    PlanScalars plan = choose_plan(
        eps, s2_, pole, log_fmax,
        [&](double t) { return psi0(-t) + log_fmax; }, cfg_.max_terms);

    const double a = plan.a;
    const int n = plan.n_terms;
    left_cdf_.rate = a;
    left_put_.rate = 1.0 + a;
    left_den_.rate = a;
    left_cdf_.delta = left_put_.delta = left_den_.delta = plan.delta;
    left_cdf_.chern_rate = plan.tilde;
    left_cdf_.chern_log = psi0(-plan.tilde);
    left_put_.chern_rate = 1.0 + plan.tilde;
    left_put_.chern_log = left_cdf_.chern_log;
    left_cdf_.coefs.resize(n + 1);
    left_put_.coefs.resize(n + 1);
    left_den_.coefs.resize(n + 1);
    const double w = plan.delta / kPi;
    for (int j = 0; j <= n; ++j) {
        const std::complex<double> s(a, j * plan.delta);
        std::complex<double> num = std::exp(psi0(-s)) * w;
        if (j == 0) num *= 0.5;
        left_den_.coefs[j] = num;
        left_cdf_.coefs[j] = num / s;
        left_put_.coefs[j] = num / (s * (s + 1.0));
    }
}

void TransformPricer::build_right() {
    const double eps = cfg_.abs_tolerance;
    double pole_s = (m_ > 0.0 && p_up_ > 0.0) ? eta_up_ : std::numeric_limits<double>::infinity();
    if (std::isfinite(cfg_.damping_hi) && cfg_.damping_hi > 0.0)
        pole_s = std::min(pole_s, 2.0 * cfg_.damping_hi);

    const double log_fmax = std::max(0.0, -0.5 * std::log(kTwoPi * s2_));
    PlanScalars plan = choose_plan(
        eps, s2_, pole_s, log_fmax,
        [&](double t) { return psi0(t) + log_fmax; }, cfg_.max_terms);
    {
        const double a = plan.a;
        const int n = plan.n_terms;
        right_surv_.rate = -a;
        right_den_.rate = -a;
        right_surv_.delta = right_den_.delta = plan.delta;
        right_surv_.chern_rate = plan.tilde;
        right_surv_.chern_log = psi0(plan.tilde);
        right_surv_.coefs.resize(n + 1);
        right_den_.coefs.resize(n + 1);
        const double w = plan.delta / kPi;
        for (int j = 0; j <= n; ++j) {
            const std::complex<double> s(a, -j * plan.delta); // transform argument
            std::complex<double> num = std::exp(psi0(s)) * w;
            if (j == 0) num *= 0.5;
            right_den_.coefs[j] = num;
            right_surv_.coefs[j] = num / s;
        }
    }

    // Call series: contour on the far side of the s = 1 pole. The undamped
    // aliases are bounded by E[e^X0].
    const double pole_c =
        std::isfinite(pole_s) ? pole_s - 1.0 : std::numeric_limits<double>::infinity();
    if (!(pole_c > 0.0))
        throw std::domain_error("TransformPricer: call inversion needs eta_up > 1");
    PlanScalars plan_c = choose_plan(
        eps, s2_, pole_c, psi0(1.0),
        [&](double t) { return psi0(1.0 + t); }, cfg_.max_terms);
    {
        const double a = plan_c.a;
        const int n = plan_c.n_terms;
        right_call_.rate = -a;
        right_call_.delta = plan_c.delta;
        right_call_.chern_rate = plan_c.tilde;
        right_call_.chern_log = psi0(1.0 + plan_c.tilde);
        right_call_.coefs.resize(n + 1);
        const double w = plan_c.delta / kPi;
        for (int j = 0; j <= n; ++j) {
            const std::complex<double> s(-a, j * plan_c.delta); // contour point
            std::complex<double> num = std::exp(psi0(1.0 - s)) * w;
            if (j == 0) num *= 0.5;
            right_call_.coefs[j] = num / (s * (s - 1.0));
        }
    }
}

double TransformPricer::cdf(double drift, double x) const {
    const double d = x - drift;
    if (deterministic_) return d >= 0.0 ? 1.0 : 0.0;
    const double v = d <= 0.0 ? left_cdf_.eval(d) : 1.0 - right_surv_.eval(d);
    return std::clamp(v, 0.0, 1.0);
}

double TransformPricer::put(double drift, double strike) const {
    if (!(strike > 0.0)) throw std::domain_error("put: strike must be positive");
    if (deterministic_) return std::max(strike - std::exp(drift), 0.0);
    const double d = std::log(strike) - drift;
    // Certified below the noise floor: skip the inversion entirely.
    if (drift + left_put_.chern_rate * d + left_put_.chern_log < std::log(kDeepOtmFloor))
        return 0.0;
    double v;
    if (d <= 0.0)
        v = std::exp(drift) * left_put_.eval(d);
    else
        v = std::exp(drift) * right_call_.eval(d) + strike - mean_exp(drift);
    return std::clamp(v, 0.0, strike);
}

double TransformPricer::call(double drift, double strike) const {
    if (!(strike > 0.0)) throw std::domain_error("call: strike must be positive");
    if (deterministic_) return std::max(std::exp(drift) - strike, 0.0);
    const double d = std::log(strike) - drift;
    if (drift - right_call_.chern_rate * d + right_call_.chern_log < std::log(kDeepOtmFloor))
        return 0.0;
    double v;
    if (d >= 0.0)
        v = std::exp(drift) * right_call_.eval(d);
    else
        v = std::exp(drift) * left_put_.eval(d) + mean_exp(drift) - strike;
    return std::max(v, 0.0);
}

double TransformPricer::density(double drift, double x) const {
    if (deterministic_)
        throw std::domain_error("density: law is degenerate at the drift");
    const double d = x - drift;
    const double v = d <= 0.0 ? left_den_.eval(d) : right_den_.eval(d);
    return std::max(v, 0.0);
}

double TransformPricer::mean_exp(double drift) const {
    return std::exp(drift) * exp_psi1_;
}

double return_cdf(const DriftView& view, double horizon, double x,
                  const InversionConfig& cfg) {
    TransformPricer pricer(view.base, view.vol_scale, horizon, cfg);
    return pricer.cdf(view.drift_override, x);
}

double put_value(const DriftView& view, double horizon, double strike_ratio,
                 const InversionConfig& cfg) {
    TransformPricer pricer(view.base, view.vol_scale, horizon, cfg);
    return pricer.put(view.drift_override, strike_ratio);
}

double call_value(const DriftView& view, double horizon, double strike_ratio,
                  const InversionConfig& cfg) {
    TransformPricer pricer(view.base, view.vol_scale, horizon, cfg);
    return pricer.call(view.drift_override, strike_ratio);
}

double transition_density(const DriftView& view, double horizon, double x,
                          const InversionConfig& cfg) {
    TransformPricer pricer(view.base, view.vol_scale, horizon, cfg);
    return pricer.density(view.drift_override, x);
}

} // namespace gaprisk
