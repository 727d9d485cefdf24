#include "gaprisk/haircut.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaprisk/math_util.hpp"

namespace gaprisk {

double builtin_el_level(const std::string& label) {
    if (label == "Aa2") return 0.075e-4;
    if (label == "A") return 0.598e-4;
    if (label == "Baa2") return 9.35e-4;
    throw std::invalid_argument("builtin_el_level: unknown label '" + label + "'");
}

namespace {

struct MetricSample {
    double h, value, se;
};

// Metric evaluation for one haircut trial on a frozen path set.
struct TargetMetric {
    const RatingTarget& target;
    const LossEngine& engine;
    double tenor_scale; // applied to PD/EL target levels

    MetricSample eval(double h) const {
        switch (target.kind) {
            case RatingTarget::Kind::first_dollar_pd: {
                const double zero[] = {0.0};
                auto dist = engine.loss_tail(h, zero);
                return {h, dist.tail_probs[0], dist.tail_stderr[0]};
            }
            case RatingTarget::Kind::expected_loss: {
                auto r = engine.expected_loss(h);
                return {h, r.el, r.stderr_};
            }
            case RatingTarget::Kind::economic_capital: {
                auto dist = engine.loss_tail(h);
                auto cap = economic_capital(dist, target.q, target.measure, target.roe);
                const double se = dist.el_stderr / (1.0 - target.q);
                return {h, cap.ec, se};
            }
        }
        throw std::logic_error("unreachable");
    }

    double level() const {
        const bool scaled = target.kind != RatingTarget::Kind::economic_capital;
        return scaled ? target.level * tenor_scale : target.level;
    }
};

void assert_monotone(std::vector<MetricSample> samples, double level) {
    std::sort(samples.begin(), samples.end(),
              [](const MetricSample& a, const MetricSample& b) { return a.h < b.h; });
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const auto& lo = samples[i];
        const auto& hi = samples[i + 1];
        const double slack = 3.0 * (lo.se + hi.se) + 1e-12 * (std::abs(lo.value) + level + 1.0);
        if (hi.value > lo.value + slack)
            throw NonMonotoneError(
                "solve_haircut: metric not monotone in h beyond Monte Carlo noise; "
                "raise the path count");
    }
}

} // namespace

double solve_haircut(const RatingTarget& target, const Scenario& scenario,
                     const FrozenPaths& frozen) {
    if (!(target.level > 0.0))
        throw std::invalid_argument("solve_haircut: target level must be positive");
    LossEngine engine(scenario.dejd, scenario.terms, frozen, scenario.mc);
    TargetMetric metric{target, engine, scenario.terms.tenor};
    const double level = metric.level();

    std::vector<MetricSample> seen;
    auto eval = [&](double h) {
        MetricSample s = metric.eval(h);
        seen.push_back(s);
        return s.value;
    };

    if (eval(0.0) <= level) return 0.0;
    double lo = 0.0, hi = 0.999;
    const double at_cap = eval(hi);
    if (at_cap > level)
        throw UnattainableTargetError(
            "solve_haircut: target level unattainable at h = 0.999");
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) <= level)
            hi = mid;
        else
            lo = mid;
    }
    assert_monotone(std::move(seen), level);
    return hi;
}

double solve_haircut(const RatingTarget& target, const Scenario& scenario) {
    FrozenPaths frozen = FrozenPaths::build(scenario.credit, scenario.terms.tenor,
                                            scenario.terms.mpr, scenario.mc);
    return solve_haircut(target, scenario, frozen);
}

CapitalResult economic_capital(const LossDistribution& dist, double q,
                               EcMeasure measure, double roe) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("economic_capital: q outside (0,1)");
    if (!(roe > 0.0)) throw std::invalid_argument("economic_capital: roe must be positive");
    CapitalResult out;
    out.q = q;
    out.roe = roe;
    out.el = dist.el;
    out.var_q = loss_var(dist, q);
    out.es_q = loss_es(dist, q).value;
    const double tail = measure == EcMeasure::cvar ? out.var_q : out.es_q;
    out.ec = std::max(tail - out.el, 0.0);
    out.capital_charge = roe * out.ec;
    out.total_charge = out.el + out.capital_charge;
    return out;
}

double ec_target_from_el(double el_level, double roe) {
    if (!(roe > 0.0)) throw std::invalid_argument("ec_target_from_el: roe must be positive");
    return el_level / roe;
}

double basel_risk_weight(double pd, double lgd, double maturity,
                         double stressed_corr_mult, double multiplier) {
    if (!(pd > 0.0 && pd < 1.0)) throw std::invalid_argument("basel_risk_weight: pd outside (0,1)");
    if (lgd < 0.0 || lgd > 1.0) throw std::invalid_argument("basel_risk_weight: lgd outside [0,1]");
    const double m = std::max(maturity, 1.0);
    const double w = (1.0 - std::exp(-50.0 * pd)) / (1.0 - std::exp(-50.0));
    double corr = 0.12 * w + 0.24 * (1.0 - w);
    corr *= stressed_corr_mult;
    const double b = std::pow(0.11852 - 0.05478 * std::log(pd), 2.0);
    const double arg = (norm_ppf(pd) + std::sqrt(corr) * norm_ppf(0.999)) / std::sqrt(1.0 - corr);
    double k = lgd * norm_cdf(arg) - pd * lgd;
    k *= (1.0 + (m - 2.5) * b) / (1.0 - 1.5 * b);
    return std::max(k, 0.0) * 12.5 * multiplier;
}

double regulatory_capital(double h, double hvol, double pd, double lgd,
                          double maturity, double stressed_corr_mult, double multiplier) {
    if (h < 0.0 || h >= 1.0) throw std::invalid_argument("regulatory_capital: h outside [0,1)");
    const double exposure = std::max(hvol - h, 0.0) / (1.0 - h);
    if (exposure == 0.0) return 0.0;
    return exposure * 0.08 * basel_risk_weight(pd, lgd, maturity, stressed_corr_mult, multiplier);
}

namespace {

// Shared tail machinery for the charge curve: at zero correlation the
// Eq.-(8) tail is translational in (h, b), so one cdf sweep on a master
// grid serves every haircut; each haircut re-maps the losses and adds only
// its own b = 0 point and put value.
class ChargeEvaluator {
  public:
    ChargeEvaluator(const Scenario& scenario, double q, double roe, EcMeasure measure)
        : scenario_(scenario), q_(q), roe_(roe), measure_(measure),
          frozen_(FrozenPaths::build(scenario.credit, scenario.terms.tenor,
                                     scenario.terms.mpr, scenario.mc)),
          engine_(scenario.dejd, scenario.terms, frozen_, scenario.mc),
          shared_sweep_(!frozen_.stochastic || scenario.terms.correlation == 0.0) {
        if (scenario.terms.side != RepoSide::cash_lender)
            throw std::invalid_argument("total_charge_curve: cash-lender side only");
        if (shared_sweep_) {
            const double max_loss = 1.0 - scenario_.terms.recovery;
            const int nb = std::max(2, scenario_.mc.b_grid_points);
            master_b_.resize(nb);
            for (int j = 0; j < nb; ++j) master_b_[j] = max_loss * j / (nb - 1);
            auto dist = engine_.loss_tail(0.0, master_b_);
            master_tail_ = dist.tail_probs;
            master_se_ = dist.tail_stderr;
        }
    }

    ChargeRow row(double h) const {
        LossDistribution dist = shared_sweep_ ? mapped_tail(h) : engine_.loss_tail(h);
        auto cap = economic_capital(dist, q_, measure_, roe_);
        ChargeRow out;
        out.haircut = h;
        out.el = cap.el;
        out.el_stderr = dist.el_stderr;
        out.var_q = cap.var_q;
        out.es_q = cap.es_q;
        out.es_stderr = dist.el_stderr / (1.0 - q_);
        out.ec = cap.ec;
        out.capital_charge = cap.capital_charge;
        out.total_charge = cap.total_charge;
        return out;
    }

    double metric(double h, std::optional<EcMeasure> measure) const {
        ChargeRow r = row(h);
        if (!measure) return r.el;
        const double tail = *measure == EcMeasure::cvar ? r.var_q : r.es_q;
        return r.el + roe_ * std::max(tail - r.el, 0.0);
    }

  private:
    // Translational remap: the master tail at (h = 0, b) equals the tail at
    // (h, b') with (1-h)(max_loss - b') = max_loss - b. Haircut-specific
    // quantities (the b = 0 head point and the EL put) are evaluated fresh.
    LossDistribution mapped_tail(double h) const {
        const double max_loss = 1.0 - scenario_.terms.recovery;
        LossDistribution out;
        out.paths = frozen_.n_paths;
        const double zero_b[] = {0.0};
        auto head = engine_.loss_tail(h, zero_b);
        out.el = head.el;
        out.el_stderr = head.el_stderr;
        out.loss_grid.push_back(0.0);
        out.tail_probs.push_back(head.tail_probs[0]);
        out.tail_stderr.push_back(head.tail_stderr[0]);
        for (std::size_t j = 0; j < master_b_.size(); ++j) {
            const double mapped = max_loss - (max_loss - master_b_[j]) / (1.0 - h);
            if (mapped <= 0.0) continue;
            out.loss_grid.push_back(mapped);
            out.tail_probs.push_back(master_tail_[j]);
            out.tail_stderr.push_back(master_se_[j]);
        }
        return out;
    }

    const Scenario& scenario_;
    double q_, roe_;
    EcMeasure measure_;
    FrozenPaths frozen_;
    LossEngine engine_;
    bool shared_sweep_;
    std::vector<double> master_b_, master_tail_, master_se_;
};

} // namespace

std::vector<ChargeRow> total_charge_curve(const Scenario& scenario,
                                          std::span<const double> h_grid, double q,
                                          double roe, EcMeasure measure) {
    ChargeEvaluator eval(scenario, q, roe, measure);
    std::vector<ChargeRow> rows;
    rows.reserve(h_grid.size());
    for (double h : h_grid) rows.push_back(eval.row(h));
    return rows;
}

double min_haircut_for_charge(const Scenario& scenario, double limit, double q,
                              double roe, std::optional<EcMeasure> measure) {
    if (!(limit > 0.0)) throw std::invalid_argument("min_haircut_for_charge: limit must be positive");
    ChargeEvaluator eval(scenario, q, roe, measure.value_or(EcMeasure::es));
    if (eval.metric(0.0, measure) <= limit) return 0.0;
    double lo = 0.0, hi = 0.999;
    if (eval.metric(hi, measure) > limit)
        throw UnattainableTargetError("min_haircut_for_charge: limit unattainable");
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if (eval.metric(mid, measure) <= limit)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::vector<TenorHaircut> maturity_sweep(const Scenario& scenario,
                                         std::span<const double> tenors,
                                         const RatingTarget& target, bool normalize) {
    RatingTarget effective = target;
    if (normalize) {
        if (target.kind != RatingTarget::Kind::expected_loss)
            throw std::invalid_argument(
                "maturity_sweep: normalization anchors on an expected-loss target");
        Scenario anchor = scenario;
        anchor.terms.tenor = 1.0;
        FrozenPaths frozen = FrozenPaths::build(anchor.credit, 1.0, anchor.terms.mpr, anchor.mc);
        const double h1 = solve_haircut(target, anchor, frozen);
        LossEngine engine(anchor.dejd, anchor.terms, frozen, anchor.mc);
        auto cap = economic_capital(engine.loss_tail(h1), target.q, target.measure, target.roe);
        effective.kind = RatingTarget::Kind::economic_capital;
        effective.level = std::max(cap.ec, 1e-12);
    }
    std::vector<TenorHaircut> out;
    out.reserve(tenors.size());
    for (double t : tenors) {
        Scenario s = scenario;
        s.terms.tenor = t;
        out.push_back({t, solve_haircut(effective, s)});
    }
    return out;
}

namespace {

DejdParams bump_dejd(const DejdParams& base, const std::string& param, double shift) {
    DejdParams p = base;
    if (param == "mu")
        p.mu += shift;
    else if (param == "sigma")
        p.sigma_a += shift;
    else if (param == "lambda")
        p.jump_intensity += shift;
    else if (param == "p_up")
        p.p_up += shift;
    else if (param == "eta_up")
        p.eta_up += shift;
    else if (param == "eta_down")
        p.eta_down += shift;
    else
        throw std::invalid_argument("sensitivities: unknown parameter '" + param + "'");
    return p;
}

} // namespace

std::vector<SensitivityRow> sensitivities(const Scenario& scenario, double haircut,
                                          double q, std::span<const BumpSpec> bumps) {
    FrozenPaths frozen = FrozenPaths::build(scenario.credit, scenario.terms.tenor,
                                            scenario.terms.mpr, scenario.mc);
    auto es_for = [&](const DejdParams& dejd, const RepoTerms& terms) {
        LossEngine engine(dejd, terms, frozen, scenario.mc);
        return loss_es(engine.loss_tail(haircut), q).value;
    };
    const double es_base = es_for(scenario.dejd, scenario.terms);
    std::vector<SensitivityRow> out;
    out.reserve(bumps.size());
    for (const auto& bump : bumps) {
        DejdParams dejd = scenario.dejd;
        RepoTerms terms = scenario.terms;
        if (bump.param == "rho")
            terms.correlation += bump.shift;
        else if (bump.param == "g")
            terms.liquidity_discount += bump.shift;
        else
            dejd = bump_dejd(scenario.dejd, bump.param, bump.shift);
        const double es_b = bump.shift == 0.0 ? es_base : es_for(dejd, terms);
        out.push_back({bump.param, bump.shift, es_base, es_b, es_b - es_base});
    }
    return out;
}

} // namespace gaprisk
