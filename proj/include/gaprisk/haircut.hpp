#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaprisk/loss.hpp"

namespace gaprisk {

enum class EcMeasure { cvar, es };

/// Credit-quality objective a haircut must achieve: first-dollar default
/// probability, per-annum expected-loss rate, or economic capital per unit
/// principal. PD/EL levels are scaled linearly to the trade tenor; EC levels
/// are not (that asymmetry is what produces the maturity effect).
struct RatingTarget {
    enum class Kind { first_dollar_pd, expected_loss, economic_capital };
    Kind kind = Kind::expected_loss;
    double level = 0.0;
    std::string label;
    double q = 0.999;
    double roe = 0.15;
    EcMeasure measure = EcMeasure::es;
};

/// Moody's-style idealized one-year expected-loss rates used in the text.
double builtin_el_level(const std::string& label); // "Aa2", "A", "Baa2"

struct CapitalResult {
    double el = 0.0;
    double var_q = 0.0;
    double es_q = 0.0;
    double ec = 0.0;             // max(tail measure - el, 0)
    double capital_charge = 0.0; // roe * ec (per annum)
    double total_charge = 0.0;   // el + capital_charge
    double q = 0.999;
    double roe = 0.15;
};

struct Scenario {
    DejdParams dejd;
    CreditInput credit = ImmediateDefault{};
    RepoTerms terms; // haircut field is the traded haircut where one is needed
    McConfig mc;
};

class UnattainableTargetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};
class NonMonotoneError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Smallest haircut meeting the target, bisection to 1e-4 on common random
/// numbers (one frozen path set across all trials). Monotonicity of the
/// metric in h is asserted; violations beyond Monte Carlo noise raise
/// NonMonotoneError.
double solve_haircut(const RatingTarget& target, const Scenario& scenario);
double solve_haircut(const RatingTarget& target, const Scenario& scenario,
                     const FrozenPaths& frozen);

CapitalResult economic_capital(const LossDistribution& dist, double q,
                               EcMeasure measure, double roe);

/// EC target carrying the same per-annum charge as an EL target: level/roe.
double ec_target_from_el(double el_level, double roe);

/// Basel IRB wholesale risk weight with stressed correlation and scaling
/// multiplier; maturity floored at one year.
double basel_risk_weight(double pd, double lgd, double maturity,
                         double stressed_corr_mult = 1.25, double multiplier = 1.06);

/// Regulatory capital per unit principal under the collateral-haircut
/// approach: exposure (hvol - h)^+ / (1 - h) times 8% times the risk weight.
double regulatory_capital(double h, double hvol, double pd, double lgd,
                          double maturity, double stressed_corr_mult = 1.25,
                          double multiplier = 1.06);

struct ChargeRow {
    double haircut = 0.0;
    double el = 0.0;
    double el_stderr = 0.0;
    double var_q = 0.0;
    double es_q = 0.0;
    double es_stderr = 0.0;
    double ec = 0.0;
    double capital_charge = 0.0;
    double total_charge = 0.0;
};

/// Risk charge and capital charge across a haircut grid. At zero correlation
/// one inversion sweep is shared across all haircuts through the
/// translational identity of the loss tail.
std::vector<ChargeRow> total_charge_curve(const Scenario& scenario,
                                          std::span<const double> h_grid, double q,
                                          double roe, EcMeasure measure);

/// Smallest haircut keeping the charge at or below `limit`: EL alone when
/// measure is empty, otherwise EL + roe * EC.
double min_haircut_for_charge(const Scenario& scenario, double limit, double q,
                              double roe, std::optional<EcMeasure> measure);

struct TenorHaircut {
    double tenor = 0.0;
    double haircut = 0.0;
};

/// Haircut term structure. With normalize set, the EC level is first chosen
/// so the one-year haircut matches the EL-target one-year haircut, then that
/// level is applied across tenors.
std::vector<TenorHaircut> maturity_sweep(const Scenario& scenario,
                                         std::span<const double> tenors,
                                         const RatingTarget& target, bool normalize);

struct BumpSpec {
    std::string param; // mu|sigma|lambda|p_up|eta_up|eta_down|rho|g
    double shift = 0.0;
};

struct SensitivityRow {
    std::string param;
    double shift = 0.0;
    double es_base = 0.0;
    double es_bumped = 0.0;
    double delta_es = 0.0;
};

/// One-sided ES differences under parameter bumps, common random numbers
/// across base and bumped runs.
std::vector<SensitivityRow> sensitivities(const Scenario& scenario, double haircut,
                                          double q, std::span<const BumpSpec> bumps);

} // namespace gaprisk
