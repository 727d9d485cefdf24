#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "gaprisk/credit.hpp"
#include "gaprisk/dejd.hpp"
#include "gaprisk/laplace.hpp"

namespace gaprisk {

enum class RepoSide { cash_lender, securities_lender };

/// Economics of one repo: constant-exposure convention (fixed principal M,
/// so per-unit losses depend only on the MPR return).
struct RepoTerms {
    double haircut = 0.0;            // h in [0,1)
    double tenor = 1.0;              // T (yr)
    double mpr = 10.0 / 252.0;       // u (yr)
    double liquidity_discount = 0.0; // g in [0,1); cash-lender side only
    double recovery = 0.4;           // counterparty recovery R_c in [0,1)
    double correlation = 0.0;        // rho between asset and credit Brownians
    RepoSide side = RepoSide::cash_lender;

    void validate() const;
};

/// Counterparty default description: stochastic log-OU intensity, a fitted
/// deterministic hazard curve, or certain immediate default (asset-only
/// collateral haircut mode).
struct ImmediateDefault {};
using CreditInput = std::variant<LogOuParams, HazardCurve, ImmediateDefault>;

struct McConfig {
    int paths = 10000;
    double grid_step = 1.0 / 52.0; // default-time cell width (yr)
    int b_grid_points = 200;
    std::uint64_t seed = 1;
    int threads = 0; // 0: GAPRISK_THREADS env, else hardware
    InversionConfig inversion;
};

/// Loss variable tail curve per unit principal. tail_probs[j] = P(L >= b_j);
/// el is carried from the same sweep.
struct LossDistribution {
    std::vector<double> loss_grid;
    std::vector<double> tail_probs;
    std::vector<double> tail_stderr;
    double el = 0.0;
    double el_stderr = 0.0;
    int paths = 0;
};

struct ElResult {
    double el = 0.0;
    double stderr_ = 0.0;
    int paths = 0;
};

/// Frozen credit scenario: per-path default-probability increments on the
/// cell grid and the credit Brownian increments over each MPR window.
/// Simulated once per scenario and shared across haircut trials so solvers
/// run on common random numbers.
struct FrozenPaths {
    double tenor = 0.0;
    double mpr = 0.0;
    int n_paths = 0;
    int cells = 0;
    bool stochastic = false;
    std::vector<double> cell_start;
    std::vector<double> dp;   // [path * cells + i]
    std::vector<double> dwin; // [path * cells + i], W_c over [t_i, t_i + u]
    double pd_tenor_mean = 0.0;
    double pd_tenor_stderr = 0.0;

    static FrozenPaths build(const CreditInput& credit, double tenor, double mpr,
                             const McConfig& mc);
};

/// Eq.-(8)-style log-return threshold: {L >= b} over an MPR window maps to
/// {X <= x*(b)} on the cash-lender side (>= on the securities-lender side).
/// Throws std::domain_error for b/M at or beyond the maximum loss 1 - R_c.
double loss_threshold(const RepoTerms& terms, double b_over_M);

/// Shared evaluation core. Immutable; evaluations are pure and the Monte
/// Carlo reduction is block-ordered, so results do not depend on thread
/// count.
class LossEngine {
  public:
    LossEngine(const DejdParams& dejd, const RepoTerms& terms,
               const FrozenPaths& frozen, const McConfig& mc);

    ElResult expected_loss(double haircut) const;
    LossDistribution loss_tail(double haircut, std::span<const double> b_grid) const;
    LossDistribution loss_tail(double haircut) const; // default uniform grid

    const FrozenPaths& frozen() const { return *frozen_; }
    const RepoTerms& terms() const { return terms_; }

  private:
    RepoTerms terms_;
    DejdParams dejd_;
    const FrozenPaths* frozen_;
    McConfig mc_;
    TransformPricer pricer_;
    bool fast_path_; // deterministic credit or zero correlation
    std::vector<double> drifts_; // conditional MPR drifts per (path, cell)

    double strike(double haircut) const;
    double el_factor(double haircut) const;
};

ElResult expected_loss(const RepoTerms& terms, const DejdParams& dejd,
                       const CreditInput& credit, const McConfig& mc);

/// Zero-correlation closed form: factored through the unconditional default
/// probability, no path simulation.
double zero_corr_el(const RepoTerms& terms, const DejdParams& dejd, double pd_tenor,
                    const InversionConfig& cfg = {});

LossDistribution loss_tail(const RepoTerms& terms, const DejdParams& dejd,
                           const CreditInput& credit, std::span<const double> b_grid,
                           const McConfig& mc);
LossDistribution loss_tail(const RepoTerms& terms, const DejdParams& dejd,
                           const CreditInput& credit, const McConfig& mc);

/// Smallest grid loss l with P(L > l) <= 1 - q; zero when the whole curve
/// is below 1 - q.
double loss_var(const LossDistribution& dist, double q);

struct EsResult {
    double value = 0.0;
    bool coarse_tail = false; // fewer than 10 grid points beyond VaR
};

/// ES_q = VaR + int_{VaR}^{max} P(L >= b) db / (1 - q), trapezoid on the
/// stored grid.
EsResult loss_es(const LossDistribution& dist, double q);

} // namespace gaprisk
