#include "gaprisk/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gaprisk/math_util.hpp"

namespace gaprisk {

void RepoTerms::validate() const {
    if (haircut < 0.0 || haircut >= 1.0)
        throw std::invalid_argument("RepoTerms: haircut outside [0,1)");
    if (!(tenor > 0.0)) throw std::invalid_argument("RepoTerms: tenor must be positive");
    if (!(mpr > 0.0)) throw std::invalid_argument("RepoTerms: mpr must be positive");
    if (liquidity_discount < 0.0 || liquidity_discount >= 1.0)
        throw std::invalid_argument("RepoTerms: liquidity discount outside [0,1)");
    if (recovery < 0.0 || recovery >= 1.0)
        throw std::invalid_argument("RepoTerms: recovery outside [0,1)");
    if (std::abs(correlation) > 1.0)
        throw std::invalid_argument("RepoTerms: |correlation| > 1");
}

FrozenPaths FrozenPaths::build(const CreditInput& credit, double tenor, double mpr,
                               const McConfig& mc) {
    FrozenPaths out;
    out.tenor = tenor;
    out.mpr = mpr;

    if (std::holds_alternative<ImmediateDefault>(credit)) {
        out.n_paths = 1;
        out.cells = 1;
        out.cell_start = {0.0};
        out.dp = {1.0};
        out.dwin = {0.0};
        out.pd_tenor_mean = 1.0;
        return out;
    }

    // Cell edges for the default-time integral.
    std::vector<double> edges;
    for (double t = 0.0; t < tenor - 1e-12; t += mc.grid_step) edges.push_back(t);
    edges.push_back(tenor);
    const int cells = static_cast<int>(edges.size()) - 1;
    out.cells = cells;
    out.cell_start.assign(edges.begin(), edges.end() - 1);

    if (const auto* curve = std::get_if<HazardCurve>(&credit)) {
        curve->validate();
        out.n_paths = 1;
        out.dp.resize(cells);
        out.dwin.assign(cells, 0.0);
        for (int i = 0; i < cells; ++i)
            out.dp[i] = curve->default_prob(edges[i + 1]) - curve->default_prob(edges[i]);
        out.pd_tenor_mean = curve->default_prob(tenor);
        return out;
    }

    const auto& ou = std::get<LogOuParams>(credit);
    out.stochastic = true;
    out.n_paths = mc.paths;

    // Simulation grid: cell edges plus each MPR window end, so the Brownian
    // increment over [t_i, t_i + u] is exact rather than interpolated.
    std::vector<double> grid = edges;
    for (int i = 0; i < cells; ++i) grid.push_back(edges[i] + mpr);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());

    std::vector<std::size_t> edge_idx(edges.size()), win_idx(cells);
    auto locate = [&](double t) {
        auto it = std::lower_bound(grid.begin(), grid.end(), t - 1e-12);
        return static_cast<std::size_t>(it - grid.begin());
    };
    for (std::size_t e = 0; e < edges.size(); ++e) edge_idx[e] = locate(edges[e]);
    for (int i = 0; i < cells; ++i) win_idx[i] = locate(edges[i] + mpr);

    out.dp.resize(static_cast<std::size_t>(mc.paths) * cells);
    out.dwin.resize(static_cast<std::size_t>(mc.paths) * cells);

    double sum_pd = 0.0, sum_pd2 = 0.0;
    std::vector<double> cum_w(grid.size());
    for (int p = 0; p < mc.paths; ++p) {
        RngStream rng(mc.seed, static_cast<std::uint64_t>(p));
        IntensityPath path = simulate_path(ou, grid, rng);
        auto dist = default_distribution(path);
        cum_w[0] = 0.0;
        for (std::size_t i = 1; i < grid.size(); ++i) cum_w[i] = cum_w[i - 1] + path.dw[i - 1];
        double* dp_row = &out.dp[static_cast<std::size_t>(p) * cells];
        double* dw_row = &out.dwin[static_cast<std::size_t>(p) * cells];
        for (int i = 0; i < cells; ++i) {
            dp_row[i] = dist[edge_idx[i + 1]] - dist[edge_idx[i]];
            dw_row[i] = cum_w[win_idx[i]] - cum_w[edge_idx[i]];
        }
        const double pd = dist[edge_idx[cells]];
        sum_pd += pd;
        sum_pd2 += pd * pd;
    }
    out.pd_tenor_mean = sum_pd / mc.paths;
    const double var = sum_pd2 / mc.paths - out.pd_tenor_mean * out.pd_tenor_mean;
    out.pd_tenor_stderr = std::sqrt(std::max(var, 0.0) / mc.paths);
    return out;
}

namespace {

double threshold_cash(double h, double g, double rc, double b) {
    const double max_loss = 1.0 - rc;
    if (b >= max_loss) return -std::numeric_limits<double>::infinity();
    return std::log((1.0 - h) * (max_loss - b) / ((1.0 - g) * max_loss));
}

double threshold_sec(double h, double rc, double b) {
    const double max_loss = 1.0 - rc; // relative to lent securities value
    if (b >= max_loss) return std::numeric_limits<double>::infinity();
    return std::log1p(h + b / (1.0 - rc));
}

} // namespace

double loss_threshold(const RepoTerms& terms, double b_over_M) {
    terms.validate();
    if (b_over_M < 0.0) throw std::domain_error("loss_threshold: negative loss level");
    if (b_over_M >= 1.0 - terms.recovery)
        throw std::domain_error("loss_threshold: loss level at or beyond maximum loss 1 - R_c");
    if (terms.side == RepoSide::cash_lender)
        return threshold_cash(terms.haircut, terms.liquidity_discount, terms.recovery, b_over_M);
    return threshold_sec(terms.haircut, terms.recovery, b_over_M);
}

LossEngine::LossEngine(const DejdParams& dejd, const RepoTerms& terms,
                       const FrozenPaths& frozen, const McConfig& mc)
    : terms_(terms), dejd_(dejd), frozen_(&frozen), mc_(mc),
      pricer_(dejd,
              frozen.stochastic
                  ? std::sqrt(std::max(0.0, 1.0 - terms.correlation * terms.correlation))
                  : 1.0,
              terms.mpr, mc.inversion),
      fast_path_(!frozen.stochastic || terms.correlation == 0.0) {
    terms_.validate();
    dejd_.validate();
    if (!frozen.stochastic && terms.correlation != 0.0)
        throw std::invalid_argument(
            "LossEngine: correlation requires a stochastic intensity model");
    if (!fast_path_) {
        drifts_.resize(frozen_->dwin.size());
        const double base = dejd_.mu * terms_.mpr;
        for (std::size_t i = 0; i < drifts_.size(); ++i)
            drifts_[i] = base + dejd_.sigma_a * terms_.correlation * frozen_->dwin[i];
    }
}

double LossEngine::strike(double haircut) const {
    if (terms_.side == RepoSide::cash_lender)
        return (1.0 - haircut) / (1.0 - terms_.liquidity_discount);
    return 1.0 + haircut;
}

double LossEngine::el_factor(double haircut) const {
    if (terms_.side == RepoSide::cash_lender)
        return (1.0 - terms_.recovery) * (1.0 - terms_.liquidity_discount) / (1.0 - haircut);
    return 1.0 - terms_.recovery;
}

ElResult LossEngine::expected_loss(double haircut) const {
    const double k = strike(haircut);
    const double factor = el_factor(haircut);
    const bool cash = terms_.side == RepoSide::cash_lender;
    ElResult out;
    out.paths = frozen_->n_paths;

    if (fast_path_) {
        const double base_drift = dejd_.mu * terms_.mpr;
        const double opt = cash ? pricer_.put(base_drift, k) : pricer_.call(base_drift, k);
        out.el = factor * frozen_->pd_tenor_mean * opt;
        out.stderr_ = factor * frozen_->pd_tenor_stderr * opt;
        return out;
    }

    const int n_paths = frozen_->n_paths;
    const int cells = frozen_->cells;
    const int block = 256;
    const std::size_t n_blocks = (n_paths + block - 1) / block;
    std::vector<double> bsum(n_blocks, 0.0), bsum2(n_blocks, 0.0);
    parallel_for_blocks(n_blocks, resolve_thread_count(mc_.threads), [&](std::size_t b) {
        const int lo = static_cast<int>(b) * block;
        const int hi = std::min(n_paths, lo + block);
        double s = 0.0, s2 = 0.0;
        for (int p = lo; p < hi; ++p) {
            const double* dp = &frozen_->dp[static_cast<std::size_t>(p) * cells];
            const double* dr = &drifts_[static_cast<std::size_t>(p) * cells];
            double acc = 0.0;
            for (int i = 0; i < cells; ++i) {
                if (dp[i] <= 0.0) continue;
                const double opt = cash ? pricer_.put(dr[i], k) : pricer_.call(dr[i], k);
                acc += dp[i] * opt;
            }
            s += acc;
            s2 += acc * acc;
        }
        bsum[b] = s;
        bsum2[b] = s2;
    });
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        sum += bsum[b];
        sum2 += bsum2[b];
    }
    const double mean = sum / n_paths;
    const double var = std::max(sum2 / n_paths - mean * mean, 0.0);
    out.el = factor * mean;
    out.stderr_ = factor * std::sqrt(var / n_paths);
    return out;
}

LossDistribution LossEngine::loss_tail(double haircut) const {
    const double max_loss = 1.0 - terms_.recovery;
    const int nb = std::max(2, mc_.b_grid_points);
    std::vector<double> grid(nb);
    for (int j = 0; j < nb; ++j) grid[j] = max_loss * j / (nb - 1);
    return loss_tail(haircut, grid);
}

LossDistribution LossEngine::loss_tail(double haircut, std::span<const double> b_grid) const {
    const double max_loss = 1.0 - terms_.recovery;
    const bool cash = terms_.side == RepoSide::cash_lender;
    const double k = strike(haircut);
    const double factor = el_factor(haircut);
    const std::size_t nb = b_grid.size();
    if (nb == 0) throw std::invalid_argument("loss_tail: empty grid");
    for (std::size_t j = 0; j < nb; ++j) {
        if (b_grid[j] < 0.0 || b_grid[j] > max_loss)
            throw std::invalid_argument("loss_tail: grid outside [0, 1 - R_c]");
        if (j > 0 && !(b_grid[j] > b_grid[j - 1]))
            throw std::invalid_argument("loss_tail: grid not increasing");
    }

    std::vector<double> xstar(nb);
    for (std::size_t j = 0; j < nb; ++j)
        xstar[j] = cash ? threshold_cash(haircut, terms_.liquidity_discount, terms_.recovery,
                                         b_grid[j])
                        : threshold_sec(haircut, terms_.recovery, b_grid[j]);

    LossDistribution out;
    out.loss_grid.assign(b_grid.begin(), b_grid.end());
    out.tail_probs.assign(nb, 0.0);
    out.tail_stderr.assign(nb, 0.0);
    out.paths = frozen_->n_paths;

    auto cell_prob = [&](double drift, double x) {
        if (std::isinf(x)) return 0.0; // beyond the maximum loss on either side
        const double c = pricer_.cdf(drift, x);
        return cash ? c : 1.0 - c;
    };

    if (fast_path_) {
        const double base_drift = dejd_.mu * terms_.mpr;
        const double opt = cash ? pricer_.put(base_drift, k) : pricer_.call(base_drift, k);
        out.el = factor * frozen_->pd_tenor_mean * opt;
        out.el_stderr = factor * frozen_->pd_tenor_stderr * opt;
        for (std::size_t j = 0; j < nb; ++j) {
            const double c = cell_prob(base_drift, xstar[j]);
            out.tail_probs[j] = frozen_->pd_tenor_mean * c;
            out.tail_stderr[j] = frozen_->pd_tenor_stderr * c;
        }
        return out;
    }

    const int n_paths = frozen_->n_paths;
    const int cells = frozen_->cells;
    const int block = 128;
    const std::size_t n_blocks = (n_paths + block - 1) / block;
    std::vector<std::vector<double>> btail(n_blocks), btail2(n_blocks);
    std::vector<double> bel(n_blocks, 0.0), bel2(n_blocks, 0.0);
    parallel_for_blocks(n_blocks, resolve_thread_count(mc_.threads), [&](std::size_t b) {
        const int lo = static_cast<int>(b) * block;
        const int hi = std::min(n_paths, lo + block);
        std::vector<double> tsum(nb, 0.0), tsum2(nb, 0.0), path_tail(nb);
        double es = 0.0, es2 = 0.0;
        for (int p = lo; p < hi; ++p) {
            const double* dp = &frozen_->dp[static_cast<std::size_t>(p) * cells];
            const double* dr = &drifts_[static_cast<std::size_t>(p) * cells];
            std::fill(path_tail.begin(), path_tail.end(), 0.0);
            double el_acc = 0.0;
            for (int i = 0; i < cells; ++i) {
                if (dp[i] <= 0.0) continue;
                el_acc += dp[i] * (cash ? pricer_.put(dr[i], k) : pricer_.call(dr[i], k));
                for (std::size_t j = 0; j < nb; ++j)
                    path_tail[j] += dp[i] * cell_prob(dr[i], xstar[j]);
            }
            es += el_acc;
            es2 += el_acc * el_acc;
            for (std::size_t j = 0; j < nb; ++j) {
                tsum[j] += path_tail[j];
                tsum2[j] += path_tail[j] * path_tail[j];
            }
        }
        bel[b] = es;
        bel2[b] = es2;
        btail[b] = std::move(tsum);
        btail2[b] = std::move(tsum2);
    });

    double el_sum = 0.0, el_sum2 = 0.0;
    std::vector<double> tsum(nb, 0.0), tsum2(nb, 0.0);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        el_sum += bel[b];
        el_sum2 += bel2[b];
        for (std::size_t j = 0; j < nb; ++j) {
            tsum[j] += btail[b][j];
            tsum2[j] += btail2[b][j];
        }
    }
    const double n = static_cast<double>(n_paths);
    const double el_mean = el_sum / n;
    out.el = factor * el_mean;
    out.el_stderr = factor * std::sqrt(std::max(el_sum2 / n - el_mean * el_mean, 0.0) / n);
    for (std::size_t j = 0; j < nb; ++j) {
        const double mean = tsum[j] / n;
        out.tail_probs[j] = mean;
        out.tail_stderr[j] = std::sqrt(std::max(tsum2[j] / n - mean * mean, 0.0) / n);
    }
    return out;
}

ElResult expected_loss(const RepoTerms& terms, const DejdParams& dejd,
                       const CreditInput& credit, const McConfig& mc) {
    FrozenPaths frozen = FrozenPaths::build(credit, terms.tenor, terms.mpr, mc);
    LossEngine engine(dejd, terms, frozen, mc);
    return engine.expected_loss(terms.haircut);
}

double zero_corr_el(const RepoTerms& terms, const DejdParams& dejd, double pd_tenor,
                    const InversionConfig& cfg) {
    terms.validate();
    if (pd_tenor < 0.0 || pd_tenor > 1.0)
        throw std::invalid_argument("zero_corr_el: pd outside [0,1]");
    DriftView view = DriftView::unconditional(dejd, terms.mpr);
    if (terms.side == RepoSide::cash_lender) {
        const double k = (1.0 - terms.haircut) / (1.0 - terms.liquidity_discount);
        const double factor = (1.0 - terms.recovery) * (1.0 - terms.liquidity_discount) /
                              (1.0 - terms.haircut);
        return factor * pd_tenor * put_value(view, terms.mpr, k, cfg);
    }
    const double k = 1.0 + terms.haircut;
    return (1.0 - terms.recovery) * pd_tenor * call_value(view, terms.mpr, k, cfg);
}

LossDistribution loss_tail(const RepoTerms& terms, const DejdParams& dejd,
                           const CreditInput& credit, std::span<const double> b_grid,
                           const McConfig& mc) {
    FrozenPaths frozen = FrozenPaths::build(credit, terms.tenor, terms.mpr, mc);
    LossEngine engine(dejd, terms, frozen, mc);
    return engine.loss_tail(terms.haircut, b_grid);
}

LossDistribution loss_tail(const RepoTerms& terms, const DejdParams& dejd,
                           const CreditInput& credit, const McConfig& mc) {
    FrozenPaths frozen = FrozenPaths::build(credit, terms.tenor, terms.mpr, mc);
    LossEngine engine(dejd, terms, frozen, mc);
    return engine.loss_tail(terms.haircut);
}

double loss_var(const LossDistribution& dist, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("loss_var: q outside (0,1)");
    const double level = 1.0 - q;
    double var = 0.0;
    for (std::size_t j = 0; j < dist.loss_grid.size(); ++j)
        if (dist.tail_probs[j] > level) var = dist.loss_grid[j];
    return var;
}

EsResult loss_es(const LossDistribution& dist, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("loss_es: q outside (0,1)");
    EsResult out;
    const double var = loss_var(dist, q);
    const std::size_t n = dist.loss_grid.size();
    std::size_t start = 0;
    while (start < n && dist.loss_grid[start] < var) ++start;
    if (n - start < 10) out.coarse_tail = true;
    double integral = 0.0;
    for (std::size_t j = start; j + 1 < n; ++j)
        integral += 0.5 * (dist.tail_probs[j] + dist.tail_probs[j + 1]) *
                    (dist.loss_grid[j + 1] - dist.loss_grid[j]);
    out.value = var + integral / (1.0 - q);
    return out;
}

} // namespace gaprisk
