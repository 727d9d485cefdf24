#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gaprisk {

double norm_cdf(double x);
double norm_pdf(double x);
double norm_ppf(double p);

// Empirical quantile with linear interpolation of order statistics.
double quantile(std::vector<double> values, double q);

// Trapezoid rule over an arbitrary increasing grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

// Bisection for a monotone (or at least sign-changing) objective. The
// objective must have opposite signs at lo and hi.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter = 200);

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int evaluations = 0;
};

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> start, double step,
                             double f_tol = 1e-10, int max_iter = 4000);

// Runs fn(block_index) for block_index in [0, n_blocks) on up to max_threads
// workers. Results must be written to per-block storage by the caller;
// reductions over block index stay deterministic regardless of thread count.
void parallel_for_blocks(std::size_t n_blocks, int max_threads,
                         const std::function<void(std::size_t)>& fn);

// Worker cap: explicit request if > 0, else GAPRISK_THREADS, else hardware.
int resolve_thread_count(int requested);

} // namespace gaprisk
