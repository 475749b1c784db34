#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "twdp/estimators.hpp"
#include "twdp/perf.hpp"

namespace twdp {

enum class EstimatorSet { gamma_based, delta_based, both };

struct SweepConfig {
    std::vector<double> k_values;
    std::vector<double> gamma_values;
    std::size_t n_samples{10'000};
    std::size_t n_realizations{500};
    double omega{1.0};
    std::uint64_t seed{0};
    EstimatorSet estimator_set{EstimatorSet::both};
    unsigned jobs{1};

    /// Throws DomainError on empty grids, out-of-range values or zero counts.
    void validate() const;
};

/// Status tallies for one grid point.
struct FailureCounts {
    std::size_t k_no_positive_root{0};
    std::size_t denominator_singular{0};
    std::size_t s_nonpositive{0};
    std::size_t delta_exceeds_unity{0};

    std::size_t clamped() const { return s_nonpositive + delta_exceeds_unity; }
    std::size_t failed() const { return k_no_positive_root + denominator_singular; }
};

/// One grid point aggregated over all realizations. Means, extrema and sample
/// standard deviations use every realization that produced the estimate; the
/// Delta mean is over raw (unclamped) Delta-hat.
struct SweepRow {
    double k{0.0};
    double gamma{0.0};
    double k_hat_mean{0.0};
    double k_hat_min{0.0};
    double k_hat_max{0.0};
    double k_hat_std{0.0};
    double gamma_hat_mean{0.0};
    double gamma_hat_min{0.0};
    double gamma_hat_max{0.0};
    double gamma_hat_std{0.0};
    double delta_hat_mean{0.0};
    FailureCounts failures;
};

/// Per-realization record, in grid order then realization order.
struct RawRealization {
    std::size_t point{0};
    std::size_t realization{0};
    double k{0.0};
    double gamma{0.0};
    EstimateResult estimate;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<RawRealization> raw;
};

struct RegressionFit {
    double slope{0.0};
    double intercept{0.0};
    double r_squared{0.0};
};

/// Grid points are ordered with gamma outer, K inner. Realization j of point i
/// draws from stream derive_stream_seed(seed, i * n_realizations + j), so the
/// output does not depend on `jobs`.
SweepResult run_sweep(const SweepConfig& cfg);

/// Ordinary least squares y = slope x + intercept. Throws DomainError when
/// sizes differ, fewer than 2 points are given, or x is constant.
RegressionFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_raw_csv(std::ostream& out, const std::vector<RawRealization>& raw);

enum class Figure { fig1, fig2, fig3, fig4, fig5 };
Figure parse_figure(const std::string& name);

/// Grids and Monte-Carlo sizes behind the figure CSVs. fig1/fig2 use the sweep
/// fields; fig3/fig4/fig5 evaluate perf_point on `perf_k_values` x
/// `perf_gamma_values` and skip points where the metrics are undefined.
struct FigureConfig {
    SweepConfig sweep;
    std::vector<double> perf_k_values;
    std::vector<double> perf_gamma_values;
    FisherOptions fisher{};

    /// K in [0, 10] step 0.25, Gamma in [0, 0.99] step 0.03, N = 1e4, 500
    /// realizations; perf grids K in {1, 2, 3, 5, 10}, Gamma in [0.05, 0.95]
    /// step 0.05.
    static FigureConfig defaults();
};

/// Writes the CSV needed to redraw one figure:
///   fig1  curve_gamma,k,k_hat_mean,k_hat_min,k_hat_max,k_hat_std,fit_slope,fit_intercept,fit_r2
///   fig2  curve_k,gamma,gamma_hat_mean,gamma_hat_min,gamma_hat_max,gamma_hat_std,fit_slope,...
///   fig3  gamma,k,asv_err_k,crb_err_k
///   fig4  k,gamma,asv_err_gamma,crb_err_gamma
///   fig5  k,v2_over_v1,err_gamma,err_delta_norm
void emit_figure_data(Figure which, std::ostream& out, const FigureConfig& cfg);
void emit_figure_data(Figure which, const std::string& out_path, const FigureConfig& cfg);

}  // namespace twdp
