#include "twdp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "twdp/error.hpp"
#include "twdp/format.hpp"
#include "twdp/sampler.hpp"

namespace twdp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CompensatedSum {
    double sum{0.0};
    double carry{0.0};

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct Summary {
    double mean{kNaN};
    double min{kNaN};
    double max{kNaN};
    double std{kNaN};
};

Summary summarize(const std::vector<double>& v) {
    Summary s;
    if (v.empty()) {
        return s;
    }
    CompensatedSum total;
    for (double x : v) {
        total.add(x);
    }
    s.mean = total.value() / static_cast<double>(v.size());
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    s.min = *lo;
    s.max = *hi;
    if (v.size() > 1) {
        CompensatedSum sq;
        for (double x : v) {
            sq.add((x - s.mean) * (x - s.mean));
        }
        s.std = std::sqrt(sq.value() / static_cast<double>(v.size() - 1));
    } else {
        s.std = 0.0;
    }
    return s;
}

void tally(FailureCounts& counts, EstimateStatus status) {
    switch (status) {
        case EstimateStatus::ok:
            break;
        case EstimateStatus::k_no_positive_root:
            ++counts.k_no_positive_root;
            break;
        case EstimateStatus::denominator_singular:
            ++counts.denominator_singular;
            break;
        case EstimateStatus::s_nonpositive_gamma_clamped_zero:
            ++counts.s_nonpositive;
            break;
        case EstimateStatus::delta_exceeds_unity_gamma_clamped_one:
            ++counts.delta_exceeds_unity;
            break;
    }
}

std::vector<double> arange(double start, double stop, double step) {
    std::vector<double> v;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
        // rounded to 12 decimals so grid labels print cleanly
        v.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return v;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
    }
    return out;
}

}  // namespace

void SweepConfig::validate() const {
    if (k_values.empty() || gamma_values.empty()) {
        throw DomainError("sweep needs at least one K and one Gamma value");
    }
    for (double k : k_values) {
        GammaParams{k, 0.0, omega}.validate();
    }
    for (double g : gamma_values) {
        GammaParams{0.0, g, omega}.validate();
    }
    if (n_samples < 3) {
        throw DomainError("sweep needs n_samples >= 3");
    }
    if (n_realizations == 0) {
        throw DomainError("sweep needs n_realizations >= 1");
    }
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1U, jobs));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(workers, count); ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const std::size_t points = cfg.k_values.size() * cfg.gamma_values.size();
    const std::size_t total = points * cfg.n_realizations;

    SweepResult result;
    result.raw.resize(total);
    parallel_for(total, cfg.jobs, [&](std::size_t index) {
        const std::size_t point = index / cfg.n_realizations;
        const double gamma = cfg.gamma_values[point / cfg.k_values.size()];
        const double k = cfg.k_values[point % cfg.k_values.size()];
        const GammaParams p{k, gamma, cfg.omega};
        const SampleSet s = generate(p, cfg.n_samples, derive_stream_seed(cfg.seed, index));
        RawRealization& rec = result.raw[index];
        rec.point = point;
        rec.realization = index % cfg.n_realizations;
        rec.k = k;
        rec.gamma = gamma;
        rec.estimate = estimate_joint(s);
    });

    const bool want_gamma = cfg.estimator_set != EstimatorSet::delta_based;
    const bool want_delta = cfg.estimator_set != EstimatorSet::gamma_based;
    result.rows.reserve(points);
    for (std::size_t point = 0; point < points; ++point) {
        SweepRow row;
        row.gamma = cfg.gamma_values[point / cfg.k_values.size()];
        row.k = cfg.k_values[point % cfg.k_values.size()];
        std::vector<double> ks;
        std::vector<double> gammas;
        std::vector<double> deltas;
        for (std::size_t j = 0; j < cfg.n_realizations; ++j) {
            const EstimateResult& e = result.raw[point * cfg.n_realizations + j].estimate;
            tally(row.failures, e.status);
            if (e.k_hat) {
                ks.push_back(*e.k_hat);
            }
            if (want_gamma && e.gamma_hat) {
                gammas.push_back(*e.gamma_hat);
            }
            if (want_delta && e.delta_hat) {
                deltas.push_back(*e.delta_hat);
            }
        }
        const Summary sk = summarize(ks);
        const Summary sg = summarize(gammas);
        row.k_hat_mean = sk.mean;
        row.k_hat_min = sk.min;
        row.k_hat_max = sk.max;
        row.k_hat_std = sk.std;
        row.gamma_hat_mean = sg.mean;
        row.gamma_hat_min = sg.min;
        row.gamma_hat_max = sg.max;
        row.gamma_hat_std = sg.std;
        row.delta_hat_mean = summarize(deltas).mean;
        result.rows.push_back(row);
    }
    return result;
}

RegressionFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw DomainError(fmt::format("ols_fit: {} x values but {} y values", x.size(), y.size()));
    }
    if (x.size() < 2) {
        throw DomainError("ols_fit needs at least two points");
    }
    const double n = static_cast<double>(x.size());
    CompensatedSum sx;
    CompensatedSum sy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    const double mx = sx.value() / n;
    const double my = sy.value() / n;
    CompensatedSum sxx;
    CompensatedSum sxy;
    CompensatedSum syy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx.add(dx * dx);
        sxy.add(dx * dy);
        syy.add(dy * dy);
    }
    if (!(sxx.value() > 0.0)) {
        throw DomainError("ols_fit: x values are all equal");
    }
    RegressionFit fit;
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = my - fit.slope * mx;
    CompensatedSum ss_res;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res.add(e * e);
    }
    fit.r_squared = syy.value() > 0.0 ? std::clamp(1.0 - ss_res.value() / syy.value(), 0.0, 1.0)
                                      : 1.0;
    return fit;
}

std::string sweep_csv_header() {
    return "k,gamma,k_hat_mean,k_hat_min,k_hat_max,k_hat_std,gamma_hat_mean,gamma_hat_min,"
           "gamma_hat_max,gamma_hat_std,delta_hat_mean,n_clamped,n_failed";
}

std::string sweep_csv_row(const SweepRow& r) {
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}", format_number(r.k),
                       format_number(r.gamma), format_number(r.k_hat_mean),
                       format_number(r.k_hat_min), format_number(r.k_hat_max),
                       format_number(r.k_hat_std), format_number(r.gamma_hat_mean),
                       format_number(r.gamma_hat_min), format_number(r.gamma_hat_max),
                       format_number(r.gamma_hat_std), format_number(r.delta_hat_mean),
                       r.failures.clamped(), r.failures.failed());
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << sweep_csv_header() << '\n';
    for (const auto& r : rows) {
        out << sweep_csv_row(r) << '\n';
    }
}

void write_raw_csv(std::ostream& out, const std::vector<RawRealization>& raw) {
    out << "point,realization,k,gamma," << estimate_csv_header() << '\n';
    for (const auto& r : raw) {
        out << r.point << ',' << r.realization << ',' << format_number(r.k) << ','
            << format_number(r.gamma) << ',' << estimate_csv_row(r.estimate) << '\n';
    }
}

Figure parse_figure(const std::string& name) {
    if (name == "fig1") return Figure::fig1;
    if (name == "fig2") return Figure::fig2;
    if (name == "fig3") return Figure::fig3;
    if (name == "fig4") return Figure::fig4;
    if (name == "fig5") return Figure::fig5;
    throw DomainError(fmt::format("unknown figure '{}' (expected fig1..fig5)", name));
}

FigureConfig FigureConfig::defaults() {
    FigureConfig cfg;
    cfg.sweep.k_values = arange(0.0, 10.0, 0.25);
    cfg.sweep.gamma_values = arange(0.0, 0.99, 0.03);
    cfg.perf_k_values = {1.0, 2.0, 3.0, 5.0, 10.0};
    cfg.perf_gamma_values = arange(0.05, 0.95, 0.05);
    return cfg;
}

void emit_figure_data(Figure which, std::ostream& out, const FigureConfig& cfg) {
    switch (which) {
        case Figure::fig1:
        case Figure::fig2: {
            const SweepResult sweep = run_sweep(cfg.sweep);
            const bool by_gamma = which == Figure::fig1;
            out << (by_gamma ? "curve_gamma,k,k_hat_mean,k_hat_min,k_hat_max,k_hat_std,"
                             : "curve_k,gamma,gamma_hat_mean,gamma_hat_min,gamma_hat_max,"
                               "gamma_hat_std,")
                << "fit_slope,fit_intercept,fit_r2\n";
            const auto& curves = by_gamma ? cfg.sweep.gamma_values : cfg.sweep.k_values;
            for (double curve : curves) {
                std::vector<const SweepRow*> members;
                for (const auto& row : sweep.rows) {
                    if ((by_gamma ? row.gamma : row.k) == curve) {
                        members.push_back(&row);
                    }
                }
                std::vector<double> x;
                std::vector<double> y;
                for (const SweepRow* row : members) {
                    const double truth = by_gamma ? row->k : row->gamma;
                    const double mean = by_gamma ? row->k_hat_mean : row->gamma_hat_mean;
                    if (std::isfinite(mean)) {
                        x.push_back(truth);
                        y.push_back(mean);
                    }
                }
                RegressionFit fit{kNaN, kNaN, kNaN};
                if (x.size() >= 2 && *std::max_element(x.begin(), x.end()) >
                                         *std::min_element(x.begin(), x.end())) {
                    fit = ols_fit(x, y);
                }
                for (const SweepRow* row : members) {
                    if (by_gamma) {
                        out << fmt::format("{},{},{},{},{},{},", format_number(curve),
                                           format_number(row->k), format_number(row->k_hat_mean),
                                           format_number(row->k_hat_min),
                                           format_number(row->k_hat_max),
                                           format_number(row->k_hat_std));
                    } else {
                        out << fmt::format("{},{},{},{},{},{},", format_number(curve),
                                           format_number(row->gamma),
                                           format_number(row->gamma_hat_mean),
                                           format_number(row->gamma_hat_min),
                                           format_number(row->gamma_hat_max),
                                           format_number(row->gamma_hat_std));
                    }
                    out << fmt::format("{},{},{}\n", format_number(fit.slope),
                                       format_number(fit.intercept), format_number(fit.r_squared));
                }
            }
            break;
        }
        case Figure::fig3:
        case Figure::fig4:
        case Figure::fig5: {
            const std::size_t nk = cfg.perf_k_values.size();
            const std::size_t ng = cfg.perf_gamma_values.size();
            std::vector<std::optional<PerfPoint>> grid(nk * ng);
            parallel_for(grid.size(), cfg.sweep.jobs, [&](std::size_t i) {
                const GammaParams p{cfg.perf_k_values[i / ng], cfg.perf_gamma_values[i % ng],
                                    cfg.sweep.omega};
                try {
                    grid[i] = perf_point(p, cfg.fisher);
                } catch (const BoundaryError&) {
                }
            });
            if (which == Figure::fig3) {
                out << "gamma,k,asv_err_k,crb_err_k\n";
                for (std::size_t g = 0; g < ng; ++g) {
                    for (std::size_t k = 0; k < nk; ++k) {
                        if (const auto& pt = grid[k * ng + g]) {
                            out << fmt::format("{},{},{},{}\n", format_number(pt->gamma),
                                               format_number(pt->k), format_number(pt->err_k),
                                               format_number(pt->crb_err_k));
                        }
                    }
                }
            } else {
                out << (which == Figure::fig4 ? "k,gamma,asv_err_gamma,crb_err_gamma\n"
                                              : "k,v2_over_v1,err_gamma,err_delta_norm\n");
                for (const auto& pt : grid) {
                    if (!pt) {
                        continue;
                    }
                    const double second =
                        which == Figure::fig4 ? pt->crb_err_gamma : pt->err_delta_norm;
                    out << fmt::format("{},{},{},{}\n", format_number(pt->k),
                                       format_number(pt->gamma), format_number(pt->err_gamma),
                                       format_number(second));
                }
            }
            break;
        }
    }
}

void emit_figure_data(Figure which, const std::string& out_path, const FigureConfig& cfg) {
    std::ofstream out = open_output(out_path);
    emit_figure_data(which, out, cfg);
    out.flush();
    if (!out) {
        throw std::runtime_error(fmt::format("write to '{}' failed", out_path));
    }
}

}  // namespace twdp
