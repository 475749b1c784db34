#include "cli.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "twdp/error.hpp"
#include "twdp/estimators.hpp"
#include "twdp/format.hpp"
#include "twdp/harness.hpp"
#include "twdp/moments.hpp"
#include "twdp/params.hpp"
#include "twdp/perf.hpp"
#include "twdp/sampler.hpp"

namespace twdp::cli {

namespace {

struct GlobalOptions {
    std::uint64_t seed{0};
    double omega{1.0};
    std::string out_path;
    std::string format{"csv"};
    unsigned jobs{1};
};

// Routes output to --out when given, otherwise to the caller's stream.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
            }
            stream_ = &file_;
        }
    }
    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

std::vector<GammaParams> grid(const std::vector<double>& ks, const std::vector<double>& gammas,
                              double omega) {
    std::vector<GammaParams> points;
    for (double g : gammas) {
        for (double k : ks) {
            points.push_back(GammaParams{k, g, omega});
        }
    }
    return points;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"TWDP fading toolkit: moments, sampling, moment-based estimation, AsV/CRB "
                 "analysis and Monte-Carlo sweeps"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--seed", global.seed, "Base RNG seed")->envname("TWDP_SEED");
    app.add_option("--omega", global.omega, "Average received power Omega")->capture_default_str();
    app.add_option("--out", global.out_path, "Write output to this file instead of stdout");
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"csv"}))
        ->capture_default_str();
    app.add_option("--jobs", global.jobs, "Worker threads for sweeps and grids")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::function<void()> action;

    // convert
    auto* convert = app.add_subcommand("convert", "Convert between parameter tuples");
    std::optional<double> conv_gamma;
    std::optional<double> conv_delta;
    std::optional<double> conv_k_rice;
    std::string conv_params;
    std::string conv_physical;
    convert->add_option("--gamma", conv_gamma, "Gamma = V2/V1");
    convert->add_option("--delta", conv_delta, "Delta = 2 V1 V2 / (V1^2 + V2^2)");
    convert->add_option("--k-rice", conv_k_rice, "Rician factor of the first wave (needs --gamma or --delta)");
    convert->add_option("--params", conv_params, "\"k=.. gamma=.. omega=..\" -> physical components");
    convert->add_option("--physical", conv_physical, "\"v1=.. v2=.. sigma2=..\" -> parameters");
    convert->callback([&] {
        action = [&] {
            Output o(global.out_path, out);
            auto& os = o.stream();
            if (!conv_params.empty()) {
                const GammaParams p = parse_gamma_params(conv_params);
                os << format_physical(params_to_physical(p))
                   << " delta=" << format_number(gamma_to_delta(p.gamma)) << '\n';
            } else if (!conv_physical.empty()) {
                os << format_params(physical_to_params(parse_physical_components(conv_physical)))
                   << '\n';
            } else if (conv_k_rice) {
                if (conv_gamma) {
                    os << "k=" << format_number(k_from_k_rice(*conv_k_rice, *conv_gamma)) << '\n';
                } else if (conv_delta) {
                    os << "k=" << format_number(k_from_k_rice_delta(*conv_k_rice, *conv_delta))
                       << '\n';
                } else {
                    throw CLI::ValidationError("--k-rice", "needs --gamma or --delta");
                }
            } else if (conv_gamma) {
                os << "delta=" << format_number(gamma_to_delta(*conv_gamma)) << '\n';
            } else if (conv_delta) {
                os << "gamma=" << format_number(delta_to_gamma(*conv_delta)) << '\n';
            } else {
                throw CLI::ValidationError("convert", "nothing to convert");
            }
        };
    });

    // moments
    auto* moments = app.add_subcommand("moments", "Exact even moments and ratios at one point");
    double mom_k = 0.0;
    double mom_gamma = 0.0;
    int mom_max_order = 6;
    moments->add_option("--k", mom_k, "K")->required();
    moments->add_option("--gamma", mom_gamma, "Gamma")->required();
    moments->add_option("--max-order", mom_max_order, "Highest even order")
        ->check(CLI::Range(2, 40))
        ->capture_default_str();
    moments->callback([&] {
        action = [&] {
            const GammaParams p{mom_k, mom_gamma, global.omega};
            p.validate();
            Output o(global.out_path, out);
            auto& os = o.stream();
            os << "quantity,value\n";
            for (int n = 2; n <= mom_max_order; n += 2) {
                os << "mu" << n << ',' << format_number(even_moment(n, p)) << '\n';
            }
            const MomentRatios r = moment_ratios(p.k, p.gamma);
            os << "r4," << format_number(r.r4) << '\n';
            os << "r6," << format_number(r.r6) << '\n';
        };
    });

    // sample
    auto* sample = app.add_subcommand("sample", "Generate envelope samples as CSV");
    double smp_k = 0.0;
    double smp_gamma = 0.0;
    std::size_t smp_n = 10'000;
    sample->add_option("--k", smp_k, "K")->required();
    sample->add_option("--gamma", smp_gamma, "Gamma")->required();
    sample->add_option("--n", smp_n, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
    sample->callback([&] {
        action = [&] {
            const SampleSet s = generate(GammaParams{smp_k, smp_gamma, global.omega}, smp_n, global.seed);
            Output o(global.out_path, out);
            write_samples_csv(o.stream(), s);
        };
    });

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Estimate (K, Gamma, Delta) from a samples CSV");
    std::string est_in;
    estimate->add_option("--in", est_in, "Samples CSV")->required();
    estimate->callback([&] {
        action = [&] {
            const SampleSet s = read_samples_csv(est_in);
            const EstimateResult r = estimate_joint(s);
            Output o(global.out_path, out);
            o.stream() << estimate_csv_header() << '\n' << estimate_csv_row(r) << '\n';
        };
    });

    // asv / crb / perf share a grid
    std::vector<double> grid_k;
    std::vector<double> grid_gamma;
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--k", grid_k, "K values (comma separated)")->required()->delimiter(',');
        sub->add_option("--gamma", grid_gamma, "Gamma values (comma separated)")->required()->delimiter(',');
    };

    auto* asv_cmd = app.add_subcommand("asv", "Delta-method asymptotic variances");
    add_grid(asv_cmd);
    asv_cmd->callback([&] {
        action = [&] {
            const auto points = grid(grid_k, grid_gamma, global.omega);
            std::vector<AsymptoticVariance> values(points.size());
            parallel_for(points.size(), global.jobs, [&](std::size_t i) { values[i] = asv(points[i]); });
            Output o(global.out_path, out);
            auto& os = o.stream();
            os << "k,gamma,asv_k,asv_gamma,asv_delta\n";
            for (std::size_t i = 0; i < points.size(); ++i) {
                os << fmt::format("{},{},{},{},{}\n", format_number(points[i].k),
                                  format_number(points[i].gamma), format_number(values[i].asv_k),
                                  format_number(values[i].asv_gamma),
                                  format_number(values[i].asv_delta));
            }
        };
    });

    auto* crb_cmd = app.add_subcommand("crb", "Cramer-Rao bounds from the numerical Fisher matrix");
    add_grid(crb_cmd);
    bool known_omega = false;
    crb_cmd->add_flag("--known-omega", known_omega, "Treat Omega as known (2x2 Fisher block)");
    crb_cmd->callback([&] {
        action = [&] {
            const auto points = grid(grid_k, grid_gamma, global.omega);
            FisherOptions opt;
            opt.omega = known_omega ? OmegaTreatment::known : OmegaTreatment::unknown;
            std::vector<CramerRaoBound> values(points.size());
            parallel_for(points.size(), global.jobs,
                         [&](std::size_t i) { values[i] = crb(points[i], opt); });
            Output o(global.out_path, out);
            auto& os = o.stream();
            os << "k,gamma,crb_k,crb_gamma\n";
            for (std::size_t i = 0; i < points.size(); ++i) {
                os << fmt::format("{},{},{},{}\n", format_number(points[i].k),
                                  format_number(points[i].gamma), format_number(values[i].crb_k),
                                  format_number(values[i].crb_gamma));
            }
        };
    });

    auto* perf_cmd = app.add_subcommand("perf", "AsV, CRB and normalized errors over a grid");
    add_grid(perf_cmd);
    perf_cmd->callback([&] {
        action = [&] {
            const auto points = grid(grid_k, grid_gamma, global.omega);
            std::vector<PerfPoint> values(points.size());
            parallel_for(points.size(), global.jobs,
                         [&](std::size_t i) { values[i] = perf_point(points[i]); });
            Output o(global.out_path, out);
            auto& os = o.stream();
            os << perf_csv_header() << '\n';
            for (const auto& v : values) {
                os << perf_csv_row(v) << '\n';
            }
        };
    });

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep of the estimators");
    SweepConfig sweep_cfg;
    std::string estimators_name = "both";
    std::string dump_raw;
    sweep->add_option("--k", sweep_cfg.k_values, "K values (comma separated)")->required()->delimiter(',');
    sweep->add_option("--gamma", sweep_cfg.gamma_values, "Gamma values (comma separated)")->required()->delimiter(',');
    sweep->add_option("--n", sweep_cfg.n_samples, "Samples per realization")->capture_default_str();
    sweep->add_option("--reps", sweep_cfg.n_realizations, "Realizations per grid point")->capture_default_str();
    sweep->add_option("--estimators", estimators_name, "gamma | delta | both")
        ->check(CLI::IsMember({"gamma", "delta", "both"}))
        ->capture_default_str();
    sweep->add_option("--dump-raw", dump_raw, "Also write per-realization estimates to this CSV");
    sweep->callback([&] {
        action = [&] {
            sweep_cfg.omega = global.omega;
            sweep_cfg.seed = global.seed;
            sweep_cfg.jobs = global.jobs;
            sweep_cfg.estimator_set = estimators_name == "gamma"   ? EstimatorSet::gamma_based
                                      : estimators_name == "delta" ? EstimatorSet::delta_based
                                                                   : EstimatorSet::both;
            const SweepResult result = run_sweep(sweep_cfg);
            if (!dump_raw.empty()) {
                Output raw(dump_raw, out);
                write_raw_csv(raw.stream(), result.raw);
            }
            Output o(global.out_path, out);
            write_sweep_csv(o.stream(), result.rows);
        };
    });

    // figure
    auto* figure = app.add_subcommand("figure", "Emit the CSV behind one figure");
    std::string fig_name;
    std::vector<double> fig_k;
    std::vector<double> fig_gamma;
    std::optional<std::size_t> fig_n;
    std::optional<std::size_t> fig_reps;
    figure->add_option("--which", fig_name, "fig1 | fig2 | fig3 | fig4 | fig5")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5"}));
    figure->add_option("--k", fig_k, "Override the K grid")->delimiter(',');
    figure->add_option("--gamma", fig_gamma, "Override the Gamma grid")->delimiter(',');
    figure->add_option("--n", fig_n, "Samples per realization (fig1/fig2)");
    figure->add_option("--reps", fig_reps, "Realizations per point (fig1/fig2)");
    figure->callback([&] {
        action = [&] {
            FigureConfig cfg = FigureConfig::defaults();
            const Figure which = parse_figure(fig_name);
            const bool monte_carlo = which == Figure::fig1 || which == Figure::fig2;
            if (!fig_k.empty()) {
                (monte_carlo ? cfg.sweep.k_values : cfg.perf_k_values) = fig_k;
            }
            if (!fig_gamma.empty()) {
                (monte_carlo ? cfg.sweep.gamma_values : cfg.perf_gamma_values) = fig_gamma;
            }
            if (fig_n) {
                cfg.sweep.n_samples = *fig_n;
            }
            if (fig_reps) {
                cfg.sweep.n_realizations = *fig_reps;
            }
            cfg.sweep.omega = global.omega;
            cfg.sweep.seed = global.seed;
            cfg.sweep.jobs = global.jobs;
            Output o(global.out_path, out);
            emit_figure_data(which, o.stream(), cfg);
        };
    });

    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (action) {
            action();
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace twdp::cli
