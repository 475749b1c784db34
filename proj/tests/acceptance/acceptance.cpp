// Acceptance runner. Usage: twdp_acceptance [AC1 ... AC10]
// Prints one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "cli.hpp"
#include "twdp/estimators.hpp"
#include "twdp/harness.hpp"
#include "twdp/moments.hpp"
#include "twdp/pdf.hpp"
#include "twdp/perf.hpp"

using namespace twdp;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

SampleMoments exact(const GammaParams& p) {
    return {even_moment(2, p), even_moment(4, p), even_moment(6, p), 0};
}

const std::vector<double> kRoundTripK{0.5, 1, 2, 3, 5, 8, 10};

std::vector<double> round_trip_gamma() {
    std::vector<double> g;
    for (int i = 1; i <= 20; ++i) {
        g.push_back(i * 0.05);
    }
    return g;
}

Outcome ac1() {
    double worst = 0.0;
    for (double k : kRoundTripK) {
        for (double g : round_trip_gamma()) {
            const EstimateResult r = estimate_from_moments(exact({k, g, 1.0}));
            if (!r.k_hat || !r.gamma_hat) {
                return {false, fmt::format("no estimate at K={} Gamma={}", k, g)};
            }
            worst = std::max({worst, std::abs(*r.k_hat - k) / k, std::abs(*r.gamma_hat - g) / g});
        }
    }
    return {worst <= 1e-6, fmt::format("7x20 grid, max relative error {:.3e} (limit 1e-6)", worst)};
}

Outcome ac2() {
    double worst_moment = 0.0;
    double worst_mass = 0.0;
    int points = 0;
    for (double k : {0.5, 2.0, 5.0, 10.0}) {
        for (double g : {0.1, 0.5, 0.9}) {
            const GammaParams p{k, g, 1.0};
            ++points;
            worst_mass = std::max(worst_mass, std::abs(envelope_pdf_moment(0, p) - 1.0));
            for (int n : {2, 4, 6}) {
                const double exact_n = even_moment(n, p);
                worst_moment = std::max(worst_moment, std::abs(envelope_pdf_moment(n, p) - exact_n) / exact_n);
            }
        }
    }
    return {worst_moment <= 1e-7 && worst_mass <= 1e-8,
            fmt::format("{} points, max moment error {:.3e} (limit 1e-7), max |mass-1| {:.3e} (limit 1e-8)",
                        points, worst_moment, worst_mass)};
}

Outcome ac3() {
    double worst = 0.0;
    for (double k : kRoundTripK) {
        for (double g : round_trip_gamma()) {
            const auto c = cubic_coefficients(exact({k, g, 1.0}));
            if (!c) {
                return {false, "singular denominator on exact moments"};
            }
            worst = std::max(worst, std::abs(((k + c->a1) * k + c->a2) * k + c->a3));
        }
    }
    return {worst <= 1e-9, fmt::format("max cubic residual at true K {:.3e} (limit 1e-9)", worst)};
}

Outcome ac4() {
    const double n = 1e4;
    const double reps = 500;
    SweepConfig cfg;
    cfg.k_values = {5.0};
    cfg.gamma_values = {0.5};
    cfg.n_samples = 10'000;
    cfg.n_realizations = 500;
    cfg.seed = 4;
    cfg.jobs = workers();
    const SweepRow row = run_sweep(cfg).rows.front();
    const AsymptoticVariance a = asv({5.0, 0.5, 1.0});
    const double band_k = 3 * std::sqrt(a.asv_k / (n * reps));
    const double band_g = 3 * std::sqrt(a.asv_gamma / (n * reps));
    const bool mean_ok = std::abs(row.k_hat_mean - 5.0) <= band_k &&
                         std::abs(row.gamma_hat_mean - 0.5) <= band_g;

    cfg.gamma_values = {0.99};
    cfg.seed = 44;
    const SweepRow high = run_sweep(cfg).rows.front();
    const bool bounded = high.gamma_hat_max <= 1.0;
    return {mean_ok && bounded,
            fmt::format("(5,0.5): |K mean-5|={:.4f} (band {:.4f}), |Gamma mean-0.5|={:.5f} (band {:.5f}); "
                        "(5,0.99): max Gamma-hat {} over 500",
                        std::abs(row.k_hat_mean - 5.0), band_k, std::abs(row.gamma_hat_mean - 0.5), band_g,
                        high.gamma_hat_max)};
}

Outcome ac5() {
    bool ok = true;
    std::string worst;
    double worst_val = 0.0;
    for (double k : {3.0, 5.0, 10.0}) {
        for (double g : {0.3, 0.5, 0.7, 0.9}) {
            const double e = std::sqrt(asv({k, g, 1.0}).asv_gamma) / g / 1e2;
            if (e >= 0.20) {
                ok = false;
            }
            if (e > worst_val) {
                worst_val = e;
                worst = fmt::format("({},{})", k, g);
            }
        }
    }
    const double e16 = std::sqrt(asv({3.0, 0.16, 1.0}).asv_gamma) / 0.16 / 1e3;
    const double e99 = std::sqrt(asv({3.0, 0.99, 1.0}).asv_gamma) / 0.99 / 1e3;
    ok = ok && e16 < 0.20 && e99 < 0.20;
    return {ok, fmt::format("N=1e4 worst relative error {:.4f} at {}; N=1e6 at (3,0.16) {:.4f}, (3,0.99) {:.4f} "
                            "(limit 0.20)",
                            worst_val, worst, e16, e99)};
}

Outcome ac6() {
    const std::vector<double> ks{1, 2, 3, 5, 10};
    std::vector<double> gs;
    for (int i = 1; i <= 9; ++i) {
        gs.push_back(i * 0.1);
    }
    std::vector<PerfPoint> pts(ks.size() * gs.size());
    parallel_for(pts.size(), workers(), [&](std::size_t i) {
        pts[i] = perf_point({ks[i / gs.size()], gs[i % gs.size()], 1.0});
    });
    double worst_k = 0.0;
    double worst_g = 0.0;
    std::string at_k;
    std::string at_g;
    int fails = 0;
    for (const auto& p : pts) {
        const double rk = std::sqrt(p.asv_k / p.crb_k);
        if (rk > 1.25) {
            ++fails;
        }
        if (rk > worst_k) {
            worst_k = rk;
            at_k = fmt::format("({},{})", p.k, p.gamma);
        }
        if (p.k >= 2) {
            const double rg = std::sqrt(p.asv_gamma / p.crb_gamma);
            if (rg > 1.25) {
                ++fails;
            }
            if (rg > worst_g) {
                worst_g = rg;
                at_g = fmt::format("({},{})", p.k, p.gamma);
            }
        }
    }
    return {fails == 0, fmt::format("max sqrt(AsV/CRB): K {:.3f} at {}, Gamma {:.3f} at {}; {} of {} checks above 1.25",
                                    worst_k, at_k, worst_g, at_g, fails,
                                    pts.size() + pts.size() * 4 / 5)};
}

Outcome ac7() {
    int fails = 0;
    std::ostringstream detail;
    for (int i = 2; i <= 15; ++i) {
        const double ratio = i * 0.05;
        const PerfPoint p = perf_point({5.0, ratio, 1.0});
        const double q = p.err_delta_norm / p.err_gamma;
        bool ok = true;
        if (ratio <= 0.5 + 1e-12) {
            ok = p.err_gamma < p.err_delta_norm / 1.8;
        } else {
            ok = std::abs(p.err_gamma - p.err_delta_norm) <= 0.25 * std::max(p.err_gamma, p.err_delta_norm);
        }
        if (!ok) {
            ++fails;
        }
        detail << fmt::format("{}{:.2f}:{:.2f}{}", i == 2 ? "" : " ", ratio, q, ok ? "" : "*");
    }
    return {fails == 0, fmt::format("err_delta_norm/err_gamma by V2/V1 ({} failing, * marks): {}", fails, detail.str())};
}

Outcome ac8() {
    SweepConfig cfg;
    cfg.k_values = {5.0};
    cfg.gamma_values = {delta_to_gamma(0.99)};
    cfg.n_samples = 10'000;
    cfg.n_realizations = 500;
    cfg.seed = 8;
    cfg.jobs = workers();
    const SweepResult r = run_sweep(cfg);
    std::size_t above = 0;
    for (const auto& rec : r.raw) {
        if (rec.estimate.status != EstimateStatus::denominator_singular && rec.estimate.raw_delta_hat > 1.0) {
            ++above;
        }
    }
    const std::size_t clamped = r.rows.front().failures.delta_exceeds_unity;
    return {above > 0 && clamped == above,
            fmt::format("raw Delta-hat > 1 in {} of 500; Gamma-hat clamp counter {}", above, clamped)};
}

Outcome ac9() {
    const std::size_t n = 100'000;
    const std::size_t reps = 500;
    bool ok = true;
    std::ostringstream detail;
    const GammaParams points[] = {{3.0, 0.5, 1.0}, {5.0, 0.5, 1.0}, {10.0, 0.3, 1.0}};
    std::uint64_t seed = 9;
    for (const auto& p : points) {
        SweepConfig cfg;
        cfg.k_values = {p.k};
        cfg.gamma_values = {p.gamma};
        cfg.n_samples = n;
        cfg.n_realizations = reps;
        cfg.seed = seed++;
        cfg.jobs = workers();
        const SweepResult r = run_sweep(cfg);
        std::vector<double> d;
        for (const auto& rec : r.raw) {
            if (rec.estimate.delta_hat) {
                d.push_back(*rec.estimate.delta_hat);
            }
        }
        double mean = 0.0;
        for (double v : d) {
            mean += v;
        }
        mean /= d.size();
        double sq = 0.0;
        for (double v : d) {
            sq += (v - mean) * (v - mean);
        }
        const double var_d = sq / (d.size() - 1);
        const AsymptoticVariance a = asv(p);
        const SweepRow& row = r.rows.front();
        const double qk = n * row.k_hat_std * row.k_hat_std / a.asv_k;
        const double qg = n * row.gamma_hat_std * row.gamma_hat_std / a.asv_gamma;
        const double qd = n * var_d / a.asv_delta;
        for (double q : {qk, qg, qd}) {
            if (std::abs(q - 1.0) > 0.20) {
                ok = false;
            }
        }
        detail << fmt::format("{}({},{}): K {:.3f} Gamma {:.3f} Delta {:.3f}", seed == 10 ? "" : "; ", p.k,
                              p.gamma, qk, qg, qd);
    }
    return {ok, "N Var / AsV " + detail.str() + " (limit |ratio-1| <= 0.20)"};
}

Outcome ac10() {
    auto invoke = [] {
        const char* argv[] = {"twdp", "sweep", "--k", "5", "--gamma", "0.5", "--n", "10000", "--reps", "500",
                              "--seed", "7"};
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::cli_main(12, argv, out, err);
        return std::make_pair(code, out.str());
    };
    const auto a = invoke();
    const auto b = invoke();
    return {a.first == 0 && b.first == 0 && a.second == b.second && !a.second.empty(),
            fmt::format("two seeded sweep runs: {} bytes, {}", a.second.size(),
                        a.second == b.second ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<std::string, std::function<Outcome()>> all{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10},
    };
    std::vector<std::string> ids;
    for (int i = 1; i < argc; ++i) {
        ids.emplace_back(argv[i]);
    }
    if (ids.empty()) {
        for (int i = 1; i <= 10; ++i) {
            ids.push_back(fmt::format("AC{}", i));
        }
    }
    bool all_pass = true;
    for (const auto& id : ids) {
        const auto it = all.find(id);
        if (it == all.end()) {
            std::cout << id << " FAIL unknown criterion\n";
            all_pass = false;
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it->second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << fmt::format("{} {} {} [{:.1f} s]\n", id, o.pass ? "PASS" : "FAIL", o.detail, secs)
                  << std::flush;
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
