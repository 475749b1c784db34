#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "twdp/sampler.hpp"

namespace twdp {

/// Outcome of a moment-based estimate. Everything except `ok` maps a failure
/// or an out-of-domain value onto a recorded policy.
enum class EstimateStatus {
    ok,
    k_no_positive_root,
    denominator_singular,
    s_nonpositive_gamma_clamped_zero,
    delta_exceeds_unity_gamma_clamped_one,
};

std::string_view to_string(EstimateStatus s);
EstimateStatus parse_estimate_status(std::string_view text);

/// Monic cubic K^3 + a1 K^2 + a2 K + a3 whose largest real root is K-hat,
/// with the Cardano quantities p and q.
struct CubicCoefficients {
    double a1{0.0};
    double a2{0.0};
    double a3{0.0};
    double p{0.0};
    double q{0.0};
};

struct KEstimate {
    double k_hat{0.0};
    EstimateStatus status{EstimateStatus::ok};
};

struct GammaEstimate {
    double gamma_hat{0.0};
    EstimateStatus status{EstimateStatus::ok};
    double raw_delta_hat{0.0};
};

struct DeltaEstimate {
    double delta_hat{0.0};
    EstimateStatus status{EstimateStatus::ok};
};

struct EstimateResult {
    std::optional<double> k_hat;
    std::optional<double> gamma_hat;
    std::optional<double> delta_hat;
    EstimateStatus status{EstimateStatus::ok};
    double raw_delta_hat{0.0};  ///< sqrt(2S)/K-hat before any clamping; 0 when S <= 0
};

/// Returns nullopt when |D| < 1e-14 mu2^3 (denominator_singular).
std::optional<CubicCoefficients> cubic_coefficients(const SampleMoments& m);

/// Largest real root of the moment cubic. Cardano's real form is used when
/// p^2 + q^3 >= 0, the trigonometric form otherwise; in the three-real-root
/// case the largest root is the one the principal branch of the cube roots
/// produces. A non-positive largest root is reported as k_hat = 0 with
/// status k_no_positive_root.
KEstimate estimate_k(const SampleMoments& m);

/// Gamma-hat from the fourth-order ratio given K-hat > 0.
///   S = (mu4/mu2^2)(K+1)^2 - K^2 - 4K - 2,
///   Gamma = (K - sqrt(K^2 - 2S)) / sqrt(2S)  (evaluated without cancellation).
/// S <= 0 clamps to 0; 2S > K^2 (raw Delta-hat > 1) clamps to 1.
GammaEstimate estimate_gamma(const SampleMoments& m, double k_hat);

/// Conventional Delta-hat = sqrt(2S)/K-hat, left unclamped above 1.
DeltaEstimate estimate_delta_conventional(const SampleMoments& m, double k_hat);

/// Full pipeline on a sample set. Throws only if fewer than 3 samples.
EstimateResult estimate_joint(const SampleSet& s);
EstimateResult estimate_from_moments(const SampleMoments& m);

/// Unclamped estimator map g(mu2, mu4, mu6) -> (K, Gamma, Delta) used by the
/// delta method. Non-finite components mean the map is undefined there.
struct RawEstimate {
    double k{0.0};
    double gamma{0.0};
    double delta{0.0};
};
RawEstimate raw_estimator_map(double mu2, double mu4, double mu6);

std::string estimate_csv_header();
std::string estimate_csv_row(const EstimateResult& r);

}  // namespace twdp
