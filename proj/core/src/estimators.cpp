#include "twdp/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "twdp/error.hpp"
#include "twdp/format.hpp"

namespace twdp {

namespace {

constexpr double kSingularThreshold = 1e-14;

double cubic_value(const CubicCoefficients& c, double k) {
    return ((k + c.a1) * k + c.a2) * k + c.a3;
}

double cubic_slope(const CubicCoefficients& c, double k) {
    return (3.0 * k + 2.0 * c.a1) * k + c.a2;
}

double largest_real_root(const CubicCoefficients& c) {
    const double disc = c.p * c.p + c.q * c.q * c.q;
    double root = 0.0;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        root = std::cbrt(c.p + s) + std::cbrt(c.p - s) - c.a1 / 3.0;
    } else {
        // disc < 0 forces q < 0
        const double m = std::sqrt(-c.q);
        const double cos_arg = std::clamp(c.p / (m * m * m), -1.0, 1.0);
        root = 2.0 * m * std::cos(std::acos(cos_arg) / 3.0) - c.a1 / 3.0;
    }
    // Newton polish; keep a step only if it shrinks the residual.
    for (int i = 0; i < 3; ++i) {
        const double f = cubic_value(c, root);
        const double df = cubic_slope(c, root);
        if (f == 0.0 || df == 0.0) {
            break;
        }
        const double next = root - f / df;
        if (std::abs(cubic_value(c, next)) >= std::abs(f)) {
            break;
        }
        root = next;
    }
    return root;
}

double s_statistic(const SampleMoments& m, double k_hat) {
    const double r4 = m.mu4_hat / (m.mu2_hat * m.mu2_hat);
    return r4 * (k_hat + 1.0) * (k_hat + 1.0) - k_hat * k_hat - 4.0 * k_hat - 2.0;
}

void require_positive_k(double k_hat) {
    if (!(k_hat > 0.0)) {
        throw DomainError(fmt::format("K-hat must be > 0, got {}", k_hat));
    }
}

}  // namespace

std::string_view to_string(EstimateStatus s) {
    switch (s) {
        case EstimateStatus::ok:
            return "ok";
        case EstimateStatus::k_no_positive_root:
            return "k_no_positive_root";
        case EstimateStatus::denominator_singular:
            return "denominator_singular";
        case EstimateStatus::s_nonpositive_gamma_clamped_zero:
            return "s_nonpositive_gamma_clamped_zero";
        case EstimateStatus::delta_exceeds_unity_gamma_clamped_one:
            return "delta_exceeds_unity_gamma_clamped_one";
    }
    return "unknown";
}

EstimateStatus parse_estimate_status(std::string_view text) {
    for (auto s : {EstimateStatus::ok, EstimateStatus::k_no_positive_root,
                   EstimateStatus::denominator_singular,
                   EstimateStatus::s_nonpositive_gamma_clamped_zero,
                   EstimateStatus::delta_exceeds_unity_gamma_clamped_one}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    throw DomainError(fmt::format("unknown estimate status '{}'", text));
}

std::optional<CubicCoefficients> cubic_coefficients(const SampleMoments& m) {
    const double mu2 = m.mu2_hat;
    const double mu4 = m.mu4_hat;
    const double mu6 = m.mu6_hat;
    const double mu2_cubed = mu2 * mu2 * mu2;
    const double mixed = mu4 * mu2;
    const double denom = 2.0 * mu6 - 6.0 * mixed + 4.0 * mu2_cubed;
    if (!(std::abs(denom) >= kSingularThreshold * mu2_cubed)) {
        return std::nullopt;
    }
    CubicCoefficients c;
    c.a1 = (6.0 * mu6 - 30.0 * mixed + 24.0 * mu2_cubed) / denom;
    c.a2 = (6.0 * mu6 - 42.0 * mixed + 48.0 * mu2_cubed) / denom;
    c.a3 = (2.0 * mu6 - 18.0 * mixed + 24.0 * mu2_cubed) / denom;
    c.p = (9.0 * c.a1 * c.a2 - 27.0 * c.a3 - 2.0 * c.a1 * c.a1 * c.a1) / 54.0;
    c.q = (3.0 * c.a2 - c.a1 * c.a1) / 9.0;
    return c;
}

KEstimate estimate_k(const SampleMoments& m) {
    const auto c = cubic_coefficients(m);
    if (!c) {
        return {0.0, EstimateStatus::denominator_singular};
    }
    const double root = largest_real_root(*c);
    if (!(root > 0.0)) {
        return {0.0, EstimateStatus::k_no_positive_root};
    }
    return {root, EstimateStatus::ok};
}

GammaEstimate estimate_gamma(const SampleMoments& m, double k_hat) {
    require_positive_k(k_hat);
    const double s = s_statistic(m, k_hat);
    if (!(s > 0.0)) {
        return {0.0, EstimateStatus::s_nonpositive_gamma_clamped_zero, 0.0};
    }
    const double two_s = 2.0 * s;
    const double root_two_s = std::sqrt(two_s);
    const double raw_delta = root_two_s / k_hat;
    const double inner = k_hat * k_hat - two_s;
    if (inner < 0.0) {
        return {1.0, EstimateStatus::delta_exceeds_unity_gamma_clamped_one, raw_delta};
    }
    // (K - sqrt(K^2 - 2S)) / sqrt(2S) == sqrt(2S) / (K + sqrt(K^2 - 2S))
    const double gamma = root_two_s / (k_hat + std::sqrt(inner));
    return {std::min(gamma, 1.0), EstimateStatus::ok, raw_delta};
}

DeltaEstimate estimate_delta_conventional(const SampleMoments& m, double k_hat) {
    require_positive_k(k_hat);
    const double s = s_statistic(m, k_hat);
    if (!(s > 0.0)) {
        return {0.0, EstimateStatus::s_nonpositive_gamma_clamped_zero};
    }
    return {std::sqrt(2.0 * s) / k_hat, EstimateStatus::ok};
}

EstimateResult estimate_from_moments(const SampleMoments& m) {
    EstimateResult out;
    const KEstimate k = estimate_k(m);
    if (k.status == EstimateStatus::denominator_singular) {
        out.status = k.status;
        return out;
    }
    out.k_hat = k.k_hat;
    if (k.status != EstimateStatus::ok) {
        out.status = k.status;
        return out;
    }
    const GammaEstimate g = estimate_gamma(m, k.k_hat);
    const DeltaEstimate d = estimate_delta_conventional(m, k.k_hat);
    out.gamma_hat = g.gamma_hat;
    out.delta_hat = d.delta_hat;
    out.raw_delta_hat = g.raw_delta_hat;
    out.status = g.status;
    return out;
}

EstimateResult estimate_joint(const SampleSet& s) {
    if (s.values.size() < 3) {
        throw DomainError(
            fmt::format("estimate_joint needs at least 3 samples, got {}", s.values.size()));
    }
    return estimate_from_moments(sample_moments(s));
}

RawEstimate raw_estimator_map(double mu2, double mu4, double mu6) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    const SampleMoments m{mu2, mu4, mu6, 0};
    const auto c = cubic_coefficients(m);
    if (!c) {
        return {nan, nan, nan};
    }
    const double k = largest_real_root(*c);
    const double two_s = 2.0 * s_statistic(m, k);
    const double root_two_s = std::sqrt(two_s);  // NaN when S < 0
    const double gamma = root_two_s / (k + std::sqrt(k * k - two_s));
    return {k, gamma, root_two_s / k};
}

std::string estimate_csv_header() {
    return "k_hat,gamma_hat,delta_hat,raw_delta_hat,status";
}

std::string estimate_csv_row(const EstimateResult& r) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; };
    return fmt::format("{},{},{},{},{}", opt(r.k_hat), opt(r.gamma_hat), opt(r.delta_hat),
                       format_number(r.raw_delta_hat), to_string(r.status));
}

}  // namespace twdp
