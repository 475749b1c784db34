#pragma once

#include <span>
#include <vector>

#include "twdp/params.hpp"

namespace twdp {

/// Exact even envelope moments mu_n = E[r^n].
struct MomentSet {
    std::vector<int> orders;
    std::vector<double> values;

    /// Value for one order; throws DomainError if the order is absent.
    double at(int order) const;
};

struct MomentRatios {
    double r4{0.0};  ///< mu4 / mu2^2
    double r6{0.0};  ///< mu6 / mu2^3
};

/// Mean of (1 + delta cos theta)^m over one period of theta:
///   sum_i C(m, 2i) C(2i, i) (delta/2)^(2i).
double angular_factor(int m, double delta);

/// n-th moment of the envelope for even n >= 2. The second moment is
/// returned as omega exactly.
double even_moment(int n, const GammaParams& p);

/// Moments for every requested order (each even, strictly increasing).
MomentSet even_moments(std::span<const int> orders, const GammaParams& p);

/// Omega-free ratios derived from even_moment. The fourth-order ratio equals
///   ((2 + D^2) K^2 + 8K + 4) / (2 (1+K)^2)
/// and the sixth-order ratio equals
///   ((2 + 3D^2) K^3 + (18 + 9D^2) K^2 + 36K + 12) / (2 (1+K)^3)
/// with D = 2 gamma / (1 + gamma^2). Note that the commonly printed sixth-order
/// form with (6 + 9D^2) K^3 and (42 + 9D^2) K^2 does not follow from the moment
/// series (it departs at second order in K and misses the equal-wave limit); the
/// cubic used by the estimators is consistent with the form above.
MomentRatios moment_ratios(double k, double gamma);

namespace detail {
// C(n, k) as a double; exact integer arithmetic for n <= 60.
double binomial(int n, int k);
// n! as a double; exact for n <= 20, log-gamma beyond.
double factorial(int n);
}  // namespace detail

}  // namespace twdp
