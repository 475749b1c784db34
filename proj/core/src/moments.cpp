#include "twdp/moments.hpp"

#include <cmath>
#include <cstdint>

#include <fmt/format.h>

#include "twdp/error.hpp"

namespace twdp {

namespace detail {

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    if (n <= 60) {
        std::uint64_t c = 1;
        for (int i = 1; i <= k; ++i) {
            // c * (n - k + i) / i stays integral at every step
            c = c / static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) +
                c % static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) /
                    static_cast<std::uint64_t>(i);
        }
        return static_cast<double>(c);
    }
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

double factorial(int n) {
    if (n < 0) {
        throw DomainError(fmt::format("factorial of negative integer {}", n));
    }
    if (n <= 20) {
        std::uint64_t f = 1;
        for (int i = 2; i <= n; ++i) {
            f *= static_cast<std::uint64_t>(i);
        }
        return static_cast<double>(f);
    }
    return std::exp(std::lgamma(n + 1.0));
}

}  // namespace detail

double MomentSet::at(int order) const {
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] == order) {
            return values[i];
        }
    }
    throw DomainError(fmt::format("moment of order {} not in set", order));
}

double angular_factor(int m, double delta) {
    if (m < 0) {
        throw DomainError(fmt::format("angular_factor needs m >= 0, got {}", m));
    }
    const double half2 = 0.25 * delta * delta;
    double sum = 0.0;
    double power = 1.0;
    for (int i = 0; 2 * i <= m; ++i) {
        sum += detail::binomial(m, 2 * i) * detail::binomial(2 * i, i) * power;
        power *= half2;
    }
    return sum;
}

double even_moment(int n, const GammaParams& p) {
    if (n < 2 || n % 2 != 0) {
        throw DomainError(fmt::format("even_moment needs an even order n >= 2, got {}", n));
    }
    p.validate();
    if (n == 2) {
        return p.omega;
    }
    const int h = n / 2;
    const double delta = gamma_to_delta(p.gamma);
    double series = 0.0;
    double k_power = 1.0;
    for (int m = 0; m <= h; ++m) {
        series += detail::binomial(h, m) * k_power / detail::factorial(m) * angular_factor(m, delta);
        k_power *= p.k;
    }
    return detail::factorial(h) * std::pow(p.omega / (1.0 + p.k), h) * series;
}

MomentSet even_moments(std::span<const int> orders, const GammaParams& p) {
    MomentSet set;
    int previous = 0;
    for (int n : orders) {
        if (n <= previous) {
            throw DomainError("moment orders must be strictly increasing");
        }
        previous = n;
        set.orders.push_back(n);
        set.values.push_back(even_moment(n, p));
    }
    return set;
}

MomentRatios moment_ratios(double k, double gamma) {
    const GammaParams p{k, gamma, 1.0};
    const double mu2 = even_moment(2, p);
    return {even_moment(4, p) / (mu2 * mu2), even_moment(6, p) / (mu2 * mu2 * mu2)};
}

}  // namespace twdp
