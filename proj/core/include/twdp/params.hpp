#pragma once

#include <string>
#include <string_view>

namespace twdp {

/// Improved TWDP parameterization: K, Gamma = V2/V1, Omega.
struct GammaParams {
    double k{0.0};
    double gamma{0.0};
    double omega{1.0};

    /// Throws DomainError unless k >= 0, 0 <= gamma <= 1, omega > 0.
    void validate() const;
    friend bool operator==(const GammaParams&, const GammaParams&) = default;
};

/// Conventional parameterization with Delta = 2 V1 V2 / (V1^2 + V2^2).
struct DeltaParams {
    double k{0.0};
    double delta{0.0};
    double omega{1.0};

    void validate() const;
    friend bool operator==(const DeltaParams&, const DeltaParams&) = default;
};

/// Magnitudes of the two specular waves and the per-quadrature diffuse
/// variance sigma^2 (total diffuse power is 2 sigma^2).
struct PhysicalComponents {
    double v1{0.0};
    double v2{0.0};
    double sigma2{0.5};

    void validate() const;
};

/// Rician factor of the first specular wave alone, V1^2 / (2 sigma^2).
struct KRiceDecomposition {
    double k_rice{0.0};
};

double gamma_to_delta(double gamma);
double delta_to_gamma(double delta);

DeltaParams to_delta_params(const GammaParams& p);
GammaParams to_gamma_params(const DeltaParams& p);

PhysicalComponents params_to_physical(const GammaParams& p);
GammaParams physical_to_params(const PhysicalComponents& c);

double k_from_k_rice(double k_rice, double gamma);
// Same quantity written against Delta: 2 K_Rice (1 - sqrt(1 - Delta^2)) / Delta^2.
double k_from_k_rice_delta(double k_rice, double delta);
KRiceDecomposition k_rice_decomposition(const GammaParams& p);

// Plain-text form used by the CLI: "k=5 gamma=0.5 omega=1".
// Unknown keys or malformed numbers throw DomainError; missing keys keep
// their defaults.
GammaParams parse_gamma_params(std::string_view text);
PhysicalComponents parse_physical_components(std::string_view text);
std::string format_params(const GammaParams& p);
std::string format_physical(const PhysicalComponents& c);

}  // namespace twdp
