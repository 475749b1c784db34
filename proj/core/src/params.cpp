#include "twdp/params.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include <fmt/format.h>

#include "twdp/error.hpp"
#include "twdp/format.hpp"

namespace twdp {

namespace {

void require_unit_interval(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError(fmt::format("{} must lie in [0, 1], got {}", name, x));
    }
}

std::map<std::string, double, std::less<>> parse_key_values(std::string_view text) {
    std::map<std::string, double, std::less<>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == ',')) {
            ++pos;
        }
        if (pos >= text.size()) {
            break;
        }
        auto end = text.find_first_of(" \t,", pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto token = text.substr(pos, end - pos);
        pos = end;

        const auto eq = token.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw DomainError(fmt::format("expected key=value, got '{}'", token));
        }
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            throw DomainError(fmt::format("malformed number in '{}'", token));
        }
        out.insert_or_assign(std::string(key), v);
    }
    return out;
}

}  // namespace

void GammaParams::validate() const {
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw DomainError(fmt::format("k must be finite and >= 0, got {}", k));
    }
    require_unit_interval(gamma, "gamma");
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError(fmt::format("omega must be finite and > 0, got {}", omega));
    }
}

void DeltaParams::validate() const {
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw DomainError(fmt::format("k must be finite and >= 0, got {}", k));
    }
    require_unit_interval(delta, "delta");
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError(fmt::format("omega must be finite and > 0, got {}", omega));
    }
}

void PhysicalComponents::validate() const {
    if (!(v2 >= 0.0) || !(v1 >= v2) || !std::isfinite(v1)) {
        throw DomainError(fmt::format("need 0 <= v2 <= v1, got v1={} v2={}", v1, v2));
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw DomainError(fmt::format("sigma2 must be > 0, got {}", sigma2));
    }
}

double gamma_to_delta(double gamma) {
    require_unit_interval(gamma, "gamma");
    return 2.0 * gamma / (1.0 + gamma * gamma);
}

double delta_to_gamma(double delta) {
    require_unit_interval(delta, "delta");
    // (1 - sqrt(1 - d^2)) / d rewritten without the cancellation near d = 0.
    return delta / (1.0 + std::sqrt((1.0 - delta) * (1.0 + delta)));
}

DeltaParams to_delta_params(const GammaParams& p) {
    p.validate();
    return {p.k, gamma_to_delta(p.gamma), p.omega};
}

GammaParams to_gamma_params(const DeltaParams& p) {
    p.validate();
    return {p.k, delta_to_gamma(p.delta), p.omega};
}

PhysicalComponents params_to_physical(const GammaParams& p) {
    p.validate();
    PhysicalComponents c;
    c.sigma2 = p.omega / (2.0 * (1.0 + p.k));
    c.v1 = std::sqrt(2.0 * c.sigma2 * p.k / (1.0 + p.gamma * p.gamma));
    c.v2 = p.gamma * c.v1;
    return c;
}

GammaParams physical_to_params(const PhysicalComponents& c) {
    c.validate();
    const double specular = c.v1 * c.v1 + c.v2 * c.v2;
    GammaParams p;
    p.k = specular / (2.0 * c.sigma2);
    p.gamma = c.v1 > 0.0 ? c.v2 / c.v1 : 0.0;
    p.omega = specular + 2.0 * c.sigma2;
    return p;
}

double k_from_k_rice(double k_rice, double gamma) {
    if (!(k_rice >= 0.0)) {
        throw DomainError(fmt::format("k_rice must be >= 0, got {}", k_rice));
    }
    require_unit_interval(gamma, "gamma");
    return k_rice * (1.0 + gamma * gamma);
}

double k_from_k_rice_delta(double k_rice, double delta) {
    if (!(k_rice >= 0.0)) {
        throw DomainError(fmt::format("k_rice must be >= 0, got {}", k_rice));
    }
    require_unit_interval(delta, "delta");
    // (1 - sqrt(1 - d^2)) / d^2 == 1 / (1 + sqrt(1 - d^2)), finite at d = 0.
    return 2.0 * k_rice / (1.0 + std::sqrt((1.0 - delta) * (1.0 + delta)));
}

KRiceDecomposition k_rice_decomposition(const GammaParams& p) {
    p.validate();
    return {p.k / (1.0 + p.gamma * p.gamma)};
}

GammaParams parse_gamma_params(std::string_view text) {
    GammaParams p;
    for (const auto& [key, value] : parse_key_values(text)) {
        if (key == "k") {
            p.k = value;
        } else if (key == "gamma") {
            p.gamma = value;
        } else if (key == "omega") {
            p.omega = value;
        } else if (key == "delta") {
            p.gamma = delta_to_gamma(value);
        } else {
            throw DomainError(fmt::format("unknown parameter key '{}'", key));
        }
    }
    p.validate();
    return p;
}

PhysicalComponents parse_physical_components(std::string_view text) {
    PhysicalComponents c;
    for (const auto& [key, value] : parse_key_values(text)) {
        if (key == "v1") {
            c.v1 = value;
        } else if (key == "v2") {
            c.v2 = value;
        } else if (key == "sigma2") {
            c.sigma2 = value;
        } else {
            throw DomainError(fmt::format("unknown component key '{}'", key));
        }
    }
    c.validate();
    return c;
}

std::string format_params(const GammaParams& p) {
    return fmt::format("k={} gamma={} omega={}", format_number(p.k), format_number(p.gamma),
                       format_number(p.omega));
}

std::string format_physical(const PhysicalComponents& c) {
    return fmt::format("v1={} v2={} sigma2={}", format_number(c.v1), format_number(c.v2),
                       format_number(c.sigma2));
}

}  // namespace twdp
