#include "twdp/pdf.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <fmt/format.h>

#include "twdp/error.hpp"

namespace twdp {

namespace {

using boost::math::quadrature::gauss_kronrod;

// Above this the asymptotic series is accurate to well below 1e-15.
constexpr double kBesselAsymptoticThreshold = 500.0;

double conditional_rician(double r, double w, double sigma2) {
    return r / sigma2 * std::exp(-(r - w) * (r - w) / (2.0 * sigma2)) * bessel_i0e(r * w / sigma2);
}

}  // namespace

double bessel_i0e(double x) {
    if (x < 0.0) {
        x = -x;
    }
    if (x < kBesselAsymptoticThreshold) {
        return boost::math::cyl_bessel_i(0, x) * std::exp(-x);
    }
    // I0(x) e^{-x} ~ (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 8; ++k) {
        term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (k * 8.0 * x);
        sum += term;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double rician_pdf(double r, double v, double sigma2) {
    if (r < 0.0) {
        throw DomainError(fmt::format("rician_pdf needs r >= 0, got {}", r));
    }
    return conditional_rician(r, v, sigma2);
}

double envelope_support_max(const PhysicalComponents& c) {
    return c.v1 + c.v2 + 10.0 * std::sqrt(2.0 * c.sigma2);
}

double envelope_support_max(const GammaParams& p) {
    return envelope_support_max(params_to_physical(p));
}

double envelope_pdf(double r, const PhysicalComponents& c, const PdfQuadrature& q) {
    if (!(r >= 0.0)) {
        throw DomainError(fmt::format("envelope_pdf needs r >= 0, got {}", r));
    }
    if (r == 0.0) {
        return 0.0;
    }
    const double base = c.v1 * c.v1 + c.v2 * c.v2;
    const double cross = 2.0 * c.v1 * c.v2;
    if (cross == 0.0) {
        return conditional_rician(r, std::sqrt(base), c.sigma2);
    }
    auto integrand = [&](double alpha) {
        const double w = std::sqrt(std::max(0.0, base + cross * std::cos(alpha)));
        return conditional_rician(r, w, c.sigma2);
    };
    const double integral = gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, std::numbers::pi, q.max_depth, q.angular_tolerance);
    return integral / std::numbers::pi;
}

double envelope_pdf(double r, const GammaParams& p, const PdfQuadrature& q) {
    return envelope_pdf(r, params_to_physical(p), q);
}

double envelope_pdf_moment(int n, const GammaParams& p, const PdfQuadrature& q) {
    if (n < 0) {
        throw DomainError(fmt::format("moment order must be >= 0, got {}", n));
    }
    const PhysicalComponents c = params_to_physical(p);
    const double rmax = envelope_support_max(c);
    auto integrand = [&](double r) { return std::pow(r, n) * envelope_pdf(r, c, q); };
    double error = 0.0;
    double l1 = 0.0;
    const double value = gauss_kronrod<double, 61>::integrate(integrand, 0.0, rmax, q.max_depth,
                                                             q.radial_tolerance, &error, &l1);
    if (error > 100.0 * q.radial_tolerance * l1) {
        throw NumericalError(fmt::format(
            "radial quadrature for moment {} did not converge: error {} vs L1 {}", n, error, l1));
    }
    return value;
}

}  // namespace twdp
