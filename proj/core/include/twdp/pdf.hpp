#pragma once

#include "twdp/params.hpp"

namespace twdp {

/// Tolerances for the two nested adaptive Gauss-Kronrod integrals behind the
/// envelope density. Both are relative to the L1 norm of the integrand.
struct PdfQuadrature {
    double angular_tolerance{1e-12};
    double radial_tolerance{1e-11};
    unsigned max_depth{15};
};

/// Exponentially scaled modified Bessel function exp(-x) I0(x), x >= 0.
double bessel_i0e(double x);

/// Upper end of the radial integration range: V1 + V2 plus ten standard
/// deviations of the complex diffuse amplitude. Mass beyond it is < 1e-40.
double envelope_support_max(const PhysicalComponents& c);
double envelope_support_max(const GammaParams& p);

/// TWDP envelope density, written as the Rician density conditioned on the
/// specular phase difference alpha and averaged over alpha ~ U[0, pi]:
///
///   f(r) = 1/pi \int_0^pi (r/s2) exp(-(r^2 + W^2)/(2 s2)) I0(r W / s2) dalpha,
///   W(alpha)^2 = V1^2 + V2^2 + 2 V1 V2 cos(alpha).
///
/// Throws DomainError for r < 0.
double envelope_pdf(double r, const GammaParams& p, const PdfQuadrature& q = {});
double envelope_pdf(double r, const PhysicalComponents& c, const PdfQuadrature& q = {});

/// Single-wave Rician density with specular magnitude v and diffuse variance s2.
double rician_pdf(double r, double v, double sigma2);

/// \int_0^rmax r^n f(r) dr by adaptive quadrature; any n >= 0 (odd allowed).
double envelope_pdf_moment(int n, const GammaParams& p, const PdfQuadrature& q = {});

}  // namespace twdp
