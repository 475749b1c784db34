#pragma once

#include <string>

#include <Eigen/Core>

#include "twdp/params.hpp"
#include "twdp/pdf.hpp"

namespace twdp {

/// Per-sample covariance of (r^2, r^4, r^6):
/// entry (i, j) = mu_{2i+2j} - mu_{2i} mu_{2j}, i, j in {1, 2, 3}.
struct MomentCovariance {
    Eigen::Matrix3d matrix;
};

/// Per-sample Fisher information of the envelope density. Parameter order is
/// (K, Gamma, Omega).
struct FisherMatrix {
    Eigen::Matrix3d matrix;
    double max_quadrature_error{0.0};
};

enum class EstimatorKind { k, gamma, delta };

/// Asymptotic variance coefficients: Var(estimate from N samples) ~ value / N.
struct AsymptoticVariance {
    double asv_k{0.0};
    double asv_gamma{0.0};
    double asv_delta{0.0};
};

enum class OmegaTreatment {
    unknown,  ///< joint 3x3 information over (K, Gamma, Omega)
    known,    ///< 2x2 block over (K, Gamma) only
};

struct CramerRaoBound {
    double crb_k{0.0};
    double crb_gamma{0.0};
};

struct FisherOptions {
    PdfQuadrature pdf{};
    double radial_tolerance{1e-8};    ///< relative to the L1 norm of each entry's integrand
    double relative_step{1e-4};      ///< central-difference step per parameter
    OmegaTreatment omega{OmegaTreatment::unknown};
};

struct GradientOptions {
    double relative_step{1e-5};
    double check_step_ratio{0.1};     ///< second, independent step = step * ratio
    double agreement{1e-4};
    double min_relative_step{1e-9};
};

struct PerfPoint {
    double k{0.0};
    double gamma{0.0};
    double asv_k{0.0};
    double asv_gamma{0.0};
    double asv_delta{0.0};
    double crb_k{0.0};
    double crb_gamma{0.0};
    double err_k{0.0};           ///< sqrt(asv_k) / K
    double err_gamma{0.0};       ///< sqrt(asv_gamma) / Gamma
    double err_delta_norm{0.0};  ///< sqrt(asv_delta) / Gamma, normalized to V2/V1
    double crb_err_k{0.0};
    double crb_err_gamma{0.0};
    bool boundary_flag{false};
};

MomentCovariance moment_covariance(const GammaParams& p);

/// True when K < 0.05, Gamma < 0.02 or Gamma > 0.98; results there are
/// computed but tolerances are not guaranteed.
bool near_boundary(const GammaParams& p);

/// Gradient of the unclamped estimator map with respect to (mu2, mu4, mu6) at
/// the exact moments of p. Central differences with per-coordinate step
/// h * mu_n, one Richardson extrapolation (h, h/2). The result is checked
/// against an independent step h * check_step_ratio; if the two disagree by
/// more than `agreement` (relative, max-norm) the step is reduced by that ratio
/// and the check repeated. The smaller-step estimate of the accepted pair is
/// returned. Throws BoundaryError at K = 0 or, for gamma/delta,
/// Gamma in {0, 1}; NumericalError if no step passes the check.
Eigen::Vector3d estimator_gradient(EstimatorKind which, const GammaParams& p,
                                   const GradientOptions& opt = {});

/// Delta-method AsV = grad' Sigma grad for K-hat, Gamma-hat and the raw
/// (unclamped) Delta-hat.
AsymptoticVariance asv(const GammaParams& p, const GradientOptions& opt = {});

/// I_ab = \int_0^rmax (d_a f)(d_b f) / f dr. Parameter derivatives of the
/// density are central differences; points where f < 1e-300 contribute 0.
/// Throws BoundaryError if K or Gamma is not strictly inside its range and
/// NumericalError if an entry fails to converge.
FisherMatrix fisher_matrix(const GammaParams& p, const FisherOptions& opt = {});

/// Diagonal (K, Gamma) entries of the inverse Fisher matrix. Throws
/// BoundaryError when the condition number reaches 1e12.
CramerRaoBound crb(const GammaParams& p, const FisherOptions& opt = {});
CramerRaoBound crb_from_fisher(const FisherMatrix& fim, OmegaTreatment omega);

PerfPoint perf_point(const GammaParams& p, const FisherOptions& fisher = {},
                     const GradientOptions& gradient = {});

std::string perf_csv_header();
std::string perf_csv_row(const PerfPoint& pt);

}  // namespace twdp
