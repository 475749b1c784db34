#include "twdp/perf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "twdp/error.hpp"
#include "twdp/estimators.hpp"
#include "twdp/format.hpp"
#include "twdp/moments.hpp"

namespace twdp {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kDensityFloor = 1e-300;
constexpr double kMaxCondition = 1e12;

double pick(const RawEstimate& e, EstimatorKind which) {
    switch (which) {
        case EstimatorKind::k:
            return e.k;
        case EstimatorKind::gamma:
            return e.gamma;
        case EstimatorKind::delta:
            return e.delta;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

const char* kind_name(EstimatorKind which) {
    switch (which) {
        case EstimatorKind::k:
            return "K";
        case EstimatorKind::gamma:
            return "Gamma";
        case EstimatorKind::delta:
            return "Delta";
    }
    return "?";
}

Eigen::Vector3d central_difference(EstimatorKind which, const Eigen::Vector3d& mu, double rel) {
    Eigen::Vector3d grad;
    for (int j = 0; j < 3; ++j) {
        const double h = rel * mu[j];
        Eigen::Vector3d up = mu;
        Eigen::Vector3d down = mu;
        up[j] += h;
        down[j] -= h;
        const double f_up = pick(raw_estimator_map(up[0], up[1], up[2]), which);
        const double f_down = pick(raw_estimator_map(down[0], down[1], down[2]), which);
        grad[j] = (f_up - f_down) / (up[j] - down[j]);
    }
    return grad;
}

Eigen::Vector3d richardson(EstimatorKind which, const Eigen::Vector3d& mu, double rel) {
    return (4.0 * central_difference(which, mu, 0.5 * rel) - central_difference(which, mu, rel)) / 3.0;
}

bool all_finite(const Eigen::Vector3d& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

void require_interior(const GammaParams& p, bool need_gamma, const char* what) {
    p.validate();
    if (!(p.k > 0.0)) {
        throw BoundaryError(fmt::format("{} undefined at K = 0", what));
    }
    if (need_gamma && !(p.gamma > 0.0 && p.gamma < 1.0)) {
        throw BoundaryError(fmt::format("{} undefined at Gamma = {}", what, p.gamma));
    }
}

}  // namespace

MomentCovariance moment_covariance(const GammaParams& p) {
    p.validate();
    std::array<double, 7> mu{};  // mu[i] = E[r^(2i)]
    mu[0] = 1.0;
    for (int i = 1; i <= 6; ++i) {
        mu[i] = even_moment(2 * i, p);
    }
    MomentCovariance cov;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            cov.matrix(i - 1, j - 1) = mu[i + j] - mu[i] * mu[j];
        }
    }
    return cov;
}

bool near_boundary(const GammaParams& p) {
    return p.k < 0.05 || p.gamma < 0.02 || p.gamma > 0.98;
}

Eigen::Vector3d estimator_gradient(EstimatorKind which, const GammaParams& p,
                                   const GradientOptions& opt) {
    require_interior(p, which != EstimatorKind::k, "estimator gradient");
    const Eigen::Vector3d mu(even_moment(2, p), even_moment(4, p), even_moment(6, p));

    double step = opt.relative_step;
    while (step >= opt.min_relative_step) {
        const Eigen::Vector3d coarse = richardson(which, mu, step);
        const Eigen::Vector3d fine = richardson(which, mu, step * opt.check_step_ratio);
        if (all_finite(coarse) && all_finite(fine)) {
            const double scale = fine.cwiseAbs().maxCoeff();
            const double diff = (coarse - fine).cwiseAbs().maxCoeff();
            if (diff <= opt.agreement * scale) {
                return fine;
            }
        }
        step *= opt.check_step_ratio;
    }
    throw NumericalError(fmt::format("{} gradient unstable at K={} Gamma={}: no step down to {} "
                                     "passed the two-step check",
                                     kind_name(which), p.k, p.gamma, opt.min_relative_step));
}

AsymptoticVariance asv(const GammaParams& p, const GradientOptions& opt) {
    require_interior(p, true, "asymptotic variance");
    const Eigen::Matrix3d sigma = moment_covariance(p).matrix;
    auto quad = [&](EstimatorKind which) {
        const Eigen::Vector3d g = estimator_gradient(which, p, opt);
        return g.dot(sigma * g);
    };
    return {quad(EstimatorKind::k), quad(EstimatorKind::gamma), quad(EstimatorKind::delta)};
}

FisherMatrix fisher_matrix(const GammaParams& p, const FisherOptions& opt) {
    require_interior(p, true, "Fisher information");

    const std::array<double, 3> theta{p.k, p.gamma, p.omega};
    std::array<double, 3> steps{};
    for (int j = 0; j < 3; ++j) {
        steps[j] = opt.relative_step * theta[j];
    }
    steps[1] = std::min(steps[1], 0.5 * (1.0 - p.gamma));

    auto perturbed = [&](int j, double sign) {
        std::array<double, 3> t = theta;
        t[j] += sign * steps[j];
        return params_to_physical(GammaParams{t[0], t[1], t[2]});
    };
    const PhysicalComponents center = params_to_physical(p);
    std::array<PhysicalComponents, 3> up{};
    std::array<PhysicalComponents, 3> down{};
    for (int j = 0; j < 3; ++j) {
        up[j] = perturbed(j, +1.0);
        down[j] = perturbed(j, -1.0);
    }

    // f and its three parameter derivatives, shared by the six entry integrals.
    std::unordered_map<double, std::array<double, 4>> cache;
    auto score = [&](double r) -> const std::array<double, 4>& {
        auto it = cache.find(r);
        if (it != cache.end()) {
            return it->second;
        }
        std::array<double, 4> v{};
        v[0] = envelope_pdf(r, center, opt.pdf);
        for (int j = 0; j < 3; ++j) {
            v[j + 1] = (envelope_pdf(r, up[j], opt.pdf) - envelope_pdf(r, down[j], opt.pdf)) /
                       (2.0 * steps[j]);
        }
        return cache.emplace(r, v).first->second;
    };

    const double rmax = envelope_support_max(center);
    FisherMatrix fim;
    for (int a = 0; a < 3; ++a) {
        for (int b = a; b < 3; ++b) {
            auto integrand = [&](double r) {
                const auto& s = score(r);
                return s[0] > kDensityFloor ? s[a + 1] * s[b + 1] / s[0] : 0.0;
            };
            double error = 0.0;
            double l1 = 0.0;
            const double value = gauss_kronrod<double, 61>::integrate(
                integrand, 0.0, rmax, opt.pdf.max_depth, opt.radial_tolerance, &error, &l1);
            if (error > 10.0 * opt.radial_tolerance * l1) {
                throw NumericalError(fmt::format(
                    "Fisher entry ({},{}) at K={} Gamma={} Omega={} did not converge: "
                    "error estimate {} vs L1 {} (tolerance {})",
                    a, b, p.k, p.gamma, p.omega, error, l1, opt.radial_tolerance));
            }
            fim.matrix(a, b) = value;
            fim.matrix(b, a) = value;
            fim.max_quadrature_error = std::max(fim.max_quadrature_error, error);
        }
    }
    return fim;
}

CramerRaoBound crb_from_fisher(const FisherMatrix& fim, OmegaTreatment omega) {
    const int n = omega == OmegaTreatment::known ? 2 : 3;
    const Eigen::MatrixXd block = fim.matrix.topLeftCorner(n, n);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(lo > 0.0) || hi / lo >= kMaxCondition) {
        throw BoundaryError(fmt::format(
            "Fisher matrix singular or ill-conditioned (eigenvalues {} .. {})", lo, hi));
    }
    const Eigen::MatrixXd inverse = block.inverse();
    return {inverse(0, 0), inverse(1, 1)};
}

CramerRaoBound crb(const GammaParams& p, const FisherOptions& opt) {
    return crb_from_fisher(fisher_matrix(p, opt), opt.omega);
}

PerfPoint perf_point(const GammaParams& p, const FisherOptions& fisher,
                     const GradientOptions& gradient) {
    const AsymptoticVariance v = asv(p, gradient);
    const CramerRaoBound b = crb(p, fisher);
    PerfPoint pt;
    pt.k = p.k;
    pt.gamma = p.gamma;
    pt.asv_k = v.asv_k;
    pt.asv_gamma = v.asv_gamma;
    pt.asv_delta = v.asv_delta;
    pt.crb_k = b.crb_k;
    pt.crb_gamma = b.crb_gamma;
    pt.err_k = std::sqrt(v.asv_k) / p.k;
    pt.err_gamma = std::sqrt(v.asv_gamma) / p.gamma;
    pt.err_delta_norm = std::sqrt(v.asv_delta) / p.gamma;
    pt.crb_err_k = std::sqrt(b.crb_k) / p.k;
    pt.crb_err_gamma = std::sqrt(b.crb_gamma) / p.gamma;
    pt.boundary_flag = near_boundary(p);
    return pt;
}

std::string perf_csv_header() {
    return "k,gamma,asv_k,asv_gamma,asv_delta,crb_k,crb_gamma,err_k,err_gamma,err_delta_norm,"
           "crb_err_k,crb_err_gamma,boundary_flag";
}

std::string perf_csv_row(const PerfPoint& pt) {
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}", format_number(pt.k),
                       format_number(pt.gamma), format_number(pt.asv_k),
                       format_number(pt.asv_gamma), format_number(pt.asv_delta),
                       format_number(pt.crb_k), format_number(pt.crb_gamma),
                       format_number(pt.err_k), format_number(pt.err_gamma),
                       format_number(pt.err_delta_norm), format_number(pt.crb_err_k),
                       format_number(pt.crb_err_gamma), pt.boundary_flag ? 1 : 0);
}

}  // namespace twdp
