#include "ppcshape/uncertainty.hpp"

#include "ppcshape/error.hpp"
#include "ppcshape/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace ppcshape {

Eigen::MatrixXd jacobian_w_to_modal(const SensorPlacement& placement, std::span<const double> w, int order) {
    if (w.size() != placement.size()) {
        throw Error(ErrorCode::invalid_argument, "one w value is needed per sensor");
    }
    const Eigen::MatrixXd a = build_system(placement, order);
    Eigen::VectorXd dalpha(static_cast<Eigen::Index>(w.size()));
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!(std::abs(w[k]) <= 1.0)) {
            throw Error(ErrorCode::invalid_argument, "quaternion scalar must lie in [-1, 1]");
        }
        if (1.0 - std::abs(w[k]) < 1e-9) {
            throw Error(ErrorCode::singular_orientation, "d alpha / d w is unbounded at |w| = 1");
        }
        dalpha[static_cast<Eigen::Index>(k)] = -2.0 / std::sqrt(1.0 - w[k] * w[k]);
    }
    const Eigen::MatrixXd inverse = a.rows() == a.cols() ? Eigen::MatrixXd(a.inverse())
                                                         : a.completeOrthogonalDecomposition().pseudoInverse();
    return inverse * dalpha.asDiagonal();
}

Eigen::MatrixXd jacobian_modal_to_position(const ModalConfig& theta, ArcCoordinate s, double length, double tol) {
    const int n = theta.order() + 1;
    auto integrand = [&](double v) {
        const double a = eval_orientation(theta, v);
        const double c = std::cos(a);
        const double sn = std::sin(a);
        Eigen::VectorXd out(2 * n);
        double power = v;
        for (int k = 0; k < n; ++k) {
            const double basis = power / (k + 1);
            out[2 * k] = -sn * basis;
            out[2 * k + 1] = c * basis;
            power *= v;
        }
        return out;
    };
    const Eigen::VectorXd integral = integrate_adaptive(integrand, 0.0, s.value(), QuadratureOptions{.tol = tol});
    return length * integral.reshaped(2, n);
}

PlanarCovariance position_covariance(const SensorPlacement& placement, std::span<const double> w,
                                     const ModalConfig& theta, ArcCoordinate s, double length,
                                     const QuatNoise& noise) {
    if (noise.sigma_w.size() != w.size()) {
        throw Error(ErrorCode::invalid_argument, "one noise level is needed per sensor");
    }
    Eigen::VectorXd variance(static_cast<Eigen::Index>(w.size()));
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!(noise.sigma_w[k] >= 0.0)) {
            throw Error(ErrorCode::invalid_argument, "noise standard deviations must be non-negative");
        }
        variance[static_cast<Eigen::Index>(k)] = noise.sigma_w[k] * noise.sigma_w[k];
    }
    const Eigen::MatrixXd jm = jacobian_w_to_modal(placement, w, theta.order());
    const Eigen::MatrixXd jp = jacobian_modal_to_position(theta, s, length);
    const Eigen::MatrixXd j = jp * jm;
    PlanarCovariance cov = j * variance.asDiagonal() * j.transpose();
    return 0.5 * (cov + cov.transpose());
}

UncertaintyEllipse uncertainty_ellipse(const PlanarCovariance& cov, double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "confidence must lie in (0, 1)");
    }
    const double quantile = -2.0 * std::log1p(-confidence);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(0.5 * (cov + cov.transpose()));
    // Eigenvalues come sorted ascending.
    const Eigen::Vector2d lambda = eig.eigenvalues().cwiseMax(0.0);
    UncertaintyEllipse out;
    out.major = std::sqrt(lambda[1] * quantile);
    out.minor = std::sqrt(lambda[0] * quantile);
    const Eigen::Vector2d axis = eig.eigenvectors().col(1);
    double angle = std::atan2(axis.y(), axis.x());
    if (angle <= -0.5 * std::numbers::pi) {
        angle += std::numbers::pi;
    } else if (angle > 0.5 * std::numbers::pi) {
        angle -= std::numbers::pi;
    }
    out.angle = angle;
    return out;
}

double sigma_w_from_angle(double alpha, double sigma_angle) noexcept {
    return 0.5 * std::abs(std::sin(0.5 * alpha)) * sigma_angle / std::sqrt(3.0);
}

}  // namespace ppcshape
