#pragma once

#include "ppcshape/modal_solver.hpp"
#include "ppcshape/ppc_core.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

/// First-order propagation of quaternion scalar noise to bending-plane
/// position: Σ_p = J Σ_w Jᵀ with J = J_m^p · J_w^m.
namespace ppcshape {

/// Per-sensor standard deviation of the quaternion scalar w.
struct QuatNoise {
    std::vector<double> sigma_w;
};

using PlanarCovariance = Eigen::Matrix2d;

/// ∂Θ/∂w through α = 2 arccos(w) and AΘ = α: A⁺ · diag(−2/√(1−w²)).
/// A⁺ is the inverse for a square system and the pseudo-inverse otherwise.
/// Throws singular_orientation when some |w| is within 1e-9 of 1.
[[nodiscard]] Eigen::MatrixXd jacobian_w_to_modal(const SensorPlacement& placement, std::span<const double> w,
                                                  int order = -1);

/// ∂(x, y)/∂θ_k = L ∫₀ˢ (−sin α, cos α) v^{k+1}/(k+1) dv, by adaptive quadrature.
[[nodiscard]] Eigen::MatrixXd jacobian_modal_to_position(const ModalConfig& theta, ArcCoordinate s, double length,
                                                         double tol = default_position_tol);

[[nodiscard]] PlanarCovariance position_covariance(const SensorPlacement& placement, std::span<const double> w,
                                                   const ModalConfig& theta, ArcCoordinate s, double length,
                                                   const QuatNoise& noise);

struct UncertaintyEllipse {
    /// Major then minor semi-axis, meters.
    double major = 0.0;
    double minor = 0.0;
    /// Direction of the major axis in the bending plane, in (−π/2, π/2].
    double angle = 0.0;
};

/// Confidence ellipse from the χ² quantile with two degrees of freedom,
/// −2 ln(1 − p).
[[nodiscard]] UncertaintyEllipse uncertainty_ellipse(const PlanarCovariance& cov, double confidence);

/// σ_w of a sensor with bend α under isotropic rotation noise of total
/// angular standard deviation σ (radians): ½ sin(α/2) · σ/√3.
[[nodiscard]] double sigma_w_from_angle(double alpha, double sigma_angle) noexcept;

}  // namespace ppcshape
