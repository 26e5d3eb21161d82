#pragma once

#include "ppcshape/quaternion.hpp"

#include <numbers>

namespace ppcshape {

/// Default minimum bend (0.5°) below which the bending direction is undefined.
inline constexpr double default_alpha_min = 0.5 * std::numbers::pi / 180.0;
/// Default |z| above which a sensor quaternion is reported as twisted.
inline constexpr double default_twist_tol = 0.02;

/// Continuum configuration at one location: in-plane bend α ∈ [0, π] about
/// the plane normal n = [−sin φ, cos φ, 0], and bending direction φ ∈ [0, 2π).
struct BendConfig {
    double alpha = 0.0;
    double phi = 0.0;
    bool phi_defined = false;
};

struct ExtractedConfig {
    BendConfig config;
    /// |z| of the canonical quaternion; zero for a twist-free bend.
    double twist_residual = 0.0;
};

/// Recovers (α, φ) from a unit quaternion. α = 2·atan2(‖v‖, w), which equals
/// 2·arccos(w) for unit quaternions without its loss of precision near α = 0;
/// φ = atan2(−x, y) wrapped to [0, 2π). Throws not_normalized.
[[nodiscard]] ExtractedConfig extract_config(const Quaternion& q, double alpha_min = default_alpha_min);

/// q = [cos(α/2), −sin φ sin(α/2), cos φ sin(α/2), 0], sign-canonicalized.
/// Signed or large α are accepted and map to the same rotation.
[[nodiscard]] Quaternion config_to_quaternion(double alpha, double phi) noexcept;

/// Wraps an angle to [0, 2π).
[[nodiscard]] double wrap_two_pi(double angle) noexcept;

/// Smallest absolute difference between two angles, in [0, π].
[[nodiscard]] double circular_distance(double a, double b) noexcept;

}  // namespace ppcshape
