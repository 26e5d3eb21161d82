#pragma once

#include "ppcshape/quadrature.hpp"

#include <initializer_list>
#include <span>
#include <vector>

/// Planar piecewise-polynomial-curvature (PPC) mathematics for one segment.
///
/// A segment of length L is parameterized by normalized arc length s ∈ [0, 1].
/// Its curvature is q(s) = Σ θ_k s^k, the in-plane orientation is
/// α(s) = ∫₀ˢ q, and the bending-plane coordinates are
/// x = L∫₀ˢ cos α, y = L∫₀ˢ sin α.
namespace ppcshape {

/// Truncated curvature coefficients [θ₀, …, θ_m] of one segment.
class ModalConfig {
public:
    explicit ModalConfig(std::vector<double> coeffs);
    ModalConfig(std::initializer_list<double> coeffs)
        : ModalConfig(std::vector<double>(coeffs)) {}

    /// All-zero configuration of the given order.
    static ModalConfig zero(int order);

    [[nodiscard]] int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] double operator[](std::size_t k) const { return coeffs_.at(k); }
    [[nodiscard]] bool is_zero() const noexcept;

    friend bool operator==(const ModalConfig&, const ModalConfig&) = default;

private:
    std::vector<double> coeffs_;
};

/// Normalized arc coordinate, validated to lie in [0, 1].
class ArcCoordinate {
public:
    explicit ArcCoordinate(double s);
    [[nodiscard]] double value() const noexcept { return s_; }
    operator double() const noexcept { return s_; }  // NOLINT(google-explicit-constructor)

private:
    double s_;
};

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Default absolute tolerance (per unit length) for position quadrature.
inline constexpr double default_position_tol = 1e-10;

/// q(s) = Σ θ_k s^k by Horner's scheme.
[[nodiscard]] double eval_curvature(const ModalConfig& theta, ArcCoordinate s) noexcept;

/// α(s) = Σ θ_k s^{k+1}/(k+1).
[[nodiscard]] double eval_orientation(const ModalConfig& theta, double s) noexcept;

/// Constant-curvature arc (order 0) in closed form, with a Taylor branch
/// for |θ₀ s| < 1e-4.
[[nodiscard]] PlanarPoint position_order0(double theta0, ArcCoordinate s, double length);

/// Clothoid (order 1) in closed form through Fresnel integrals.
///
/// Negative θ₁ is handled by reflection ((θ₀, θ₁) → (−θ₀, −θ₁) negates y).
/// For |θ₁| < 1e-6·max(1, |θ₀|) the order-0 arc plus its first-order
/// sensitivity in θ₁ is used instead, since the Fresnel form is 0/0 there.
[[nodiscard]] PlanarPoint position_order1(const ModalConfig& theta, ArcCoordinate s, double length);

/// Position by adaptive quadrature of cos/sin α, absolute error ≤ tol·L.
[[nodiscard]] PlanarPoint position_quadrature(const ModalConfig& theta, ArcCoordinate s,
                                              double length, double tol = default_position_tol);

/// Position increment between two arc coordinates, by quadrature.
[[nodiscard]] PlanarPoint position_increment(const ModalConfig& theta, double s_from, double s_to,
                                             double length, double tol = default_position_tol);

/// Dispatches to the closed forms for order ≤ 1 and to quadrature otherwise.
[[nodiscard]] PlanarPoint position(const ModalConfig& theta, ArcCoordinate s, double length,
                                   double tol = default_position_tol);

}  // namespace ppcshape
