#include "ppcshape/ppc_core.hpp"

#include "ppcshape/fresnel.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ppcshape {

namespace {

constexpr double order0_series_threshold = 1e-4;
constexpr double order1_degeneracy = 1e-6;

void require_length(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw Error(ErrorCode::invalid_argument, "segment length must be positive and finite");
    }
}

// ∫₀¹ t² cos(ut) dt and ∫₀¹ t² sin(ut) dt.
struct SecondMoments {
    double cos_part;
    double sin_part;
};

SecondMoments second_moments(double u) {
    if (std::abs(u) < 2.0) {
        double c = 0.0;
        double s = 0.0;
        double power = 1.0;  // u^j / j!
        for (int j = 0; j < 40; ++j) {
            const double sign = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
            const double term = sign * power / (j + 3.0);
            if (j % 2 == 0) {
                c += term;
            } else {
                s += term;
            }
            power *= u / (j + 1.0);
            if (std::abs(power) < 1e-18) {
                break;
            }
        }
        return {c, s};
    }
    const double su = std::sin(u);
    const double cu = std::cos(u);
    const double u2 = u * u;
    const double u3 = u2 * u;
    return {su / u + 2.0 * cu / u2 - 2.0 * su / u3,
            -cu / u + 2.0 * su / u2 - 4.0 * std::sin(0.5 * u) * std::sin(0.5 * u) / u3};
}

}  // namespace

ModalConfig::ModalConfig(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw Error(ErrorCode::invalid_argument, "modal configuration needs at least one coefficient");
    }
    if (!std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorCode::invalid_argument, "modal coefficients must be finite");
    }
}

ModalConfig ModalConfig::zero(int order) {
    if (order < 0) {
        throw Error(ErrorCode::invalid_argument, "order must be non-negative");
    }
    return ModalConfig(std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0));
}

bool ModalConfig::is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return v == 0.0; });
}

ArcCoordinate::ArcCoordinate(double s) : s_(s) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "arc coordinate must lie in [0, 1], got " + std::to_string(s));
    }
}

double eval_curvature(const ModalConfig& theta, ArcCoordinate s) noexcept {
    const auto c = theta.coeffs();
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * s.value() + *it;
    }
    return acc;
}

double eval_orientation(const ModalConfig& theta, double s) noexcept {
    const auto c = theta.coeffs();
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
        acc = acc * s + c[k] / static_cast<double>(k + 1);
    }
    return acc * s;
}

PlanarPoint position_order0(double theta0, ArcCoordinate s, double length) {
    require_length(length);
    const double arc = s.value() * length;
    const double u = theta0 * s.value();
    if (std::abs(u) < order0_series_threshold) {
        const double u2 = u * u;
        return {arc * (1.0 - u2 / 6.0 + u2 * u2 / 120.0),
                arc * u * (0.5 - u2 / 24.0 + u2 * u2 / 720.0)};
    }
    const double half_sin = std::sin(0.5 * u);
    return {arc * std::sin(u) / u, arc * 2.0 * half_sin * half_sin / u};
}

PlanarPoint position_order1(const ModalConfig& theta, ArcCoordinate s, double length) {
    require_length(length);
    if (theta.order() != 1) {
        throw Error(ErrorCode::invalid_argument, "position_order1 needs an order-1 configuration");
    }
    double t0 = theta[0];
    double t1 = theta[1];
    const double sv = s.value();

    if (std::abs(t1) < order1_degeneracy * std::max(1.0, std::abs(t0))) {
        const PlanarPoint base = position_order0(t0, s, length);
        const SecondMoments mom = second_moments(t0 * sv);
        const double scale = 0.5 * length * t1 * sv * sv * sv;
        return {base.x - scale * mom.sin_part, base.y + scale * mom.cos_part};
    }

    const double reflect = t1 < 0.0 ? -1.0 : 1.0;
    t0 *= reflect;
    t1 *= reflect;

    const double root = std::sqrt(std::numbers::pi * t1);
    const double a = (t0 + t1 * sv) / root;
    const double b = t0 / root;
    const double scale = length * std::sqrt(std::numbers::pi / t1);

    if ((a < 0.0) == (b < 0.0)) {
        // Same-sign Fresnel arguments: the ½ terms cancel and the large phase
        // θ₀²/2θ₁ drops out, leaving α(s) itself as the only angle.
        const double sign = a < 0.0 ? -1.0 : 1.0;
        const FresnelAux fa = fresnel_aux(a);
        const FresnelAux fb = fresnel_aux(b);
        const double alpha = sv * (t0 + 0.5 * t1 * sv);
        const double sa = std::sin(alpha);
        const double ca = std::cos(alpha);
        const double x = fa.f * sa - fa.g * ca + fb.g;
        const double y = -fa.f * ca - fa.g * sa + fb.f;
        return {sign * scale * x, reflect * sign * scale * y};
    }

    // Arguments straddle zero, so |θ₀| < θ₁ and the phase stays small.
    const double phase = t0 * t0 / (2.0 * t1);
    const double c = std::sin(phase);
    const double d = std::cos(phase);
    const FresnelCS fa = fresnel(a);
    const FresnelCS fb = fresnel(b);
    const double dc = fa.c - fb.c;
    const double ds = fa.s - fb.s;
    return {scale * (d * dc + c * ds), reflect * scale * (d * ds - c * dc)};
}

PlanarPoint position_increment(const ModalConfig& theta, double s_from, double s_to,
                               double length, double tol) {
    require_length(length);
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
    }
    auto integrand = [&theta](double v) {
        const double alpha = eval_orientation(theta, v);
        return Eigen::Vector2d(std::cos(alpha), std::sin(alpha));
    };
    const Eigen::Vector2d r = integrate_adaptive(integrand, s_from, s_to, QuadratureOptions{tol, 1 << 14});
    return {length * r.x(), length * r.y()};
}

PlanarPoint position_quadrature(const ModalConfig& theta, ArcCoordinate s, double length, double tol) {
    return position_increment(theta, 0.0, s.value(), length, tol);
}

PlanarPoint position(const ModalConfig& theta, ArcCoordinate s, double length, double tol) {
    switch (theta.order()) {
        case 0: return position_order0(theta[0], s, length);
        case 1: return position_order1(theta, s, length);
        default: return position_quadrature(theta, s, length, tol);
    }
}

}  // namespace ppcshape
