#include "ppcshape/orientation.hpp"

#include "ppcshape/error.hpp"

#include <cmath>

namespace ppcshape {

double wrap_two_pi(double angle) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    return r >= two_pi ? 0.0 : r;
}

double circular_distance(double a, double b) noexcept {
    return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
}

ExtractedConfig extract_config(const Quaternion& q, double alpha_min) {
    if (!q.is_unit()) {
        throw Error(ErrorCode::not_normalized, "orientation quaternion is not unit-norm");
    }
    const Quaternion c = q.canonical();
    const double vnorm = c.vec().norm();
    ExtractedConfig out;
    out.config.alpha = 2.0 * std::atan2(vnorm, c.w);
    out.config.phi = wrap_two_pi(std::atan2(-c.x, c.y));
    out.config.phi_defined = out.config.alpha >= alpha_min;
    out.twist_residual = std::abs(c.z);
    return out;
}

Quaternion config_to_quaternion(double alpha, double phi) noexcept {
    const double s = std::sin(0.5 * alpha);
    const Quaternion q{std::cos(0.5 * alpha), -std::sin(phi) * s, std::cos(phi) * s, 0.0};
    return q.canonical();
}

}  // namespace ppcshape
