#pragma once

#include "ppcshape/error.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <span>
#include <type_traits>
#include <vector>

namespace ppcshape {

struct QuadratureOptions {
    /// Absolute error target over the whole interval.
    double tol = 1e-10;
    /// Upper bound on the number of panels examined before giving up.
    int max_panels = 1 << 14;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

namespace detail {

inline constexpr int low_order = 10;
inline constexpr int high_order = 20;

template <class F>
auto apply_rule(const GaussRule& rule, F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    auto sum = (rule.weights[0] * f(mid + half * rule.nodes[0])).eval();
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return (half * sum).eval();
}

}  // namespace detail

/// Adaptive composite Gauss-Legendre quadrature of a vector-valued integrand.
///
/// Each panel is integrated with a 10- and a 20-point rule; the difference
/// bounds the error of the 20-point value. Panels whose estimate exceeds their
/// share of `tol` (proportional to width) are bisected. `f` maps a double to
/// an Eigen column vector (fixed or dynamic size).
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    using Vec = std::remove_cvref_t<decltype((f(a) * 1.0).eval())>;
    if (!(opt.tol > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "quadrature tolerance must be positive");
    }
    const GaussRule& lo = gauss_legendre(detail::low_order);
    const GaussRule& hi = gauss_legendre(detail::high_order);

    Vec total = (f(a) * 0.0).eval();
    if (a == b) {
        return total;
    }
    const double width = std::abs(b - a);

    struct Panel {
        double a, b;
    };
    std::vector<Panel> stack{{a, b}};
    int examined = 0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        if (++examined > opt.max_panels) {
            throw Error(ErrorCode::tolerance_not_reached,
                        "adaptive quadrature exhausted its panel budget");
        }
        Vec coarse = detail::apply_rule(lo, f, p.a, p.b);
        Vec fine = detail::apply_rule(hi, f, p.a, p.b);
        const double err = (fine - coarse).cwiseAbs().maxCoeff();
        const double budget = opt.tol * std::abs(p.b - p.a) / width;
        if (err <= budget || !std::isfinite(err)) {
            if (!std::isfinite(err)) {
                throw Error(ErrorCode::tolerance_not_reached, "non-finite integrand value");
            }
            total += fine;
        } else {
            const double m = 0.5 * (p.a + p.b);
            stack.push_back({m, p.b});
            stack.push_back({p.a, m});
        }
    }
    return total;
}

}  // namespace ppcshape
