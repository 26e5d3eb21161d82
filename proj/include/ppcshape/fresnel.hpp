#pragma once

namespace ppcshape {

struct FresnelCS {
    double c;
    double s;
};

/// Fresnel integrals C(x) = ∫₀ˣ cos(πv²/2) dv and S(x) = ∫₀ˣ sin(πv²/2) dv.
///
/// Power series for |x| < 1.5, otherwise the auxiliary functions f, g through
/// a complex continued fraction of erfc. Odd in x. Accurate to a few ulps of
/// 0.5 for every finite argument.
[[nodiscard]] FresnelCS fresnel(double x) noexcept;

/// Auxiliary functions f, g of |x|, defined by
/// C(x) = ½ + f sin(πx²/2) − g cos(πx²/2), S(x) = ½ − f cos(πx²/2) − g sin(πx²/2)
/// for x ≥ 0. Differences of Fresnel integrals at large arguments are formed
/// from these without the cancellation of C(a) − C(b).
struct FresnelAux {
    double f;
    double g;
};

[[nodiscard]] FresnelAux fresnel_aux(double x) noexcept;

}  // namespace ppcshape
