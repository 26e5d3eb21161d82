#include "ppcshape/fresnel.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace ppcshape {

namespace {

constexpr double series_limit = 1.5;
constexpr double eps = std::numeric_limits<double>::epsilon();

// π x²/2 reduced modulo 2π, using an exact product split so large x keep full phase accuracy.
double half_pi_square_reduced(double ax) {
    const double hi = ax * ax;
    const double lo = std::fma(ax, ax, -hi);
    const double reduced = std::fmod(hi, 4.0) + lo;
    return 0.5 * std::numbers::pi * reduced;
}

FresnelCS fresnel_series(double ax) {
    // C = Σ (-1)^n (π/2)^{2n} x^{4n+1} / ((4n+1)(2n)!), S likewise with odd powers.
    const double half_pi_x2 = 0.5 * std::numbers::pi * ax * ax;
    double term = ax;  // (π/2 x²)^k x / k!
    double c = 0.0;
    double s = 0.0;
    double sign = 1.0;
    for (int k = 0; k < 100; ++k) {
        const double contrib = sign * term / (2.0 * k + 1.0);
        if (k % 2 == 0) {
            c += contrib;
        } else {
            s += contrib;
            sign = -sign;
        }
        term *= half_pi_x2 / (k + 1.0);
        if (term < eps * 1e-3 * ax) {
            break;
        }
    }
    return {c, s};
}

// Returns (1 + i)/2 · h with h the scaled continued-fraction value; equals g + i f.
std::complex<double> aux_continued_fraction(double ax) {
    // Modified Lentz evaluation of the erfc continued fraction; see the
    // standard treatment of Fresnel integrals through the complex error function.
    using cplx = std::complex<double>;
    const double pix2 = std::numbers::pi * ax * ax;
    constexpr double tiny = 1e-300;
    cplx b(1.0, -pix2);
    cplx cc(1.0 / tiny, 0.0);
    cplx d = 1.0 / b;
    cplx h = d;
    double n = -1.0;
    for (int k = 2; k < 400; ++k) {
        n += 2.0;
        const double a = -n * (n + 1.0);
        b += 4.0;
        d = 1.0 / (a * d + b);
        cc = b + a / cc;
        const cplx del = cc * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) {
            break;
        }
    }
    h *= cplx(ax, -ax);
    return cplx(0.5, 0.5) * h;
}

FresnelCS fresnel_continued_fraction(double ax) {
    // (C − ½) + i(S − ½) = −(g + i f)·e^{iπx²/2}
    const double half_arg = half_pi_square_reduced(ax);
    const std::complex<double> phase(std::cos(half_arg), std::sin(half_arg));
    const std::complex<double> cs = std::complex<double>(0.5, 0.5) - aux_continued_fraction(ax) * phase;
    return {cs.real(), cs.imag()};
}

}  // namespace

FresnelAux fresnel_aux(double x) noexcept {
    const double ax = std::abs(x);
    if (ax < series_limit) {
        const FresnelCS cs = fresnel_series(ax);
        const double arg = half_pi_square_reduced(ax);
        const double sp = std::sin(arg);
        const double cp = std::cos(arg);
        const double dc = cs.c - 0.5;
        const double ds = cs.s - 0.5;
        return {dc * sp - ds * cp, -dc * cp - ds * sp};
    }
    if (ax > 1e8) {
        const double f = 1.0 / (std::numbers::pi * ax);
        return {f, f / (std::numbers::pi * ax * ax)};
    }
    const std::complex<double> gf = aux_continued_fraction(ax);
    return {gf.imag(), gf.real()};
}

FresnelCS fresnel(double x) noexcept {
    const double ax = std::abs(x);
    if (ax == 0.0) {
        return {0.0, 0.0};
    }
    FresnelCS r{};
    if (ax < series_limit) {
        r = fresnel_series(ax);
    } else if (ax > 1e8) {
        // f ~ 1/(πx), g ~ 1/(π²x³); the oscillating term is below double resolution of 0.5.
        const double arg = half_pi_square_reduced(ax);
        const double f = 1.0 / (std::numbers::pi * ax);
        r = {0.5 + f * std::sin(arg), 0.5 - f * std::cos(arg)};
    } else {
        r = fresnel_continued_fraction(ax);
    }
    if (x < 0.0) {
        r.c = -r.c;
        r.s = -r.s;
    }
    return r;
}

}  // namespace ppcshape
