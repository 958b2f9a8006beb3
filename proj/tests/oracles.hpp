#pragma once

// Test-side oracles, kept deliberately independent of the library's numerical
// paths: direct adaptive quadrature of the defining singular integral, and a
// recursive Simpson rule with no shared code under include/.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

using Fn = std::function<double(double)>;

inline double adaptive_simpson_rec(const Fn& f, double a, double b, double fa, double fm, double fb, double whole,
                                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw std::runtime_error("adaptive_simpson: depth exhausted");
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const Fn& f, double a, double b, double tol, int depth = 48) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Pointwise fractional Laplacian action c * PV int (u(x+y)-u(x)) |y|^{-1-alpha} dy
// at an interior point x, for u given analytically on (0,1), zero outside, with
// second and fourth derivatives supplied for the series treatment of the
// singular near field. Accuracy ~1e-9 relative, far tighter than any test
// tolerance that consumes it.
inline double fractional_action_at(const Fn& u, const Fn& u2, const Fn& u4, double x, double alpha, double c) {
    const double delta = 1e-3;
    // Near field: symmetrized difference integrated via the Taylor series.
    double near = u2(x) * std::pow(delta, 2.0 - alpha) / (2.0 - alpha) +
                  u4(x) * std::pow(delta, 4.0 - alpha) / (12.0 * (4.0 - alpha));
    // Far field, right branch: y in [delta, 1-x) meets the support, beyond it
    // only the -u(x) mass remains (closed-form tail).
    auto right_integrand = [&](double y) { return (u(x + y) - u(x)) * std::pow(y, -1.0 - alpha); };
    auto left_integrand = [&](double y) { return (u(x - y) - u(x)) * std::pow(y, -1.0 - alpha); };
    const double right = adaptive_simpson(right_integrand, delta, 1.0 - x, 1e-10) -
                         u(x) * std::pow(1.0 - x, -alpha) / alpha;
    const double left = adaptive_simpson(left_integrand, delta, x, 1e-10) - u(x) * std::pow(x, -alpha) / alpha;
    return c * (near + right + left);
}

}  // namespace oracle
