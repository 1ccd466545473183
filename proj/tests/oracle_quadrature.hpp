// Test-only quadrature oracles.  These integrate analytic functions with
// adaptive Simpson rules; they share no code with the library's midpoint
// norms, so they can serve as independent references.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(F&& f, double a, double b, double fa, double fm, double fb, double whole,
             double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <class F>
double integrate_1d(F&& f, double a, double b, double tol = 1e-11, int depth = 32) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = detail::simpson(a, b, fa, fm, fb);
    return detail::adapt(f, a, b, fa, fm, fb, whole, tol, depth);
}

// 2*pi * integral over [r0,r1]x[z0,z1] of |f(r,z)|^p * r dr dz.
inline double lp_mass_3d(const std::function<double(double, double)>& f, double p, double r0,
                         double r1, double z0, double z1, double tol = 1e-10) {
    auto inner = [&](double z) {
        return integrate_1d(
            [&](double r) { return std::pow(std::abs(f(r, z)), p) * r; }, r0, r1, tol);
    };
    return 2.0 * std::numbers::pi * integrate_1d(inner, z0, z1, tol);
}

// Same mass restricted to r^2 + z^2 > radius^2, integrated in polar
// coordinates (r = s cos(a), z = s sin(a)) so the cut is an integration
// boundary rather than a kink.
inline double lp_mass_tail_3d(const std::function<double(double, double)>& f, double p,
                              double radius, double smax, double tol = 1e-10) {
    auto inner = [&](double s) {
        auto g = [&](double a) {
            double r = s * std::cos(a);
            double z = s * std::sin(a);
            return std::pow(std::abs(f(r, z)), p) * r;
        };
        return s * integrate_1d(g, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi, tol);
    };
    return 2.0 * std::numbers::pi * integrate_1d(inner, radius, smax, tol);
}

}  // namespace oracle
