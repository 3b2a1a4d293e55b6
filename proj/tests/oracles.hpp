#pragma once

// Independent numerical oracles used by the tests. These deliberately work on
// raw density callables and never touch the library's closed-form code paths.

#include <cmath>
#include <functional>

namespace oracle {

namespace detail {

template <typename F>
double simpson(F& f, double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive(F& f, double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b].
template <typename F>
double integrate(F f, double a, double b, double tol = 1e-12) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = detail::simpson(f, a, b, fa, fm, fb);
    return detail::adaptive(f, a, b, fa, fm, fb, whole, tol, 60);
}

inline double long_tail_density(double l, double z) { return l / ((l + z) * (l + z)); }

// Winning probability by quadrature of the raw density.
inline double win_prob_quad(double l, double b) {
    return integrate([l](double z) { return long_tail_density(l, z); }, 0.0, b);
}

// Expected second-price cost by quadrature of both integrals.
inline double second_price_cost_quad(double l, double b) {
    const double num = integrate([l](double z) { return z * long_tail_density(l, z); }, 0.0, b);
    return num / win_prob_quad(l, b);
}

}  // namespace oracle
