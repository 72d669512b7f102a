/** @file ode.hpp
 *  @brief Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.
 */
#ifndef CDD_ODE_HPP
#define CDD_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "errors.hpp"

namespace cdd {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0; // 0: 1e-3 of the span
    std::size_t max_steps = 2000000;
};

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/** @brief Integrates y' = f(x, y) from x0 to x1 (x1 > x0) in place. */
template <std::size_t M, class Rhs>
void integrate_dopri5(Rhs&& f, double x0, double x1, std::array<double, M>& y, const OdeOptions& opt,
                      OdeStats* stats = nullptr)
{
    using V = std::array<double, M>;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    double span = x1 - x0;
    if (span <= 0) return;
    double h = opt.h_init > 0 ? opt.h_init : span * 1e-3;
    double x = x0;
    V k1 = f(x, y), k2, k3, k4, k5, k6, k7, yt, yn;
    std::size_t steps = 0;
    while (x < x1) {
        if (++steps > opt.max_steps) throw SolverError("ODE integration exceeded the step budget");
        bool last = x + h >= x1;
        if (last) h = x1 - x;
        for (std::size_t i = 0; i < M; ++i) yt[i] = y[i] + h * a21 * k1[i];
        k2 = f(x + c2 * h, yt);
        for (std::size_t i = 0; i < M; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(x + c3 * h, yt);
        for (std::size_t i = 0; i < M; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(x + c4 * h, yt);
        for (std::size_t i = 0; i < M; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(x + c5 * h, yt);
        for (std::size_t i = 0; i < M; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        double xn = last ? x1 : x + h;
        k6 = f(xn, yt);
        for (std::size_t i = 0; i < M; ++i)
            yn[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = f(xn, yn);
        double err = 0;
        bool finite = true;
        for (std::size_t i = 0; i < M; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
            double q = ei / sc;
            err = std::max(err, std::abs(q));
            finite = finite && std::isfinite(yn[i]);
        }
        if (!finite) err = 1e10;
        if (err <= 1.0) {
            x = xn;
            y = yn;
            k1 = k7;
            if (stats) ++stats->accepted;
            if (last) break;
        } else if (stats) {
            ++stats->rejected;
        }
        double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (err > 1.0) fac = std::min(fac, 1.0);
        h *= fac;
        if (h < 1e-15 * std::max(1.0, std::abs(x))) throw SolverError("ODE step size underflow");
    }
}

} // namespace cdd

#endif
