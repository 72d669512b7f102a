/** @file sl_solver.hpp
 *  @brief First Neumann eigenvalue of (J f')' + lambda J f = 0 by Pruefer phase shooting.
 *
 *  Phase: f' = e cos(phi), sqrt(lambda) f = e sin(phi); see phase_shooting.hpp.
 */
#ifndef CDD_SL_SOLVER_HPP
#define CDD_SL_SOLVER_HPP

#include <array>
#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "means.hpp"
#include "model_density.hpp"
#include "ode.hpp"
#include "phase_shooting.hpp"

namespace cdd {

/// Power of sin, sinh or the identity on [a,b] with a >= 0; used for profiles anchored at a zero.
struct EndpointProfile {
    enum class Kind { sin, sinh, linear };
    Kind kind = Kind::linear;
    double omega = 1.0;    ///< sqrt(|delta|); unused for linear
    double exponent = 1.0; ///< N - 1
    double a = 0.0;
    double b = 1.0;

    double base(double x) const
    {
        switch (kind) {
        case Kind::sin: return std::sin(omega * x);
        case Kind::sinh: return std::sinh(omega * x);
        default: return x;
        }
    }
    double value(double x) const { return std::pow(base(x), exponent); }
    double log_derivative(double x) const
    {
        switch (kind) {
        case Kind::sin: return exponent * omega / std::tan(omega * x);
        case Kind::sinh: return exponent * omega / std::tanh(omega * x);
        default: return exponent / x;
        }
    }
    double lower() const { return a; }
    double upper() const { return b; }
};

/**
 * @brief First non-zero Neumann eigenvalue of the weight on [lower, upper].
 *
 * @param tol relative tolerance on lambda
 */
template <Weight W>
EigenResult sl_first_eigenvalue(const W& w, double tol = 1e-8, const SolverOptions& so = {})
{
    EigenResult r = detail::phase_shoot(w, NativeTrig{}, tol, so);
    // Rayleigh refinement: the quotient is second order in the shooting error.
    if (std::isfinite(r.rayleigh) && r.rayleigh > 0) r.lambda = r.rayleigh;
    return r;
}

inline EigenResult sl_first_eigenvalue(const GridDensity& g, double tol = 1e-8, const SolverOptions& so = {})
{
    return sl_first_eigenvalue(InterpolatedWeight(g), tol, so);
}

enum class Side { left, right };

/** @brief d lambda / d(endpoint moved outward) = -u(end)^2 lambda J(end), with int u^2 J = 1. */
template <Weight W>
double boundary_derivative(const W& w, Side side, double tol = 1e-10)
{
    EigenResult r = sl_first_eigenvalue(w, tol);
    return -r.lambda * (side == Side::right ? r.edge_right : r.edge_left);
}

/** @brief Rayleigh quotient int f'^2 J / int (f - mean)^2 J of a sampled function (trapezoid, central differences); +inf for constant f. */
template <Weight W>
double rayleigh_quotient(const GridDensity& f, const W& w)
{
    // f is signed, so GridDensity::validate (non-negative values) does not apply.
    if (f.size() < 3 || !(f.dx > 0) || !std::isfinite(f.dx) || !std::isfinite(f.x0)) throw DomainError("test function grid is malformed");
    for (double v : f.values)
        if (!std::isfinite(v)) throw DomainError("test function values must be finite");
    double slack = 1e-9 * (w.upper() - w.lower());
    if (f.x0 < w.lower() - slack || f.x_end() > w.upper() + slack) throw DomainError("test function grid leaves the weight's interval");
    std::size_t n = f.size();
    std::vector<double> J(n), df(n);
    for (std::size_t i = 0; i < n; ++i) J[i] = w.value(f.x(i));
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) df[i] = (-3 * f.values[0] + 4 * f.values[1] - f.values[2]) / (2 * f.dx);
        else if (i + 1 == n) df[i] = (3 * f.values[n - 1] - 4 * f.values[n - 2] + f.values[n - 3]) / (2 * f.dx);
        else df[i] = (f.values[i + 1] - f.values[i - 1]) / (2 * f.dx);
    }
    auto trap = [&](auto&& g) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += (i == 0 || i + 1 == n ? 0.5 : 1.0) * g(i);
        return s * f.dx;
    };
    double mass = trap([&](std::size_t i) { return J[i]; });
    double mean = trap([&](std::size_t i) { return f.values[i] * J[i]; }) / mass;
    double num = trap([&](std::size_t i) { return df[i] * df[i] * J[i]; });
    double den = trap([&](std::size_t i) { return (f.values[i] - mean) * (f.values[i] - mean) * J[i]; });
    double scale = trap([&](std::size_t i) { return f.values[i] * f.values[i] * J[i]; });
    if (!(den > 1e-24 * scale)) return kInf; // constant f: 0/0 after centering
    return num / den;
}

/// Outcome of an exhaustion by a monotone sequence of intervals.
struct ExhaustionResult {
    double value = 0.0;
    bool vanishing = false; ///< sequence fell below 1e-10 of its first value; value set to 0
    std::size_t steps = 0;
    std::vector<double> history;
    std::vector<double> extrapolants;
};

/**
 * @brief Drives eval(n), n = 0, 1, ..., to a limit with Aitken extrapolation on the last three values.
 *
 * Stops when two consecutive extrapolants (or raw values) agree to tol relative.
 */
template <class Eval>
ExhaustionResult exhaust(Eval&& eval, double tol, std::size_t max_steps = 40)
{
    ExhaustionResult r;
    auto& v = r.history;
    auto& ex = r.extrapolants;
    for (std::size_t n = 0; n < max_steps; ++n) {
        v.push_back(eval(n));
        r.steps = n + 1;
        double first = v.front();
        if (v.back() < 1e-10 * first) {
            r.vanishing = true;
            r.value = 0.0;
            return r;
        }
        if (n >= 1 && std::abs(v[n] - v[n - 1]) <= tol * std::abs(v[n]) * 1e-2) {
            r.value = v[n];
            return r;
        }
        if (n < 2) continue;
        double d1 = v[n - 1] - v[n - 2], d2 = v[n] - v[n - 1];
        double ratio = d1 != 0 ? d2 / d1 : 0.0;
        double e = v[n];
        if (ratio > 0 && ratio < 1) e = v[n] - d2 * d2 / (d2 - d1);
        ex.push_back(e);
        if (e < 1e-10 * first) {
            r.vanishing = true;
            r.value = 0.0;
            return r;
        }
        std::size_t m = ex.size();
        if (m >= 2 && std::abs(ex[m - 1] - ex[m - 2]) <= tol * std::abs(ex[m - 1])) {
            r.value = ex[m - 1];
            return r;
        }
    }
    throw SolverError("exhaustion did not converge within " + std::to_string(max_steps) + " steps");
}

/**
 * @brief Poincare constant of J_{K,N,h} on (lo, hi), exhausting singular or infinite ends.
 *
 * An end is singular when it is infinite or sits on the boundary of the support.
 * Finite singular ends retreat as eps_n = eps0 2^{-n}; infinite ends grow as R0 2^n.
 */
inline ExhaustionResult sl_eigenvalue_exhaustion(const CurvatureDimension& cd, double h, double lo, double hi,
                                                 double tol = 1e-8, double eps0 = -1.0, double R0 = 1.0)
{
    Interval s = model_support(cd, h);
    double a = std::max(lo, s.lo), b = std::min(hi, s.hi);
    if (!(a < b)) throw DomainError("empty interval after intersecting with the support");
    auto at_edge = [](double x, double e) { return std::isfinite(e) && std::abs(x - e) <= 1e-12 * std::max(1.0, std::abs(x)); };
    bool left = !std::isfinite(a) || at_edge(a, s.lo);
    bool right = !std::isfinite(b) || at_edge(b, s.hi);
    ModelMeasure(cd, h, a, b); // validates finite mass
    double inner = std::min(1e-2 * tol, 1e-9);
    if (!left && !right) {
        ExhaustionResult r;
        r.value = sl_first_eigenvalue(ModelMeasure(cd, h, a, b), inner).lambda;
        r.history = {r.value};
        r.steps = 1;
        return r;
    }
    double width = b - a;
    if (eps0 <= 0) eps0 = std::isfinite(width) ? 0.1 * std::min(1.0, width / 4.0) : 0.1;
    double centre = std::isfinite(a) ? (std::isfinite(b) ? 0.5 * (a + b) : a) : (std::isfinite(b) ? b : 0.0);
    auto eval = [&](std::size_t n) {
        double e = eps0 * std::ldexp(1.0, -static_cast<int>(n));
        double R = R0 * std::ldexp(1.0, static_cast<int>(n));
        double an = !left ? a : (std::isfinite(a) ? a + e : centre - R);
        double bn = !right ? b : (std::isfinite(b) ? b - e : centre + R);
        ModelMeasure m;
        m.cd = cd;
        m.h = h;
        m.a = an;
        m.b = bn;
        return sl_first_eigenvalue(m, inner).lambda;
    };
    return exhaust(eval, tol);
}

} // namespace cdd

#endif
