/** @file phase_shooting.hpp
 *  @brief Pruefer phase shooting shared by the linear and p-Laplacian Neumann solvers.
 *
 *  With alpha f = e sin_p(phi), f' = e cos_p(phi) and T = -(log J)':
 *    phi' = alpha - T cos_p^{(p-1)}(phi) sin_p(phi)/(p-1),   (log e)' = T |cos_p(phi)|^p/(p-1),
 *  lambda = (p-1) alpha^p. The first eigenfunction has phi(a) = -pi_p/2 and phi(b) = pi_p/2.
 *  The left phase is integrated forward and the right phase backward to the maximum c of J,
 *  so both sides run towards increasing J, which keeps the phase equilibria attracting.
 */
#ifndef CDD_PHASE_SHOOTING_HPP
#define CDD_PHASE_SHOOTING_HPP

#include <array>
#include <cmath>
#include <concepts>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "means.hpp"
#include "ode.hpp"

namespace cdd {

/// A positive weight on a finite interval with a computable log-derivative.
template <class W>
concept Weight = requires(const W& w, double x) {
    { w.value(x) } -> std::convertible_to<double>;
    { w.log_derivative(x) } -> std::convertible_to<double>;
    { w.lower() } -> std::convertible_to<double>;
    { w.upper() } -> std::convertible_to<double>;
};

struct EigenResult {
    double lambda = 0.0;
    double shooting_lambda = 0.0;  ///< bisection value before any Rayleigh refinement
    double phase_residual = 0.0;   ///< phase mismatch at the matching point for the returned alpha
    GridDensity eigenfunction;     ///< normalized so that int |f|^p J = 1, f(a) < 0 < f(b)
    int iterations = 0;
    double rayleigh = 0.0;         ///< int |f'|^p J / int |f - mean|^p J (mean only for p = 2)
    double edge_left = 0.0;        ///< |u(a)|^p J(a) for the normalization int |u|^p J = 1
    double edge_right = 0.0;       ///< |u(b)|^p J(b)
    double matching_point = 0.0;
    std::optional<double> p;       ///< set by the p-Laplacian solver
};

struct SolverOptions {
    std::size_t samples = 201;
    int max_bracket_doublings = 200;
    int max_bisections = 200;
};

/// Ordinary trigonometric functions in the interface expected by the phase engine (p = 2).
struct NativeTrig {
    double p() const { return 2.0; }
    double pi() const { return kPi; }
    double sin(double x) const { return std::sin(x); }
    double cos(double x) const { return std::cos(x); }
    double cos_pm1(double x) const { return std::cos(x); }
};

namespace detail {

template <Weight W>
void check_weight(const W& w)
{
    double a = w.lower(), b = w.upper();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw DomainError("solver needs a finite interval a < b");
    for (int k = 0; k <= 16; ++k) {
        double x = a + (b - a) * k / 16.0;
        double v = w.value(x);
        // Far tails may underflow; only a vanishing or singular weight (infinite log-derivative) is rejected.
        if (std::isnan(v) || v < 0 || !std::isfinite(w.log_derivative(x)))
            throw DomainError("weight must be positive and finite on [a,b]");
    }
}

inline OdeOptions phase_ode_options(double tol)
{
    OdeOptions o;
    o.atol = std::min(tol / 10.0, 1e-8);
    o.rtol = o.atol;
    return o;
}

/// Integrates y' = f(x, y) from x0 down to x1 < x0.
template <std::size_t M, class Rhs>
void integrate_backward(Rhs&& f, double x0, double x1, std::array<double, M>& y, const OdeOptions& opt)
{
    integrate_dopri5(
        [&](double t, const std::array<double, M>& s) {
            auto d = f(x0 - t, s);
            for (auto& v : d) v = -v;
            return d;
        },
        0.0, x0 - x1, y, opt);
}

/// Bisection for the root of g(s) on [0, hi] (g increasing, g(0) < 0), hi doubled from hi0.
template <class G>
std::pair<double, int> bracket_and_bisect(G&& g, double hi0, double tol, const SolverOptions& so)
{
    double lo = 0.0, hi = hi0;
    int it = 0;
    int dbl = 0;
    while (g(hi) <= 0) {
        lo = hi;
        hi *= 2.0;
        ++it;
        if (++dbl > so.max_bracket_doublings) throw SolverError("eigenvalue bracket not found");
    }
    int bis = 0;
    while (hi - lo > 0.5 * tol * hi) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) > 0) hi = mid;
        else lo = mid;
        ++it;
        if (++bis > so.max_bisections) throw SolverError("bisection did not reach the tolerance");
    }
    return {0.5 * (lo + hi), it};
}

/// log(J/J(a)) on the sample grid, integrated from the log-derivative.
template <Weight W>
std::vector<double> log_weight_profile(const W& w, const GridDensity& grid, const OdeOptions& opt)
{
    std::vector<double> L(grid.size(), 0.0);
    std::array<double, 1> y{0.0};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double x1 = i + 1 == grid.size() ? w.upper() : grid.x(i);
        integrate_dopri5([&](double x, const std::array<double, 1>&) { return std::array<double, 1>{w.log_derivative(x)}; },
                         grid.x(i - 1), x1, y, opt);
        L[i] = y[0];
    }
    return L;
}

template <Weight W, class Trig>
EigenResult phase_shoot(const W& w, const Trig& tr, double tol, const SolverOptions& so)
{
    if (!(tol > 0)) throw DomainError("tol must be positive");
    check_weight(w);
    const double p = tr.p();
    const double a = w.lower(), b = w.upper();
    const double half = tr.pi() / 2;
    OdeOptions opt = phase_ode_options(tol);
    auto theta = [&](double phi) { return tr.cos_pm1(phi) * tr.sin(phi) / (p - 1.0); };

    std::size_t n = std::max<std::size_t>(so.samples, 3);
    GridDensity ef{a, (b - a) / static_cast<double>(n - 1), std::vector<double>(n)};
    std::vector<double> L = log_weight_profile(w, ef, opt);
    std::size_t ic = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (L[i] > L[ic]) ic = i;
    const double c = ic + 1 == n ? b : ef.x(ic);
    const double peak = L[ic];

    auto mismatch = [&](double alpha) {
        auto rhs = [&](double x, const std::array<double, 1>& s) {
            return std::array<double, 1>{alpha + w.log_derivative(x) * theta(s[0])};
        };
        std::array<double, 1> left{-half}, right{half};
        if (c > a) integrate_dopri5(rhs, a, c, left, opt);
        if (c < b) integrate_backward(rhs, b, c, right, opt);
        return left[0] - right[0];
    };
    auto [alpha, its] = bracket_and_bisect(mismatch, tr.pi() / (b - a), tol / p, so);

    // Final pass. State: {phi, log(e^p Jt), log Jt, int |f|^p Jt, int |f'|^p Jt, int f Jt, int Jt}, Jt = J e^{-peak}/J(a).
    using S = std::array<double, 7>;
    auto rhs = [&](double x, const S& s) {
        double dl = w.log_derivative(x);
        double sp = tr.sin(s[0]);
        double cpp = std::pow(std::abs(tr.cos(s[0])), p);
        double epJ = std::exp(s[1]);
        double e = std::exp((s[1] - s[2]) / p);
        return S{alpha + dl * theta(s[0]), dl * (1.0 - p * cpp / (p - 1.0)), dl, epJ * std::pow(std::abs(sp) / alpha, p),
                 epJ * cpp, e * sp / alpha * std::exp(s[2]), std::exp(s[2])};
    };
    auto f_of = [&](const S& s) { return std::exp((s[1] - s[2]) / p) * tr.sin(s[0]) / alpha; };
    S yl{-half, L[0] - peak, L[0] - peak, 0, 0, 0, 0};
    ef.values[0] = f_of(yl);
    for (std::size_t i = 1; i <= ic; ++i) {
        integrate_dopri5(rhs, ef.x(i - 1), i + 1 == n ? b : ef.x(i), yl, opt);
        ef.values[i] = f_of(yl);
    }
    S yr{half, L[n - 1] - peak, L[n - 1] - peak, 0, 0, 0, 0};
    std::vector<double> right_vals(n, 0.0);
    right_vals[n - 1] = f_of(yr);
    for (std::size_t i = n - 1; i > ic; --i) {
        integrate_backward(rhs, i + 1 == n ? b : ef.x(i), ef.x(i - 1), yr, opt);
        right_vals[i - 1] = f_of(yr);
    }
    // Scale the right branch so that e is continuous at c; its integrals were accumulated from b down to c.
    double sc = std::exp((yl[1] - yr[1]) / p);
    for (std::size_t i = ic + 1; i < n; ++i) ef.values[i] = sc * right_vals[i];
    double scp = std::pow(sc, p);
    double I = yl[3] - scp * yr[3];
    double Id = yl[4] - scp * yr[4];
    double I0 = yl[5] - sc * yr[5];
    double M = yl[6] - yr[6];

    double log_norm = (std::log(I) + (std::isfinite(std::log(w.value(a))) ? std::log(w.value(a)) + peak : 0.0)) / p;
    double norm = std::exp(log_norm);
    for (double& v : ef.values) v /= norm;

    EigenResult r;
    r.shooting_lambda = (p - 1.0) * std::pow(alpha, p);
    r.lambda = r.shooting_lambda;
    r.phase_residual = yl[0] - yr[0];
    r.eigenfunction = std::move(ef);
    r.iterations = its;
    r.rayleigh = p == 2.0 ? Id / (I - I0 * I0 / M) : Id / I;
    r.edge_left = std::pow(alpha, -p) * std::exp(L[0] - peak) / I;
    r.edge_right = scp * std::pow(alpha, -p) * std::exp(L[n - 1] - peak) / I;
    r.matching_point = c;
    return r;
}

} // namespace detail

} // namespace cdd

#endif
