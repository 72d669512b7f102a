/** @file hardy.hpp
 *  @brief Muckenhoupt and Bobkov-Goetze two-sided estimates, closed-form log-Sobolev bounds,
 *  isoperimetric profile and the Cheeger/Ledoux constants of one-dimensional measures.
 */
#ifndef CDD_HARDY_HPP
#define CDD_HARDY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "means.hpp"

namespace cdd {

/// Default bracket factor for the Bobkov-Goetze estimate.
inline constexpr double kDefaultCBG = 16.0;

struct TwoSidedEstimate {
    double b_minus = 0.0;
    double b_plus = 0.0;
    double lower = 0.0;
    double upper = kInf;
    std::string method;
    std::string constants_used;
    bool truncation_dominated = false; ///< a supremum sits where the tail mass is below 1e-12
    double argmax_minus = 0.0;
    double argmax_plus = 0.0;

    /// Geometric mean of the bracket, i.e. 1/(b_minus + b_plus) for a symmetric factor.
    double midpoint() const { return std::sqrt(lower * upper); }
};

/**
 * @brief Normalized distribution of a sampled density, using its piecewise-linear interpolant.
 *
 * Masses and integrals of 1/p are exact for the interpolant; left quantities are accumulated
 * from the left end and right quantities from the right end so that small tails keep their
 * relative accuracy.
 */
class DistributionCache {
public:
    explicit DistributionCache(GridDensity g) : g_(std::move(g))
    {
        g_.validate();
        std::size_t n = g_.size();
        double dx = g_.dx;
        cell_.resize(n - 1);
        mass_ = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            cell_[i] = 0.5 * dx * (g_.values[i] + g_.values[i + 1]);
            mass_ += cell_[i];
        }
        if (!(mass_ > 0)) throw DomainError("density has zero mass");
        q_.resize(n);
        for (std::size_t i = 0; i < n; ++i) q_[i] = g_.values[i] / mass_;
        for (auto& c : cell_) c /= mass_;
        left_.assign(n, 0.0);
        right_.assign(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) left_[i] = left_[i - 1] + cell_[i - 1];
        for (std::size_t i = n - 1; i-- > 0;) right_[i] = right_[i + 1] + cell_[i];
        median_ = locate_median();
        positive_ = std::all_of(q_.begin(), q_.end(), [](double v) { return v > 0; });
        build_inverse_integrals();
    }

    const GridDensity& grid() const { return g_; }
    double mass() const { return mass_; }
    double median() const { return median_; }
    bool positive() const { return positive_; }

    /// Normalized density (piecewise linear).
    double density(double x) const
    {
        auto [i, u] = locate(x);
        return q_[i] + (q_[i + 1] - q_[i]) * u;
    }

    /// F(x) = mass of [start, x].
    double cdf(double x) const
    {
        auto [i, u] = locate(x);
        return left_[i] + g_.dx * (q_[i] * u + 0.5 * (q_[i + 1] - q_[i]) * u * u);
    }

    /// Mass of [x, end].
    double tail(double x) const
    {
        auto [i, u] = locate(x);
        return right_[i + 1] + g_.dx * (q_[i] * (1 - u) + 0.5 * (q_[i + 1] - q_[i]) * (1 - u * u));
    }

    /// int between the median and x of 1/p (non-negative on both sides).
    double inverse_integral(double x) const
    {
        auto [i, u] = locate(x);
        auto [m, um] = locate(median_);
        if (i == m) return std::abs(partial_inv(i, u) - partial_inv(i, um));
        if (x > median_) return inv_right_[i] + partial_inv(i, u);
        return inv_left_[i + 1] + (partial_inv(i, 1.0) - partial_inv(i, u));
    }

    /// Quantile F^{-1}(t).
    double quantile(double t) const
    {
        if (!(t > 0 && t < 1)) throw DomainError("quantile level must lie in (0,1)");
        return t <= 0.5 ? invert_left(t) : invert_right(1.0 - t);
    }

private:
    std::pair<std::size_t, double> locate(double x) const
    {
        double r = (x - g_.x0) / g_.dx;
        double n1 = static_cast<double>(g_.size() - 1);
        r = std::clamp(r, 0.0, n1);
        auto i = static_cast<std::size_t>(std::min(std::floor(r), n1 - 1));
        return {i, r - static_cast<double>(i)};
    }

    // int_{x_i}^{x_i + u dx} 1/q for the linear interpolant.
    double partial_inv(std::size_t i, double u) const
    {
        double q0 = q_[i], q1 = q_[i + 1];
        if (u == 0) return 0.0;
        if (q0 <= 0 || q1 <= 0) return kInf;
        double qu = q0 + (q1 - q0) * u;
        double diff = q1 - q0;
        if (std::abs(diff) <= 1e-12 * q0) return g_.dx * u / q0 * (1 - 0.5 * diff * u / q0);
        return g_.dx * (std::log(qu) - std::log(q0)) / diff;
    }

    // Solves left mass(x) = t by walking cells from the left, then a quadratic in u.
    double invert_left(double t) const
    {
        std::size_t i = static_cast<std::size_t>(std::upper_bound(left_.begin(), left_.end(), t) - left_.begin());
        i = std::clamp<std::size_t>(i, 1, g_.size() - 1) - 1;
        double rem = t - left_[i];
        return g_.x(i) + g_.dx * solve_cell(q_[i], q_[i + 1], rem / g_.dx);
    }

    double invert_right(double t) const
    {
        // right_ is decreasing; find the cell whose right mass brackets t.
        std::size_t n = g_.size();
        std::size_t j = n - 1;
        while (j > 0 && right_[j] < t) --j;
        std::size_t i = std::min(j, n - 2);
        double rem = t - right_[i + 1];
        // mass of [x, x_{i+1}] = rem: mirror the cell.
        double v = solve_cell(q_[i + 1], q_[i], rem / g_.dx);
        return g_.x(i + 1) - g_.dx * v;
    }

    // u in [0,1] with q0 u + (q1-q0) u^2/2 = m.
    static double solve_cell(double q0, double q1, double m)
    {
        double a = 0.5 * (q1 - q0), b = q0;
        double u;
        if (std::abs(a) < 1e-14 * std::max(b, 1e-300)) u = b > 0 ? m / b : 0.5;
        else {
            double disc = std::max(b * b + 4 * a * m, 0.0);
            u = 2 * m / (b + std::sqrt(disc));
        }
        return std::clamp(u, 0.0, 1.0);
    }

    double locate_median() const
    {
        double a = invert_left(0.5), b = invert_right(0.5);
        return 0.5 * (a + b);
    }

    void build_inverse_integrals()
    {
        std::size_t n = g_.size();
        inv_left_.assign(n, 0.0);
        inv_right_.assign(n, 0.0);
        auto [m, um] = locate(median_);
        // inv_right_[i] = int_median^{x_i} 1/q for i > m.
        if (m + 1 < n) inv_right_[m + 1] = partial_inv(m, 1.0) - partial_inv(m, um);
        for (std::size_t i = m + 2; i < n; ++i) inv_right_[i] = inv_right_[i - 1] + partial_inv(i - 1, 1.0);
        // inv_left_[i] = int_{x_i}^median 1/q for i <= m.
        inv_left_[m] = partial_inv(m, um);
        for (std::size_t i = m; i-- > 0;) inv_left_[i] = inv_left_[i + 1] + partial_inv(i, 1.0);
    }

    GridDensity g_;
    std::vector<double> q_, cell_, left_, right_, inv_left_, inv_right_;
    double mass_ = 0, median_ = 0;
    bool positive_ = true;
};

inline DistributionCache build_distribution(const GridDensity& g) { return DistributionCache(g); }

/// Which tail functional a supremand uses.
enum class HardyKind { muckenhoupt, bobkov_gotze };

/** @brief Supremand at x: tail-mass(x) [* log(1/tail-mass)] * int_median^x 1/p, on the side of x. */
inline double hardy_supremand(const DistributionCache& dc, HardyKind kind, double x)
{
    bool plus = x > dc.median();
    double m = plus ? dc.tail(x) : dc.cdf(x);
    if (m <= 0) return 0.0;
    double G = dc.inverse_integral(x);
    if (std::isinf(G)) return kInf;
    double v = m * G;
    if (kind == HardyKind::bobkov_gotze) v *= std::log(1.0 / m);
    return v;
}

namespace detail {

struct SupResult {
    double value = 0.0;
    double argmax = 0.0;
};

// Maximizes on grid nodes of one side of the median, then golden-section on the neighbouring cells.
inline SupResult hardy_sup(const DistributionCache& dc, HardyKind kind, bool plus)
{
    const GridDensity& g = dc.grid();
    double eta = dc.median();
    SupResult best;
    best.argmax = eta;
    std::size_t bi = 0;
    bool found = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x = g.x(i);
        if (plus ? x <= eta : x >= eta) continue;
        double v = hardy_supremand(dc, kind, x);
        if (!found || v > best.value) {
            best = {v, x};
            bi = i;
            found = true;
        }
    }
    if (!found || std::isinf(best.value)) return best;
    double lo = g.x(bi == 0 ? 0 : bi - 1), hi = g.x(std::min(bi + 1, g.size() - 1));
    if (plus) lo = std::max(lo, eta);
    else hi = std::min(hi, eta);
    auto f = [&](double x) { return hardy_supremand(dc, kind, x); };
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    double xm = 0.5 * (lo + hi);
    double fm = f(xm);
    if (fm > best.value) best = {fm, xm};
    return best;
}

inline TwoSidedEstimate hardy_estimate(const DistributionCache& dc, HardyKind kind, double C)
{
    TwoSidedEstimate e;
    SupResult m = hardy_sup(dc, kind, false), p = hardy_sup(dc, kind, true);
    e.b_minus = m.value;
    e.b_plus = p.value;
    e.argmax_minus = m.argmax;
    e.argmax_plus = p.argmax;
    double B = e.b_minus + e.b_plus;
    if (!dc.positive() || std::isinf(B) || !(B > 0)) {
        e.b_minus = dc.positive() ? e.b_minus : kInf;
        e.b_plus = dc.positive() ? e.b_plus : kInf;
        e.lower = 0.0;
        e.upper = kInf;
        return e;
    }
    e.lower = 1.0 / (C * B);
    e.upper = C / B;
    double tail_p = dc.tail(p.argmax), tail_m = dc.cdf(m.argmax);
    e.truncation_dominated = tail_p < 1e-12 || tail_m < 1e-12;
    return e;
}

} // namespace detail

/** @brief Muckenhoupt bracket 1/(4B) <= Lambda_Poi <= 4/B with B = B_- + B_+. */
inline TwoSidedEstimate muckenhoupt_estimate(const DistributionCache& dc)
{
    TwoSidedEstimate e = detail::hardy_estimate(dc, HardyKind::muckenhoupt, 4.0);
    e.method = "muckenhoupt";
    e.constants_used = "C=4";
    return e;
}

/**
 * @brief Bobkov-Goetze bracket 1/(C B) <= Lambda_LS <= C/B with B = B_- + B_+ (log-weighted).
 *
 * When a supremum sits where the tail mass is below 1e-12 the value is set by the truncation
 * of the support rather than by the measure; lower is then reported as 0.
 */
inline TwoSidedEstimate bobkov_gotze_estimate(const DistributionCache& dc, double C = kDefaultCBG)
{
    TwoSidedEstimate e = detail::hardy_estimate(dc, HardyKind::bobkov_gotze, C);
    e.method = "bobkov_gotze";
    e.constants_used = "C_BG=" + std::to_string(C);
    if (e.truncation_dominated) e.lower = 0.0;
    return e;
}

/// Sampled Hardy supremand over the grid (zero at the median).
inline GridDensity hardy_supremand_curve(const DistributionCache& dc, HardyKind kind)
{
    GridDensity out = dc.grid();
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = hardy_supremand(dc, kind, out.x(i));
    return out;
}

/** @brief Upsilon_0(k,D) = [min{1/sqrt k, D} (e^{kD^2/8} - 1)/(kD)]^{-1}. */
inline double ls_upsilon0(double k, double D)
{
    if (!(k > 0) || !(D > 0) || !std::isfinite(k) || !std::isfinite(D)) throw DomainError("Upsilon_0 needs k > 0 and 0 < D < inf");
    return k * D / (std::min(1.0 / std::sqrt(k), D) * std::expm1(k * D * D / 8.0));
}

enum class Exactness { exact, up_to_constants };

inline std::string to_string(Exactness e) { return e == Exactness::exact ? "exact" : "up_to_constants"; }

struct ClosedBound {
    double value = 0.0;
    Exactness exactness = Exactness::up_to_constants;
    std::string note;
};

/** @brief Closed-form log-Sobolev lower bound under CDD(K, inf, D). */
inline ClosedBound ls_bound_closed(double K, double D)
{
    if (!(D > 0) || std::isnan(K) || !std::isfinite(K)) throw DomainError("log-Sobolev bound needs finite K and D > 0");
    if (K > 0) return {std::isinf(D) ? K : std::max(K, 1.0 / (D * D)), Exactness::up_to_constants, ""};
    if (std::isinf(D)) return {0.0, Exactness::exact, "no log-Sobolev inequality for K <= 0 on an unbounded diameter"};
    if (K == 0) return {kPi * kPi / (D * D), Exactness::exact, ""};
    double k = -K;
    return {std::max(std::sqrt(k), 1.0 / D) * k * D / std::expm1(k * D * D / 8.0), Exactness::up_to_constants, ""};
}

/** @brief Flat isoperimetric profile min{p(F^{-1}(t)), p(F^{-1}(1-t))}. */
inline double isoperimetric_profile_flat(const DistributionCache& dc, double t)
{
    if (!(t > 0 && t < 1)) throw DomainError("t must lie in (0,1)");
    return std::min(dc.density(dc.quantile(t)), dc.density(dc.quantile(1.0 - t)));
}

namespace detail {

inline double profile_infimum(const DistributionCache& dc, const std::function<double(double)>& scale)
{
    const GridDensity& g = dc.grid();
    double tmin = std::max(std::min(dc.cdf(g.x(1)), dc.tail(g.x(g.size() - 2))), 1e-12);
    tmin = std::min(tmin, 0.25);
    std::vector<double> ts;
    for (int i = 0; i <= 400; ++i) ts.push_back(tmin * std::pow(0.5 / tmin, i / 400.0));
    for (int i = 1; i <= 400; ++i) ts.push_back(0.5 * i / 400.0);
    std::sort(ts.begin(), ts.end());
    auto f = [&](double t) { return isoperimetric_profile_flat(dc, t) / scale(t); };
    double best = kInf;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < tmin) continue;
        double v = f(ts[i]);
        if (v < best) {
            best = v;
            bi = i;
        }
    }
    double lo = ts[bi == 0 ? 0 : bi - 1], hi = ts[std::min(bi + 1, ts.size() - 1)];
    const double gr = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 60; ++it) {
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        if (f(c) < f(d)) hi = d;
        else lo = c;
    }
    return std::min(best, f(0.5 * (lo + hi)));
}

} // namespace detail

/** @brief inf over t in (0, 1/2] of I(t)/t on a geometric+linear t-grid with golden refinement. */
inline double cheeger_constant(const DistributionCache& dc)
{
    return detail::profile_infimum(dc, [](double t) { return t; });
}

/** @brief inf over t in (0, 1/2] of I(t)/(t sqrt(log 1/t)), same grid as the Cheeger constant. */
inline double ledoux_constant(const DistributionCache& dc)
{
    return detail::profile_infimum(dc, [](double t) { return t * std::sqrt(std::log(1.0 / t)); });
}

/// Interval [lo, hi] returned by the integral estimates.
struct Bracket {
    double lo = 0.0;
    double hi = kInf;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

/** @brief int_0^R e^{k x^2/2} lies in [E, 2E], E = (e^{kR^2/2} - 1)/(kR); all k, R > 0. */
inline Bracket est1_bracket(double k, double R)
{
    double E = std::expm1(k * R * R / 2.0) / (k * R);
    return {E, 2.0 * E};
}

/** @brief int_0^R e^{-k x^2/2} compared with min{1/sqrt k, R}: bracket [m/sqrt(2 pi), sqrt(2 pi) m]. */
inline Bracket est2_bracket(double k, double R)
{
    double m = std::min(1.0 / std::sqrt(k), R);
    double c = std::sqrt(2.0 * kPi);
    return {m / c, c * m};
}

/** @brief Bounds on int_a^b e^{+-k x^2/2}, 0 < a < b, from x/b <= 1 <= x/a. */
inline Bracket est3_bracket(double k, double a, double b, bool growing)
{
    double s = growing ? 1.0 : -1.0;
    double diff = std::abs(std::exp(s * k * b * b / 2.0) - std::exp(s * k * a * a / 2.0));
    return {diff / (k * b), diff / (k * a)};
}

} // namespace cdd

#endif
