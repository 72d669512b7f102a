/** @file model_density.hpp
 *  @brief Model densities J_{K,N,h}, their canonical forms, sampling and CD(K,N) checks.
 */
#ifndef CDD_MODEL_DENSITY_HPP
#define CDD_MODEL_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "means.hpp"

namespace cdd {

/// si_delta(x): sin(sqrt(d)x)/sqrt(d), x, or sinh(sqrt(-d)x)/sqrt(-d).
inline double si_delta(double delta, double x)
{
    if (delta > 0) return std::sin(std::sqrt(delta) * x) / std::sqrt(delta);
    if (delta < 0) return std::sinh(std::sqrt(-delta) * x) / std::sqrt(-delta);
    return x;
}

/// co_delta(x): cos(sqrt(d)x), 1, or cosh(sqrt(-d)x).
inline double co_delta(double delta, double x)
{
    if (delta > 0) return std::cos(std::sqrt(delta) * x);
    if (delta < 0) return std::cosh(std::sqrt(-delta) * x);
    return 1.0;
}

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;
    double length() const { return hi - lo; }
    bool contains_open(double x) const { return x > lo && x < hi; }
};

/** @brief Maximal open interval around 0 on which J_{K,N,h} is positive and finite. */
inline Interval model_support(const CurvatureDimension& cd, double h)
{
    if (cd.infinite_N()) return {};
    double d = cd.delta();
    double ct = h / (cd.N - 1.0);
    if (d > 0) {
        double w = std::sqrt(d);
        double phi = std::atan(ct / w);
        return {(phi - kPi / 2) / w, (phi + kPi / 2) / w};
    }
    if (d == 0) {
        if (ct > 0) return {-1.0 / ct, kInf};
        if (ct < 0) return {-kInf, -1.0 / ct};
        return {};
    }
    double r = std::sqrt(-d);
    double c = ct / r;
    if (std::abs(c) <= 1.0) return {};
    double x0 = -std::atanh(1.0 / c) / r;
    return c > 0 ? Interval{x0, kInf} : Interval{-kInf, x0};
}

/** @brief J_{K,N,h}(x). Outside the support: 0 for N > 1, +inf for N <= 0. */
inline double model_density_value(const CurvatureDimension& cd, double h, double x)
{
    if (cd.infinite_N()) return std::exp(h * x - cd.K * x * x / 2.0);
    Interval s = model_support(cd, h);
    double e = cd.N - 1.0;
    if (!s.contains_open(x)) return e > 0 ? 0.0 : kInf;
    double d = cd.delta();
    double base = co_delta(d, x) + h / e * si_delta(d, x);
    return std::pow(base, e);
}

/** @brief (log J_{K,N,h})'(x) inside the support. */
inline double model_log_derivative(const CurvatureDimension& cd, double h, double x)
{
    if (cd.infinite_N()) return h - cd.K * x;
    double d = cd.delta();
    double e = cd.N - 1.0;
    double base = co_delta(d, x) + h / e * si_delta(d, x);
    double dbase = -d * si_delta(d, x) + h / e * co_delta(d, x);
    return e * dbase / base;
}

/// Model density restricted to [a, b] (endpoints may be infinite).
struct ModelMeasure {
    CurvatureDimension cd;
    double h = 0.0;
    double a = -kInf;
    double b = kInf;

    ModelMeasure() = default;
    ModelMeasure(CurvatureDimension cd_, double h_, double a_, double b_) : cd(cd_), h(h_), a(a_), b(b_) { validate(); }

    double value(double x) const { return model_density_value(cd, h, x); }
    double log_derivative(double x) const { return model_log_derivative(cd, h, x); }
    double lower() const { return a; }
    double upper() const { return b; }
    Interval support() const { return model_support(cd, h); }

    /// Both endpoints finite and strictly inside the support.
    bool regular() const
    {
        Interval s = support();
        return std::isfinite(a) && std::isfinite(b) && s.contains_open(a) && s.contains_open(b);
    }

    void validate() const
    {
        if (!(a < b)) throw DomainError("model measure needs a < b");
        Interval s = support();
        double slack = 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
        if (a < s.lo - slack || b > s.hi + slack) throw DomainError("interval leaves the support of J_{K,N,h}");
        if (!end_integrable(a, s.lo, -1) || !end_integrable(b, s.hi, +1))
            throw DomainError("J_{K,N,h} has infinite mass on the requested interval");
    }

private:
    bool end_integrable(double end, double sup_end, int dir) const
    {
        double N = cd.N;
        if (std::isinf(end)) {
            if (cd.infinite_N()) return cd.K > 0 || (cd.K == 0 && h * dir < 0);
            double d = cd.delta();
            if (d < 0) {
                double c = h / (N - 1.0) / std::sqrt(-d);
                if (std::abs(std::abs(c) - 1.0) <= 1e-14) return (N - 1.0) * c * dir < 0;
                return N < 1;
            }
            if (d == 0) return h != 0 && N < 0;
            return false;
        }
        if (std::isfinite(sup_end) && std::abs(end - sup_end) <= 1e-12 * std::max(1.0, std::abs(end))) return N > 1;
        return true;
    }
};

/// Case labels of the canonical form table.
enum class CanonicalCase { a, b1, b2, c1, c2, c3, d1, d2 };

inline std::string to_string(CanonicalCase c)
{
    switch (c) {
    case CanonicalCase::a: return "a";
    case CanonicalCase::b1: return "b1";
    case CanonicalCase::b2: return "b2";
    case CanonicalCase::c1: return "c1";
    case CanonicalCase::c2: return "c2";
    case CanonicalCase::c3: return "c3";
    case CanonicalCase::d1: return "d1";
    case CanonicalCase::d2: return "d2";
    }
    return "?";
}

/** @brief J(x) = scale * Y(sigma*(x + shift)), sigma = -1 when mirrored. Shift in x units. */
struct CanonicalForm {
    CanonicalCase tag = CanonicalCase::b2;
    double shift = 0.0;
    double scale = 1.0;
    bool mirrored = false;
    double rate = 0.0; // only used by d2: Y(u) = exp(rate u)
};

inline CanonicalForm canonical_form(const CurvatureDimension& cd, double h)
{
    CanonicalForm f;
    if (cd.infinite_N()) {
        if (cd.K != 0) {
            f.tag = CanonicalCase::d1;
            f.shift = -h / cd.K;
            f.scale = std::exp(h * h / (2.0 * cd.K));
        } else {
            f.tag = CanonicalCase::d2;
            f.rate = h;
        }
        return f;
    }
    double e = cd.N - 1.0;
    double d = cd.delta();
    double ct = h / e;
    if (d > 0) {
        double w = std::sqrt(d);
        f.tag = CanonicalCase::a;
        f.shift = -std::atan(ct / w) / w;
        f.scale = 1.0 / std::pow(std::cos(w * f.shift), e);
    } else if (d == 0) {
        if (h == 0) return f;
        f.tag = CanonicalCase::b1;
        f.shift = e / h;
        f.scale = 1.0 / std::pow(std::abs(f.shift), e);
        f.mirrored = f.shift < 0;
    } else {
        double r = std::sqrt(-d);
        double c = ct / r;
        if (std::abs(std::abs(c) - 1.0) <= 1e-14) {
            f.tag = CanonicalCase::c3;
            f.mirrored = c < 0;
        } else if (std::abs(c) < 1.0) {
            f.tag = CanonicalCase::c1;
            f.shift = std::atanh(c) / r;
            f.scale = 1.0 / std::pow(std::cosh(r * f.shift), e);
        } else {
            f.tag = CanonicalCase::c2;
            f.shift = std::atanh(1.0 / c) / r;
            f.scale = 1.0 / std::pow(std::abs(std::sinh(r * f.shift)), e);
            f.mirrored = c < 0;
        }
    }
    return f;
}

/** @brief Profile Y of a canonical case at u; 0 or +inf (by the sign of N-1) off its domain. */
inline double canonical_profile(CanonicalCase tag, const CurvatureDimension& cd, double rate, double u)
{
    double e = cd.infinite_N() ? 0.0 : cd.N - 1.0;
    double off = e > 0 ? 0.0 : kInf;
    double d = cd.delta();
    switch (tag) {
    case CanonicalCase::a: {
        double w = std::sqrt(d);
        return std::abs(w * u) < kPi / 2 ? std::pow(std::cos(w * u), e) : off;
    }
    case CanonicalCase::b1: return u > 0 ? std::pow(u, e) : off;
    case CanonicalCase::b2: return 1.0;
    case CanonicalCase::c1: return std::pow(std::cosh(std::sqrt(-d) * u), e);
    case CanonicalCase::c2: return u > 0 ? std::pow(std::sinh(std::sqrt(-d) * u), e) : off;
    case CanonicalCase::c3: return std::exp(std::sqrt(-d) * e * u);
    case CanonicalCase::d1: return std::exp(-cd.K * u * u / 2.0);
    case CanonicalCase::d2: return std::exp(rate * u);
    }
    return off;
}

inline double canonical_value(const CanonicalForm& f, const CurvatureDimension& cd, double x)
{
    double u = (f.mirrored ? -1.0 : 1.0) * (x + f.shift);
    return f.scale * canonical_profile(f.tag, cd, f.rate, u);
}

/** @brief Samples J on n uniform points of [a,b]. Refuses infinite ends and ends within 1e-9 of a pole. */
inline GridDensity sample_density(const ModelMeasure& m, std::size_t n)
{
    if (n < 3) throw DomainError("need at least 3 samples");
    if (!std::isfinite(m.a) || !std::isfinite(m.b)) throw DomainError("sampling needs a finite window");
    Interval s = m.support();
    if (!m.cd.infinite_N() && m.cd.N <= 0) {
        if (m.a - s.lo < 1e-9 || s.hi - m.b < 1e-9) throw DomainError("endpoint within 1e-9 of a pole of J");
    }
    GridDensity g{m.a, (m.b - m.a) / static_cast<double>(n - 1), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) g.values[i] = m.value(i + 1 == n ? m.b : g.x(i));
    return g;
}

/// Result of a CD(K,N) test on a sampled density.
struct CdReport {
    bool passed = true;
    double max_violation = 0.0; ///< largest excess beyond the allowed slack
    double min_residual = kInf; ///< smallest raw residual (differential) or -largest relative gap (midpoint)
    std::size_t checked = 0;
    std::vector<double> violation_locations;
};

/**
 * @brief Differential CD test: -(log J)'' - (log J)'^2/(N-1) >= K at interior grid points.
 *
 * Second-order central differences. The slack at node i is tol + 4*e_i with
 * e_i = dx^2 (|L''''|/12 + |L'||L'''|/(3|N-1|)) + 8 eps max|L|/dx^2, so sampled
 * model densities (equality case) pass with tol = 0.
 */
inline CdReport cd_differential_check(const GridDensity& g, double K, double N, double tol = 1e-9)
{
    g.validate();
    CurvatureDimension cd(K, N);
    std::size_t n = g.size();
    if (n < 5) throw DomainError("differential check needs at least 5 samples");
    std::vector<double> L(n);
    double Lmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        L[i] = g.values[i] > 0 ? std::log(g.values[i]) : -kInf;
        if (std::isfinite(L[i])) Lmax = std::max(Lmax, std::abs(L[i]));
    }
    double h = g.dx;
    double inv_e = cd.infinite_N() ? 0.0 : 1.0 / (N - 1.0);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    CdReport r;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        std::size_t c = std::clamp<std::size_t>(i, 2, n - 3);
        bool finite = true;
        for (std::size_t j = c - 2; j <= c + 2; ++j) finite = finite && std::isfinite(L[j]);
        finite = finite && std::isfinite(L[i - 1]) && std::isfinite(L[i]) && std::isfinite(L[i + 1]);
        if (!finite) continue;
        double d1 = (L[i + 1] - L[i - 1]) / (2 * h);
        double d2 = (L[i + 1] - 2 * L[i] + L[i - 1]) / (h * h);
        double d3 = (L[c + 2] - 2 * L[c + 1] + 2 * L[c - 1] - L[c - 2]) / (2 * h * h * h);
        double d4 = (L[c + 2] - 4 * L[c + 1] + 6 * L[c] - 4 * L[c - 1] + L[c - 2]) / (h * h * h * h);
        double res = -d2 - inv_e * d1 * d1 - K;
        double err = h * h * (std::abs(d4) / 12.0 + std::abs(d1) * std::abs(d3) * std::abs(inv_e) / 3.0) +
                     8 * eps * std::max(1.0, Lmax) / (h * h) * (1 + std::abs(inv_e) * std::abs(d1) * h);
        double slack = tol + 4 * err;
        ++r.checked;
        r.min_residual = std::min(r.min_residual, res);
        if (res < -slack) {
            r.passed = false;
            r.max_violation = std::max(r.max_violation, -res - slack);
            r.violation_locations.push_back(g.x(i));
        }
    }
    return r;
}

/**
 * @brief Midpoint CD test J(x_t) >= M^{(t)}_{K,N-1}[|x1-x0|](J(x0),J(x1)) on grid-aligned triples.
 *
 * A triple fails when the relative gap (M - J(x_t))/M exceeds tol.
 */
inline CdReport cd_midpoint_check(const GridDensity& g, double K, double N, std::size_t n_triples = 2000,
                                  unsigned seed = 12345, double tol = 1e-9)
{
    g.validate();
    CurvatureDimension cd(K, N);
    double calN = cd.infinite_N() ? kInf : N - 1.0;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    CdReport r;
    for (std::size_t k = 0; k < n_triples; ++k) {
        std::size_t i0 = pick(rng), i1 = pick(rng);
        if (i0 > i1) std::swap(i0, i1);
        if (i1 - i0 < 2) continue;
        std::size_t m = std::uniform_int_distribution<std::size_t>(i0 + 1, i1 - 1)(rng);
        double t = static_cast<double>(m - i0) / static_cast<double>(i1 - i0);
        double d = g.dx * static_cast<double>(i1 - i0);
        double M = distorted_mean_M(t, K, calN, d, g.values[i0], g.values[i1]);
        double v = g.values[m];
        double gap = std::isinf(M) ? kInf : (M > 0 ? (M - v) / M : 0.0);
        ++r.checked;
        r.min_residual = std::min(r.min_residual, -gap);
        if (gap > tol) {
            r.passed = false;
            r.max_violation = std::max(r.max_violation, gap);
            r.violation_locations.push_back(g.x(m));
        }
    }
    return r;
}

} // namespace cdd

#endif
