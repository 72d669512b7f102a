/** @file means.hpp
 *  @brief Distortion coefficients and the distorted/classical two-point means.
 *
 *  Dimensions are plain doubles; +infinity stands for N = infinity.
 */
#ifndef CDD_MEANS_HPP
#define CDD_MEANS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace cdd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = std::numbers::pi;

/// Width of the band around pi^2 where the limit branch is taken.
inline constexpr double kPiSqBand = 1e-12;

inline bool is_inf(double v) { return std::isinf(v) && v > 0; }

/// delta = K/(N-1); 0 for N = inf and for N = 1.
inline double delta_of(double K, double N)
{
    if (is_inf(N) || N == 1.0) return 0.0;
    return K / (N - 1.0);
}

/// pi/sqrt(delta) for delta > 0, +inf otherwise.
inline double l_delta_of(double K, double N)
{
    double d = delta_of(K, N);
    return d > 0 ? kPi / std::sqrt(d) : kInf;
}

/// Curvature-dimension pair with N in (-inf,0] u (1,inf].
struct CurvatureDimension {
    double K = 0.0;
    double N = kInf;

    CurvatureDimension() = default;
    CurvatureDimension(double K_, double N_) : K(K_), N(N_)
    {
        if (!std::isfinite(K)) throw DomainError("K must be finite");
        if (std::isnan(N) || (std::isinf(N) && N < 0)) throw DomainError("N must be a real number or inf");
        if (N > 0 && N <= 1) throw DomainError("N in (0,1] is outside the curvature-dimension theory");
    }

    bool infinite_N() const { return is_inf(N); }
    double delta() const { return delta_of(K, N); }
    double l_delta() const { return l_delta_of(K, N); }
};

namespace detail {

// sinh(t s)/sinh(s) without overflow for large s.
inline double sinh_ratio(double t, double s)
{
    if (s < 20.0) return std::sinh(t * s) / std::sinh(s);
    return std::exp((t - 1.0) * s) * (-std::expm1(-2.0 * t * s)) / (-std::expm1(-2.0 * s));
}

inline void check_t(double t)
{
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0,1]");
}

} // namespace detail

/** @brief sigma^{(t)}_{K,calN}(theta), calN in (-inf,-1] u [0,inf]. Returns +inf past the first conjugate point. */
inline double sigma(double t, double K, double calN, double theta)
{
    detail::check_t(t);
    if (!(theta >= 0)) throw DomainError("theta must be non-negative");
    if (std::isnan(calN) || (calN > -1.0 && calN < 0.0)) throw DomainError("sigma: calN in (-1,0) is not admissible");
    if (calN == 0.0 || std::isinf(calN)) return t;
    double kappa = K / calN * theta * theta;
    if (kappa >= kPi * kPi - kPiSqBand) return kInf;
    if (kappa == 0.0) return t;
    if (kappa > 0) {
        double s = std::sqrt(kappa);
        return std::sin(t * s) / std::sin(s);
    }
    return detail::sinh_ratio(t, std::sqrt(-kappa));
}

/** @brief tau^{(t)}_{K,N}(theta) = t^{1/N} sigma_{K,N-1}^{(t)}(theta)^{1-1/N}; N in (-inf,0) u [1,inf]. */
inline double tau(double t, double K, double N, double theta)
{
    detail::check_t(t);
    if (std::isnan(N) || (N > 0.0 && N < 1.0)) throw DomainError("tau: N in (0,1) is not admissible");
    if (N == 0.0) throw DomainError("tau: N = 0 has no tau coefficient; the N = 0 mean uses sigma_{K,-1} directly");
    if (std::isinf(N)) return sigma(t, K, kInf, theta);
    if (t == 0.0) return 0.0;
    double s = sigma(t, K, N - 1.0, theta);
    if (std::isinf(s)) return kInf;
    return std::pow(t, 1.0 / N) * std::pow(s, 1.0 - 1.0 / N);
}

namespace detail {

// (w1 a^{1/n} + w2 b^{1/n})^n from log w1, log w2. Log space keeps n near 0 from overflowing.
inline double log_power_mean(double lw1, double lw2, double n, double a, double b)
{
    double l1 = lw1 + std::log(a) / n, l2 = lw2 + std::log(b) / n;
    double m = std::max(l1, l2);
    if (std::isinf(m)) return m > 0 ? kInf : 0.0;
    return std::exp(n * (m + std::log(std::exp(l1 - m) + std::exp(l2 - m))));
}

} // namespace detail

/** @brief M^{(t)}_{K,calN}[d](a,b) for calN in (-inf,-1] u [0,inf]. */
inline double distorted_mean_M(double t, double K, double calN, double d, double a, double b)
{
    detail::check_t(t);
    if (!(a >= 0 && b >= 0)) throw DomainError("means need a, b >= 0");
    if (!(d >= 0)) throw DomainError("d must be non-negative");
    if (std::isnan(calN) || (calN > -1.0 && calN < 0.0)) throw DomainError("M: calN in (-1,0) is not admissible");
    if (a == 0.0 || b == 0.0) return 0.0;
    if (calN == 0.0) return std::max(a, b);
    if (std::isinf(calN)) return std::pow(a, 1.0 - t) * std::pow(b, t) * std::exp(K * t * (1.0 - t) * d * d / 2.0);
    double kappa = K / calN * d * d;
    if (kappa >= kPi * kPi - kPiSqBand) return (K > 0 && calN > 0) ? kInf : 0.0;
    return detail::log_power_mean(std::log(sigma(1.0 - t, K, calN, d)), std::log(sigma(t, K, calN, d)), calN, a, b);
}

namespace detail {

// t / sigma^{(t)}_{K,-1}(d), continuous at t = 0.
inline double t_over_sigma_m1(double t, double K, double d)
{
    if (t > 0.0) {
        double s = sigma(t, K, -1.0, d);
        return std::isinf(s) ? 0.0 : t / s;
    }
    double kappa = -K * d * d;
    if (kappa >= kPi * kPi - kPiSqBand) return 0.0;
    if (kappa > 0) return std::sin(std::sqrt(kappa)) / std::sqrt(kappa);
    if (kappa < 0) return std::sinh(std::sqrt(-kappa)) / std::sqrt(-kappa);
    return 1.0;
}

} // namespace detail

/** @brief Mtilde^{(t)}_{K,N}[d](a,b) for N in (-inf,0] u [1,inf]. */
inline double distorted_mean_Mtilde(double t, double K, double N, double d, double a, double b)
{
    detail::check_t(t);
    if (!(a >= 0 && b >= 0)) throw DomainError("means need a, b >= 0");
    if (!(d >= 0)) throw DomainError("d must be non-negative");
    if (std::isnan(N) || (N > 0.0 && N < 1.0)) throw DomainError("Mtilde: N in (0,1) is not admissible");
    if (a == 0.0 || b == 0.0) return 0.0;
    if (N == 0.0)
        return std::min(detail::t_over_sigma_m1(1.0 - t, K, d) * a, detail::t_over_sigma_m1(t, K, d) * b);
    if (std::isinf(N)) return std::pow(a, 1.0 - t) * std::pow(b, t) * std::exp(K * t * (1.0 - t) * d * d / 2.0);
    double kappa = delta_of(K, N) * d * d;
    if (kappa >= kPi * kPi - kPiSqBand) return (K > 0 && N >= 1.0) ? kInf : 0.0;
    auto log_tau = [&](double u) {
        return std::log(u) / N + (1.0 - 1.0 / N) * std::log(sigma(u, K, N - 1.0, d));
    };
    return detail::log_power_mean(log_tau(1.0 - t), log_tau(t), N, a, b);
}

/** @brief Power mean ((1-t)a^p + t b^p)^{1/p}; p = 0 geometric, p = +-inf max/min; 0 if a b = 0. */
inline double classical_mean(double p, double t, double a, double b)
{
    detail::check_t(t);
    if (!(a >= 0 && b >= 0)) throw DomainError("means need a, b >= 0");
    if (std::isnan(p)) throw DomainError("p must not be NaN");
    if (a == 0.0 || b == 0.0) return 0.0;
    if (std::isinf(p)) return p > 0 ? std::max(a, b) : std::min(a, b);
    if (p == 0.0) return std::pow(a, 1.0 - t) * std::pow(b, t);
    return std::pow((1.0 - t) * std::pow(a, p) + t * std::pow(b, p), 1.0 / p);
}

} // namespace cdd

#endif
