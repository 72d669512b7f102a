/** @file ptrig.hpp
 *  @brief Generalized trigonometric functions sin_p, cos_p and pi_p.
 *
 *  sin_p inverts x = int_0^{sin_p x} (1 - s^p)^{-1/p} ds on [0, pi_p/2], is even about pi_p/2
 *  and odd about 0; |sin_p|^p + |cos_p|^p = 1.
 */
#ifndef CDD_PTRIG_HPP
#define CDD_PTRIG_HPP

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "means.hpp"

namespace cdd {

/// pi_p = 2 pi / (p sin(pi/p)).
inline double pi_p(double p)
{
    if (!(p > 1) || !std::isfinite(p)) throw DomainError("p must lie in (1, inf)");
    return 2.0 * kPi / (p * std::sin(kPi / p));
}

namespace detail {

// F_q(y) = int_0^y (1 - s^q)^{-1/q} ds and its derivative, by the binomial series in u = y^q.
inline double ptrig_F(double q, double y)
{
    double u = std::pow(y, q);
    double term = 1.0, sum = y, yk = y;
    for (int k = 1; k < 200000; ++k) {
        term *= (1.0 / q + k - 1.0) / k * u;
        yk = term * y / (q * k + 1.0);
        sum += yk;
        if (std::abs(yk) < 1e-18 * sum) break;
    }
    return sum;
}

// Solves F_q(y) = x for y in [0, 1).
inline double ptrig_invert(double q, double x, double guess)
{
    double y = std::min(std::max(guess, 0.0), 0.999999);
    for (int it = 0; it < 60; ++it) {
        double g = ptrig_F(q, y) - x;
        double dy = g * std::pow(1.0 - std::pow(y, q), 1.0 / q);
        double yn = y - dy;
        if (yn <= 0) yn = 0.5 * y;
        if (yn >= 1) yn = 0.5 * (y + 1);
        if (std::abs(yn - y) < 1e-17) return yn;
        y = yn;
    }
    return y;
}

// Hermite table of sin_q on [0, pi_q/4].
class QuarterTable {
public:
    QuarterTable() = default;
    QuarterTable(double q, std::size_t n) : q_(q), n_(n)
    {
        xmax_ = pi_p(q) / 4.0;
        h_ = xmax_ / static_cast<double>(n);
        y_.resize(n + 1);
        d_.resize(n + 1);
        double guess = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            double x = h_ * static_cast<double>(i);
            y_[i] = i == 0 ? 0.0 : ptrig_invert(q, x, guess);
            d_[i] = std::pow(1.0 - std::pow(y_[i], q), 1.0 / q);
            guess = y_[i] + h_ * d_[i];
        }
    }

    double operator()(double x) const
    {
        if (x < 4 * h_) return x == 0 ? 0.0 : ptrig_invert(q_, x, x);
        double r = std::min(x / h_, static_cast<double>(n_));
        auto i = static_cast<std::size_t>(std::min(std::floor(r), static_cast<double>(n_ - 1)));
        double u = r - static_cast<double>(i);
        double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
        double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
        return h00 * y_[i] + h10 * h_ * d_[i] + h01 * y_[i + 1] + h11 * h_ * d_[i + 1];
    }

private:
    double q_ = 2, xmax_ = 0, h_ = 0;
    std::size_t n_ = 0;
    std::vector<double> y_, d_;
};

} // namespace detail

/// Tabulated sin_p / cos_p for one exponent p.
class PTrig {
public:
    explicit PTrig(double p, std::size_t table_size = 20000)
        : p_(p), pp_(p / (p - 1.0)), pi_(pi_p(p)), sp_(p, table_size), spp_(p / (p - 1.0), table_size)
    {
    }

    double p() const { return p_; }
    double pi() const { return pi_; }

    double sin(double x) const
    {
        double s = 1.0;
        double r = reduce(x, s);
        return s * sin_half(r);
    }

    double cos(double x) const
    {
        double s = 1.0;
        double r = reduce(x, s, true);
        return s * cos_half(std::abs(r));
    }

    /// sgn(cos_p x) |cos_p x|^{p-1}, accurate near the zeros of sin_p.
    double cos_pm1(double x) const
    {
        double s = 1.0;
        double r = std::abs(reduce(x, s, true));
        if (r > pi_ / 4) return s * spp_((p_ - 1.0) * (pi_ / 2 - r));
        return s * std::pow(cos_half(r), p_ - 1.0);
    }

private:
    // Maps x to [-pi_p/2, pi_p/2]. For sin the sign stays with the argument; for cos the
    // reflection x -> pi_p - x flips the sign (flag for_cos).
    double reduce(double x, double& sign, bool for_cos = false) const
    {
        double period = 2 * pi_;
        double r = std::fmod(x + pi_ / 2, period);
        if (r < 0) r += period;
        r -= pi_ / 2;
        if (r > pi_ / 2) {
            r = pi_ - r;
            if (for_cos) sign = -1.0;
        }
        return r;
    }

    double sin_half(double r) const
    {
        double a = std::abs(r);
        double v;
        if (a <= pi_ / 4) {
            v = sp_(a);
        } else {
            double c = std::pow(spp_((p_ - 1.0) * (pi_ / 2 - a)), 1.0 / (p_ - 1.0));
            v = std::pow(1.0 - std::pow(c, p_), 1.0 / p_);
        }
        return r < 0 ? -v : v;
    }

    double cos_half(double a) const
    {
        if (a > pi_ / 4) return std::pow(spp_((p_ - 1.0) * (pi_ / 2 - a)), 1.0 / (p_ - 1.0));
        return std::pow(1.0 - std::pow(sp_(a), p_), 1.0 / p_);
    }

    double p_, pp_, pi_;
    detail::QuarterTable sp_, spp_;
};

} // namespace cdd

#endif
