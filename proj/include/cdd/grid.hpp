/** @file grid.hpp
 *  @brief Uniformly sampled densities, monotone cubic interpolation and CSV I/O.
 */
#ifndef CDD_GRID_HPP
#define CDD_GRID_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cdd {

/// Samples values[i] at x0 + i*dx.
struct GridDensity {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
    double x_end() const { return x(values.size() - 1); }

    void validate(bool allow_nonpositive = true) const
    {
        if (values.size() < 3) throw DomainError("grid needs at least 3 samples");
        if (!(dx > 0) || !std::isfinite(dx) || !std::isfinite(x0)) throw DomainError("grid spacing must be positive and finite");
        for (double v : values) {
            if (!std::isfinite(v)) throw DomainError("grid values must be finite");
            if (v < 0 || (!allow_nonpositive && v == 0)) throw DomainError("grid values must be non-negative");
        }
    }
};

/// Fritsch-Carlson monotone cubic interpolant of a grid.
class Pchip {
public:
    explicit Pchip(const GridDensity& g) : g_(g), m_(g.size())
    {
        const auto& y = g_.values;
        std::size_t n = y.size();
        std::vector<double> s(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) s[i] = (y[i + 1] - y[i]) / g_.dx;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (s[i - 1] * s[i] <= 0) m_[i] = 0;
            else m_[i] = 2.0 / (1.0 / s[i - 1] + 1.0 / s[i]);
        }
        m_[0] = end_slope(s[0], n > 2 ? s[1] : s[0]);
        m_[n - 1] = end_slope(s[n - 2], n > 2 ? s[n - 3] : s[n - 2]);
    }

    double value(double x) const
    {
        auto [i, u] = locate(x);
        double h = g_.dx;
        double y0 = g_.values[i], y1 = g_.values[i + 1];
        double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
        double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
        return h00 * y0 + h10 * h * m_[i] + h01 * y1 + h11 * h * m_[i + 1];
    }

    double derivative(double x) const
    {
        auto [i, u] = locate(x);
        double h = g_.dx;
        double y0 = g_.values[i], y1 = g_.values[i + 1];
        double d00 = 6 * u * u - 6 * u, d10 = 3 * u * u - 4 * u + 1;
        double d01 = -6 * u * u + 6 * u, d11 = 3 * u * u - 2 * u;
        return (d00 * y0 + d01 * y1) / h + d10 * m_[i] + d11 * m_[i + 1];
    }

    const GridDensity& grid() const { return g_; }

private:
    static double end_slope(double s0, double s1)
    {
        double m = 0.5 * (3 * s0 - s1);
        if (m * s0 <= 0) return 0;
        if (s0 * s1 <= 0 && std::abs(m) > std::abs(3 * s0)) return 3 * s0;
        return m;
    }

    std::pair<std::size_t, double> locate(double x) const
    {
        double r = (x - g_.x0) / g_.dx;
        double n1 = static_cast<double>(g_.size() - 1);
        r = std::clamp(r, 0.0, n1);
        auto i = static_cast<std::size_t>(std::min(std::floor(r), n1 - 1));
        return {i, r - static_cast<double>(i)};
    }

    GridDensity g_;
    std::vector<double> m_;
};

/// Weight view of a sampled density; needs strictly positive samples.
class InterpolatedWeight {
public:
    explicit InterpolatedWeight(const GridDensity& g) : p_((g.validate(false), g)) {}
    double value(double x) const { return p_.value(x); }
    double log_derivative(double x) const { return p_.derivative(x) / p_.value(x); }
    double lower() const { return p_.grid().x0; }
    double upper() const { return p_.grid().x_end(); }

private:
    Pchip p_;
};

/** @brief Reads "x,value" rows; '#' lines and a non-numeric header row are skipped. Spacing must be uniform. */
inline GridDensity read_grid_csv(std::istream& in)
{
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x, v;
        if (!(ss >> x >> v)) {
            if (xs.empty()) continue;
            throw DomainError("malformed CSV row: " + line);
        }
        xs.push_back(x);
        vs.push_back(v);
    }
    if (xs.size() < 3) throw DomainError("CSV needs at least 3 rows");
    GridDensity g{xs.front(), (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1), vs};
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::abs(xs[i] - g.x(i)) > 1e-6 * g.dx) throw DomainError("CSV abscissae must be uniformly spaced");
    return g;
}

inline GridDensity read_grid_csv(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open " + path);
    return read_grid_csv(f);
}

inline void write_grid_csv(std::ostream& out, const GridDensity& g, const std::vector<std::string>& comments = {},
                           const std::string& xname = "x", const std::string& vname = "value")
{
    for (const auto& c : comments) out << "# " << c << '\n';
    out << xname << ',' << vname << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < g.size(); ++i) out << g.x(i) << ',' << g.values[i] << '\n';
}

} // namespace cdd

#endif
