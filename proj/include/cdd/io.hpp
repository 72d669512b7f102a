/** @file io.hpp
 *  @brief JSON, CSV and text renderings of solver, estimator, bound and sweep results.
 *
 *  Non-finite numbers are written to JSON as the strings "inf", "-inf" and "nan".
 */
#ifndef CDD_IO_HPP
#define CDD_IO_HPP

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bounds.hpp"
#include "hardy.hpp"
#include "model_density.hpp"
#include "sl_solver.hpp"

namespace cdd {

using Json = nlohmann::ordered_json;

inline Json num(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline Json grid_json(const GridDensity& g)
{
    Json vals = Json::array();
    for (double v : g.values) vals.push_back(num(v));
    return {{"x0", num(g.x0)}, {"dx", num(g.dx)}, {"values", vals}};
}

inline Json to_json(const EigenResult& r)
{
    Json j{{"lambda", num(r.lambda)},
           {"residual", num(r.phase_residual)},
           {"iterations", r.iterations},
           {"rayleigh", num(r.rayleigh)},
           {"eigenfunction", grid_json(r.eigenfunction)}};
    j["p"] = r.p ? num(*r.p) : Json(nullptr);
    return j;
}

inline Json to_json(const TwoSidedEstimate& e)
{
    return {{"b_minus", num(e.b_minus)},   {"b_plus", num(e.b_plus)},
            {"lower", num(e.lower)},       {"upper", num(e.upper)},
            {"method", e.method},          {"constants_used", e.constants_used},
            {"truncation_dominated", e.truncation_dominated}};
}

inline Json to_json(const BoundResult& r)
{
    Json d = Json::object();
    for (const auto& [k, v] : r.diagnostics) d[k] = num(v);
    Json j{{"value", num(r.value)},
           {"case_label", r.case_label},
           {"method", r.method},
           {"exactness", to_string(r.exactness)},
           {"diagnostics", d}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline Json to_json(const SweepResult& s, const std::string& param)
{
    Json rows = Json::array();
    for (const auto& r : s.rows)
        rows.push_back({{param, num(r.param)}, {"lambda", num(r.lambda)}, {"residual", num(r.residual)}, {"flag", r.flag}});
    return {{"param", param},
            {"regime", s.regime},
            {"verdict", s.passed ? "PASS" : "FAIL"},
            {"out_of_domain", s.out_of_domain},
            {"max_relative_spread", num(s.max_relative_spread)},
            {"rows", rows}};
}

inline Json to_json(const CdReport& r, const std::string& mode)
{
    Json loc = Json::array();
    for (double x : r.violation_locations) loc.push_back(num(x));
    return {{"mode", mode},
            {"passed", r.passed},
            {"checked", r.checked},
            {"max_violation", num(r.max_violation)},
            {"min_residual", num(r.min_residual)},
            {"violation_locations", loc}};
}

/// Sweep table with columns h_or_d, lambda, residual, verdict_flag.
inline void write_sweep_csv(std::ostream& out, const SweepResult& s, const std::string& param)
{
    out << "# param=" << param << " regime=" << s.regime << " verdict=" << (s.passed ? "PASS" : "FAIL") << '\n';
    out << "h_or_d,lambda,residual,verdict_flag\n";
    out.precision(17);
    for (const auto& r : s.rows) out << r.param << ',' << r.lambda << ',' << r.residual << ',' << r.flag << '\n';
}

inline std::string to_text(const BoundResult& r)
{
    std::ostringstream o;
    o.precision(12);
    o << "value      " << r.value << '\n'
      << "case       " << r.case_label << '\n'
      << "method     " << r.method << '\n'
      << "exactness  " << to_string(r.exactness) << '\n';
    for (const auto& [k, v] : r.diagnostics) o << "  " << k << " = " << v << '\n';
    if (!r.note.empty()) o << "note       " << r.note << '\n';
    return o.str();
}

inline std::string to_text(const SweepResult& s, const std::string& param)
{
    std::ostringstream o;
    o.precision(12);
    for (const auto& r : s.rows) o << param << '=' << r.param << "  lambda=" << r.lambda << "  " << r.flag << '\n';
    o << "verdict " << (s.passed ? "PASS" : "FAIL") << " (" << s.regime << ")\n";
    return o.str();
}

inline std::string to_text(const CdReport& r, const std::string& mode)
{
    std::ostringstream o;
    o.precision(6);
    o << mode << ": " << (r.passed ? "clean" : "VIOLATED") << ", checked " << r.checked << ", max violation " << r.max_violation
      << ", min residual " << r.min_residual << '\n';
    return o.str();
}

} // namespace cdd

#endif
