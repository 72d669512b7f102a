/** @file bounds.hpp
 *  @brief Sharp Poincare, p-Poincare and log-Sobolev lower bounds under CDD(K,N,D),
 *  and (h,d) monotonicity sweeps.
 */
#ifndef CDD_BOUNDS_HPP
#define CDD_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hardy.hpp"
#include "means.hpp"
#include "model_density.hpp"
#include "plap_solver.hpp"
#include "sl_solver.hpp"

namespace cdd {

enum class Inequality { poincare, p_poincare, log_sobolev };

inline std::string to_string(Inequality i)
{
    switch (i) {
    case Inequality::poincare: return "poincare";
    case Inequality::p_poincare: return "p-poincare";
    case Inequality::log_sobolev: return "log-sobolev";
    }
    return "?";
}

struct BoundRequest {
    Inequality inequality = Inequality::poincare;
    double K = 0.0;
    double N = kInf;
    double D = kInf;
    std::optional<double> p;
    double tol = 1e-8;       ///< relative tolerance of regular solves
    double limit_tol = 1e-5; ///< stopping tolerance of epsilon/R limits
};

struct BoundResult {
    double value = 0.0;
    std::string case_label;
    std::string method; ///< closed_form | sl_solve | sl_exhaustion | plap_solve | bg_closed
    Exactness exactness = Exactness::exact;
    std::map<std::string, double> diagnostics;
    std::string note;
};

namespace detail {

inline void check_common(const BoundRequest& r)
{
    if (!std::isfinite(r.K)) throw DomainError("K must be finite");
    if (!(r.D > 0) || std::isnan(r.D)) throw DomainError("D must be positive (or inf)");
    if (std::isnan(r.N) || (std::isinf(r.N) && r.N < 0)) throw DomainError("N must be a real number or inf");
    if (r.N > 0 && r.N <= 1)
        throw DomainError("N in (0,1] lies outside the curvature-dimension theory");
    if (!(r.tol > 0) || !(r.limit_tol > 0)) throw DomainError("tolerances must be positive");
}

inline void check_proviso(double K, double N, double D)
{
    if (K < 0 && N <= 0) {
        double l = l_delta_of(K, N);
        if (D >= l)
            throw ProvisoError("proviso violated: K < 0 and N <= 0 require D < l_delta = " + std::to_string(l), l);
    }
}

inline BoundResult closed(double v, std::string label, std::string note = "")
{
    BoundResult r;
    r.value = v;
    r.case_label = std::move(label);
    r.method = "closed_form";
    r.note = std::move(note);
    return r;
}

inline BoundResult symmetric_solve(const BoundRequest& q, std::string label)
{
    ModelMeasure m(CurvatureDimension(q.K, q.N), 0.0, -q.D / 2, q.D / 2);
    EigenResult e = sl_first_eigenvalue(m, q.tol);
    BoundResult r;
    r.value = e.lambda;
    r.case_label = std::move(label);
    r.method = "sl_solve";
    r.diagnostics["phase_residual"] = e.phase_residual;
    r.diagnostics["iterations"] = e.iterations;
    r.diagnostics["rayleigh"] = e.rayleigh;
    return r;
}

inline EndpointProfile anomalous_profile(double K, double N, double lo, double hi)
{
    EndpointProfile w;
    double d = delta_of(K, N);
    w.kind = d > 0 ? EndpointProfile::Kind::sin : (d < 0 ? EndpointProfile::Kind::sinh : EndpointProfile::Kind::linear);
    w.omega = std::sqrt(std::abs(d));
    w.exponent = N - 1.0;
    w.a = lo;
    w.b = hi;
    return w;
}

/**
 * Limit eps -> 0 of Lambda(si_delta^{N-1}, [eps, eps+D]) for N in [-1,0], solved on (0, D) directly.
 * The limit eigenfunction is the recessive solution f ~ x^{2-N} at 0, i.e. phi(x) ~ alpha x/(2-N).
 * Left phase forward from x0, right phase backward from D, matched where both directions are stable.
 */
inline EigenResult anomalous_shoot(double K, double N, double D, double tol)
{
    EndpointProfile w = anomalous_profile(K, N, 0.0, D);
    double x0 = 1e-4 * std::min(D, 1.0);
    double c = w.kind == EndpointProfile::Kind::sinh ? std::min(0.5 * D, 1.0 / w.omega) : 0.5 * D;
    OdeOptions opt = phase_ode_options(tol);
    auto mismatch = [&](double alpha) {
        auto rhs = [&](double x, const std::array<double, 1>& s) {
            return std::array<double, 1>{alpha + w.log_derivative(x) * std::sin(s[0]) * std::cos(s[0])};
        };
        std::array<double, 1> left{alpha * x0 / (2.0 - N)}, right{kPi / 2};
        integrate_dopri5(rhs, x0, c, left, opt);
        integrate_backward(rhs, D, c, right, opt);
        return left[0] - right[0];
    };
    auto [alpha, its] = bracket_and_bisect(mismatch, kPi / (2 * D), tol / 2, SolverOptions{});
    EigenResult r;
    r.lambda = r.shooting_lambda = alpha * alpha;
    r.phase_residual = mismatch(alpha);
    r.iterations = its;
    r.matching_point = c;
    return r;
}

} // namespace detail

/**
 * @brief lim_{eps->0} Lambda(si_delta^{N-1}, [eps, eps+D]) for N in [-1,0].
 *
 * eps_n = 0.1 * 2^{-n} with Aitken extrapolation; for K > 0 and D = inf each eps-value is itself
 * the limit R -> inf of [eps, eps+R] (inner limit first). Converges like eps^{-N}, so it can
 * stall near N = 0; see recessive_limit.
 */
inline ExhaustionResult anomalous_limit(double K, double N, double D, double tol_limit = 1e-5, double tol_solve = 1e-10,
                                        std::size_t max_steps = 40)
{
    if (!(N >= -1.0 && N <= 0.0)) throw DomainError("the anomalous branch needs N in [-1,0]");
    detail::check_proviso(K, N, D);
    double l = l_delta_of(K, N);
    if (std::isinf(D) && K <= 0) {
        ExhaustionResult r;
        r.vanishing = true;
        return r;
    }
    auto solve = [&](double lo, double hi) { return sl_first_eigenvalue(detail::anomalous_profile(K, N, lo, hi), tol_solve).lambda; };
    std::size_t n_skip = 0;
    if (std::isfinite(l))
        while (0.1 * std::ldexp(1.0, -static_cast<int>(n_skip)) + D >= l * (1 - 1e-9)) ++n_skip;
    auto eval = [&](std::size_t n) {
        double eps = 0.1 * std::ldexp(1.0, -static_cast<int>(n + n_skip));
        if (std::isfinite(D)) return solve(eps, eps + D);
        auto inner = [&](std::size_t m) { return solve(eps, eps + std::ldexp(1.0, static_cast<int>(m))); };
        return exhaust(inner, tol_limit * 0.1).value;
    };
    return exhaust(eval, tol_limit, max_steps);
}

/**
 * @brief The same limit computed without an eps-sequence: the recessive-endpoint problem on (0, D).
 *
 * For D = inf (K > 0) the finite-D limits are exhausted in D = 2^n.
 */
inline ExhaustionResult recessive_limit(double K, double N, double D, double tol_limit = 1e-5, double tol_solve = 1e-10)
{
    if (!(N >= -1.0 && N <= 0.0)) throw DomainError("the anomalous branch needs N in [-1,0]");
    detail::check_proviso(K, N, D);
    ExhaustionResult r;
    if (std::isinf(D) && K <= 0) {
        r.vanishing = true;
        return r;
    }
    if (std::isfinite(D)) {
        r.value = detail::anomalous_shoot(K, N, D, tol_solve).lambda;
        r.history = {r.value};
        r.steps = 1;
        return r;
    }
    return exhaust([&](std::size_t n) { return detail::anomalous_shoot(K, N, std::ldexp(1.0, static_cast<int>(n)), tol_solve).lambda; },
                   tol_limit);
}

/** @brief Sharp Poincare lower bound lambda*_{K,N,D} by the four-family case table. */
inline BoundResult poincare_bound(const BoundRequest& q)
{
    detail::check_common(q);
    double K = q.K, N = q.N, D = q.D;
    if (N > 1 && N < 2)
        throw UnsupportedRangeError("N in (1,2) is not covered: the bounds are derived for N in (-inf,0] u [2,inf]");
    detail::check_proviso(K, N, D);
    bool finite_D = std::isfinite(D);

    if (is_inf(N)) {
        if (K > 0) return finite_D ? detail::symmetric_solve(q, "2a") : detail::closed(K, "2a");
        if (K < 0) return finite_D ? detail::symmetric_solve(q, "2b") : detail::closed(0.0, "2b");
        return detail::closed(finite_D ? kPi * kPi / (D * D) : 0.0, "2c");
    }
    if (N >= 2) {
        double l = l_delta_of(K, N);
        if (K > 0) return D < l ? detail::symmetric_solve(q, "1a") : detail::closed(K * N / (N - 1), "1a");
        if (K < 0) return finite_D ? detail::symmetric_solve(q, "1b") : detail::closed(0.0, "1b");
        return detail::closed(finite_D ? kPi * kPi / (D * D) : 0.0, "1c");
    }
    if (N <= -1) {
        if (K < 0) return detail::symmetric_solve(q, "3a");
        if (K > 0) return finite_D ? detail::symmetric_solve(q, "3b") : detail::closed(K * N / (N - 1), "3b");
        return detail::closed(finite_D ? kPi * kPi / (D * D) : 0.0, "3c");
    }
    std::string label = K < 0 ? "4a" : (K > 0 ? "4b" : "4c");
    if (!finite_D && K <= 0) return detail::closed(0.0, label);
    double tol_solve = std::min(q.tol, 1e-10);
    ExhaustionResult rec = recessive_limit(K, N, D, q.limit_tol, tol_solve);
    BoundResult r;
    r.case_label = label;
    r.method = "sl_exhaustion";
    r.diagnostics["recessive_limit"] = rec.value;
    try {
        ExhaustionResult ex = anomalous_limit(K, N, D, q.limit_tol, tol_solve);
        r.value = ex.value;
        r.diagnostics["steps"] = static_cast<double>(ex.steps);
        if (!ex.history.empty()) r.diagnostics["last_raw"] = ex.history.back();
        r.diagnostics["vanishing"] = ex.vanishing ? 1.0 : 0.0;
        r.diagnostics["eps_vs_recessive"] = std::abs(ex.value - rec.value) / rec.value;
        if (!finite_D) r.note = "double limit: inner R -> inf, outer eps -> 0";
    } catch (const SolverError& e) {
        r.value = rec.value;
        r.diagnostics["eps_sequence_failed"] = 1.0;
        r.note = std::string("eps-sequence did not converge (") + e.what() + "); value from the recessive-endpoint problem";
    }
    return r;
}

/** @brief Sharp p-Poincare bound: p-Laplacian eigenvalue of co_delta^{N-1} on [-D_delta/2, D_delta/2]. */
inline BoundResult p_poincare_bound(const BoundRequest& q)
{
    detail::check_common(q);
    if (!q.p) throw DomainError("p-poincare needs --p");
    double p = *q.p;
    if (!(p > 1) || !std::isfinite(p)) throw DomainError("p must lie in (1, inf)");
    double K = q.K, N = q.N, D = q.D;
    if (N < 2) throw UnsupportedRangeError("p-poincare bounds are available for N in [2,inf] only");
    CurvatureDimension cd(K, N);
    std::string fam = is_inf(N) ? "2" : "1";
    std::string label = fam + (K > 0 ? "a" : (K < 0 ? "b" : "c"));
    double l = cd.l_delta();
    double Dd = std::min(D, l);
    PTrig tr(p);
    BoundResult r;
    r.case_label = label;
    r.method = "plap_solve";
    r.diagnostics["p"] = p;
    auto solve = [&](double lo, double hi) {
        return plap_first_eigenvalue(ModelMeasure(cd, 0.0, lo, hi), tr, std::min(q.tol, 1e-10)).lambda;
    };
    if (std::isinf(Dd)) {
        if (K <= 0) return detail::closed(0.0, label, "no p-Poincare inequality for K <= 0 on an unbounded diameter");
        ExhaustionResult ex = exhaust([&](std::size_t n) {
            double R = std::ldexp(1.0, static_cast<int>(n));
            return solve(-R, R);
        }, q.limit_tol);
        r.value = ex.value;
        r.diagnostics["steps"] = static_cast<double>(ex.steps);
        return r;
    }
    if (K > 0 && D >= l) {
        ExhaustionResult ex = exhaust([&](std::size_t n) {
            double e = 0.1 * std::ldexp(1.0, -static_cast<int>(n));
            return solve(-l / 2 + e, l / 2 - e);
        }, q.limit_tol);
        r.value = ex.value;
        r.diagnostics["steps"] = static_cast<double>(ex.steps);
        return r;
    }
    EigenResult e = plap_first_eigenvalue(ModelMeasure(cd, 0.0, -Dd / 2, Dd / 2), tr, q.tol);
    r.value = e.lambda;
    r.diagnostics["phase_residual"] = e.phase_residual;
    r.diagnostics["iterations"] = e.iterations;
    return r;
}

/** @brief Log-Sobolev bound: closed form up to constants, with the BG bracket of e^{-Kx^2/2} on [-D/2, D/2]. */
inline BoundResult log_sobolev_bound(const BoundRequest& q, double C_BG = kDefaultCBG, std::size_t grid = 4001)
{
    detail::check_common(q);
    if (q.N < 2) throw UnsupportedRangeError("log-Sobolev bounds are available for N in [2,inf] only");
    ClosedBound c = ls_bound_closed(q.K, q.D);
    BoundResult r;
    r.value = c.value;
    r.exactness = c.exactness;
    r.case_label = q.K > 0 ? "LS-a" : (q.K == 0 ? "LS-b" : "LS-c");
    r.method = "bg_closed";
    r.note = c.note;
    double half = std::isfinite(q.D) ? q.D / 2 : (q.K > 0 ? 8.0 / std::sqrt(q.K) : kInf);
    if (std::isfinite(half)) {
        GridDensity g = sample_density(ModelMeasure(CurvatureDimension(q.K, kInf), 0.0, -half, half), grid);
        TwoSidedEstimate bg = bobkov_gotze_estimate(build_distribution(g), C_BG);
        r.diagnostics["bg_b_minus"] = bg.b_minus;
        r.diagnostics["bg_b_plus"] = bg.b_plus;
        r.diagnostics["bg_lower"] = bg.lower;
        r.diagnostics["bg_upper"] = bg.upper;
        r.diagnostics["C_BG"] = C_BG;
    }
    return r;
}

inline BoundResult compute_bound(const BoundRequest& q)
{
    switch (q.inequality) {
    case Inequality::poincare: return poincare_bound(q);
    case Inequality::p_poincare: return p_poincare_bound(q);
    case Inequality::log_sobolev: return log_sobolev_bound(q);
    }
    throw DomainError("unknown inequality");
}

struct SweepRow {
    double param = 0.0;
    double lambda = 0.0;
    double residual = 0.0;
    std::string flag; ///< ok | out_of_domain | violation
};

struct SweepResult {
    std::vector<SweepRow> rows;
    bool passed = true;
    std::string regime;
    std::size_t out_of_domain = 0;
    double max_relative_spread = 0.0; ///< (max - min)/max over in-domain rows
};

namespace detail {

inline std::vector<SweepRow> sweep_rows(const CurvatureDimension& cd, const std::vector<std::pair<double, double>>& hd,
                                        const std::vector<double>& params, double tol)
{
    std::vector<std::future<SweepRow>> fut;
    for (std::size_t i = 0; i < hd.size(); ++i) {
        fut.push_back(std::async(std::launch::async, [&, i] {
            SweepRow row;
            row.param = params[i];
            auto [h, d] = hd[i];
            ModelMeasure m;
            m.cd = cd;
            m.h = h;
            m.a = -d / 2;
            m.b = d / 2;
            if (!(d > 0) || !m.regular()) {
                row.flag = "out_of_domain";
                row.lambda = std::nan("");
                return row;
            }
            EigenResult e = sl_first_eigenvalue(m, tol);
            row.lambda = e.lambda;
            row.residual = e.phase_residual;
            row.flag = "ok";
            return row;
        }));
    }
    std::vector<SweepRow> rows;
    for (auto& f : fut) rows.push_back(f.get());
    return rows;
}

// Orders in-domain rows by key and checks first differences: dir = +1 non-decreasing, -1 non-increasing, 0 constant.
inline void judge(SweepResult& s, const std::vector<double>& key, int dir, double slack_rel, double const_rel)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        if (s.rows[i].flag == "ok") idx.push_back(i);
        else ++s.out_of_domain;
    }
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return key[a] < key[b]; });
    double lo = kInf, hi = -kInf;
    for (auto i : idx) {
        lo = std::min(lo, s.rows[i].lambda);
        hi = std::max(hi, s.rows[i].lambda);
    }
    if (!idx.empty()) s.max_relative_spread = (hi - lo) / hi;
    if (dir == 0) {
        s.passed = s.max_relative_spread <= const_rel;
        if (!s.passed)
            for (auto i : idx) s.rows[i].flag = "violation";
        return;
    }
    for (std::size_t k = 1; k < idx.size(); ++k) {
        double prev = s.rows[idx[k - 1]].lambda, cur = s.rows[idx[k]].lambda;
        double diff = (cur - prev) * dir;
        if (diff < -slack_rel * std::max(std::abs(prev), std::abs(cur))) {
            s.rows[idx[k]].flag = "violation";
            s.passed = false;
        }
    }
}

} // namespace detail

/** @brief lambda(h, d) over h for fixed d; verdict against the N-regime of the |h|-monotonicity. */
inline SweepResult monotonicity_sweep(double K, double N, double d, const std::vector<double>& h_values, double tol = 1e-9)
{
    CurvatureDimension cd(K, N);
    std::vector<std::pair<double, double>> hd;
    for (double h : h_values) hd.emplace_back(h, d);
    SweepResult s;
    s.rows = detail::sweep_rows(cd, hd, h_values, tol);
    std::vector<double> key;
    for (double h : h_values) key.push_back(std::abs(h));
    int dir;
    if (N == -1.0) {
        dir = 0;
        s.regime = "constant in |h|";
    } else if (N > -1.0 && N <= 0.0) {
        dir = -1;
        s.regime = "non-increasing in |h|";
    } else {
        dir = 1;
        s.regime = "non-decreasing in |h|";
    }
    detail::judge(s, key, dir, 100 * tol, 1e-6);
    return s;
}

/** @brief lambda(h, d) over d for fixed h; verdict: non-increasing in d. */
inline SweepResult diameter_sweep(double K, double N, double h, const std::vector<double>& d_values, double tol = 1e-9)
{
    CurvatureDimension cd(K, N);
    std::vector<std::pair<double, double>> hd;
    for (double d : d_values) hd.emplace_back(h, d);
    SweepResult s;
    s.rows = detail::sweep_rows(cd, hd, d_values, tol);
    s.regime = "non-increasing in d";
    detail::judge(s, d_values, -1, 100 * tol, 0.0);
    return s;
}

} // namespace cdd

#endif
