/** @file plap_solver.hpp
 *  @brief First Neumann eigenvalue of the weighted one-dimensional p-Laplacian.
 *
 *  (J |f'|^{p-2} f')' + lambda J |f|^{p-2} f = 0, solved with the generalized Pruefer phase
 *  alpha f = e sin_p(phi), f' = e cos_p(phi), lambda = (p-1) alpha^p:
 *  phi' = alpha - T cos_p^{(p-1)}(phi) sin_p(phi)/(p-1), (log e)' = T |cos_p(phi)|^p/(p-1).
 */
#ifndef CDD_PLAP_SOLVER_HPP
#define CDD_PLAP_SOLVER_HPP

#include "ptrig.hpp"
#include "sl_solver.hpp"

namespace cdd {

template <Weight W>
EigenResult plap_first_eigenvalue(const W& w, const PTrig& tr, double tol = 1e-8, const SolverOptions& so = {})
{
    EigenResult r = detail::phase_shoot(w, tr, tol, so);
    r.p = tr.p();
    return r;
}

template <Weight W>
EigenResult plap_first_eigenvalue(const W& w, double p, double tol = 1e-8, const SolverOptions& so = {})
{
    PTrig tr(p);
    return plap_first_eigenvalue(w, tr, tol, so);
}

inline EigenResult plap_first_eigenvalue(const GridDensity& g, double p, double tol = 1e-8)
{
    return plap_first_eigenvalue(InterpolatedWeight(g), p, tol);
}

} // namespace cdd

#endif
