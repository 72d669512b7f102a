/** @file errors.hpp
 *  @brief Exception types shared by all cdd modules.
 */
#ifndef CDD_ERRORS_HPP
#define CDD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cdd {

/// Input outside the admissible parameter range.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Parameters admissible in general but outside the ranges covered by the bound routines.
class UnsupportedRangeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// K < 0, N <= 0 and a diameter at or beyond l_delta.
class ProvisoError : public DomainError {
public:
    ProvisoError(const std::string& what, double l_delta) : DomainError(what), l_delta_(l_delta) {}
    double l_delta() const { return l_delta_; }

private:
    double l_delta_;
};

/// Numerical failure (bracket not found, no convergence).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cdd

#endif
