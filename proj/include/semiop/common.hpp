#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace semiop {

using cx = std::complex<double>;

// Global rank / eigenvalue truncation tolerance (relative to the largest
// eigenvalue or column norm of the object at hand).
inline constexpr double kDefaultTol = 1e-10;

// Relative cutoff defining the support of a function: |f(i)| > rel * max|f|.
inline constexpr double kSupportRel = 1e-10;

// Mathematical precondition failures (operator not positive, operator does
// not admit an adjoint, range inclusion violated).  Distinct from
// std::invalid_argument, which is reserved for malformed inputs.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace semiop
