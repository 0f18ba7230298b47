#pragma once

#include <cstddef>
#include <utility>

#include "semiop/semihilbert.hpp"

namespace semiop {

// Formula-level verdict with the intermediate functions kept for reporting.
// The residual is the raw maximal pointwise violation; a failed period-2
// requirement contributes +infinity.
struct CriterionVerdict {
    std::string property;
    bool verdict = false;
    double residual = 0.0;
    std::ptrdiff_t witness_atom = -1;
    std::vector<std::pair<std::string, MeasurableFunction>> components;
    std::string note;
};

// J = h_phi * (E(u) through phi^-1), the weight governing every criterion.
MeasurableFunction j_weight(const MeasurableFunction& u, const PointMap& phi);

CriterionVerdict crit_selfadjoint(const MeasurableFunction& u, const PointMap& phi, double tol);
CriterionVerdict crit_normal(const MeasurableFunction& u, const PointMap& phi, double tol);
CriterionVerdict crit_quasinormal(const MeasurableFunction& u, const PointMap& phi, double tol);
CriterionVerdict crit_isometry(const MeasurableFunction& u, const PointMap& phi, double tol);
CriterionVerdict crit_partial_isometry(const MeasurableFunction& u, const PointMap& phi, double tol);
CriterionVerdict crit_unitary(const MeasurableFunction& u, const PointMap& phi, double tol);

// Dispatch by class.  Hyponormal has no formula-level criterion and throws
// std::invalid_argument.
CriterionVerdict criterion_for(OperatorClass property, const MeasurableFunction& u,
                               const PointMap& phi, double tol);

bool has_formula_criterion(OperatorClass property);

// Criteria relative to a positive composition operator: substitutes
// u = sqrt(h_psi) and delegates.  Unitary additionally requires the
// phi-fibers to refine the psi-fibers.  Supported properties: selfadjoint,
// isometry, partial_isometry, unitary.  Throws PreconditionError when C_psi
// is not positive, with the offending eigenvalue or asymmetry in the message.
CriterionVerdict crit_cpsi(OperatorClass property, const PointMap& psi, const PointMap& phi,
                           double tol);

bool has_cpsi_criterion(OperatorClass property);

// psi^-1(Sigma) contained in phi^-1(Sigma): every phi-fiber lies inside a
// single psi-fiber.
bool sigma_containment(const PointMap& psi, const PointMap& phi);

// Throws PreconditionError unless C_psi is mu-self-adjoint with nonnegative
// spectrum.
void require_positive_composition(const PointMap& psi, double tol);

} // namespace semiop
