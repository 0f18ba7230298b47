#pragma once

#include <optional>
#include <string>

#include "semiop/operators.hpp"

namespace semiop {

enum class OperatorClass {
    SelfAdjoint,
    Normal,
    Quasinormal,
    Isometry,
    Unitary,
    PartialIsometry,
    Hyponormal,
};

const char* to_string(OperatorClass c);
std::optional<OperatorClass> operator_class_from_string(const std::string& name);

// Matrix-level verdict for one operator class.  The residual is the raw
// deviation in the D^(1/2)-conjugated Frobenius norm; `scale` carries
// ||A|| * max(1, ||T||^2) so callers can renormalize.
struct ClassVerdict {
    std::string property;
    bool verdict = false;
    double residual = 0.0;
    double scale = 1.0;
    std::string witness;
    // Unitary only: residual of the variant using T-sharp in the second
    // identity; reported so any divergence between the two readings shows up.
    std::optional<double> alt_residual;
};

// The semi-inner product <f,g>_A = <Af,g> induced by a positive
// mu-self-adjoint A, with A^(1/2), A-dagger and a range basis cached.
class SemiInnerProduct {
public:
    explicit SemiInnerProduct(Operator a, double tol = kDefaultTol);

    const Operator& a() const { return a_; }
    const Operator& sqrt_a() const { return sqrt_a_; }
    const Operator& pinv_a() const { return pinv_a_; }
    const std::vector<MeasurableFunction>& range_basis() const { return range_basis_; }
    const SpacePtr& space() const { return a_.space(); }
    double tol() const { return tol_; }
    double lambda_max() const { return lambda_max_; }

    cx a_inner(const MeasurableFunction& f, const MeasurableFunction& g) const;
    double a_norm(const MeasurableFunction& f) const;

    // (A L)^perp in the plain mu-inner product.
    Subspace a_orthocomplement(const Subspace& l) const;

private:
    Operator a_;
    Operator sqrt_a_;
    Operator pinv_a_;
    std::vector<MeasurableFunction> range_basis_;
    double tol_;
    double lambda_max_ = 0.0;
};

// The three equivalent conditions of the range-inclusion theorem, each
// tested by its own route: rank comparison, the generalized eigenvalue
// bound for BB* <= lambda AA*, and solving AC = B through a flat-metric
// pseudo-inverse.
struct DouglasReport {
    bool range_incl = false;
    bool majorization = false;
    bool factorization = false;
    std::optional<double> lambda; // smallest feasible, when majorization holds
    std::size_t rank_a = 0;
    std::size_t rank_ab = 0;
    double factor_residual = 0.0;
};

DouglasReport douglas_check(const Operator& a, const Operator& b, double tol = kDefaultTol);

// Moore-Penrose inverse of an arbitrary operator in the mu metric
// (flat-conjugated pseudo-inverse).
Operator mu_pinv(const Operator& t, double tol = kDefaultTol);

// The unique W with AW = B, R(W) in closure R(A*), N(W) = N(B).
// Throws PreconditionError when R(B) is not contained in R(A).
Operator douglas_reduced_solution(const Operator& a, const Operator& b, double tol = kDefaultTol);

// Membership in B_A(H): rank([A | T*A]) == rank(A).
bool admits_a_adjoint(const SemiInnerProduct& s, const Operator& t);

// T-sharp = A-dagger T* A, the reduced solution of A X = T* A.
Operator sharp(const SemiInnerProduct& s, const Operator& t);

// sup over nonzero xi in R(A) of ||T xi||_A / ||xi||_A.
double a_operator_seminorm(const SemiInnerProduct& s, const Operator& t);

// Matrix-level classification of T in the geometry of A.
ClassVerdict oracle_is(OperatorClass property, const SemiInnerProduct& s, const Operator& t,
                       double tol);

} // namespace semiop
