#pragma once

#include <functional>

#include "semiop/linalg.hpp"
#include "semiop/measure.hpp"

namespace semiop {

// Dense operator on L^2(mu).  Entries are stored as a plain matrix; the
// weighting lives only in mu_inner / mu_adjoint, so the matrix of a
// composition operator stays 0/1.
class Operator {
public:
    Operator(SpacePtr space, Mat entries);

    static Operator zero(SpacePtr space);
    static Operator identity(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    const Mat& entries() const { return m_; }
    Mat& entries() { return m_; }
    std::size_t dim() const { return m_.rows(); }

    MeasurableFunction apply(const MeasurableFunction& f) const;
    MeasurableFunction column(std::size_t j) const;

    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(cx s, const Operator& a);

private:
    SpacePtr space_;
    Mat m_;
};

// <f, g> = sum_i mu_i f_i conj(g_i)
cx mu_inner(const MeasurableFunction& f, const MeasurableFunction& g);
double mu_norm(const MeasurableFunction& f);

// The unique T* with <Tf, g> = <f, T*g>:  D^-1 T^H D.
Operator mu_adjoint(const Operator& t);

// Frobenius norm after conjugation by D^(1/2) (the flat metric carrying the
// mu-geometry); the norm used for every operator residual in this project.
double fnorm(const Operator& t);

Operator composition_operator(const PointMap& phi);
Operator multiplication_operator(const MeasurableFunction& u);
Operator weighted_composition_operator(const MeasurableFunction& u, const PointMap& phi);

struct SpectralDecomposition {
    std::vector<double> eigenvalues;             // ascending
    std::vector<MeasurableFunction> eigenvectors; // mu-orthonormal
};

// Diagonalization of a mu-self-adjoint operator: conjugate by D^(1/2) to an
// ordinary Hermitian matrix, run cyclic Jacobi, transform back.  Throws if
// ||T - T*|| exceeds tol * max(1, ||T||).
SpectralDecomposition spectral_decomposition(const Operator& t, double tol = kDefaultTol);

// sum_k f(lambda_k) <., v_k>_mu v_k as a matrix.
Operator synthesize(const SpacePtr& space, const SpectralDecomposition& sd,
                    const std::function<double(double)>& f);

// Spectral pseudo-inverse of a positive operator; eigenvalues <= tol * l_max
// are treated as zero.  Throws on non-positive input.
Operator moore_penrose(const Operator& a, double tol = kDefaultTol);

// Spectral square root of a positive operator.
Operator operator_sqrt(const Operator& a, double tol = kDefaultTol);

// |T| = (T*T)^(1/2) with the mu-adjoint.
Operator operator_abs(const Operator& t, double tol = kDefaultTol);

// Subspace of L^2(mu), held as a mu-orthonormal basis (possibly empty).
class Subspace {
public:
    // Orthonormalizes and throws if the vectors are linearly dependent.
    static Subspace from_vectors(SpacePtr space, const std::vector<MeasurableFunction>& vecs,
                                 double tol = kDefaultTol);
    // Orthonormalizes, silently dropping dependent vectors.
    static Subspace span(SpacePtr space, const std::vector<MeasurableFunction>& vecs,
                         double tol = kDefaultTol);

    const SpacePtr& space() const { return space_; }
    const std::vector<MeasurableFunction>& basis() const { return basis_; }
    std::size_t dim() const { return basis_.size(); }

private:
    Subspace(SpacePtr space, std::vector<MeasurableFunction> basis)
        : space_(std::move(space)), basis_(std::move(basis)) {}

    SpacePtr space_;
    std::vector<MeasurableFunction> basis_;

    friend Subspace ortho_complement(const Subspace& s, double tol);
    friend Subspace nullspace(const Operator& t, double tol);
    friend Subspace range(const Operator& t, double tol);
};

// Gram-Schmidt in the mu-inner product; drops vectors whose residual falls
// below tol * (largest input norm).
std::vector<MeasurableFunction> mu_orthonormalize(const std::vector<MeasurableFunction>& vecs,
                                                  double tol = kDefaultTol);

Subspace range(const Operator& t, double tol = kDefaultTol);
Subspace nullspace(const Operator& t, double tol = kDefaultTol);
Subspace ortho_complement(const Subspace& s, double tol = kDefaultTol);

// P = sum_k <., b_k>_mu b_k; satisfies P^2 = P = P*.
Operator projection(const Subspace& s);

// Rank of the mu-span of a list of vectors.
std::size_t rank_of(const std::vector<MeasurableFunction>& vecs, double tol = kDefaultTol);

std::vector<MeasurableFunction> columns_of(const Operator& t);

} // namespace semiop
