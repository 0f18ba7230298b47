#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "semiop/common.hpp"

namespace semiop {

// Finite atomic measure space: n atoms indexed 0..n-1, each with a strictly
// positive mass.  Zero-mass atoms are rejected at construction.
class MeasureSpace {
public:
    explicit MeasureSpace(std::vector<double> weights);

    std::size_t size() const { return weights_.size(); }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    double total_mass() const { return total_; }

private:
    std::vector<double> weights_;
    double total_ = 0.0;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

SpacePtr make_space(std::vector<double> weights);
SpacePtr make_uniform_space(std::size_t n);

// Complex-valued function on the atoms of a space.
class MeasurableFunction {
public:
    MeasurableFunction(SpacePtr space, std::vector<cx> values);
    MeasurableFunction(SpacePtr space, const std::vector<double>& values);

    static MeasurableFunction constant(SpacePtr space, cx value);
    static MeasurableFunction indicator(SpacePtr space, std::size_t atom);

    const SpacePtr& space() const { return space_; }
    const std::vector<cx>& values() const { return values_; }
    cx operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    double max_abs() const;
    bool is_real(double tol = 1e-12) const;
    std::vector<double> real_values() const;

private:
    SpacePtr space_;
    std::vector<cx> values_;
};

// Transformation of atoms: atom i maps to targets[i].  On a finite atomic
// space with positive weights every such map is non-singular.
class PointMap {
public:
    PointMap(SpacePtr space, std::vector<std::size_t> targets);

    static PointMap identity(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    const std::vector<std::size_t>& targets() const { return targets_; }
    std::size_t operator()(std::size_t i) const { return targets_[i]; }
    std::size_t size() const { return targets_.size(); }

private:
    SpacePtr space_;
    std::vector<std::size_t> targets_;
};

// Finite sigma-algebra represented by its atoms: disjoint nonempty blocks
// covering every atom index.  Canonical form: blocks sorted ascending and
// ordered by smallest element.
class Partition {
public:
    Partition(SpacePtr space, std::vector<std::vector<std::size_t>> blocks);

    const SpacePtr& space() const { return space_; }
    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }

    bool operator==(const Partition& o) const { return blocks_ == o.blocks_; }

private:
    SpacePtr space_;
    std::vector<std::vector<std::size_t>> blocks_;
};

// Nonempty preimages phi^-1({j}); the atoms of the sigma-algebra phi^-1(F).
Partition fibers(const PointMap& phi);

// h(j) = mu(phi^-1({j})) / mu({j}); zero exactly off the range of phi.
MeasurableFunction radon_nikodym(const PointMap& phi);

// Fiber-weighted average: E(f | phi^-1(F)), constant on each fiber.
MeasurableFunction cond_expectation(const PointMap& phi, const MeasurableFunction& f);

// E(g) read through phi^-1: r(j) is the fiber average of g over phi^-1({j}),
// zero off the range of phi.  Realizes the "∘ phi^-1" factor of the adjoint
// formulas for arbitrary g.
MeasurableFunction push_inverse(const PointMap& phi, const MeasurableFunction& g);

// True iff every block of p lies inside some block of q.
bool refines(const Partition& p, const Partition& q);

// Indices with |f(i)| > tol (strict).
std::vector<std::size_t> support(const MeasurableFunction& f, double tol);

// Default absolute support cutoff: rel * max|f|.
double support_cut(const MeasurableFunction& f, double rel = kSupportRel);

// Pointwise helpers.
MeasurableFunction pointwise_mul(const MeasurableFunction& f, const MeasurableFunction& g);
MeasurableFunction pointwise_sub(const MeasurableFunction& f, const MeasurableFunction& g);
// f ∘ phi
MeasurableFunction compose(const MeasurableFunction& f, const PointMap& phi);

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* where);

// Throws std::invalid_argument unless f is real with values >= -tol.
void require_real_nonneg(const MeasurableFunction& f, const char* name, double tol = 1e-12);

} // namespace semiop
