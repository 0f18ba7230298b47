#pragma once

#include <functional>
#include <string>
#include <vector>

#include "semiop/semihilbert.hpp"

namespace semiop {

// One affine branch x -> slope*x + intercept on [lo, hi], mapped bijectively
// onto its image interval.
struct Branch {
    double lo = 0.0;
    double hi = 1.0;
    double slope = 1.0;
    double intercept = 0.0;

    double eval(double x) const { return slope * x + intercept; }
    double image_lo() const { return slope > 0 ? eval(lo) : eval(hi); }
    double image_hi() const { return slope > 0 ? eval(hi) : eval(lo); }
    bool domain_contains(double x, double eps = 1e-12) const { return x >= lo - eps && x <= hi + eps; }
    bool image_contains(double y, double eps = 1e-12) const {
        return y >= image_lo() - eps && y <= image_hi() + eps;
    }
};

// Piecewise-affine full-branch self-map of [0,1] with Lebesgue measure.
class BranchMap {
public:
    explicit BranchMap(std::vector<Branch> branches);

    // [0,1/2) -> 2x, [1/2,1] -> 2x-1
    static BranchMap doubling();
    // [0,1/2) -> 1-2x, (1/2,1] -> 2x-1
    static BranchMap tent();
    // single branch slope*x + intercept on [0,1]
    static BranchMap single(double slope, double intercept);

    double eval(double x) const;
    const std::vector<Branch>& branches() const { return branches_; }

private:
    std::vector<Branch> branches_;
};

using ScalarField = std::function<double(double)>;

struct FiberPoint {
    double x;
    double weight; // 1 / |slope|
};

// All preimages of y, each carrying 1/|slope|.
std::vector<FiberPoint> fiber(const BranchMap& m, double y);

// h(y) = d(mu o phi^-1)/dmu = sum over the fiber of 1/|slope|.
double h_interval(const BranchMap& m, double y);

// (E(f) o phi^-1)(y): the weighted average of f over the fiber of y.
double fiber_average(const BranchMap& m, const ScalarField& f, double y);

// E(f)(x) = fiber_average at phi(x); constant on fibers.
double cond_exp_interval(const BranchMap& m, const ScalarField& f, double x);

// J(x) = h(x) * (E(u) o phi^-1)(x).
double j_weight_interval(const BranchMap& m, const ScalarField& u, double x);

// Verdict over the midpoint grid x_k = (k + 1/2)/N.  residual_first is the
// violation at the grid point nearest zero.
struct IntervalVerdict {
    std::string property;
    bool verdict = false;
    double residual = 0.0;
    double witness_x = 0.0;
    double residual_first = 0.0;
};

// Evaluates the characterizing identity of the property at every grid point
// through h_interval / fiber_average (no map-specific shortcuts).  Supported
// properties: normal, isometry, unitary; u must be positive on the grid.
IntervalVerdict crit_interval(OperatorClass property, const BranchMap& m, const ScalarField& u,
                              int grid_n, double tol);

bool has_interval_criterion(OperatorClass property);

// Samples of a field at the midpoint grid; value_at reads the piecewise
// constant extension.
struct GridFunction {
    int n = 0;
    std::vector<double> values;

    static GridFunction sample(int n, const ScalarField& f);
    double midpoint(int k) const { return (k + 0.5) / n; }
    double value_at(double x) const;
    ScalarField as_field() const;
};

// "const:c", "exp", "exp:k", "affine:a:b", "pwc:v0,v1,..."
ScalarField parse_field_spec(const std::string& spec);

} // namespace semiop
