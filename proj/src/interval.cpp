#include "semiop/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace semiop {

BranchMap::BranchMap(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) throw std::invalid_argument("BranchMap: need at least one branch");
    std::sort(branches_.begin(), branches_.end(), [](const Branch& a, const Branch& b) { return a.lo < b.lo; });
    const double eps = 1e-9;
    if (std::abs(branches_.front().lo) > eps || std::abs(branches_.back().hi - 1.0) > eps)
        throw std::invalid_argument("BranchMap: branch domains must cover [0,1]");
    for (std::size_t k = 0; k < branches_.size(); ++k) {
        const Branch& b = branches_[k];
        if (b.hi <= b.lo) throw std::invalid_argument("BranchMap: empty branch domain");
        if (b.slope == 0.0) throw std::invalid_argument("BranchMap: branch slope must be nonzero");
        if (b.image_lo() < -eps || b.image_hi() > 1.0 + eps)
            throw std::invalid_argument("BranchMap: branch image escapes [0,1]");
        if (k + 1 < branches_.size() && std::abs(branches_[k + 1].lo - b.hi) > eps)
            throw std::invalid_argument("BranchMap: branch domains must partition [0,1]");
    }
}

BranchMap BranchMap::doubling() {
    return BranchMap({{0.0, 0.5, 2.0, 0.0}, {0.5, 1.0, 2.0, -1.0}});
}

BranchMap BranchMap::tent() {
    return BranchMap({{0.0, 0.5, -2.0, 1.0}, {0.5, 1.0, 2.0, -1.0}});
}

BranchMap BranchMap::single(double slope, double intercept) {
    return BranchMap({{0.0, 1.0, slope, intercept}});
}

double BranchMap::eval(double x) const {
    for (const Branch& b : branches_)
        if (b.domain_contains(x)) return std::clamp(b.eval(x), 0.0, 1.0);
    throw std::invalid_argument("BranchMap::eval: point outside [0,1]");
}

std::vector<FiberPoint> fiber(const BranchMap& m, double y) {
    std::vector<FiberPoint> pts;
    for (const Branch& b : m.branches()) {
        if (!b.image_contains(y)) continue;
        const double z = std::clamp((y - b.intercept) / b.slope, b.lo, b.hi);
        pts.push_back({z, 1.0 / std::abs(b.slope)});
    }
    return pts;
}

double h_interval(const BranchMap& m, double y) {
    double h = 0.0;
    for (const FiberPoint& p : fiber(m, y)) h += p.weight;
    return h;
}

double fiber_average(const BranchMap& m, const ScalarField& f, double y) {
    double num = 0.0, den = 0.0;
    for (const FiberPoint& p : fiber(m, y)) {
        num += p.weight * f(p.x);
        den += p.weight;
    }
    return den > 0.0 ? num / den : 0.0;
}

double cond_exp_interval(const BranchMap& m, const ScalarField& f, double x) {
    return fiber_average(m, f, m.eval(x));
}

double j_weight_interval(const BranchMap& m, const ScalarField& u, double x) {
    return h_interval(m, x) * fiber_average(m, u, x);
}

bool has_interval_criterion(OperatorClass property) {
    switch (property) {
        case OperatorClass::Normal:
        case OperatorClass::Isometry:
        case OperatorClass::Unitary:
            return true;
        default:
            return false;
    }
}

IntervalVerdict crit_interval(OperatorClass property, const BranchMap& m, const ScalarField& u,
                              int grid_n, double tol) {
    if (grid_n < 2) throw std::invalid_argument("crit_interval: grid size must be >= 2");
    if (!has_interval_criterion(property))
        throw std::invalid_argument(std::string("crit_interval: unsupported property ") + to_string(property));

    IntervalVerdict out;
    out.property = to_string(property);

    for (int k = 0; k < grid_n; ++k) {
        const double x = (k + 0.5) / grid_n;
        const double ux = u(x);
        if (!(ux > 0.0))
            throw std::invalid_argument("crit_interval: u must be strictly positive on the grid");

        double violation = 0.0;
        switch (property) {
            case OperatorClass::Normal: {
                // ((1/u) h) o phi * u = (1/u) J
                const double px = m.eval(x);
                const double lhs = h_interval(m, px) / u(px) * ux;
                const double rhs = j_weight_interval(m, u, x) / ux;
                violation = std::abs(lhs - rhs);
                break;
            }
            case OperatorClass::Isometry: {
                violation = std::abs(j_weight_interval(m, u, x) - ux);
                break;
            }
            case OperatorClass::Unitary: {
                const double px = m.eval(x);
                const double v1 = std::abs(j_weight_interval(m, u, x) - ux);
                const double v2 = std::abs(u(px) * h_interval(m, px) - ux);
                violation = std::max(v1, v2);
                break;
            }
            default:
                break;
        }
        if (k == 0) out.residual_first = violation;
        if (violation > out.residual) {
            out.residual = violation;
            out.witness_x = x;
        }
    }
    out.verdict = out.residual <= tol;
    return out;
}

GridFunction GridFunction::sample(int n, const ScalarField& f) {
    if (n < 2) throw std::invalid_argument("GridFunction: n must be >= 2");
    GridFunction g;
    g.n = n;
    g.values.resize(n);
    for (int k = 0; k < n; ++k) {
        g.values[k] = f((k + 0.5) / n);
        if (!std::isfinite(g.values[k]))
            throw std::invalid_argument("GridFunction: non-finite sample");
    }
    return g;
}

double GridFunction::value_at(double x) const {
    int k = static_cast<int>(std::floor(x * n));
    k = std::clamp(k, 0, n - 1);
    return values[k];
}

ScalarField GridFunction::as_field() const {
    GridFunction copy = *this;
    return [copy](double x) { return copy.value_at(x); };
}

ScalarField parse_field_spec(const std::string& spec) {
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, sep)) parts.push_back(item);
        return parts;
    };

    const auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    try {
        if (kind == "const") {
            const double c = parts.size() > 1 ? std::stod(parts[1]) : 1.0;
            return [c](double) { return c; };
        }
        if (kind == "exp") {
            const double k = parts.size() > 1 ? std::stod(parts[1]) : 1.0;
            return [k](double x) { return std::exp(k * x); };
        }
        if (kind == "affine") {
            if (parts.size() != 3) throw std::invalid_argument("affine needs a:b");
            const double a = std::stod(parts[1]);
            const double b = std::stod(parts[2]);
            return [a, b](double x) { return a + b * x; };
        }
        if (kind == "pwc" || kind == "grid") {
            if (parts.size() != 2) throw std::invalid_argument("pwc needs a value list");
            std::vector<double> vals;
            for (const auto& v : split(parts[1], ',')) vals.push_back(std::stod(v));
            if (vals.size() < 2) throw std::invalid_argument("pwc needs >= 2 values");
            GridFunction g;
            g.n = static_cast<int>(vals.size());
            g.values = std::move(vals);
            return g.as_field();
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_field_spec: malformed number in '" + spec + "'");
    }
    throw std::invalid_argument("parse_field_spec: unknown field spec '" + spec + "'");
}

} // namespace semiop
