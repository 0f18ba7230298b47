#include "semiop/measure.hpp"

#include <algorithm>
#include <cmath>

namespace semiop {

MeasureSpace::MeasureSpace(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("MeasureSpace: need at least one atom");
    for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("MeasureSpace: atom weights must be strictly positive");
        total_ += w;
    }
}

SpacePtr make_space(std::vector<double> weights) {
    return std::make_shared<MeasureSpace>(std::move(weights));
}

SpacePtr make_uniform_space(std::size_t n) {
    if (n == 0) throw std::invalid_argument("make_uniform_space: n must be positive");
    return make_space(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* where) {
    if (a.get() != b.get())
        throw std::invalid_argument(std::string(where) + ": operands live on different spaces");
}

MeasurableFunction::MeasurableFunction(SpacePtr space, std::vector<cx> values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw std::invalid_argument("MeasurableFunction: null space");
    if (values_.size() != space_->size())
        throw std::invalid_argument("MeasurableFunction: value count does not match atom count");
}

MeasurableFunction::MeasurableFunction(SpacePtr space, const std::vector<double>& values)
    : MeasurableFunction(std::move(space), std::vector<cx>(values.begin(), values.end())) {}

MeasurableFunction MeasurableFunction::constant(SpacePtr space, cx value) {
    const std::size_t n = space->size();
    return MeasurableFunction(std::move(space), std::vector<cx>(n, value));
}

MeasurableFunction MeasurableFunction::indicator(SpacePtr space, std::size_t atom) {
    if (atom >= space->size()) throw std::invalid_argument("indicator: atom out of range");
    std::vector<cx> v(space->size());
    v[atom] = 1.0;
    return MeasurableFunction(std::move(space), std::move(v));
}

double MeasurableFunction::max_abs() const {
    double m = 0.0;
    for (const cx& v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool MeasurableFunction::is_real(double tol) const {
    for (const cx& v : values_)
        if (std::abs(v.imag()) > tol) return false;
    return true;
}

std::vector<double> MeasurableFunction::real_values() const {
    std::vector<double> r(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) r[i] = values_[i].real();
    return r;
}

PointMap::PointMap(SpacePtr space, std::vector<std::size_t> targets)
    : space_(std::move(space)), targets_(std::move(targets)) {
    if (!space_) throw std::invalid_argument("PointMap: null space");
    if (targets_.size() != space_->size())
        throw std::invalid_argument("PointMap: target count does not match atom count");
    for (std::size_t t : targets_)
        if (t >= space_->size()) throw std::invalid_argument("PointMap: target atom out of range");
}

PointMap PointMap::identity(SpacePtr space) {
    std::vector<std::size_t> t(space->size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = i;
    return PointMap(std::move(space), std::move(t));
}

Partition::Partition(SpacePtr space, std::vector<std::vector<std::size_t>> blocks)
    : space_(std::move(space)), blocks_(std::move(blocks)) {
    if (!space_) throw std::invalid_argument("Partition: null space");
    const std::size_t n = space_->size();
    std::vector<char> seen(n, 0);
    std::size_t covered = 0;
    for (auto& b : blocks_) {
        if (b.empty()) throw std::invalid_argument("Partition: empty block");
        std::sort(b.begin(), b.end());
        for (std::size_t i : b) {
            if (i >= n) throw std::invalid_argument("Partition: atom index out of range");
            if (seen[i]) throw std::invalid_argument("Partition: blocks are not disjoint");
            seen[i] = 1;
            ++covered;
        }
    }
    if (covered != n) throw std::invalid_argument("Partition: blocks do not cover all atoms");
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

Partition fibers(const PointMap& phi) {
    const std::size_t n = phi.size();
    std::vector<std::vector<std::size_t>> pre(n);
    for (std::size_t i = 0; i < n; ++i) pre[phi(i)].push_back(i);
    std::vector<std::vector<std::size_t>> blocks;
    for (auto& b : pre)
        if (!b.empty()) blocks.push_back(std::move(b));
    return Partition(phi.space(), std::move(blocks));
}

MeasurableFunction radon_nikodym(const PointMap& phi) {
    const auto& sp = phi.space();
    const std::size_t n = phi.size();
    std::vector<double> mass(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) mass[phi(i)] += sp->weight(i);
    std::vector<cx> h(n);
    for (std::size_t j = 0; j < n; ++j) h[j] = mass[j] / sp->weight(j);
    return MeasurableFunction(sp, std::move(h));
}

MeasurableFunction cond_expectation(const PointMap& phi, const MeasurableFunction& f) {
    require_same_space(phi.space(), f.space(), "cond_expectation");
    const auto& sp = phi.space();
    const std::size_t n = phi.size();
    std::vector<cx> num(n, 0.0);
    std::vector<double> den(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        num[phi(i)] += sp->weight(i) * f[i];
        den[phi(i)] += sp->weight(i);
    }
    std::vector<cx> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = num[phi(i)] / den[phi(i)];
    return MeasurableFunction(sp, std::move(e));
}

MeasurableFunction push_inverse(const PointMap& phi, const MeasurableFunction& g) {
    require_same_space(phi.space(), g.space(), "push_inverse");
    const auto& sp = phi.space();
    const std::size_t n = phi.size();
    std::vector<cx> num(n, 0.0);
    std::vector<double> den(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        num[phi(i)] += sp->weight(i) * g[i];
        den[phi(i)] += sp->weight(i);
    }
    std::vector<cx> r(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        if (den[j] > 0.0) r[j] = num[j] / den[j];
    return MeasurableFunction(sp, std::move(r));
}

bool refines(const Partition& p, const Partition& q) {
    require_same_space(p.space(), q.space(), "refines");
    const std::size_t n = p.space()->size();
    std::vector<std::size_t> block_of(n);
    for (std::size_t b = 0; b < q.blocks().size(); ++b)
        for (std::size_t i : q.blocks()[b]) block_of[i] = b;
    for (const auto& blk : p.blocks()) {
        const std::size_t home = block_of[blk.front()];
        for (std::size_t i : blk)
            if (block_of[i] != home) return false;
    }
    return true;
}

std::vector<std::size_t> support(const MeasurableFunction& f, double tol) {
    if (tol < 0.0) throw std::invalid_argument("support: tol must be >= 0");
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f[i]) > tol) s.push_back(i);
    return s;
}

double support_cut(const MeasurableFunction& f, double rel) {
    return rel * f.max_abs();
}

MeasurableFunction pointwise_mul(const MeasurableFunction& f, const MeasurableFunction& g) {
    require_same_space(f.space(), g.space(), "pointwise_mul");
    std::vector<cx> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f[i] * g[i];
    return MeasurableFunction(f.space(), std::move(v));
}

MeasurableFunction pointwise_sub(const MeasurableFunction& f, const MeasurableFunction& g) {
    require_same_space(f.space(), g.space(), "pointwise_sub");
    std::vector<cx> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f[i] - g[i];
    return MeasurableFunction(f.space(), std::move(v));
}

MeasurableFunction compose(const MeasurableFunction& f, const PointMap& phi) {
    require_same_space(f.space(), phi.space(), "compose");
    std::vector<cx> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f[phi(i)];
    return MeasurableFunction(f.space(), std::move(v));
}

void require_real_nonneg(const MeasurableFunction& f, const char* name, double tol) {
    const double scale = std::max(1.0, f.max_abs());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(f[i].imag()) > tol * scale)
            throw std::invalid_argument(std::string(name) + " must be real-valued");
        if (f[i].real() < -tol * scale)
            throw std::invalid_argument(std::string(name) + " must be nonnegative");
    }
}

} // namespace semiop
