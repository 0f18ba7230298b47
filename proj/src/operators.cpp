#include "semiop/operators.hpp"

#include <algorithm>
#include <cmath>

namespace semiop {

Operator::Operator(SpacePtr space, Mat entries) : space_(std::move(space)), m_(std::move(entries)) {
    if (!space_) throw std::invalid_argument("Operator: null space");
    if (m_.rows() != m_.cols() || m_.rows() != space_->size())
        throw std::invalid_argument("Operator: matrix must be square with dimension n");
}

Operator Operator::zero(SpacePtr space) {
    const std::size_t n = space->size();
    return Operator(std::move(space), Mat(n, n));
}

Operator Operator::identity(SpacePtr space) {
    const std::size_t n = space->size();
    return Operator(std::move(space), Mat::identity(n));
}

MeasurableFunction Operator::apply(const MeasurableFunction& f) const {
    require_same_space(space_, f.space(), "Operator::apply");
    return MeasurableFunction(space_, m_.apply(f.values()));
}

MeasurableFunction Operator::column(std::size_t j) const {
    return MeasurableFunction(space_, m_.column(j));
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_space(a.space_, b.space_, "Operator::*");
    return Operator(a.space_, a.m_ * b.m_);
}

Operator operator+(const Operator& a, const Operator& b) {
    require_same_space(a.space_, b.space_, "Operator::+");
    return Operator(a.space_, a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b) {
    require_same_space(a.space_, b.space_, "Operator::-");
    return Operator(a.space_, a.m_ - b.m_);
}

Operator operator*(cx s, const Operator& a) { return Operator(a.space_, s * a.m_); }

cx mu_inner(const MeasurableFunction& f, const MeasurableFunction& g) {
    require_same_space(f.space(), g.space(), "mu_inner");
    cx s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f.space()->weight(i) * f[i] * std::conj(g[i]);
    return s;
}

double mu_norm(const MeasurableFunction& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f.space()->weight(i) * std::norm(f[i]);
    return std::sqrt(s);
}

Operator mu_adjoint(const Operator& t) {
    const auto& sp = t.space();
    const std::size_t n = t.dim();
    Mat adj(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            adj(j, i) = sp->weight(i) * std::conj(t.entries()(i, j)) / sp->weight(j);
    return Operator(sp, std::move(adj));
}

double fnorm(const Operator& t) {
    const auto& sp = t.space();
    double s = 0.0;
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < t.dim(); ++j)
            s += sp->weight(i) / sp->weight(j) * std::norm(t.entries()(i, j));
    return std::sqrt(s);
}

Operator composition_operator(const PointMap& phi) {
    const std::size_t n = phi.size();
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, phi(i)) = 1.0;
    return Operator(phi.space(), std::move(m));
}

Operator multiplication_operator(const MeasurableFunction& u) {
    const std::size_t n = u.size();
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = u[i];
    return Operator(u.space(), std::move(m));
}

Operator weighted_composition_operator(const MeasurableFunction& u, const PointMap& phi) {
    require_same_space(u.space(), phi.space(), "weighted_composition_operator");
    return multiplication_operator(u) * composition_operator(phi);
}

SpectralDecomposition spectral_decomposition(const Operator& t, double tol) {
    const auto& sp = t.space();
    const std::size_t n = t.dim();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = std::sqrt(sp->weight(i));

    Mat flat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) flat(i, j) = s[i] * t.entries()(i, j) / s[j];

    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) asym += std::norm(flat(i, j) - std::conj(flat(j, i)));
    asym = std::sqrt(asym);
    if (asym > tol * std::max(1.0, flat.norm_fro()))
        throw PreconditionError("spectral_decomposition: operator is not mu-self-adjoint (||T - T*|| = " +
                                std::to_string(asym) + ")");

    EigenSystem es = jacobi_hermitian(std::move(flat));

    SpectralDecomposition out;
    out.eigenvalues = std::move(es.values);
    out.eigenvectors.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<cx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = es.vectors(i, k) / s[i];
        out.eigenvectors.emplace_back(sp, std::move(v));
    }
    return out;
}

Operator synthesize(const SpacePtr& space, const SpectralDecomposition& sd,
                    const std::function<double(double)>& f) {
    const std::size_t n = space->size();
    Mat m(n, n);
    for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
        const double fk = f(sd.eigenvalues[k]);
        if (fk == 0.0) continue;
        const auto& v = sd.eigenvectors[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) += fk * v[i] * std::conj(v[j]) * space->weight(j);
    }
    return Operator(space, std::move(m));
}

namespace {

void require_positive(const SpectralDecomposition& sd, double tol, const char* where) {
    if (sd.eigenvalues.empty()) return;
    const double lmin = sd.eigenvalues.front();
    const double lmax = sd.eigenvalues.back();
    if (lmin < -tol * std::max(1.0, lmax))
        throw PreconditionError(std::string(where) + ": operator is not positive (eigenvalue " +
                                std::to_string(lmin) + ")");
}

} // namespace

Operator moore_penrose(const Operator& a, double tol) {
    const SpectralDecomposition sd = spectral_decomposition(a, tol);
    require_positive(sd, tol, "moore_penrose");
    const double lmax = sd.eigenvalues.back();
    const double cut = tol * std::max(lmax, 0.0);
    return synthesize(a.space(), sd, [cut](double l) { return l > cut ? 1.0 / l : 0.0; });
}

Operator operator_sqrt(const Operator& a, double tol) {
    const SpectralDecomposition sd = spectral_decomposition(a, tol);
    require_positive(sd, tol, "operator_sqrt");
    return synthesize(a.space(), sd, [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

Operator operator_abs(const Operator& t, double tol) {
    return operator_sqrt(mu_adjoint(t) * t, tol);
}

std::vector<MeasurableFunction> mu_orthonormalize(const std::vector<MeasurableFunction>& vecs, double tol) {
    double scale = 0.0;
    for (const auto& v : vecs) scale = std::max(scale, mu_norm(v));
    std::vector<MeasurableFunction> basis;
    if (scale == 0.0) return basis;

    for (const auto& v : vecs) {
        std::vector<cx> w = v.values();
        MeasurableFunction wf(v.space(), w);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                const cx c = mu_inner(wf, b);
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
                wf = MeasurableFunction(v.space(), w);
            }
        }
        const double r = mu_norm(wf);
        if (r > tol * scale) {
            for (cx& x : w) x /= r;
            basis.emplace_back(v.space(), std::move(w));
        }
    }
    return basis;
}

std::vector<MeasurableFunction> columns_of(const Operator& t) {
    std::vector<MeasurableFunction> cols;
    cols.reserve(t.dim());
    for (std::size_t j = 0; j < t.dim(); ++j) cols.push_back(t.column(j));
    return cols;
}

Subspace Subspace::from_vectors(SpacePtr space, const std::vector<MeasurableFunction>& vecs, double tol) {
    for (const auto& v : vecs) require_same_space(space, v.space(), "Subspace::from_vectors");
    auto basis = mu_orthonormalize(vecs, tol);
    if (basis.size() != vecs.size())
        throw std::invalid_argument("Subspace::from_vectors: vectors are linearly dependent");
    return Subspace(std::move(space), std::move(basis));
}

Subspace Subspace::span(SpacePtr space, const std::vector<MeasurableFunction>& vecs, double tol) {
    for (const auto& v : vecs) require_same_space(space, v.space(), "Subspace::span");
    return Subspace(std::move(space), mu_orthonormalize(vecs, tol));
}

Subspace range(const Operator& t, double tol) {
    return Subspace(t.space(), mu_orthonormalize(columns_of(t), tol));
}

Subspace ortho_complement(const Subspace& s, double tol) {
    const auto& sp = s.space();
    const std::size_t n = sp->size();
    std::vector<MeasurableFunction> picked;
    for (std::size_t k = 0; k < n && s.dim() + picked.size() < n; ++k) {
        MeasurableFunction e = MeasurableFunction::indicator(sp, k);
        std::vector<cx> w = e.values();
        MeasurableFunction wf(sp, w);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : s.basis()) {
                const cx c = mu_inner(wf, b);
                for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
                wf = MeasurableFunction(sp, w);
            }
            for (const auto& b : picked) {
                const cx c = mu_inner(wf, b);
                for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
                wf = MeasurableFunction(sp, w);
            }
        }
        const double r = mu_norm(wf);
        if (r > tol * mu_norm(e)) {
            for (cx& x : w) x /= r;
            picked.emplace_back(sp, std::move(w));
        }
    }
    if (s.dim() + picked.size() != n)
        throw std::runtime_error("ortho_complement: dimension mismatch (ill-conditioned basis)");
    return Subspace(sp, std::move(picked));
}

Subspace nullspace(const Operator& t, double tol) {
    // N(T) = R(T*)^perp in the mu-inner product.
    return ortho_complement(range(mu_adjoint(t), tol), tol);
}

Operator projection(const Subspace& s) {
    const auto& sp = s.space();
    const std::size_t n = sp->size();
    Mat p(n, n);
    for (const auto& b : s.basis())
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(i, j) += b[i] * std::conj(b[j]) * sp->weight(j);
    return Operator(sp, std::move(p));
}

std::size_t rank_of(const std::vector<MeasurableFunction>& vecs, double tol) {
    return mu_orthonormalize(vecs, tol).size();
}

} // namespace semiop
