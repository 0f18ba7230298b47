#include "semiop/semihilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace semiop {

const char* to_string(OperatorClass c) {
    switch (c) {
        case OperatorClass::SelfAdjoint: return "selfadjoint";
        case OperatorClass::Normal: return "normal";
        case OperatorClass::Quasinormal: return "quasinormal";
        case OperatorClass::Isometry: return "isometry";
        case OperatorClass::Unitary: return "unitary";
        case OperatorClass::PartialIsometry: return "partial_isometry";
        case OperatorClass::Hyponormal: return "hyponormal";
    }
    return "?";
}

std::optional<OperatorClass> operator_class_from_string(const std::string& name) {
    for (OperatorClass c : {OperatorClass::SelfAdjoint, OperatorClass::Normal, OperatorClass::Quasinormal,
                            OperatorClass::Isometry, OperatorClass::Unitary, OperatorClass::PartialIsometry,
                            OperatorClass::Hyponormal})
        if (name == to_string(c)) return c;
    return std::nullopt;
}

SemiInnerProduct::SemiInnerProduct(Operator a, double tol) : a_(a), sqrt_a_(a), pinv_a_(a), tol_(tol) {
    const SpectralDecomposition sd = spectral_decomposition(a_, tol_);
    const double lmin = sd.eigenvalues.front();
    lambda_max_ = sd.eigenvalues.back();
    if (lmin < -tol_ * std::max(1.0, lambda_max_))
        throw PreconditionError("SemiInnerProduct: A is not positive (eigenvalue " +
                                std::to_string(lmin) + ")");
    sqrt_a_ = synthesize(a_.space(), sd, [](double l) { return std::sqrt(std::max(l, 0.0)); });
    const double cut = tol_ * std::max(lambda_max_, 0.0);
    pinv_a_ = synthesize(a_.space(), sd, [cut](double l) { return l > cut ? 1.0 / l : 0.0; });
    for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k)
        if (sd.eigenvalues[k] > cut) range_basis_.push_back(sd.eigenvectors[k]);
}

cx SemiInnerProduct::a_inner(const MeasurableFunction& f, const MeasurableFunction& g) const {
    return mu_inner(a_.apply(f), g);
}

double SemiInnerProduct::a_norm(const MeasurableFunction& f) const {
    return mu_norm(sqrt_a_.apply(f));
}

Subspace SemiInnerProduct::a_orthocomplement(const Subspace& l) const {
    require_same_space(space(), l.space(), "a_orthocomplement");
    std::vector<MeasurableFunction> images;
    images.reserve(l.dim());
    for (const auto& b : l.basis()) images.push_back(a_.apply(b));
    return ortho_complement(Subspace::span(space(), images, tol_), tol_);
}

namespace {

// Flat Hermitian compression <M b_j, b_i>_mu over a mu-orthonormal basis.
Mat compress(const Operator& m, const std::vector<MeasurableFunction>& basis) {
    const std::size_t r = basis.size();
    Mat g(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        const MeasurableFunction mj = m.apply(basis[j]);
        for (std::size_t i = 0; i < r; ++i) g(i, j) = mu_inner(mj, basis[i]);
    }
    return g;
}

// Largest eigenvalue of the pencil (g1, g2) with g2 Hermitian positive
// definite: max eig of g2^(-1/2) g1 g2^(-1/2).
double pencil_max_eig(const Mat& g1, const Mat& g2) {
    const std::size_t r = g1.rows();
    if (r == 0) return 0.0;
    EigenSystem es = jacobi_hermitian(g2);
    Mat w(r, r);
    for (std::size_t k = 0; k < r; ++k) {
        const double l = std::max(es.values[k], 1e-300);
        const double inv = 1.0 / std::sqrt(l);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                w(i, j) += inv * es.vectors(i, k) * std::conj(es.vectors(j, k));
    }
    EigenSystem em = jacobi_hermitian(w * g1 * w);
    return em.values.back();
}

std::string max_entry_witness(const Operator& r) {
    const auto& sp = r.space();
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < r.dim(); ++i)
        for (std::size_t j = 0; j < r.dim(); ++j) {
            const double v = std::sqrt(sp->weight(i) / sp->weight(j)) * std::abs(r.entries()(i, j));
            if (v > best) { best = v; bi = i; bj = j; }
        }
    std::ostringstream os;
    os << "max deviation " << best << " at entry (" << bi << "," << bj << ")";
    return os.str();
}

} // namespace

DouglasReport douglas_check(const Operator& a, const Operator& b, double tol) {
    require_same_space(a.space(), b.space(), "douglas_check");
    DouglasReport rep;

    // Route 1: rank([A|B]) == rank(A).
    std::vector<MeasurableFunction> cols = columns_of(a);
    rep.rank_a = rank_of(cols, tol);
    for (const auto& c : columns_of(b)) cols.push_back(c);
    rep.rank_ab = rank_of(cols, tol);
    rep.range_incl = (rep.rank_ab == rep.rank_a);

    // Route 2: exists lambda > 0 with BB* <= lambda AA*.  Split against
    // N(A*) = R(A)^perp: feasible iff B* kills N(A*); the smallest lambda is
    // the top eigenvalue of the pencil of compressions over R(A).
    const Operator as = mu_adjoint(a);
    const Operator bs = mu_adjoint(b);
    const Subspace ra = range(a, tol);
    const Subspace na_star = ortho_complement(ra, tol);
    const double bscale = std::max(1.0, fnorm(b));
    bool kills = true;
    for (const auto& nb : na_star.basis())
        if (mu_norm(bs.apply(nb)) > tol * bscale) { kills = false; break; }
    rep.majorization = kills;
    if (kills && ra.dim() > 0) {
        const Mat gb = compress(b * bs, ra.basis());
        const Mat ga = compress(a * as, ra.basis());
        rep.lambda = std::max(0.0, pencil_max_eig(gb, ga));
    } else if (kills) {
        rep.lambda = 0.0; // B = 0
    }

    // Route 3: solve AC = B through the flat pseudo-inverse and verify.
    const Mat c = pinv_flat(a.entries(), tol) * b.entries();
    const Operator resid = Operator(a.space(), a.entries() * c) - b;
    rep.factor_residual = fnorm(resid);
    rep.factorization = rep.factor_residual <= tol * bscale;

    return rep;
}

Operator mu_pinv(const Operator& t, double tol) {
    const auto& sp = t.space();
    const std::size_t n = t.dim();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = std::sqrt(sp->weight(i));
    Mat flat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) flat(i, j) = s[i] * t.entries()(i, j) / s[j];
    const Mat p = pinv_flat(flat, tol);
    Mat back(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) back(i, j) = p(i, j) * s[j] / s[i];
    return Operator(sp, std::move(back));
}

Operator douglas_reduced_solution(const Operator& a, const Operator& b, double tol) {
    const DouglasReport rep = douglas_check(a, b, tol);
    if (!rep.range_incl) {
        std::ostringstream os;
        os << "douglas_reduced_solution: R(B) is not contained in R(A) "
           << "(rank A = " << rep.rank_a << ", rank [A|B] = " << rep.rank_ab << ")";
        throw PreconditionError(os.str());
    }
    const Operator w = mu_pinv(a, tol) * b;

    // AW = B; R(W) in R(A*); N(W) = N(B).
    const double bscale = std::max(1.0, fnorm(b));
    if (fnorm(a * w - b) > std::max(tol, 1e-8) * bscale)
        throw std::runtime_error("douglas_reduced_solution: AW = B verification failed");
    std::vector<MeasurableFunction> cols = columns_of(mu_adjoint(a));
    const std::size_t rank_astar = rank_of(cols, tol);
    for (const auto& c : columns_of(w)) cols.push_back(c);
    if (rank_of(cols, tol) != rank_astar)
        throw std::runtime_error("douglas_reduced_solution: R(W) escapes R(A*)");
    const Subspace nb = nullspace(b, tol);
    const Subspace nw = nullspace(w, tol);
    const double wscale = std::max(1.0, fnorm(w));
    bool nulls_match = nb.dim() == nw.dim();
    for (const auto& v : nb.basis())
        if (mu_norm(w.apply(v)) > std::max(tol, 1e-8) * wscale) nulls_match = false;
    if (!nulls_match) throw std::runtime_error("douglas_reduced_solution: N(W) != N(B)");

    return w;
}

bool admits_a_adjoint(const SemiInnerProduct& s, const Operator& t) {
    require_same_space(s.space(), t.space(), "admits_a_adjoint");
    std::vector<MeasurableFunction> cols = columns_of(s.a());
    const std::size_t rank_a = rank_of(cols, s.tol());
    const Operator tsa = mu_adjoint(t) * s.a();
    for (const auto& c : columns_of(tsa)) cols.push_back(c);
    return rank_of(cols, s.tol()) == rank_a;
}

Operator sharp(const SemiInnerProduct& s, const Operator& t) {
    if (!admits_a_adjoint(s, t))
        throw PreconditionError("sharp: T does not admit an A-adjoint (R(T*A) escapes R(A))");
    const Operator tsa = mu_adjoint(t) * s.a();
    const Operator tsharp = s.pinv_a() * tsa;
    const double scale = std::max(1.0, fnorm(tsa));
    if (fnorm(s.a() * tsharp - tsa) > std::max(s.tol(), 1e-8) * scale)
        throw std::runtime_error("sharp: A T# = T* A verification failed");
    return tsharp;
}

double a_operator_seminorm(const SemiInnerProduct& s, const Operator& t) {
    require_same_space(s.space(), t.space(), "a_operator_seminorm");
    const auto& v = s.range_basis();
    if (v.empty()) return 0.0;
    const std::size_t r = v.size();
    Mat g1(r, r), g2(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        const MeasurableFunction tv = t.apply(v[j]);
        const MeasurableFunction atv = s.a().apply(tv);
        const MeasurableFunction av = s.a().apply(v[j]);
        for (std::size_t i = 0; i < r; ++i) {
            g1(i, j) = mu_inner(atv, t.apply(v[i]));
            g2(i, j) = mu_inner(av, v[i]);
        }
    }
    return std::sqrt(std::max(0.0, pencil_max_eig(g1, g2)));
}

ClassVerdict oracle_is(OperatorClass property, const SemiInnerProduct& s, const Operator& t, double tol) {
    require_same_space(s.space(), t.space(), "oracle_is");
    const Operator& a = s.a();
    const Operator ts = mu_adjoint(t);

    ClassVerdict out;
    out.property = to_string(property);
    out.scale = std::max(1e-300, fnorm(a)) * std::max(1.0, fnorm(t) * fnorm(t));

    switch (property) {
        case OperatorClass::SelfAdjoint: {
            const Operator r = a * t - ts * a;
            out.residual = fnorm(r);
            out.witness = max_entry_witness(r);
            break;
        }
        case OperatorClass::Normal: {
            const Operator tsharp = sharp(s, t);
            const Operator r = t * tsharp - tsharp * t;
            out.residual = fnorm(r);
            out.witness = max_entry_witness(r);
            break;
        }
        case OperatorClass::Quasinormal: {
            const Operator tsharp = sharp(s, t);
            const Operator r = t * tsharp * t - tsharp * t * t;
            out.residual = fnorm(r);
            out.witness = max_entry_witness(r);
            break;
        }
        case OperatorClass::Isometry: {
            const Operator r = ts * a * t - a;
            out.residual = fnorm(r);
            out.witness = max_entry_witness(r);
            break;
        }
        case OperatorClass::Unitary: {
            const Operator r1 = ts * a * t - a;
            const Operator r2 = t * a * ts - a;
            out.residual = std::max(fnorm(r1), fnorm(r2));
            out.witness = max_entry_witness(fnorm(r1) >= fnorm(r2) ? r1 : r2);
            if (admits_a_adjoint(s, t)) {
                const Operator r2alt = t * a * sharp(s, t) - a;
                out.alt_residual = std::max(fnorm(r1), fnorm(r2alt));
            }
            break;
        }
        case OperatorClass::PartialIsometry: {
            // N = N(A^(1/2) T); the form T*AT - A must vanish on the
            // A-orthocomplement of N.
            const Subspace n = nullspace(s.sqrt_a() * t, std::max(tol, s.tol()));
            const Subspace k = s.a_orthocomplement(n);
            std::vector<std::vector<cx>> raw;
            raw.reserve(k.dim());
            for (const auto& b : k.basis()) raw.push_back(b.values());
            const auto flat_basis = flat_orthonormalize(raw, s.tol());
            const Operator form = ts * a * t - a;
            const auto& sp = s.space();
            const std::size_t nn = sp->size();
            const std::size_t r = flat_basis.size();
            Mat c(r, r);
            for (std::size_t bj = 0; bj < r; ++bj) {
                std::vector<cx> fv(nn);
                for (std::size_t i = 0; i < nn; ++i) {
                    cx acc = 0.0;
                    for (std::size_t j2 = 0; j2 < nn; ++j2)
                        acc += sp->weight(i) * form.entries()(i, j2) * flat_basis[bj][j2];
                    fv[i] = acc;
                }
                for (std::size_t bi = 0; bi < r; ++bi) {
                    cx acc = 0.0;
                    for (std::size_t i = 0; i < nn; ++i) acc += std::conj(flat_basis[bi][i]) * fv[i];
                    c(bi, bj) = acc;
                }
            }
            out.residual = c.norm_fro();
            std::ostringstream os;
            os << "form compressed to K with dim " << r << ", N dim " << n.dim();
            out.witness = os.str();
            break;
        }
        case OperatorClass::Hyponormal: {
            const Operator diff = ts * a * t - t * a * ts;
            const SpectralDecomposition sd = spectral_decomposition(diff, std::max(tol, 1e-8));
            const double lmin = sd.eigenvalues.front();
            out.residual = std::max(0.0, -lmin);
            std::ostringstream os;
            os << "smallest eigenvalue of T*AT - TAT* is " << lmin;
            out.witness = os.str();
            break;
        }
    }
    out.verdict = out.residual <= tol;
    return out;
}

} // namespace semiop
