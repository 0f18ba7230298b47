#include "semiop/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace semiop {

namespace {

struct MaxDiff {
    double value = 0.0;
    std::ptrdiff_t atom = -1;
};

MaxDiff max_pointwise_diff(const MeasurableFunction& lhs, const MeasurableFunction& rhs) {
    MaxDiff md;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        const double d = std::abs(lhs[i] - rhs[i]);
        if (d > md.value) { md.value = d; md.atom = static_cast<std::ptrdiff_t>(i); }
    }
    return md;
}

// (1/u) restricted to the support of u, zero elsewhere.
MeasurableFunction inv_on_support(const MeasurableFunction& u) {
    const double cut = support_cut(u);
    std::vector<cx> v(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (std::abs(u[i]) > cut) v[i] = 1.0 / u[i];
    return MeasurableFunction(u.space(), std::move(v));
}

} // namespace

MeasurableFunction j_weight(const MeasurableFunction& u, const PointMap& phi) {
    require_same_space(u.space(), phi.space(), "j_weight");
    return pointwise_mul(radon_nikodym(phi), push_inverse(phi, u));
}

CriterionVerdict crit_selfadjoint(const MeasurableFunction& u, const PointMap& phi, double tol) {
    require_real_nonneg(u, "crit_selfadjoint: u");
    CriterionVerdict out;
    out.property = to_string(OperatorClass::SelfAdjoint);

    const MeasurableFunction h = radon_nikodym(phi);
    const MeasurableFunction j = j_weight(u, phi);

    // phi restricted to S_J must have period 2.
    for (std::size_t i : support(j, support_cut(j))) {
        if (phi(phi(i)) != i) {
            out.residual = std::numeric_limits<double>::infinity();
            out.witness_atom = static_cast<std::ptrdiff_t>(i);
            out.note = "phi(phi(i)) != i on S_J";
            break;
        }
    }
    const MaxDiff md = max_pointwise_diff(j, u);
    if (std::isfinite(out.residual)) {
        out.residual = md.value;
        out.witness_atom = md.atom;
    }
    out.verdict = out.residual <= tol;
    out.components = {{"J", j}, {"h", h}};
    return out;
}

CriterionVerdict crit_normal(const MeasurableFunction& u, const PointMap& phi, double tol) {
    require_real_nonneg(u, "crit_normal: u");
    CriterionVerdict out;
    out.property = to_string(OperatorClass::Normal);

    const MeasurableFunction h = radon_nikodym(phi);
    const MeasurableFunction j = j_weight(u, phi);
    const MeasurableFunction inv_u = inv_on_support(u);

    const MeasurableFunction g = pointwise_mul(inv_u, h);      // (1/u) chi_S(u) h
    const MeasurableFunction lhs = pointwise_mul(compose(g, phi), u);
    const MeasurableFunction rhs = pointwise_mul(inv_u, j);

    const MaxDiff md = max_pointwise_diff(lhs, rhs);
    out.residual = md.value;
    out.witness_atom = md.atom;
    out.verdict = out.residual <= tol;
    out.components = {{"J", j}, {"h", h}, {"lhs", lhs}, {"rhs", rhs}};
    return out;
}

CriterionVerdict crit_quasinormal(const MeasurableFunction& u, const PointMap& phi, double tol) {
    require_real_nonneg(u, "crit_quasinormal: u");
    CriterionVerdict out;
    out.property = to_string(OperatorClass::Quasinormal);

    const MeasurableFunction h = radon_nikodym(phi);
    const MeasurableFunction j = j_weight(u, phi);
    const MeasurableFunction g = pointwise_mul(inv_on_support(u), j); // (1/u) chi_S(u) J

    const MeasurableFunction lhs = pointwise_mul(g, h);
    const MeasurableFunction rhs = pointwise_mul(push_inverse(phi, g), h);

    const MaxDiff md = max_pointwise_diff(lhs, rhs);
    out.residual = md.value;
    out.witness_atom = md.atom;
    out.verdict = out.residual <= tol;
    out.components = {{"J", j}, {"h", h}, {"lhs", lhs}, {"rhs", rhs}};
    return out;
}

CriterionVerdict crit_isometry(const MeasurableFunction& u, const PointMap& phi, double tol) {
    require_real_nonneg(u, "crit_isometry: u");
    CriterionVerdict out;
    out.property = to_string(OperatorClass::Isometry);

    const MeasurableFunction j = j_weight(u, phi);
    const MaxDiff md = max_pointwise_diff(j, u);
    out.residual = md.value;
    out.witness_atom = md.atom;
    out.verdict = out.residual <= tol;
    out.components = {{"J", j}, {"h", radon_nikodym(phi)}};
    return out;
}

CriterionVerdict crit_partial_isometry(const MeasurableFunction& u, const PointMap& phi, double tol) {
    require_real_nonneg(u, "crit_partial_isometry: u");
    CriterionVerdict out;
    out.property = to_string(OperatorClass::PartialIsometry);

    const auto& sp = u.space();
    const std::size_t n = sp->size();
    const MeasurableFunction j = j_weight(u, phi);

    // V = u L^2(X \ S) with S = supp(J); the quadratic form of J - u must
    // vanish on the plain mu-orthocomplement K of V.
    const std::vector<std::size_t> s = support(j, support_cut(j));
    std::vector<char> in_s(n, 0);
    for (std::size_t i : s) in_s[i] = 1;
    std::vector<MeasurableFunction> gens;
    for (std::size_t k = 0; k < n; ++k) {
        if (in_s[k]) continue;
        std::vector<cx> v(n, 0.0);
        v[k] = u[k];
        gens.emplace_back(sp, std::move(v));
    }
    const Subspace k_space = ortho_complement(Subspace::span(sp, gens, kDefaultTol), kDefaultTol);

    std::vector<std::vector<cx>> raw;
    raw.reserve(k_space.dim());
    for (const auto& b : k_space.basis()) raw.push_back(b.values());
    const auto flat_basis = flat_orthonormalize(raw, kDefaultTol);

    // Flat matrix of the form f -> sum mu_i (J - u)_i |f_i|^2 is
    // diag(mu_i (J - u)_i); compress to K.
    std::vector<cx> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = sp->weight(i) * (j[i] - u[i]);
    const std::size_t r = flat_basis.size();
    Mat c(r, r);
    for (std::size_t bj = 0; bj < r; ++bj)
        for (std::size_t bi = 0; bi < r; ++bi) {
            cx acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                acc += std::conj(flat_basis[bi][i]) * w[i] * flat_basis[bj][i];
            c(bi, bj) = acc;
        }
    out.residual = c.norm_fro();

    const MaxDiff md = max_pointwise_diff(j, u);
    out.witness_atom = md.atom;
    out.verdict = out.residual <= tol;
    out.components = {{"J", j}, {"h", radon_nikodym(phi)}};
    std::ostringstream os;
    os << "K dim " << r << ", |X \\ S| = " << (n - s.size());
    out.note = os.str();
    return out;
}

CriterionVerdict crit_unitary(const MeasurableFunction& u, const PointMap& phi, double tol) {
    require_real_nonneg(u, "crit_unitary: u");
    CriterionVerdict out;
    out.property = to_string(OperatorClass::Unitary);

    const MeasurableFunction h = radon_nikodym(phi);
    const MeasurableFunction j = j_weight(u, phi);
    const MeasurableFunction uh_phi = compose(pointwise_mul(u, h), phi);

    const MaxDiff md1 = max_pointwise_diff(j, u);
    const MaxDiff md2 = max_pointwise_diff(uh_phi, u);
    if (md1.value >= md2.value) {
        out.residual = md1.value;
        out.witness_atom = md1.atom;
    } else {
        out.residual = md2.value;
        out.witness_atom = md2.atom;
        out.note = "worst violation in (u h) o phi = u";
    }
    out.verdict = out.residual <= tol;
    out.components = {{"J", j}, {"h", h}, {"uh_after_phi", uh_phi}};
    return out;
}

bool has_formula_criterion(OperatorClass property) {
    return property != OperatorClass::Hyponormal;
}

CriterionVerdict criterion_for(OperatorClass property, const MeasurableFunction& u,
                               const PointMap& phi, double tol) {
    switch (property) {
        case OperatorClass::SelfAdjoint: return crit_selfadjoint(u, phi, tol);
        case OperatorClass::Normal: return crit_normal(u, phi, tol);
        case OperatorClass::Quasinormal: return crit_quasinormal(u, phi, tol);
        case OperatorClass::Isometry: return crit_isometry(u, phi, tol);
        case OperatorClass::Unitary: return crit_unitary(u, phi, tol);
        case OperatorClass::PartialIsometry: return crit_partial_isometry(u, phi, tol);
        case OperatorClass::Hyponormal: break;
    }
    throw std::invalid_argument("criterion_for: no formula-level criterion for hyponormal");
}

bool sigma_containment(const PointMap& psi, const PointMap& phi) {
    require_same_space(psi.space(), phi.space(), "sigma_containment");
    return refines(fibers(phi), fibers(psi));
}

void require_positive_composition(const PointMap& psi, double tol) {
    const Operator c = composition_operator(psi);
    SpectralDecomposition sd;
    try {
        sd = spectral_decomposition(c, std::max(tol, kDefaultTol));
    } catch (const PreconditionError& e) {
        throw PreconditionError(std::string("C_psi is not positive: ") + e.what());
    }
    const double lmin = sd.eigenvalues.front();
    if (lmin < -std::max(tol, kDefaultTol) * std::max(1.0, sd.eigenvalues.back()))
        throw PreconditionError("C_psi is not positive: eigenvalue " + std::to_string(lmin));
}

bool has_cpsi_criterion(OperatorClass property) {
    switch (property) {
        case OperatorClass::SelfAdjoint:
        case OperatorClass::Isometry:
        case OperatorClass::PartialIsometry:
        case OperatorClass::Unitary:
            return true;
        default:
            return false;
    }
}

CriterionVerdict crit_cpsi(OperatorClass property, const PointMap& psi, const PointMap& phi, double tol) {
    require_same_space(psi.space(), phi.space(), "crit_cpsi");
    if (!has_cpsi_criterion(property))
        throw std::invalid_argument(std::string("crit_cpsi: no C_psi criterion for ") + to_string(property));
    require_positive_composition(psi, tol);

    // A positive C_psi equals M_sqrt(h_psi); delegate with that weight.
    const MeasurableFunction h_psi = radon_nikodym(psi);
    std::vector<cx> u(h_psi.size());
    for (std::size_t i = 0; i < h_psi.size(); ++i) u[i] = std::sqrt(std::max(h_psi[i].real(), 0.0));
    const MeasurableFunction sqrt_h(psi.space(), std::move(u));

    CriterionVerdict out = criterion_for(property, sqrt_h, phi, tol);
    out.components.emplace_back("sqrt_h_psi", sqrt_h);
    if (property == OperatorClass::Unitary) {
        const bool contained = sigma_containment(psi, phi);
        if (!contained) {
            out.verdict = false;
            out.note += (out.note.empty() ? "" : "; ");
            out.note += "psi^-1(Sigma) not contained in phi^-1(Sigma)";
        } else {
            out.note += (out.note.empty() ? "" : "; ");
            out.note += "sigma containment holds";
        }
    }
    return out;
}

} // namespace semiop
