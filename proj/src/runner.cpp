#include "semiop/runner.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace semiop::runner {

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Matrix: return "matrix";
        case Mode::Formula: return "formula";
        case Mode::Both: return "both";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "matrix") return Mode::Matrix;
    if (s == "formula") return Mode::Formula;
    if (s == "both") return Mode::Both;
    throw std::invalid_argument("scenario: 'mode' must be matrix, formula or both");
}

namespace {

// Residuals may be +inf (failed period-2 requirement); JSON carries those as
// the string "infinity".
json encode_residual(double r) {
    if (std::isfinite(r)) return r;
    return "infinity";
}

double decode_residual(const json& j) {
    if (j.is_string()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

std::vector<std::size_t> parse_targets(const json& j, const char* field, std::size_t n) {
    if (!j.is_array() || j.size() != n)
        throw std::invalid_argument(std::string("scenario: '") + field + "' must be an array of " +
                                    std::to_string(n) + " atom indices");
    std::vector<std::size_t> t;
    for (const auto& e : j) {
        if (!e.is_number_integer() || e.get<long long>() < 0 ||
            e.get<unsigned long long>() >= n)
            throw std::invalid_argument(std::string("scenario: '") + field +
                                        "' entries must be atom indices in [0, n)");
        t.push_back(e.get<std::size_t>());
    }
    return t;
}

MeasurableFunction resolve_u(const Scenario& sc, const SpacePtr& space) {
    const std::size_t n = space->size();
    std::vector<double> vals(n);
    if (sc.u_values) {
        vals = *sc.u_values;
    } else if (sc.u_form) {
        const auto& [form, param] = *sc.u_form;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            vals[i] = form == "exp" ? std::exp(param * x) : param;
        }
    } else {
        throw std::invalid_argument("scenario: one of 'u' or 'psi' is required");
    }
    MeasurableFunction u(space, vals);
    require_real_nonneg(u, "scenario: 'u'");
    return u;
}

} // namespace

Scenario scenario_from_json(const json& j) {
    Scenario sc;
    if (!j.is_object()) throw std::invalid_argument("scenario: top level must be an object");
    if (!j.contains("v") || !j["v"].is_number_integer() || j["v"].get<int>() != kSchemaVersion)
        throw std::invalid_argument("scenario: 'v' must be 1");

    if (!j.contains("weights") || !j["weights"].is_array() || j["weights"].empty())
        throw std::invalid_argument("scenario: 'weights' must be a nonempty array");
    for (const auto& w : j["weights"]) {
        if (!w.is_number() || !(w.get<double>() > 0.0))
            throw std::invalid_argument("scenario: 'weights' entries must be positive numbers");
        sc.weights.push_back(w.get<double>());
    }
    const std::size_t n = sc.weights.size();

    if (!j.contains("phi")) throw std::invalid_argument("scenario: 'phi' is required");
    sc.phi = parse_targets(j["phi"], "phi", n);

    if (j.contains("psi")) sc.psi = parse_targets(j["psi"], "psi", n);

    if (j.contains("u")) {
        if (sc.psi)
            throw std::invalid_argument("scenario: give exactly one of 'u' or 'psi'");
        const auto& ju = j["u"];
        if (ju.is_array()) {
            if (ju.size() != n)
                throw std::invalid_argument("scenario: 'u' must have one value per atom");
            std::vector<double> vals;
            for (const auto& e : ju) {
                if (!e.is_number())
                    throw std::invalid_argument("scenario: 'u' entries must be real numbers");
                vals.push_back(e.get<double>());
            }
            sc.u_values = std::move(vals);
        } else if (ju.is_object()) {
            if (!ju.contains("form") || !ju["form"].is_string())
                throw std::invalid_argument("scenario: 'u.form' must be \"exp\" or \"const\"");
            const std::string form = ju["form"].get<std::string>();
            if (form != "exp" && form != "const")
                throw std::invalid_argument("scenario: 'u.form' must be \"exp\" or \"const\"");
            const double param = ju.contains("param") ? ju["param"].get<double>() : 1.0;
            sc.u_form = {form, param};
        } else {
            throw std::invalid_argument("scenario: 'u' must be an array or a form object");
        }
    } else if (!sc.psi) {
        throw std::invalid_argument("scenario: one of 'u' or 'psi' is required");
    }

    if (!j.contains("checks") || !j["checks"].is_array() || j["checks"].empty())
        throw std::invalid_argument("scenario: 'checks' must be a nonempty array");
    for (const auto& c : j["checks"]) {
        if (!c.is_string() || !operator_class_from_string(c.get<std::string>()))
            throw std::invalid_argument("scenario: 'checks' entry '" + c.dump() +
                                        "' is not a known property");
        sc.checks.push_back(c.get<std::string>());
    }

    if (j.contains("tol")) {
        if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0.0))
            throw std::invalid_argument("scenario: 'tol' must be a positive number");
        sc.tol = j["tol"].get<double>();
    }
    if (j.contains("mode")) {
        if (!j["mode"].is_string())
            throw std::invalid_argument("scenario: 'mode' must be a string");
        sc.mode = mode_from_string(j["mode"].get<std::string>());
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("scenario: invalid JSON: " + std::string(e.what()));
    }
    return scenario_from_json(j);
}

json finding_to_json(const Finding& f) {
    json j{{"kind", f.kind}, {"detail", f.detail}};
    if (!f.context.is_null()) j["context"] = f.context;
    return j;
}

json encode_function(const MeasurableFunction& f) {
    json arr = json::array();
    for (std::size_t i = 0; i < f.size(); ++i) arr.push_back({f[i].real(), f[i].imag()});
    return arr;
}

json CheckReport::to_json() const {
    json j{{"v", v},   {"tool", kToolName}, {"version", kToolVersion},
           {"kind", "check"}, {"mode", mode},     {"tol", tol}};
    json arr = json::array();
    for (const auto& c : checks) {
        json rec{{"property", c.property}};
        if (c.matrix_verdict) {
            json m{{"verdict", *c.matrix_verdict},
                   {"residual", encode_residual(*c.matrix_residual)},
                   {"witness", c.matrix_witness}};
            if (c.alt_residual) m["alt_residual"] = encode_residual(*c.alt_residual);
            rec["matrix"] = m;
        }
        if (c.formula_verdict) {
            json f{{"verdict", *c.formula_verdict},
                   {"residual", encode_residual(*c.formula_residual)}};
            if (c.witness_atom) f["witness_atom"] = *c.witness_atom;
            if (!c.formula_note.empty()) f["note"] = c.formula_note;
            if (!c.components.is_null()) f["components"] = c.components;
            rec["formula"] = f;
        }
        if (c.agree) rec["agree"] = *c.agree;
        if (c.error) rec["error"] = *c.error;
        arr.push_back(rec);
    }
    j["checks"] = arr;
    json fnd = json::array();
    for (const auto& f : findings) fnd.push_back(finding_to_json(f));
    j["findings"] = fnd;
    return j;
}

CheckReport CheckReport::from_json(const json& j) {
    CheckReport r;
    r.v = j.at("v").get<int>();
    r.mode = j.at("mode").get<std::string>();
    r.tol = j.at("tol").get<double>();
    for (const auto& rec : j.at("checks")) {
        CheckRecord c;
        c.property = rec.at("property").get<std::string>();
        if (rec.contains("matrix")) {
            const auto& m = rec["matrix"];
            c.matrix_verdict = m.at("verdict").get<bool>();
            c.matrix_residual = decode_residual(m.at("residual"));
            c.matrix_witness = m.at("witness").get<std::string>();
            if (m.contains("alt_residual")) c.alt_residual = decode_residual(m["alt_residual"]);
        }
        if (rec.contains("formula")) {
            const auto& f = rec["formula"];
            c.formula_verdict = f.at("verdict").get<bool>();
            c.formula_residual = decode_residual(f.at("residual"));
            if (f.contains("witness_atom")) c.witness_atom = f["witness_atom"].get<std::ptrdiff_t>();
            if (f.contains("note")) c.formula_note = f["note"].get<std::string>();
            if (f.contains("components")) c.components = f["components"];
        }
        if (rec.contains("agree")) c.agree = rec["agree"].get<bool>();
        if (rec.contains("error")) c.error = rec["error"].get<std::string>();
        r.checks.push_back(std::move(c));
    }
    for (const auto& f : j.at("findings")) {
        Finding fi;
        fi.kind = f.at("kind").get<std::string>();
        fi.detail = f.at("detail").get<std::string>();
        if (f.contains("context")) fi.context = f["context"];
        r.checks.empty() ? void() : void(); // keep order stable
        r.findings.push_back(std::move(fi));
    }
    return r;
}

bool CheckReport::any_disagreement() const {
    for (const auto& c : checks)
        if (c.agree && !*c.agree) return true;
    return false;
}

CheckReport run_check(const Scenario& sc) {
    CheckReport rep;
    rep.mode = to_string(sc.mode);
    rep.tol = sc.tol;

    const SpacePtr space = make_space(sc.weights);
    const PointMap phi(space, sc.phi);
    std::optional<PointMap> psi;
    if (sc.psi) psi.emplace(space, *sc.psi);
    std::optional<MeasurableFunction> u;
    if (!psi) u = resolve_u(sc, space);

    const bool want_matrix = sc.mode != Mode::Formula;
    const bool want_formula = sc.mode != Mode::Matrix;

    // The semi-inner product is shared by all checks; a positivity failure is
    // reported on each record instead of aborting the run.
    std::optional<SemiInnerProduct> s;
    std::optional<std::string> setup_error;
    const Operator cphi = composition_operator(phi);
    if (want_matrix) {
        try {
            const Operator a = psi ? composition_operator(*psi) : multiplication_operator(*u);
            s.emplace(a, kDefaultTol);
        } catch (const PreconditionError& e) {
            setup_error = e.what();
            rep.findings.push_back({"weight_operator_not_positive", e.what(), json{}});
        }
    }

    for (const std::string& name : sc.checks) {
        CheckRecord rec;
        rec.property = name;
        const OperatorClass cls = *operator_class_from_string(name);

        if (want_matrix) {
            if (setup_error) {
                rec.error = *setup_error;
            } else {
                try {
                    const ClassVerdict v = oracle_is(cls, *s, cphi, sc.tol);
                    rec.matrix_verdict = v.verdict;
                    rec.matrix_residual = v.residual;
                    rec.matrix_witness = v.witness;
                    rec.alt_residual = v.alt_residual;
                } catch (const PreconditionError& e) {
                    rec.error = e.what();
                }
            }
        }

        if (want_formula) {
            try {
                std::optional<CriterionVerdict> cv;
                if (psi) {
                    if (has_cpsi_criterion(cls))
                        cv = crit_cpsi(cls, *psi, phi, sc.tol);
                    else
                        rec.formula_note = "no formula criterion relative to a composition weight";
                } else {
                    if (has_formula_criterion(cls))
                        cv = criterion_for(cls, *u, phi, sc.tol);
                    else
                        rec.formula_note = "no formula criterion; matrix oracle only";
                }
                if (cv) {
                    rec.formula_verdict = cv->verdict;
                    rec.formula_residual = cv->residual;
                    rec.witness_atom = cv->witness_atom;
                    rec.formula_note = cv->note;
                    json comps = json::object();
                    for (const auto& [cname, cf] : cv->components) comps[cname] = encode_function(cf);
                    rec.components = comps;
                }
            } catch (const PreconditionError& e) {
                if (!rec.error) rec.error = e.what();
            }
        }

        if (rec.matrix_verdict && rec.formula_verdict) {
            rec.agree = (*rec.matrix_verdict == *rec.formula_verdict);
            if (!*rec.agree)
                rep.findings.push_back(
                    {"criterion_oracle_disagreement",
                     "matrix and formula verdicts differ for " + name,
                     json{{"property", name},
                          {"matrix_residual", encode_residual(*rec.matrix_residual)},
                          {"formula_residual", encode_residual(*rec.formula_residual)}}});
        }
        rep.checks.push_back(std::move(rec));
    }
    return rep;
}

json SearchReport::to_json() const {
    json j{{"v", v},
           {"tool", kToolName},
           {"version", kToolVersion},
           {"kind", "search"},
           {"n", n},
           {"property", property},
           {"weights", weights},
           {"u", u},
           {"tol", tol},
           {"total_maps", total_maps},
           {"matrix_true", matrix_true},
           {"matrix_skipped", matrix_skipped},
           {"true_maps", true_maps},
           {"true_maps_truncated", true_maps_truncated}};
    if (formula_true) j["formula_true"] = *formula_true;
    json d = json::array();
    for (const auto& f : disagreements) d.push_back(finding_to_json(f));
    j["disagreements"] = d;
    json fnd = json::array();
    for (const auto& f : findings) fnd.push_back(finding_to_json(f));
    j["findings"] = fnd;
    return j;
}

SearchReport run_search(std::size_t n, OperatorClass property, const std::vector<double>& u,
                        const std::vector<double>& weights, double tol, std::size_t true_map_cap) {
    if (n < 1 || n > 6)
        throw std::invalid_argument("search: n must be between 1 and 6 (the sweep visits n^n maps)");
    if (u.size() != n || weights.size() != n)
        throw std::invalid_argument("search: u and mu must have one entry per atom");

    SearchReport rep;
    rep.n = n;
    rep.property = to_string(property);
    rep.weights = weights;
    rep.u = u;
    rep.tol = tol;

    const SpacePtr space = make_space(weights);
    const MeasurableFunction uf(space, u);
    require_real_nonneg(uf, "search: u");
    const SemiInnerProduct s(multiplication_operator(uf), kDefaultTol);
    const bool with_formula = has_formula_criterion(property);
    if (with_formula) rep.formula_true = 0;

    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= n;
    rep.total_maps = total;

    std::vector<std::size_t> targets(n, 0);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rem = code;
        for (std::size_t i = 0; i < n; ++i) { // atom 0 is the most significant digit
            targets[n - 1 - i] = rem % n;
            rem /= n;
        }
        const PointMap phi(space, targets);

        std::optional<bool> m_verdict;
        double m_residual = 0.0;
        try {
            const ClassVerdict v = oracle_is(property, s, composition_operator(phi), tol);
            m_verdict = v.verdict;
            m_residual = v.residual;
            if (v.verdict) ++rep.matrix_true;
        } catch (const PreconditionError& e) {
            ++rep.matrix_skipped;
            rep.findings.push_back({"not_in_b_a", e.what(), json{{"phi", targets}}});
        }

        std::optional<bool> f_verdict;
        double f_residual = 0.0;
        if (with_formula) {
            const CriterionVerdict cv = criterion_for(property, uf, phi, tol);
            f_verdict = cv.verdict;
            f_residual = cv.residual;
            if (cv.verdict) {
                ++*rep.formula_true;
                if (rep.true_maps.size() < true_map_cap)
                    rep.true_maps.push_back(targets);
                else
                    rep.true_maps_truncated = true;
            }
        } else if (m_verdict && *m_verdict && rep.true_maps.size() < true_map_cap) {
            rep.true_maps.push_back(targets);
        }

        if (m_verdict && f_verdict && *m_verdict != *f_verdict) {
            rep.disagreements.push_back(
                {"criterion_oracle_disagreement",
                 "matrix and formula verdicts differ",
                 json{{"phi", targets},
                      {"matrix_verdict", *m_verdict},
                      {"matrix_residual", encode_residual(m_residual)},
                      {"formula_verdict", *f_verdict},
                      {"formula_residual", encode_residual(f_residual)}}});
        }
    }
    return rep;
}

json ExampleReport::to_json() const {
    json j{{"v", v},       {"tool", kToolName}, {"version", kToolVersion}, {"kind", "example"},
           {"example", example}, {"grid", grid},      {"u", u_spec},             {"tol", tol}};
    json arr = json::array();
    for (const auto& r : results)
        arr.push_back({{"property", r.property},
                       {"verdict", r.verdict},
                       {"residual", r.residual},
                       {"witness_x", r.witness_x},
                       {"residual_x0", r.residual_first}});
    j["results"] = arr;
    json fnd = json::array();
    for (const auto& f : findings) fnd.push_back(finding_to_json(f));
    j["findings"] = fnd;
    return j;
}

ExampleReport run_example(const std::string& name, const std::string& u_spec, int grid,
                          const std::vector<std::string>& properties, double tol) {
    ExampleReport rep;
    rep.example = name;
    rep.grid = grid;
    rep.u_spec = u_spec;
    rep.tol = tol;

    BranchMap m = [&]() {
        if (name == "doubling") return BranchMap::doubling();
        if (name == "tent") return BranchMap::tent();
        throw std::invalid_argument("example: unknown map '" + name + "' (use doubling or tent)");
    }();
    const ScalarField u = parse_field_spec(u_spec);

    for (const std::string& p : properties) {
        const auto cls = operator_class_from_string(p);
        if (!cls || !has_interval_criterion(*cls))
            throw std::invalid_argument("example: property '" + p +
                                        "' is not available on interval maps (use normal, isometry or unitary)");
        rep.results.push_back(crit_interval(*cls, m, u, grid, tol));
    }

    if (name == "tent") {
        rep.findings.push_back(
            {"tent_fiber_pairing",
             "the fiber partner of x on (1/2,1] is 1-x: E(f)(x) averages f(x) with f(1-x); "
             "a closed form written with f(-x) leaves [0,1] and needs the reflection f(1-x)",
             json{}});
    }
    return rep;
}

json DouglasRunReport::to_json() const {
    json j{{"v", v},
           {"tool", kToolName},
           {"version", kToolVersion},
           {"kind", "douglas"},
           {"seed", seed},
           {"trials", trials},
           {"true_cases", true_cases},
           {"false_cases", false_cases},
           {"max_factor_residual", max_factor_residual},
           {"max_route_mismatch", max_route_mismatch}};
    json viol = json::array();
    for (const auto& f : violations) viol.push_back(finding_to_json(f));
    j["violations"] = viol;
    return j;
}

DouglasRunReport run_douglas(std::uint64_t seed, std::size_t trials, double tol) {
    if (trials < 1) throw std::invalid_argument("douglas: trials must be >= 1");
    DouglasRunReport rep;
    rep.seed = seed;
    rep.trials = trials;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> wdist(0.2, 2.0);
    std::uniform_real_distribution<double> edist(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> ndist(2, 6);

    for (std::size_t t = 0; t < trials; ++t) {
        const bool want_inclusion = (t % 2 == 0);
        const std::size_t n = ndist(rng);
        std::vector<double> w(n);
        for (double& x : w) x = wdist(rng);
        const SpacePtr space = make_space(w);

        auto random_mat = [&]() {
            Mat m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = cx{edist(rng), edist(rng)};
            return m;
        };

        // Positive A = R*R; false cases need a nontrivial null space, so at
        // least one column of R is zeroed there.
        Mat r = random_mat();
        std::uniform_int_distribution<std::size_t> kdist(want_inclusion ? 0 : 1, n - 1);
        const std::size_t deficiency = kdist(rng);
        for (std::size_t c = 0; c < deficiency; ++c)
            for (std::size_t i = 0; i < n; ++i) r(i, c) = 0.0;
        const Operator rop(space, r);
        const Operator a = mu_adjoint(rop) * rop;

        Operator b = a * Operator(space, random_mat());
        if (!want_inclusion) {
            const Operator p = projection(range(a, kDefaultTol));
            MeasurableFunction esc = MeasurableFunction::constant(space, 0.0);
            double best = 0.0;
            for (int tries = 0; tries < 8; ++tries) {
                std::vector<cx> v(n);
                for (cx& x : v) x = cx{edist(rng), edist(rng)};
                MeasurableFunction cand(space, v);
                MeasurableFunction res = pointwise_sub(cand, p.apply(cand));
                if (mu_norm(res) > best) { best = mu_norm(res); esc = res; }
            }
            std::uniform_int_distribution<std::size_t> cdist(0, n - 1);
            const std::size_t col = cdist(rng);
            for (std::size_t i = 0; i < n; ++i) b.entries()(i, col) += esc[i];
        }

        const DouglasReport dc = douglas_check(a, b, kDefaultTol);
        const bool booleans_agree =
            dc.range_incl == dc.majorization && dc.majorization == dc.factorization;
        if (!booleans_agree || dc.range_incl != want_inclusion) {
            rep.violations.push_back(
                {"douglas_route_mismatch",
                 "the three equivalent conditions disagree or miss the constructed case",
                 json{{"trial", t},
                      {"expected_inclusion", want_inclusion},
                      {"range_incl", dc.range_incl},
                      {"majorization", dc.majorization},
                      {"factorization", dc.factorization}}});
            continue;
        }

        if (want_inclusion) {
            ++rep.true_cases;
            try {
                const Operator wred = douglas_reduced_solution(a, b, kDefaultTol);
                const double resid = fnorm(a * wred - b);
                rep.max_factor_residual = std::max(rep.max_factor_residual, resid);
                const Operator alt = moore_penrose(a, kDefaultTol) * b;
                const double mismatch = fnorm(alt - wred);
                rep.max_route_mismatch = std::max(rep.max_route_mismatch, mismatch);
                const double scale = std::max(1.0, fnorm(b));
                if (resid > tol * scale || mismatch > tol * scale)
                    rep.violations.push_back({"reduced_solution_off",
                                              "reduced solution fails AW=B or the spectral route",
                                              json{{"trial", t},
                                                   {"factor_residual", resid},
                                                   {"route_mismatch", mismatch}}});
            } catch (const std::exception& e) {
                rep.violations.push_back({"reduced_solution_threw", e.what(), json{{"trial", t}}});
            }
        } else {
            ++rep.false_cases;
            try {
                (void)douglas_reduced_solution(a, b, kDefaultTol);
                rep.violations.push_back({"reduced_solution_accepted_bad_range",
                                          "reduced solution did not reject a range-escaping B",
                                          json{{"trial", t}}});
            } catch (const PreconditionError&) {
                // expected
            }
        }
    }
    return rep;
}

std::vector<double> parse_u_list(const std::string& spec, std::size_t n) {
    if (spec.rfind("const:", 0) == 0)
        return std::vector<double>(n, std::stod(spec.substr(6)));
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (vals.size() != n)
        throw std::invalid_argument("u spec needs " + std::to_string(n) + " comma-separated values or const:c");
    return vals;
}

std::vector<double> parse_mu_list(const std::string& spec, std::size_t n) {
    if (spec == "uniform") return std::vector<double>(n, 1.0 / static_cast<double>(n));
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (vals.size() != n)
        throw std::invalid_argument("mu spec needs " + std::to_string(n) +
                                    " comma-separated values or 'uniform'");
    return vals;
}

} // namespace semiop::runner
