#pragma once

#include <cstdint>
#include <optional>

#include "json.hpp"

#include "semiop/criteria.hpp"
#include "semiop/interval.hpp"

namespace semiop::runner {

using json = nlohmann::json;

inline constexpr const char* kToolName = "semiop";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum class Mode { Matrix, Formula, Both };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

// A scenario file: one space, one map phi, the weight (either u for M_u or a
// second map psi for C_psi), and the list of properties to check.
struct Scenario {
    std::vector<double> weights;
    std::vector<std::size_t> phi;
    std::optional<std::vector<std::size_t>> psi;
    std::optional<std::vector<double>> u_values;
    std::optional<std::pair<std::string, double>> u_form; // ("exp"|"const", param)
    std::vector<std::string> checks;
    double tol = 1e-9;
    Mode mode = Mode::Both;
};

// Throws std::invalid_argument naming the offending field.
Scenario scenario_from_json(const json& j);
Scenario load_scenario(const std::string& path);

struct Finding {
    std::string kind;
    std::string detail;
    json context;
};
json finding_to_json(const Finding& f);

struct CheckRecord {
    std::string property;
    std::optional<bool> matrix_verdict;
    std::optional<double> matrix_residual;
    std::string matrix_witness;
    std::optional<double> alt_residual;
    std::optional<bool> formula_verdict;
    std::optional<double> formula_residual;
    std::optional<std::ptrdiff_t> witness_atom;
    std::string formula_note;
    json components; // name -> [[re,im],...]
    std::optional<bool> agree;
    std::optional<std::string> error;
};

struct CheckReport {
    int v = kSchemaVersion;
    std::string mode;
    double tol = 0.0;
    std::vector<CheckRecord> checks;
    std::vector<Finding> findings;

    json to_json() const;
    static CheckReport from_json(const json& j);
    bool any_disagreement() const;
};

CheckReport run_check(const Scenario& sc);

struct SearchReport {
    int v = kSchemaVersion;
    std::size_t n = 0;
    std::string property;
    std::vector<double> weights;
    std::vector<double> u;
    double tol = 0.0;
    std::size_t total_maps = 0;
    std::optional<std::size_t> formula_true;
    std::size_t matrix_true = 0;
    std::size_t matrix_skipped = 0; // not in B_A(H)
    std::vector<std::vector<std::size_t>> true_maps;
    bool true_maps_truncated = false;
    std::vector<Finding> disagreements;
    std::vector<Finding> findings;

    json to_json() const;
    bool any_disagreement() const { return !disagreements.empty(); }
};

// Enumerates all n^n maps (guarded at n <= 6) and classifies them by matrix
// and formula predicates; verdict mismatches become findings, never throws.
SearchReport run_search(std::size_t n, OperatorClass property, const std::vector<double>& u,
                        const std::vector<double>& weights, double tol = 1e-8,
                        std::size_t true_map_cap = 256);

struct ExampleReport {
    int v = kSchemaVersion;
    std::string example;
    int grid = 0;
    std::string u_spec;
    double tol = 0.0;
    std::vector<IntervalVerdict> results;
    std::vector<Finding> findings;

    json to_json() const;
};

ExampleReport run_example(const std::string& name, const std::string& u_spec, int grid,
                          const std::vector<std::string>& properties, double tol = 1e-9);

struct DouglasRunReport {
    int v = kSchemaVersion;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t true_cases = 0;
    std::size_t false_cases = 0;
    double max_factor_residual = 0.0;   // ||AW - B|| over the true cases
    double max_route_mismatch = 0.0;    // ||A^dagger B - reduced W|| over the true cases
    std::vector<Finding> violations;

    json to_json() const;
    bool ok() const { return violations.empty(); }
};

// Random positive A; half the trials build B = AC (inclusion holds), half
// append a range-escaping column (inclusion fails).  Checks that the three
// equivalent conditions agree and that the reduced solution behaves.
DouglasRunReport run_douglas(std::uint64_t seed, std::size_t trials, double tol = 1e-9);

// Shared helpers for the CLI and for tests.
std::vector<double> parse_u_list(const std::string& spec, std::size_t n);
std::vector<double> parse_mu_list(const std::string& spec, std::size_t n);
json encode_function(const MeasurableFunction& f);

} // namespace semiop::runner
