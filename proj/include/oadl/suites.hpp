#pragma once

#include <string>
#include <vector>

#include "oadl/serialize.hpp"

namespace oadl {

/// Seeded scenario suites mapping the verified statements to executable
/// checks. Suite names: sandwich, ck-stability, gamma-stability,
/// crossed-cstar, crossed-vn-mt, norm-orderings, structure-identities.
struct ScenarioConfig {
    std::string suite;
    uint64_t seed = 1;
    std::vector<int> dims = {2, 3, 4};  // ambient dimensions (sandwich)
    int pair_count = 50;                // random pairs (sandwich)
    std::vector<int> k_values = {2, 3}; // amplification sizes (ck-stability)
    int triple_count = 10;              // (A, B, beta) triples (gamma-stability)
    int tensor_count = 100;             // random tensors (norm-orderings)
    SearchConfig budgets{1, 6, 150, 1e-6, 500};
    std::string output_path;  // empty: no file written
    std::string format = "json";  // or "text-table"

    static ScenarioConfig defaults(const std::string& suite, uint64_t seed);
    void validate() const;
};

struct CaseRecord {
    std::string name;
    std::string digest;  // hash of the case inputs
    bool pass = false;
    double tolerance = 0.0;
    json data;  // brackets, certificates, observed values
};

struct SuiteReport {
    int schema = 1;
    std::string suite;
    uint64_t seed = 0;
    json budgets;
    std::vector<CaseRecord> cases;
    bool aggregate = false;
    double wall_time_ms = 0.0;

    /// Name of the first failing case, or empty.
    std::string first_failure() const;
};

json report_to_json(const SuiteReport& r);
SuiteReport report_from_json(const json& j);

/// Text-table rendering (one aligned row per case).
std::string report_to_text(const SuiteReport& r);

std::string emit_report(const SuiteReport& r, const std::string& format);

/// Runs a suite; writes the report to cfg.output_path when set.
SuiteReport run_suite(const ScenarioConfig& cfg);

/// Known suite names, in canonical order.
const std::vector<std::string>& suite_names();

// --- deterministic instance generation -------------------------------------

/// Random unital *-subalgebra pair in M_n: canned subalgebras conjugated by
/// random unitaries, or algebra closures of random Hermitian generators
/// (generator count capped at 2 so proper subalgebras dominate).
struct SubalgebraPair {
    StarSubspace first;
    StarSubspace second;
    std::string digest;
};
SubalgebraPair gen_subalgebra_pair(uint64_t seed, int ambient_dim, bool unital);

/// Canned twisted systems by name: z4-n1, z4-n2, s3-n1, s3-n2, pauli-n1,
/// pauli-n2.
TwistedSystem gen_twisted_system(const std::string& name);

}  // namespace oadl
