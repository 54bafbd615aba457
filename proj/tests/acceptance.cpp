// Acceptance suite: one pass/fail line per criterion, all tolerances pinned
// in code. Exit status 0 iff every criterion passes.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "oadl/suites.hpp"

using namespace oadl;
using clock_type = std::chrono::steady_clock;

namespace {

struct Criterion {
    std::string label;
    bool pass = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::string detail;
};

std::vector<Criterion> results;

template <typename F>
void run_criterion(const std::string& label, double budget_seconds, F&& body) {
    Criterion c;
    c.label = label;
    c.budget_seconds = budget_seconds;
    const auto t0 = clock_type::now();
    try {
        c.pass = body(c.detail);
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (c.seconds > budget_seconds) {
        c.pass = false;
        c.detail += (c.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    results.push_back(std::move(c));
}

constexpr uint64_t kSeed = 20260809;

}  // namespace

int main() {
    // 1. Crossed-product exact distances: d0 = dKK = 1 and dMT = 1 as
    //    certified [1,1] brackets over the three (G, H, K) scenarios with
    //    fibers M_1 and M_2, cross-checked by 200 random target samples with
    //    margin >= -1e-10.
    run_criterion("1 crossed-product exact distances", 30.0, [](std::string& detail) {
        ScenarioConfig cstar = ScenarioConfig::defaults("crossed-cstar", kSeed);
        const SuiteReport r1 = run_suite(cstar);
        ScenarioConfig vn = ScenarioConfig::defaults("crossed-vn-mt", kSeed);
        const SuiteReport r2 = run_suite(vn);
        detail = "cases=" + std::to_string(r1.cases.size() + r2.cases.size());
        if (!r1.aggregate) detail += "; cstar first failure: " + r1.first_failure();
        if (!r2.aggregate) detail += "; vn-mt first failure: " + r2.first_failure();
        return r1.aggregate && r2.aggregate;
    });

    // 2. Sandwich and bounds on 50 seeded random unital pairs in M_2..M_4:
    //    all lbs <= 1 + 1e-9, d0.lb <= dkk.ub + 1e-6, dkk.lb <= 2 d0.ub + 1e-6,
    //    dmt.lb <= dkk.ub + 1e-6.
    run_criterion("2 sandwich and bounds", 180.0, [](std::string& detail) {
        ScenarioConfig cfg = ScenarioConfig::defaults("sandwich", kSeed);
        cfg.pair_count = 50;
        cfg.dims = {2, 3, 4};
        const SuiteReport r = run_suite(cfg);
        detail = "pairs=" + std::to_string(r.cases.size());
        if (!r.aggregate) detail += "; first failure: " + r.first_failure();
        return r.aggregate && r.cases.size() == 50;
    });

    // 3. Tensoring with C(K), K in {2, 3} points: certified lower bounds and
    //    the universal/trivial upper bounds pin the amplified distance to the
    //    base value within 1e-4 for d0 and dKK on 10 exactly-known pairs.
    run_criterion("3 C(K) stability", 120.0, [](std::string& detail) {
        ScenarioConfig cfg = ScenarioConfig::defaults("ck-stability", kSeed);
        cfg.k_values = {2, 3};
        const SuiteReport r = run_suite(cfg);
        detail = "cases=" + std::to_string(r.cases.size());
        if (!r.aggregate) detail += "; first failure: " + r.first_failure();
        return r.aggregate && r.cases.size() == 20;  // 10 pairs x k in {2,3}
    });

    // 4. Projective-norm stability: 10 seeded (A, B, beta) triples with
    //    not-refuted near inclusion; 500 sampled convex combinations per
    //    triple satisfy the gamma cost bound beta + 1e-6; embedded witnesses
    //    keep their lower bounds within 1e-6.
    run_criterion("4 gamma stability", 120.0, [](std::string& detail) {
        ScenarioConfig cfg = ScenarioConfig::defaults("gamma-stability", kSeed);
        cfg.triple_count = 10;
        cfg.budgets.sample_budget = 500;
        const SuiteReport r = run_suite(cfg);
        detail = "triples=" + std::to_string(r.cases.size());
        if (!r.aggregate) detail += "; first failure: " + r.first_failure();
        return r.aggregate && r.cases.size() == 10;
    });

    // 5. Structure identities: cocycle/covariance/adjoint relations, the
    //    conditional expectation laws, Fourier reconstruction <= 1e-9 and the
    //    coefficient inequalities on 100 random elements per system, trace
    //    invariance and traciality within 1e-9.
    run_criterion("5 structure identities", 30.0, [](std::string& detail) {
        ScenarioConfig cfg = ScenarioConfig::defaults("structure-identities", kSeed);
        const SuiteReport r = run_suite(cfg);
        detail = "cases=" + std::to_string(r.cases.size());
        if (!r.aggregate) detail += "; first failure: " + r.first_failure();
        return r.aggregate;
    });

    // 6. Tensor-norm orderings on 100 random tensors, elementary agreement
    //    within 1e-6, exact commutative slices, and the [1 - 1e-6, 1 + 1e-6]
    //    recombination bracket.
    run_criterion("6 tensor-norm orderings", 60.0, [](std::string& detail) {
        ScenarioConfig cfg = ScenarioConfig::defaults("norm-orderings", kSeed);
        cfg.tensor_count = 100;
        const SuiteReport r = run_suite(cfg);
        detail = "cases=" + std::to_string(r.cases.size());
        if (!r.aggregate) detail += "; first failure: " + r.first_failure();
        return r.aggregate;
    });

    // 7. Determinism: every suite re-run with identical seed and budgets
    //    produces a byte-identical JSON report modulo the wall-time field.
    run_criterion("7 determinism", 120.0, [](std::string& detail) {
        for (const std::string& name : suite_names()) {
            ScenarioConfig cfg = ScenarioConfig::defaults(name, kSeed + 5);
            cfg.pair_count = 6;
            cfg.triple_count = 6;
            cfg.tensor_count = 12;
            cfg.budgets.sample_budget = 40;
            cfg.budgets.num_starts = 3;
            json a = report_to_json(run_suite(cfg));
            json b = report_to_json(run_suite(cfg));
            a.erase("wall_time_ms");
            b.erase("wall_time_ms");
            if (a.dump() != b.dump()) {
                detail = "mismatch in suite " + name;
                return false;
            }
        }
        detail = "all suites byte-identical";
        return true;
    });

    bool all = true;
    for (const Criterion& c : results) {
        std::printf("criterion %-36s %s  (%.1f s <= %.0f s)%s%s\n", c.label.c_str(),
                    c.pass ? "PASS" : "FAIL", c.seconds, c.budget_seconds,
                    c.detail.empty() ? "" : "  -- ", c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
    return all ? 0 : 1;
}
