#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oadl/staralg.hpp"

namespace oadl {

/// Budgets for the convex inner solvers and the multi-start outer search.
struct SearchConfig {
    uint64_t seed = 1;
    int num_starts = 32;
    int max_iters = 500;
    double tol = 1e-6;
    int sample_budget = 2000;

    void validate() const {
        if (num_starts <= 0 || max_iters <= 0 || tol <= 0.0 || sample_budget <= 0)
            throw std::invalid_argument("SearchConfig: all budgets must be positive");
    }
};

/// Certified interval for a distance or norm value. The lower bound always
/// comes from an independently re-checkable object (a dual functional with
/// trace norm <= 1, possibly with a support-function bound for ball-constrained
/// problems); the upper bound from a feasible point.
struct DistanceBracket {
    enum class Status { certified, heuristic };

    double lb = 0.0;
    double ub = 0.0;
    std::optional<ComplexMatrix> witness;      // feasible point achieving ub
    std::optional<ComplexMatrix> certificate;  // dual functional phi, trace_norm <= 1
    double certificate_support = 0.0;          // S_ub payload (ball-mode duals)
    Status status = Status::heuristic;

    bool certified() const { return status == Status::certified; }
};

/// Best certified value found for a one-sided Hausdorff-type supremum.
struct GapEstimate {
    double best_lb = 0.0;
    ComplexMatrix best_witness{1, 1};
    long samples_used = 0;
    int converged_starts = 0;
};

enum class GapMode { to_subspace, to_ball };

/// min { ||x - z|| : z in span(z) }, operator norm. Certified when the
/// primal/dual gap closes below cfg.tol.
DistanceBracket dist_to_subspace(const ComplexMatrix& x, const StarSubspace& z,
                                 const SearchConfig& cfg = {});

/// min { ||x - z|| : z in span(z), ||z|| <= 1 }.
DistanceBracket dist_to_unit_ball(const ComplexMatrix& x, const StarSubspace& z,
                                  const SearchConfig& cfg = {});

/// min { ||x - z||_tau : z in span(q), ||z||_op <= 1 } (the d_MT inner problem).
DistanceBracket dist_to_ball_tau(const ComplexMatrix& x, const StarSubspace& q,
                                 const TracialState& trace, const SearchConfig& cfg = {});

/// Certified lower bound for sup_{y in B1(Y)} d(y, target), by multi-start
/// ascent over sampled unit-ball elements of Y.
GapEstimate one_sided_gap(const StarSubspace& y, const StarSubspace& z, GapMode mode,
                          const SearchConfig& cfg);

DistanceBracket d0_estimate(const StarSubspace& y, const StarSubspace& z,
                            const SearchConfig& cfg);
DistanceBracket dkk_estimate(const StarSubspace& y, const StarSubspace& z,
                             const SearchConfig& cfg);
DistanceBracket dmt_estimate(const StarSubspace& p, const StarSubspace& q,
                             const TracialState& trace, const SearchConfig& cfg);

/// All three distance brackets over one shared witness pool per direction, so
/// that the bracket-consistent forms of the sandwich inequalities hold by
/// construction.
struct PairEstimates {
    DistanceBracket d0;
    DistanceBracket dkk;
    std::optional<DistanceBracket> dmt;
    GapEstimate gap_yz;  // to-subspace direction records
    GapEstimate gap_zy;
};
PairEstimates estimate_pair(const StarSubspace& y, const StarSubspace& z,
                            const TracialState* trace, const SearchConfig& cfg);

/// One-sided refutation check for Y subset_gamma Z.
struct NearInclusionVerdict {
    bool refuted = false;
    std::optional<ComplexMatrix> witness;  // y in B1(Y) with certified dist > gamma
    double witness_lb = 0.0;
};
NearInclusionVerdict near_inclusion(const StarSubspace& y, const StarSubspace& z, double gamma,
                                    const SearchConfig& cfg);

}  // namespace oadl
