#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oadl/geodist.hpp"
#include "oadl/rng.hpp"
#include "oracles.hpp"

using namespace oadl;

namespace {

ComplexMatrix e_unit(int n, int i, int j) {
    ComplexMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
}

StarSubspace scalars(int n) {
    return algebra_closure(orthonormalize({ComplexMatrix::identity(n)}, n));
}

StarSubspace diag_algebra(int n) {
    std::vector<ComplexMatrix> gens;
    for (int i = 0; i < n; ++i) gens.push_back(e_unit(n, i, i));
    return algebra_closure(orthonormalize(gens, n));
}

StarSubspace sigma_z_line() {  // C * diag(1,-1) in M_2
    return orthonormalize({ComplexMatrix::diag({1.0, -1.0})}, 2);
}

SearchConfig quick_cfg(uint64_t seed = 11) {
    SearchConfig cfg;
    cfg.seed = seed;
    cfg.num_starts = 8;
    cfg.max_iters = 200;
    return cfg;
}

void check_bracket_integrity(const DistanceBracket& b, const ComplexMatrix& x,
                             const StarSubspace& z, bool ball_mode) {
    CHECK(b.lb <= b.ub + 1e-9);
    CHECK(b.lb >= -1e-12);
    if (b.witness) {
        const double redo = operator_norm(x - *b.witness);
        CHECK(std::abs(redo - b.ub) <= 1e-8);
        if (ball_mode) CHECK(operator_norm(*b.witness) <= 1.0 + 1e-9);
    }
    if (b.certificate) {
        CHECK(trace_norm(*b.certificate) <= 1.0 + 1e-9);
        if (!ball_mode) {
            // Annihilation + pairing reproduce the lower bound.
            for (const auto& bb : z.basis)
                CHECK(std::abs(hs_inner(*b.certificate, bb)) <= 1e-8);
            CHECK(std::abs(std::abs(hs_inner(*b.certificate, x)) - b.lb) <= 1e-8);
        } else {
            const double front = hs_inner(*b.certificate, x).real();
            CHECK(front - b.certificate_support >= b.lb - 1e-8);
        }
    }
}

}  // namespace

TEST_CASE("dist_to_subspace: member of the span") {
    const StarSubspace z = diag_algebra(2);
    const ComplexMatrix x = ComplexMatrix::diag({0.4, Complex(0.0, -2.0)});
    const DistanceBracket b = dist_to_subspace(x, z);
    CHECK(b.ub <= 1e-8);
    CHECK(b.lb >= 0.0);
    CHECK(b.certified());
}

TEST_CASE("dist_to_subspace: diag(1,-1) to the scalars equals 1 (grid oracle)") {
    const ComplexMatrix x = ComplexMatrix::diag({1.0, -1.0});
    const double want = oracles::grid_min_1c([&](Complex c) {
        return operator_norm(x - ComplexMatrix::identity(2) * c);
    });
    CHECK(want == doctest::Approx(1.0).epsilon(1e-5));

    const DistanceBracket b = dist_to_subspace(x, scalars(2));
    CHECK(b.lb == doctest::Approx(want).epsilon(1e-5));
    CHECK(b.ub == doctest::Approx(want).epsilon(1e-5));
    CHECK(b.certified());
    check_bracket_integrity(b, x, scalars(2), false);
}

TEST_CASE("dist_to_subspace: e12 to the diagonal algebra equals 1 (grid oracle)") {
    const ComplexMatrix x = e_unit(2, 0, 1);
    const double want = oracles::grid_min_2c([&](Complex c1, Complex c2) {
        ComplexMatrix z(2, 2);
        z(0, 0) = c1;
        z(1, 1) = c2;
        return operator_norm(x - z);
    });
    CHECK(want == doctest::Approx(1.0).epsilon(1e-4));

    const StarSubspace z = diag_algebra(2);
    const DistanceBracket b = dist_to_subspace(x, z);
    CHECK(b.lb == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(b.ub == doctest::Approx(1.0).epsilon(1e-5));
    check_bracket_integrity(b, x, z, false);
}

TEST_CASE("dist_to_subspace: shape mismatch throws") {
    CHECK_THROWS_AS(dist_to_subspace(ComplexMatrix(3, 3), diag_algebra(2)),
                    std::invalid_argument);
}

TEST_CASE("dist_to_subspace: certified gap <= 1e-5 on random instances (n <= 4)") {
    Rng rng(90210);
    int worst_count = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(3));
        const int gens = 1 + static_cast<int>(rng.uniform_index(2));
        std::vector<ComplexMatrix> g;
        for (int k = 0; k < gens; ++k) g.push_back(rng.matrix(n, n));
        const StarSubspace z = orthonormalize(g, n);
        ComplexMatrix x = rng.matrix(n, n);
        x *= Complex(1.0 / std::max(1.0, operator_norm(x)));

        const DistanceBracket b = dist_to_subspace(x, z);
        check_bracket_integrity(b, x, z, false);
        const double gap = b.ub - b.lb;
        worst = std::max(worst, gap);
        if (gap > 1e-5) ++worst_count;
    }
    CAPTURE(worst);
    CHECK(worst_count == 0);
}

TEST_CASE("dist_to_unit_ball: trivial membership and the 2*identity example") {
    const StarSubspace sc = scalars(2);
    const ComplexMatrix inside = ComplexMatrix::identity(2) * Complex(0.5);
    const DistanceBracket b0 = dist_to_unit_ball(inside, sc);
    CHECK(b0.ub <= 1e-8);

    const ComplexMatrix x = ComplexMatrix::identity(2) * Complex(2.0);
    const DistanceBracket b = dist_to_unit_ball(x, sc);
    CHECK(b.lb == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(b.ub == doctest::Approx(1.0).epsilon(1e-5));
    check_bracket_integrity(b, x, sc, true);
}

TEST_CASE("dist_to_unit_ball: zero subspace gives the norm exactly") {
    Rng rng(3);
    const ComplexMatrix x = rng.matrix(3, 3);
    const DistanceBracket b = dist_to_unit_ball(x, StarSubspace::zero(3));
    CHECK(b.lb == doctest::Approx(operator_norm(x)).epsilon(1e-9));
    CHECK(b.ub == doctest::Approx(operator_norm(x)).epsilon(1e-9));
}

TEST_CASE("one_sided_gap: self, canonical pair, containment") {
    const StarSubspace sc = scalars(2);
    const StarSubspace sz = sigma_z_line();
    const SearchConfig cfg = quick_cfg();

    CHECK(one_sided_gap(sc, sc, GapMode::to_subspace, cfg).best_lb <= 1e-6);
    CHECK(one_sided_gap(sc, sz, GapMode::to_subspace, cfg).best_lb ==
          doctest::Approx(1.0).epsilon(1e-4));
    CHECK(one_sided_gap(sc, sz, GapMode::to_ball, cfg).best_lb ==
          doctest::Approx(1.0).epsilon(1e-4));

    const StarSubspace diag = diag_algebra(2);
    StarSubspace full;
    {
        std::vector<ComplexMatrix> gens;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) gens.push_back(e_unit(2, i, j));
        full = algebra_closure(orthonormalize(gens, 2));
    }
    CHECK(one_sided_gap(diag, full, GapMode::to_subspace, cfg).best_lb <= 1e-6);
}

TEST_CASE("d0/dkk estimates: self distance, canonical pair, symmetry, bounds") {
    const SearchConfig cfg = quick_cfg(17);
    const StarSubspace sc = scalars(2);
    const StarSubspace sz = sigma_z_line();

    const DistanceBracket self0 = d0_estimate(sc, sc, cfg);
    CHECK(self0.ub <= 1e-6);
    const DistanceBracket selfk = dkk_estimate(sc, sc, cfg);
    CHECK(selfk.ub <= 1e-6);

    const DistanceBracket d0 = d0_estimate(sc, sz, cfg);
    CHECK(d0.lb == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(d0.ub <= 1.0 + 1e-9);

    const DistanceBracket dkk = dkk_estimate(sc, sz, cfg);
    CHECK(dkk.lb == doctest::Approx(1.0).epsilon(1e-4));

    const DistanceBracket swapped = dkk_estimate(sz, sc, cfg);
    CHECK(swapped.lb == dkk.lb);
    CHECK(swapped.ub == dkk.ub);
}

TEST_CASE("estimate_pair: sandwich-consistent brackets on random pairs") {
    Rng rng(5150);
    const TracialState tau3 = TracialState::normalized(3);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 3;
        const ComplexMatrix h = rng.hermitian(n);
        const StarSubspace p = algebra_closure(
            orthonormalize({ComplexMatrix::identity(n), h}, n));
        const ComplexMatrix u = herm_exp_i(rng.hermitian(n), 0.4);
        std::vector<ComplexMatrix> conj_gens;
        for (const auto& b : diag_algebra(n).basis) conj_gens.push_back(u * b * u.adjoint());
        const StarSubspace q = algebra_closure(orthonormalize(conj_gens, n));

        SearchConfig cfg = quick_cfg(1000 + trial);
        cfg.num_starts = 6;
        const PairEstimates est = estimate_pair(p, q, &tau3, cfg);

        CHECK(est.d0.lb <= 1.0 + 1e-9);
        CHECK(est.dkk.lb <= 1.0 + 1e-9);
        CHECK(est.d0.lb <= est.dkk.ub + 1e-6);
        CHECK(est.dkk.lb <= 2.0 * est.d0.ub + 1e-6);
        REQUIRE(est.dmt.has_value());
        CHECK(est.dmt->lb <= est.dkk.ub + 1e-6);
        CHECK(est.dmt->lb <= 1.0 + 1e-9);
    }
}

TEST_CASE("dmt_estimate: self distance and the scalars-vs-diagonal pair") {
    const TracialState tau = TracialState::normalized(2);
    const SearchConfig cfg = quick_cfg(23);
    const StarSubspace sc = scalars(2);
    const StarSubspace dg = diag_algebra(2);

    CHECK(dmt_estimate(sc, sc, tau, cfg).ub <= 1e-6);

    // Grid oracle for the inner value at the canonical witness diag(1,-1).
    const ComplexMatrix w = ComplexMatrix::diag({1.0, -1.0});
    const double inner = oracles::grid_min_1c([&](Complex c) {
        if (std::abs(c) > 1.0) c /= std::abs(c);
        const ComplexMatrix r = w - ComplexMatrix::identity(2) * c;
        return tau.norm(r);
    });
    CHECK(inner == doctest::Approx(1.0).epsilon(1e-5));

    const DistanceBracket dmt = dmt_estimate(sc, dg, tau, cfg);
    CHECK(dmt.lb > 0.0);
    CHECK(dmt.lb >= inner - 1e-4);
    CHECK(dmt.ub <= 1.0 + 1e-9);

    const StarSubspace nonunital = orthonormalize({e_unit(2, 0, 0)}, 2);
    CHECK_THROWS_AS(dmt_estimate(nonunital, dg, tau, cfg), std::invalid_argument);
}

TEST_CASE("near_inclusion verdicts") {
    const SearchConfig cfg = quick_cfg(29);
    const StarSubspace sc = scalars(2);
    const StarSubspace sz = sigma_z_line();

    CHECK_FALSE(near_inclusion(sc, sz, 1.0, cfg).refuted);  // z = 0 works at gamma = 1
    const NearInclusionVerdict v = near_inclusion(sc, sz, 0.5, cfg);
    CHECK(v.refuted);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness_lb > 0.5);
    CHECK_FALSE(near_inclusion(sc, sc, 0.01, cfg).refuted);
}

TEST_CASE("determinism: identical seeds give identical estimates") {
    const StarSubspace sc = scalars(2);
    const StarSubspace dg = diag_algebra(2);
    const SearchConfig cfg = quick_cfg(31337);
    const PairEstimates a = estimate_pair(sc, dg, nullptr, cfg);
    const PairEstimates b = estimate_pair(sc, dg, nullptr, cfg);
    CHECK(a.d0.lb == b.d0.lb);
    CHECK(a.d0.ub == b.d0.ub);
    CHECK(a.dkk.lb == b.dkk.lb);
    CHECK(a.dkk.ub == b.dkk.ub);
    CHECK(a.gap_yz.best_lb == b.gap_yz.best_lb);
    CHECK(max_abs_diff(a.gap_yz.best_witness, b.gap_yz.best_witness) == 0.0);
}
