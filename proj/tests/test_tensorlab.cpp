#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oadl/rng.hpp"
#include "oadl/tensorlab.hpp"
#include "oracles.hpp"

using namespace oadl;

namespace {

ComplexMatrix e_unit(int n, int i, int j) {
    ComplexMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
}

ComplexMatrix basis_vec(int k, int i) {
    ComplexMatrix v(k, 1);
    v(i, 0) = 1.0;
    return v;
}

StarSubspace scalars(int n) {
    return algebra_closure(orthonormalize({ComplexMatrix::identity(n)}, n));
}

StarSubspace diag_algebra(int n) {
    std::vector<ComplexMatrix> gens;
    for (int i = 0; i < n; ++i) gens.push_back(e_unit(n, i, i));
    return algebra_closure(orthonormalize(gens, n));
}

// Monte-Carlo injective-norm oracle over product functionals: for each random
// rank-one right functional psi, the sup over the left dual ball is exactly
// the operator norm of the psi-slice (computed by the power-iteration
// oracle), so each sample evaluates sup_phi |sum phi(x_i) psi(y_i)| exactly.
double mc_injective(const TensorElement& u, int samples, uint64_t seed) {
    Rng rng(seed);
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        const ComplexMatrix psi = rng.unit_vector(u.right_spec.size) *
                                  rng.unit_vector(u.right_spec.size).adjoint();
        ComplexMatrix slice(u.left_spec.size, u.left_spec.size);
        for (const auto& t : u.terms) slice += t.left * hs_inner(psi, t.right);
        best = std::max(best, oracles::power_iteration_norm(slice));
    }
    return best;
}

}  // namespace

TEST_CASE("min_norm: elementary, diagonal projection sum, zero") {
    Rng rng(1);
    const ComplexMatrix a = rng.matrix(2, 2);
    const ComplexMatrix b = rng.matrix(3, 3);
    const auto spec2 = FactorSpec::matrix(2);
    const auto spec3 = FactorSpec::matrix(3);
    const TensorElement u = TensorElement::elementary(spec2, spec3, a, b);
    CHECK(min_norm(u) == doctest::Approx(operator_norm(a) * operator_norm(b)).epsilon(1e-10));

    TensorElement diag_sum{spec2, spec2, {}};
    diag_sum.terms.push_back({e_unit(2, 0, 0), e_unit(2, 0, 0)});
    diag_sum.terms.push_back({e_unit(2, 1, 1), e_unit(2, 1, 1)});
    // Explicit Kronecker sum: diag(1,0,0,1); operator norm 1.
    const ComplexMatrix rep = kron(e_unit(2, 0, 0), e_unit(2, 0, 0)) +
                              kron(e_unit(2, 1, 1), e_unit(2, 1, 1));
    CHECK(operator_norm(rep) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(min_norm(diag_sum) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK(min_norm(TensorElement::zero(spec2, spec2)) == 0.0);
}

TEST_CASE("injective_norm: elementary tensors are cross-normed") {
    Rng rng(2);
    const ComplexMatrix a = rng.matrix(2, 2);
    const ComplexMatrix b = rng.matrix(2, 2);
    const TensorElement u =
        TensorElement::elementary(FactorSpec::matrix(2), FactorSpec::matrix(2), a, b);
    const NormBracket nb = injective_norm(u);
    const double want = operator_norm(a) * operator_norm(b);
    CHECK(nb.lb == doctest::Approx(want).epsilon(1e-6));
    CHECK(nb.ub == doctest::Approx(want).epsilon(1e-6));
    CHECK(nb.lb <= nb.ub + 1e-12);
}

TEST_CASE("injective_norm: commutative right factor is an exact slice max") {
    Rng rng(3);
    const ComplexMatrix x1 = rng.matrix(2, 2);
    const ComplexMatrix x2 = rng.matrix(2, 2);
    TensorElement u{FactorSpec::matrix(2), FactorSpec::commutative(2), {}};
    u.terms.push_back({x1, basis_vec(2, 0)});
    u.terms.push_back({x2, basis_vec(2, 1)});
    const NormBracket nb = injective_norm(u);
    const double want = std::max(operator_norm(x1), operator_norm(x2));
    CHECK(nb.lb == doctest::Approx(want).epsilon(1e-12));
    CHECK(nb.ub == doctest::Approx(want).epsilon(1e-12));
    CHECK(nb.method_lb == "slice-max");
}

TEST_CASE("injective_norm matches the Monte-Carlo dual oracle") {
    Rng rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        TensorElement u{FactorSpec::matrix(2), FactorSpec::matrix(2), {}};
        u.terms.push_back({rng.matrix(2, 2), rng.matrix(2, 2)});
        u.terms.push_back({rng.matrix(2, 2), rng.matrix(2, 2)});
        const NormBracket nb = injective_norm(u);
        const double mc = mc_injective(u, 20000, 555 + trial);
        CHECK(std::abs(nb.lb - mc) <= 2e-2 * std::max(1.0, mc));
        CHECK(nb.lb <= nb.ub + 1e-12);
        CHECK(nb.lb >= mc - 1e-9);  // ascent dominates sampling
    }
}

TEST_CASE("projective_bracket: elementary, hull recombination, zero") {
    Rng rng(5);
    const ComplexMatrix a = rng.matrix(2, 2);
    const ComplexMatrix b = rng.matrix(2, 2);
    const TensorElement u =
        TensorElement::elementary(FactorSpec::matrix(2), FactorSpec::matrix(2), a, b);
    const NormBracket nb = projective_bracket(u);
    const double want = operator_norm(a) * operator_norm(b);
    CHECK(nb.lb == doctest::Approx(want).epsilon(1e-6));
    CHECK(nb.ub == doctest::Approx(want).epsilon(1e-6));

    // e1 (x) e1 + e2 (x) e2 over two 2-point commutative factors: the rotated
    // representation 1/2 (e1+e2)^(x)2 + 1/2 (e1-e2)^(x)2 has cost 1.
    TensorElement v{FactorSpec::commutative(2), FactorSpec::commutative(2), {}};
    v.terms.push_back({basis_vec(2, 0), basis_vec(2, 0)});
    v.terms.push_back({basis_vec(2, 1), basis_vec(2, 1)});
    const NormBracket nv = projective_bracket(v);
    CHECK(nv.lb >= 1.0 - 1e-6);
    CHECK(nv.ub <= 1.0 + 1e-6);

    const NormBracket nz = projective_bracket(TensorElement::zero(
        FactorSpec::matrix(2), FactorSpec::matrix(2)));
    CHECK(nz.lb == 0.0);
    CHECK(nz.ub == 0.0);
}

TEST_CASE("cross-norm agreement on 100 random elementary tensors") {
    Rng rng(60);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix a = rng.matrix(2, 2);
        const ComplexMatrix b = rng.matrix(2, 2);
        const TensorElement u =
            TensorElement::elementary(FactorSpec::matrix(2), FactorSpec::matrix(2), a, b);
        const double cross = operator_norm(a) * operator_norm(b);
        const double mn = min_norm(u);
        CHECK(std::abs(mn - cross) <= 1e-10 * std::max(1.0, cross));
        CHECK(std::abs(injective_norm(u).lb - mn) <= 1e-6 * std::max(1.0, mn));
        CHECK(std::abs(projective_bracket(u).ub - mn) <= 1e-6 * std::max(1.0, mn));
    }
}

TEST_CASE("norm orderings and cross-norm agreement on random tensors") {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const int nterms = 2 + static_cast<int>(rng.uniform_index(2));
        TensorElement u{FactorSpec::matrix(2), FactorSpec::matrix(2), {}};
        for (int t = 0; t < nterms; ++t) u.terms.push_back({rng.matrix(2, 2), rng.matrix(2, 2)});
        const double mn = min_norm(u);
        const NormBracket eps = injective_norm(u);
        const NormBracket gam = projective_bracket(u);
        CHECK(eps.lb <= mn + 1e-8);
        CHECK(mn <= gam.ub + 1e-8);
        CHECK(eps.lb <= eps.ub + 1e-9);
        CHECK(gam.lb <= gam.ub + 1e-9);
    }
}

TEST_CASE("slice_right: point evaluations and contractivity") {
    Rng rng(7);
    const ComplexMatrix a = rng.matrix(2, 2);
    // State phi = I/2 pairs to 1 with b = identity.
    const TensorElement u = TensorElement::elementary(
        FactorSpec::matrix(2), FactorSpec::matrix(2), a, ComplexMatrix::identity(2));
    const ComplexMatrix phi = ComplexMatrix::identity(2) * Complex(0.5);
    CHECK(max_abs_diff(slice_right(u, phi), a) <= 1e-12);

    TensorElement v{FactorSpec::matrix(2), FactorSpec::commutative(2), {}};
    const ComplexMatrix x1 = rng.matrix(2, 2);
    const ComplexMatrix x2 = rng.matrix(2, 2);
    v.terms.push_back({x1, basis_vec(2, 0)});
    v.terms.push_back({x2, basis_vec(2, 1)});
    CHECK(max_abs_diff(slice_right(v, basis_vec(2, 0)), x1) <= 1e-12);

    for (int trial = 0; trial < 100; ++trial) {
        TensorElement w{FactorSpec::matrix(2), FactorSpec::matrix(2), {}};
        w.terms.push_back({rng.matrix(2, 2), rng.matrix(2, 2)});
        w.terms.push_back({rng.matrix(2, 2), rng.matrix(2, 2)});
        // Random state: positive unit-trace density.
        ComplexMatrix g = rng.matrix(2, 2);
        ComplexMatrix rho = g * g.adjoint();
        rho *= Complex(1.0 / rho.trace().real());
        const NormBracket eps = injective_norm(w);
        CHECK(operator_norm(slice_right(w, rho)) <= eps.ub + 1e-6);
    }
}

TEST_CASE("slice_cond_exp: identity, off-diagonal kill, cost monotonicity") {
    const StarSubspace dg = diag_algebra(2);
    const TracialState tau = TracialState::normalized(2);
    const CondExpectation e = build_cond_exp_to_subalgebra(dg, tau);

    Rng rng(8);
    const ComplexMatrix a = rng.matrix(2, 2);
    const TensorElement u = TensorElement::elementary(FactorSpec::matrix(2),
                                                      FactorSpec::matrix(2), a, e_unit(2, 0, 1));
    const TensorElement eu = slice_cond_exp(u, e);
    CHECK(eu.terms[0].right.max_abs() <= 1e-12);

    std::vector<ComplexMatrix> full_gens;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) full_gens.push_back(e_unit(2, i, j));
    const CondExpectation id_exp = CondExpectation::identity_map(
        algebra_closure(orthonormalize(full_gens, 2)));
    const TensorElement same = slice_cond_exp(u, id_exp);
    CHECK(max_abs_diff(same.terms[0].right, u.terms[0].right) <= 1e-12);

    for (int trial = 0; trial < 20; ++trial) {
        TensorElement w{FactorSpec::matrix(2), FactorSpec::matrix(2), {}};
        w.terms.push_back({rng.matrix(2, 2), rng.matrix(2, 2)});
        w.terms.push_back({rng.matrix(2, 2), rng.matrix(2, 2)});
        const TensorElement ew = slice_cond_exp(w, e);
        double before = 0.0, after = 0.0;
        for (size_t i = 0; i < w.terms.size(); ++i) {
            before += operator_norm(w.terms[i].left) * operator_norm(w.terms[i].right);
            after += operator_norm(ew.terms[i].left) * operator_norm(ew.terms[i].right);
        }
        CHECK(after <= before + 1e-10);
    }
}

TEST_CASE("gamma_stability_check: identical, containment, diagonal-to-scalars") {
    SearchConfig cfg;
    cfg.seed = 99;
    cfg.sample_budget = 60;

    const StarSubspace sc = scalars(2);
    const StarSubspace dg = diag_algebra(2);

    const auto self_rep = gamma_stability_check(sc, sc, FactorSpec::commutative(2), 0.0, cfg);
    CHECK(self_rep.pass);
    CHECK(self_rep.max_cost <= 1e-6);

    const auto cont_rep = gamma_stability_check(sc, dg, FactorSpec::matrix(2), 0.0, cfg);
    CHECK(cont_rep.pass);
    CHECK(cont_rep.max_cost <= 1e-6);

    const auto beta_rep = gamma_stability_check(dg, sc, FactorSpec::commutative(2), 1.0, cfg);
    CHECK(beta_rep.pass);
    CHECK(beta_rep.max_cost <= 1.0 + 1e-6);

    const auto ball_rep = gamma_stability_check(dg, sc, FactorSpec::matrix(2), 1.0, cfg, true);
    CHECK(ball_rep.pass);
}

TEST_CASE("unital_embed_check transfers lower bounds") {
    SearchConfig cfg;
    cfg.seed = 13;
    cfg.num_starts = 6;
    cfg.max_iters = 200;

    const StarSubspace sc = scalars(2);
    const StarSubspace sz = orthonormalize({ComplexMatrix::diag({1.0, -1.0})}, 2);

    const auto self_rep = unital_embed_check(sc, sc, FactorSpec::commutative(2), cfg);
    CHECK(self_rep.pass);
    CHECK(self_rep.base_lb_d0 <= 1e-8);
    CHECK(self_rep.base_lb_dkk <= 1e-8);

    const auto triv = unital_embed_check(sc, sz, FactorSpec::matrix(1), cfg);
    CHECK(triv.pass);
    CHECK(triv.tensored_lb_d0 == doctest::Approx(triv.base_lb_d0).epsilon(1e-9));

    const auto amp = unital_embed_check(sc, sz, FactorSpec::commutative(2), cfg);
    CHECK(amp.pass);
    CHECK(amp.base_lb_d0 >= 1.0 - 1e-4);
    CHECK(amp.tensored_lb_d0 >= 1.0 - 1e-4);
    CHECK(amp.tensored_lb_dkk >= 1.0 - 1e-4);
}

TEST_CASE("tensor_amplify block and kron pictures") {
    const StarSubspace dg = diag_algebra(2);
    const StarSubspace amp_c = tensor_amplify(dg, FactorSpec::commutative(3));
    CHECK(amp_c.ambient_dim == 6);
    CHECK(amp_c.dim() == 6);
    CHECK(amp_c.is_algebra);
    CHECK(amp_c.is_unital);

    const StarSubspace amp_m = tensor_amplify(dg, FactorSpec::matrix(2));
    CHECK(amp_m.ambient_dim == 4);
    CHECK(amp_m.dim() == 8);
    for (int i = 0; i < amp_m.dim(); ++i)
        for (int j = 0; j < amp_m.dim(); ++j) {
            const Complex g = hs_inner(amp_m.basis[i], amp_m.basis[j]);
            CHECK(std::abs(g - (i == j ? Complex(1.0) : Complex(0.0))) <= 1e-12);
        }

    Rng rng(10);
    const ComplexMatrix x = rng.matrix(2, 2);
    CHECK(operator_norm(embed_with_unit(x, FactorSpec::commutative(3))) ==
          doctest::Approx(operator_norm(x)).epsilon(1e-10));
    CHECK(operator_norm(embed_with_unit(x, FactorSpec::matrix(3))) ==
          doctest::Approx(operator_norm(x)).epsilon(1e-10));
}
