#include "oadl/staralg.hpp"

#include <cmath>

namespace oadl {

std::vector<Complex> StarSubspace::project_coeffs(const ComplexMatrix& x) const {
    std::vector<Complex> c(basis.size());
    for (size_t i = 0; i < basis.size(); ++i) c[i] = hs_inner(basis[i], x);
    return c;
}

ComplexMatrix StarSubspace::combine(const std::vector<Complex>& coeffs) const {
    if (coeffs.size() != basis.size())
        throw std::invalid_argument("StarSubspace::combine: coefficient count mismatch");
    ComplexMatrix acc(ambient_dim, ambient_dim);
    for (size_t i = 0; i < basis.size(); ++i) {
        if (coeffs[i] == Complex(0.0)) continue;
        acc += basis[i] * coeffs[i];
    }
    return acc;
}

double StarSubspace::residual_norm(const ComplexMatrix& x) const {
    if (x.rows() != ambient_dim || x.cols() != ambient_dim)
        throw std::invalid_argument("StarSubspace: ambient shape mismatch");
    ComplexMatrix r = x;
    for (const ComplexMatrix& b : basis) r -= b * hs_inner(b, x);
    return r.frob_norm();
}

bool StarSubspace::same_span(const StarSubspace& other, double tol) const {
    if (ambient_dim != other.ambient_dim || dim() != other.dim()) return false;
    for (const ComplexMatrix& b : basis)
        if (other.residual_norm(b) > tol) return false;
    for (const ComplexMatrix& b : other.basis)
        if (residual_norm(b) > tol) return false;
    return true;
}

StarSubspace StarSubspace::zero(int ambient_dim) {
    if (ambient_dim <= 0) throw std::invalid_argument("StarSubspace::zero: bad dimension");
    return StarSubspace{ambient_dim, {}, false, false};
}

TracialState TracialState::normalized(int n) {
    if (n <= 0) throw std::invalid_argument("TracialState: dimension must be positive");
    return TracialState{n, std::vector<double>(n, 1.0 / n)};
}

TracialState TracialState::from_weights(std::vector<double> w) {
    if (w.empty()) throw std::invalid_argument("TracialState: empty weights");
    double sum = 0.0;
    for (double x : w) {
        if (x <= 0.0) throw std::invalid_argument("TracialState: weights must be positive");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("TracialState: weights must sum to 1");
    return TracialState{static_cast<int>(w.size()), std::move(w)};
}

bool TracialState::is_normalized_trace(double tol) const {
    for (double w : weights)
        if (std::abs(w - 1.0 / ambient_dim) > tol) return false;
    return true;
}

Complex TracialState::apply(const ComplexMatrix& x) const {
    if (x.rows() != ambient_dim || !x.is_square())
        throw std::invalid_argument("TracialState: shape mismatch");
    Complex t = 0.0;
    for (int i = 0; i < ambient_dim; ++i) t += weights[i] * x(i, i);
    return t;
}

Complex TracialState::inner(const ComplexMatrix& a, const ComplexMatrix& b) const {
    a.require_same_shape(b, "TracialState::inner");
    // tau(a* b) with diagonal density: sum_i w_i (a* b)(i,i).
    Complex t = 0.0;
    for (int i = 0; i < ambient_dim; ++i) {
        Complex s = 0.0;
        for (int k = 0; k < ambient_dim; ++k) s += std::conj(a(k, i)) * b(k, i);
        t += weights[i] * s;
    }
    return t;
}

double TracialState::norm(const ComplexMatrix& x) const {
    return std::sqrt(std::max(0.0, inner(x, x).real()));
}

ComplexMatrix vectorize(const ComplexMatrix& x) {
    return ComplexMatrix(static_cast<int>(x.size()), 1, x.entries());
}

ComplexMatrix unvectorize(const ComplexMatrix& v, int n) {
    if (v.cols() != 1 || v.rows() != n * n)
        throw std::invalid_argument("unvectorize: shape mismatch");
    return ComplexMatrix(n, n, v.entries());
}

ComplexMatrix CondExpectation::apply(const ComplexMatrix& x) const {
    if (x.rows() != ambient_dim || !x.is_square())
        throw std::invalid_argument("CondExpectation::apply: shape mismatch");
    return unvectorize(action * vectorize(x), ambient_dim);
}

CondExpectation CondExpectation::identity_map(const StarSubspace& full_range) {
    const int n = full_range.ambient_dim;
    return CondExpectation{n, full_range, ComplexMatrix::identity(n * n)};
}

StarSubspace orthonormalize(const std::vector<ComplexMatrix>& generators, int n,
                            double rank_tol) {
    if (n <= 0) throw std::invalid_argument("orthonormalize: bad ambient dimension");
    std::vector<ComplexMatrix> work;
    work.reserve(generators.size() * 2);
    for (const ComplexMatrix& g : generators) {
        if (g.rows() != n || g.cols() != n)
            throw std::invalid_argument("orthonormalize: generator is not n x n");
        work.push_back(g);
        work.push_back(g.adjoint());
    }

    std::vector<ComplexMatrix> basis;
    for (ComplexMatrix v : work) {
        for (int pass = 0; pass < 2; ++pass)  // re-orthogonalize once for stability
            for (const ComplexMatrix& b : basis) v -= b * hs_inner(b, v);
        const double norm = v.frob_norm();
        if (norm < rank_tol) continue;
        basis.push_back(v * Complex(1.0 / norm));
    }
    if (basis.empty())
        throw std::invalid_argument("orthonormalize: generators span the zero subspace");

    StarSubspace s{n, std::move(basis), false, false};
    s.is_unital = s.contains(ComplexMatrix::identity(n));
    // A fresh orthonormal set is an algebra iff products stay inside.
    bool closed = true;
    for (const auto& a : s.basis) {
        for (const auto& b : s.basis)
            if (s.residual_norm(a * b) > 1e-9) {
                closed = false;
                break;
            }
        if (!closed) break;
    }
    s.is_algebra = closed;
    return s;
}

StarSubspace algebra_closure(const StarSubspace& s) {
    if (s.dim() == 0) throw std::invalid_argument("algebra_closure: zero subspace");
    std::vector<ComplexMatrix> gens = s.basis;
    StarSubspace cur = orthonormalize(gens, s.ambient_dim);
    for (int round = 0; round < s.ambient_dim * s.ambient_dim + 1; ++round) {
        std::vector<ComplexMatrix> next = cur.basis;
        for (const auto& a : cur.basis)
            for (const auto& b : cur.basis) next.push_back(a * b);
        StarSubspace grown = orthonormalize(next, s.ambient_dim);
        if (grown.dim() == cur.dim()) {
            grown.is_algebra = true;
            grown.is_unital = grown.contains(ComplexMatrix::identity(s.ambient_dim));
            return grown;
        }
        cur = std::move(grown);
    }
    throw numerical_error("algebra_closure: dimension failed to stabilize");
}

ComplexMatrix hs_project(const ComplexMatrix& x, const StarSubspace& s) {
    if (x.rows() != s.ambient_dim || x.cols() != s.ambient_dim)
        throw std::invalid_argument("hs_project: shape mismatch");
    return s.combine(s.project_coeffs(x));
}

StarSubspace ck_amplify(const StarSubspace& s, int k) {
    if (k < 1) throw std::invalid_argument("ck_amplify: k must be >= 1");
    const int n = s.ambient_dim;
    StarSubspace out{n * k, {}, s.is_algebra, false};
    out.basis.reserve(static_cast<size_t>(k) * s.basis.size());
    for (int slot = 0; slot < k; ++slot)
        for (const ComplexMatrix& b : s.basis) {
            ComplexMatrix big(n * k, n * k);
            big.set_block(slot * n, slot * n, b);
            out.basis.push_back(std::move(big));
        }
    out.is_unital = s.is_unital;  // diag(1,...,1) = sum of per-slot identities
    return out;
}

CondExpectation build_cond_exp_to_subalgebra(const StarSubspace& range,
                                             const TracialState& trace) {
    if (!range.is_algebra || !range.is_unital)
        throw std::invalid_argument(
            "build_cond_exp_to_subalgebra: range must be a unital *-subalgebra");
    if (trace.ambient_dim != range.ambient_dim)
        throw std::invalid_argument("build_cond_exp_to_subalgebra: trace dimension mismatch");

    const int n = range.ambient_dim;
    const int d = range.dim();

    // tau-orthogonal projection onto span(range): with Gram g_ij = <b_i,b_j>_tau,
    // E(x) = sum_ij (g^{-1})_ij <b_j, x>_tau b_i.
    ComplexMatrix gram(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) gram(i, j) = trace.inner(range.basis[i], range.basis[j]);

    // Columns of the action: image of each matrix unit.
    ComplexMatrix action(n * n, n * n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            ComplexMatrix unit(n, n);
            unit(p, q) = 1.0;
            ComplexMatrix rhs(d, 1);
            for (int j = 0; j < d; ++j) rhs(j, 0) = trace.inner(range.basis[j], unit);
            const ComplexMatrix coeffs = solve_linear(gram, rhs);
            ComplexMatrix img(n, n);
            for (int i = 0; i < d; ++i) img += range.basis[i] * coeffs(i, 0);
            const ComplexMatrix col = vectorize(img);
            for (int r = 0; r < n * n; ++r) action(r, p * n + q) = col(r, 0);
        }
    return CondExpectation{n, range, std::move(action)};
}

}  // namespace oadl
