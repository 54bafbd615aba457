#pragma once

#include <optional>
#include <vector>

#include "oadl/matrix.hpp"
#include "oadl/spectral.hpp"

namespace oadl {

/// Adjoint-closed linear subspace of the n x n matrix algebra, carried by a
/// Hilbert-Schmidt orthonormal basis. The flags record verified closure
/// properties; they are never assumed, always recomputed on construction.
struct StarSubspace {
    int ambient_dim = 0;
    std::vector<ComplexMatrix> basis;
    bool is_algebra = false;
    bool is_unital = false;

    int dim() const { return static_cast<int>(basis.size()); }

    /// Coefficients hs_inner(b_i, x) of the HS projection onto the span.
    std::vector<Complex> project_coeffs(const ComplexMatrix& x) const;

    /// Linear combination of the basis with the given coefficients.
    ComplexMatrix combine(const std::vector<Complex>& coeffs) const;

    /// HS-norm of x - proj(x); 0 (within tolerance) iff x lies in the span.
    double residual_norm(const ComplexMatrix& x) const;

    bool contains(const ComplexMatrix& x, double tol = 1e-9) const {
        return residual_norm(x) <= tol;
    }

    /// Dimension + mutual-residual subspace equality.
    bool same_span(const StarSubspace& other, double tol = 1e-9) const;

    /// The zero subspace of the ambient algebra (empty basis).
    static StarSubspace zero(int ambient_dim);
};

/// Diagonal-density tracial state; the default is the normalized trace.
struct TracialState {
    int ambient_dim = 0;
    std::vector<double> weights;  // positive, sums to 1

    static TracialState normalized(int n);
    static TracialState from_weights(std::vector<double> w);

    bool is_normalized_trace(double tol = 1e-12) const;
    Complex apply(const ComplexMatrix& x) const;
    Complex inner(const ComplexMatrix& a, const ComplexMatrix& b) const;  // tau(a* b)
    double norm(const ComplexMatrix& x) const;                            // tau(x* x)^{1/2}
};

/// Linear map on the ambient matrix algebra stored densely in the matrix-unit
/// basis (an n^2 x n^2 matrix acting on row-major vectorizations).
struct CondExpectation {
    int ambient_dim = 0;
    StarSubspace range;
    ComplexMatrix action;

    ComplexMatrix apply(const ComplexMatrix& x) const;
    static CondExpectation identity_map(const StarSubspace& full_range);
};

/// Modified Gram-Schmidt over the HS inner product. Generators are augmented
/// with their adjoints first, so the result is *-closed; directions whose
/// projection residual falls below rank_tol are dropped.
StarSubspace orthonormalize(const std::vector<ComplexMatrix>& generators, int n,
                            double rank_tol = 1e-10);

/// Smallest *-closed, multiplication-closed subspace containing s.
StarSubspace algebra_closure(const StarSubspace& s);

/// HS-orthogonal projection of x onto span(s).
ComplexMatrix hs_project(const ComplexMatrix& x, const StarSubspace& s);

/// Block-diagonal k-fold amplification: the span of diag(0,..,b,..,0) over all
/// slots and basis elements b. Realizes the sup-norm k-tuple picture of
/// tensoring with a k-point commutative factor.
StarSubspace ck_amplify(const StarSubspace& s, int k);

/// Trace-preserving conditional expectation onto a unital *-subalgebra,
/// i.e. the tau-orthogonal projection onto span(range).
CondExpectation build_cond_exp_to_subalgebra(const StarSubspace& range,
                                             const TracialState& trace);

/// Row-major vectorization helpers for the dense CondExpectation action.
ComplexMatrix vectorize(const ComplexMatrix& x);
ComplexMatrix unvectorize(const ComplexMatrix& v, int n);

}  // namespace oadl
