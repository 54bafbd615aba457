#pragma once

#include <optional>
#include <vector>

#include "oadl/matrix.hpp"

namespace oadl {

/// Spectral decomposition of a Hermitian matrix: m = V diag(values) V*,
/// eigenvalues in non-increasing order, eigenvector columns orthonormal.
struct HermEigen {
    std::vector<double> values;
    ComplexMatrix vectors;
};

struct SpectralOptions {
    double herm_tol = 1e-10;   // accepted input asymmetry
    double off_tol = 1e-13;    // off-diagonal Frobenius mass at convergence
    int max_sweeps = 64;
};

/// Cyclic Jacobi eigensolver for Hermitian matrices.
/// Throws std::invalid_argument (reporting the asymmetry magnitude) when the
/// input is not Hermitian within herm_tol.
HermEigen herm_eigen(const ComplexMatrix& m, const SpectralOptions& opts = {});

/// Largest singular value, computed as sqrt of the top eigenvalue of m*m
/// (or m m* when that Gram is smaller).
double operator_norm(const ComplexMatrix& m);

/// Sum of singular values (dual norm of the operator norm).
double trace_norm(const ComplexMatrix& m);

/// Singular values in non-increasing order.
std::vector<double> singular_values(const ComplexMatrix& m);

/// Thin singular triplets (sigma_i, u_i, v_i) for sigma_i > rel_cutoff * sigma_1,
/// with m v_i = sigma_i u_i. Columns of U and V are the kept vectors.
struct SvdTriplets {
    std::vector<double> sigma;
    ComplexMatrix u;  // rows() x k
    ComplexMatrix v;  // cols() x k
};
SvdTriplets svd_triplets(const ComplexMatrix& m, double rel_cutoff = 1e-13);

/// Rank-one u1 v1* for the top singular pair; zero matrix input yields e1 e1*.
ComplexMatrix top_singular_outer(const ComplexMatrix& m);

/// exp(i t h) for Hermitian h, via the spectral decomposition.
ComplexMatrix herm_exp_i(const ComplexMatrix& h, double t = 1.0);

/// Smallest eigenvalue of a Hermitian matrix (positivity checks).
double min_eigenvalue(const ComplexMatrix& herm);

/// Max |m(i,j) - conj(m(j,i))| over all pairs; 0 for exactly Hermitian input.
double hermitian_defect(const ComplexMatrix& m);

}  // namespace oadl
