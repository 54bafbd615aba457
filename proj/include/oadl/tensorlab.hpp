#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oadl/geodist.hpp"
#include "oadl/staralg.hpp"

namespace oadl {

/// Factor space of a tensor: a full matrix algebra M_n, or the commutative
/// sup-norm space of k-tuples (the k-point model of continuous functions on a
/// compact space).
struct FactorSpec {
    enum class Kind { matrix_algebra, commutative_sup };
    Kind kind = Kind::matrix_algebra;
    int size = 1;  // n for M_n, k for the k-point commutative space

    static FactorSpec matrix(int n) { return {Kind::matrix_algebra, n}; }
    static FactorSpec commutative(int k) { return {Kind::commutative_sup, k}; }

    bool is_matrix() const { return kind == Kind::matrix_algebra; }
    int dim() const { return is_matrix() ? size * size : size; }

    /// Elements are n x n matrices, or k x 1 coefficient columns.
    bool conforms(const ComplexMatrix& e) const {
        return is_matrix() ? (e.rows() == size && e.cols() == size)
                           : (e.rows() == size && e.cols() == 1);
    }

    /// Operator norm for matrix factors; sup norm for commutative factors.
    double norm(const ComplexMatrix& e) const;

    bool operator==(const FactorSpec& o) const { return kind == o.kind && size == o.size; }
};

/// Finite sum of elementary tensors over two declared factor spaces.
struct TensorElement {
    struct Term {
        ComplexMatrix left;
        ComplexMatrix right;
    };

    FactorSpec left_spec;
    FactorSpec right_spec;
    std::vector<Term> terms;  // empty means the zero tensor

    void validate() const;
    bool is_zero(double tol = 0.0) const;

    static TensorElement elementary(FactorSpec ls, FactorSpec rs, ComplexMatrix l,
                                    ComplexMatrix r);
    static TensorElement zero(FactorSpec ls, FactorSpec rs) { return {ls, rs, {}}; }
};

struct NormBracket {
    double lb = 0.0;
    double ub = 0.0;
    std::string method_lb;
    std::string method_ub;
};

/// Operator norm of the concrete (Kronecker / block-diagonal) representation.
double min_norm(const TensorElement& u);

/// Injective norm bracket: exact when either factor is commutative; otherwise
/// alternating dual ascent (each half-step exact) against the min-norm upper
/// bound.
NormBracket injective_norm(const TensorElement& u, const SearchConfig& cfg = {});

/// Projective norm bracket: decomposition search from above, injective/min
/// bounds from below.
NormBracket projective_bracket(const TensorElement& u, const SearchConfig& cfg = {});

/// Right slice sum_i phi(y_i) x_i. phi is a trace-density (matrix factor) or
/// an l1 coefficient column (commutative factor).
ComplexMatrix slice_right(const TensorElement& u, const ComplexMatrix& phi);

/// Termwise id (x) E on the right factor (matrix-algebra right factor only).
TensorElement slice_cond_exp(const TensorElement& u, const CondExpectation& e);

/// Constructive near-inclusion transfer for the projective norm: for sampled
/// convex combinations x of elementary tensors with left factors in B1(A),
/// replace each left factor by its nearest element of span(B) and check the
/// projective cost of the difference stays within beta.
struct GammaStabilityReport {
    int samples = 0;
    double beta = 0.0;
    double max_cost = 0.0;       // worst projective ub of x - y over the samples
    double max_witness_dist = 0.0;
    bool pass = false;
    bool ball_variant = false;   // replacement elements rescaled into the unit ball
};
GammaStabilityReport gamma_stability_check(const StarSubspace& a, const StarSubspace& b,
                                           const FactorSpec& d_spec, double beta,
                                           const SearchConfig& cfg,
                                           bool ball_variant = false);

/// Tensor amplification of a subspace: block-diagonal slots for a commutative
/// factor, Kronecker with the full matrix units for a matrix factor.
StarSubspace tensor_amplify(const StarSubspace& s, const FactorSpec& d_spec);

/// Embedding x -> x (x) 1_D into the amplified picture.
ComplexMatrix embed_with_unit(const ComplexMatrix& x, const FactorSpec& d_spec);

/// Transfer of a subspace-distance certificate through x -> x (x) 1_D: the
/// embedded dual functional certifies at least the base bound for the
/// amplified pair.
struct EmbedCheckReport {
    double base_lb_d0 = 0.0;
    double tensored_lb_d0 = 0.0;
    double base_lb_dkk = 0.0;
    double tensored_lb_dkk = 0.0;
    bool pass = false;
};
EmbedCheckReport unital_embed_check(const StarSubspace& a, const StarSubspace& b,
                                    const FactorSpec& d_spec, const SearchConfig& cfg);

/// Embeds a dual certificate phi for dist(x, span(b)) into the amplified
/// ambient algebra (slot 0 / rank-one right density), preserving its value.
ComplexMatrix embed_certificate(const ComplexMatrix& phi, const FactorSpec& d_spec);

}  // namespace oadl
