#pragma once

#include <string>
#include <vector>

#include "oadl/geodist.hpp"
#include "oadl/staralg.hpp"

namespace oadl {

/// Finite group as a validated multiplication table over {0..order-1}.
/// Element 0 is the identity.
struct FiniteGroup {
    int order = 1;
    std::vector<std::vector<int>> mult;
    std::vector<int> inv;

    int op(int a, int b) const { return mult[a][b]; }
    int inverse(int a) const { return inv[a]; }

    static FiniteGroup cyclic(int n);
    static FiniteGroup klein_four();       // Z2 x Z2
    static FiniteGroup symmetric3();       // S3 via permutation composition
};

/// Validates a multiplication table (identity at index 0, Latin square,
/// inverses, associativity on all triples); throws std::invalid_argument
/// naming the violated axiom and witnesses.
FiniteGroup validate_group(const std::vector<std::vector<int>>& mult);

struct Subgroup {
    std::vector<int> members;  // sorted, contains 0

    bool contains(int g) const;
    bool operator==(const Subgroup& o) const { return members == o.members; }
};

/// Checks closure under product and inverse; throws on violation.
Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> members);

/// All subgroups (including trivial and full), ordered by size then members.
std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& g);

/// Finite twisted dynamical system: alpha_g = Ad(u_g) on M_n and a 2-cocycle
/// sigma of n x n unitaries.
struct TwistedSystem {
    FiniteGroup group;
    int fiber_dim = 1;
    std::vector<ComplexMatrix> alpha_units;          // u_g, g in group order
    std::vector<std::vector<ComplexMatrix>> cocycle;  // sigma(s, t)

    int total_dim() const { return group.order * fiber_dim; }

    ComplexMatrix alpha(int g, const ComplexMatrix& a) const;  // u_g a u_g*
    const ComplexMatrix& sigma(int s, int t) const { return cocycle[s][t]; }

    /// Re-checks unitarity, normalization, the cocycle identity, and the
    /// twisted homomorphism property; throws naming the identity and indices.
    void validate(double tol = 1e-9) const;

    /// Untwisted system with the given unitary representation (u_g u_h = u_{gh}).
    static TwistedSystem untwisted(FiniteGroup g, int fiber_dim,
                                   std::vector<ComplexMatrix> rep_units);
    /// Scalar bicharacter cocycle sigma(s,t) = phase(s,t) * I, trivial alpha.
    static TwistedSystem scalar_cocycle(FiniteGroup g, int fiber_dim,
                                        const std::vector<std::vector<Complex>>& phases);
    /// The Pauli system: Z2 x Z2, scalar cocycle sigma((a,b),(c,d)) = (-1)^{bc}.
    static TwistedSystem pauli(int fiber_dim = 1);
};

/// pi_alpha(a): block-diagonal with h-block alpha_{h^{-1}}(a).
ComplexMatrix rep_pi(const TwistedSystem& sys, const ComplexMatrix& a);

/// lambda_sigma(g): block (h, g^{-1}h) = sigma(h^{-1}, g).
ComplexMatrix rep_lambda(const TwistedSystem& sys, int g);

/// Span of pi(M_n) lambda(t), t in h: the reduced twisted crossed product of
/// the subgroup, as a unital *-subalgebra of the full block-matrix algebra.
StarSubspace crossed_subalgebra(const TwistedSystem& sys, const Subgroup& h);

/// E(x) = identity-block compression (the (e,e) fiber block of x).
ComplexMatrix cond_exp_E(const TwistedSystem& sys, const ComplexMatrix& x);

/// Fourier coefficient x(g) = E(x lambda(g)*).
ComplexMatrix fourier(const TwistedSystem& sys, const ComplexMatrix& x, int g);

/// Exact distance certificates for distinct subgroup crossed products:
/// d0 = d_KK = 1 with a rank-one annihilating dual functional built from the
/// Fourier-coefficient contraction at a witness lambda(t), t in the symmetric
/// difference of the subgroups.
struct CrossedCertificates {
    DistanceBracket d0;
    DistanceBracket dkk;
    int witness_element = 0;  // the chosen t
    ComplexMatrix witness{1, 1};  // lambda(t)
};
CrossedCertificates crossed_distance_certificate(const TwistedSystem& sys, const Subgroup& h,
                                                 const Subgroup& k);

/// tau-tilde(z) = tau(E(z)) for the normalized fiber trace; tracial and
/// faithful on the crossed product.
struct CrossedTrace {
    const TwistedSystem* sys = nullptr;
    TracialState fiber_trace;

    Complex apply(const ComplexMatrix& z) const;
    double norm(const ComplexMatrix& z) const;  // tau-tilde(z* z)^{1/2}
    /// Diagonal-density tracial state on the total algebra representing
    /// tau-tilde (weights 1/(|G| n) on every coordinate).
    TracialState as_state() const;
};
CrossedTrace tracial_crossed(const TwistedSystem& sys, const TracialState& fiber_trace);

/// d_MT certificate: [1, 1] via exact tau-orthogonality of lambda(t) to the
/// other subgroup's crossed product.
struct DmtCertificate {
    DistanceBracket dmt;
    int witness_element = 0;
    double max_overlap = 0.0;  // spot-check residual max |tau(y* lambda(t))|
};
DmtCertificate dmt_crossed_certificate(const TwistedSystem& sys, const Subgroup& h,
                                       const Subgroup& k, const TracialState& fiber_trace);

}  // namespace oadl
