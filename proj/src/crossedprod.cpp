#include "oadl/crossedprod.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace oadl {

namespace {

ComplexMatrix matrix_unit(int n, int i, int j) {
    ComplexMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
}

void check_unitary(const ComplexMatrix& u, const std::string& what, double tol) {
    if (max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows())) > tol) {
        std::ostringstream os;
        os << what << " is not unitary within " << tol;
        throw std::invalid_argument(os.str());
    }
}

bool proportional_to_identity(const ComplexMatrix& m, double tol) {
    const int n = m.rows();
    const Complex c = m.trace() / Complex(n);
    ComplexMatrix r = m;
    for (int i = 0; i < n; ++i) r(i, i) -= c;
    return r.max_abs() <= tol && std::abs(std::abs(c) - 1.0) <= tol;
}

}  // namespace

FiniteGroup validate_group(const std::vector<std::vector<int>>& mult) {
    const int n = static_cast<int>(mult.size());
    if (n == 0) throw std::invalid_argument("validate_group: empty table");
    for (const auto& row : mult) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("validate_group: table is not square");
        for (int v : row)
            if (v < 0 || v >= n)
                throw std::invalid_argument("validate_group: entry out of range");
    }
    for (int g = 0; g < n; ++g) {
        if (mult[0][g] != g || mult[g][0] != g) {
            std::ostringstream os;
            os << "validate_group: identity law fails at element " << g;
            throw std::invalid_argument(os.str());
        }
    }
    for (int g = 0; g < n; ++g) {
        std::vector<bool> seen_row(n, false), seen_col(n, false);
        for (int h = 0; h < n; ++h) {
            if (seen_row[mult[g][h]]) {
                std::ostringstream os;
                os << "validate_group: row " << g << " is not a permutation";
                throw std::invalid_argument(os.str());
            }
            if (seen_col[mult[h][g]]) {
                std::ostringstream os;
                os << "validate_group: column " << g << " is not a permutation";
                throw std::invalid_argument(os.str());
            }
            seen_row[mult[g][h]] = true;
            seen_col[mult[h][g]] = true;
        }
    }
    FiniteGroup g{n, mult, std::vector<int>(n, -1)};
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (mult[a][b] == 0 && mult[b][a] == 0) {
                g.inv[a] = b;
                break;
            }
        if (g.inv[a] < 0) {
            std::ostringstream os;
            os << "validate_group: element " << a << " has no two-sided inverse";
            throw std::invalid_argument(os.str());
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mult[mult[a][b]][c] != mult[a][mult[b][c]]) {
                    std::ostringstream os;
                    os << "validate_group: associativity fails at triple (" << a << ", " << b
                       << ", " << c << ")";
                    throw std::invalid_argument(os.str());
                }
    return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
    std::vector<std::vector<int>> mult(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mult[a][b] = (a + b) % n;
    return validate_group(mult);
}

FiniteGroup FiniteGroup::klein_four() {
    // Elements (a, b) indexed as a + 2b.
    std::vector<std::vector<int>> mult(4, std::vector<int>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            mult[i][j] = ((i ^ j) & 1) + (((i >> 1) ^ (j >> 1)) << 1);
    return validate_group(mult);
}

FiniteGroup FiniteGroup::symmetric3() {
    // Words r^a s^b with r = (0 1 2) cycle, s = (0 1) swap; composition
    // (p q)(i) = p[q[i]].
    const std::vector<int> r{1, 2, 0};
    const std::vector<int> s{1, 0, 2};
    auto compose = [](const std::vector<int>& p, const std::vector<int>& q) {
        std::vector<int> out(3);
        for (int i = 0; i < 3; ++i) out[i] = p[q[i]];
        return out;
    };
    std::vector<std::vector<int>> elems;
    std::vector<int> cur{0, 1, 2};
    for (int a = 0; a < 3; ++a) {
        elems.push_back(cur);
        elems.push_back(compose(cur, s));
        cur = compose(r, cur);
    }
    auto index_of = [&](const std::vector<int>& p) {
        for (size_t i = 0; i < elems.size(); ++i)
            if (elems[i] == p) return static_cast<int>(i);
        throw std::logic_error("symmetric3: missing permutation");
    };
    std::vector<std::vector<int>> mult(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) mult[a][b] = index_of(compose(elems[a], elems[b]));
    return validate_group(mult);
}

bool Subgroup::contains(int g) const {
    return std::binary_search(members.begin(), members.end(), g);
}

Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    Subgroup s{members};
    if (!s.contains(0)) throw std::invalid_argument("make_subgroup: missing identity");
    for (int a : members) {
        if (!s.contains(g.inverse(a)))
            throw std::invalid_argument("make_subgroup: not closed under inverses");
        for (int b : members)
            if (!s.contains(g.op(a, b)))
                throw std::invalid_argument("make_subgroup: not closed under products");
    }
    return s;
}

namespace {

std::vector<int> close_subset(const FiniteGroup& g, std::vector<int> seed) {
    std::set<int> s(seed.begin(), seed.end());
    s.insert(0);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(s.begin(), s.end());
        for (int a : cur) {
            if (s.insert(g.inverse(a)).second) grew = true;
            for (int b : cur)
                if (s.insert(g.op(a, b)).second) grew = true;
        }
    }
    return {s.begin(), s.end()};
}

}  // namespace

std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& g) {
    if (g.order > 24) throw std::invalid_argument("enumerate_subgroups: order cap is 24");
    std::set<std::vector<int>> found;
    found.insert({0});
    bool grew = true;
    while (grew) {
        grew = false;
        const auto snapshot = found;
        for (const auto& members : snapshot)
            for (int x = 1; x < g.order; ++x) {
                std::vector<int> seed = members;
                seed.push_back(x);
                if (found.insert(close_subset(g, seed)).second) grew = true;
            }
    }
    std::vector<Subgroup> out;
    out.reserve(found.size());
    for (const auto& members : found) out.push_back(Subgroup{members});
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
        return a.members < b.members;
    });
    return out;
}

ComplexMatrix TwistedSystem::alpha(int g, const ComplexMatrix& a) const {
    return alpha_units[g] * a * alpha_units[g].adjoint();
}

void TwistedSystem::validate(double tol) const {
    const int n = fiber_dim;
    const int order = group.order;
    if (static_cast<int>(alpha_units.size()) != order ||
        static_cast<int>(cocycle.size()) != order)
        throw std::invalid_argument("TwistedSystem: table sizes do not match the group order");
    for (int g = 0; g < order; ++g) {
        std::ostringstream os;
        os << "alpha unit u_" << g;
        check_unitary(alpha_units[g], os.str(), 1e-10);
    }
    for (int s = 0; s < order; ++s) {
        if (static_cast<int>(cocycle[s].size()) != order)
            throw std::invalid_argument("TwistedSystem: ragged cocycle table");
        for (int t = 0; t < order; ++t) {
            std::ostringstream os;
            os << "cocycle sigma(" << s << ", " << t << ")";
            check_unitary(cocycle[s][t], os.str(), 1e-10);
        }
    }
    const ComplexMatrix id = ComplexMatrix::identity(n);
    for (int s = 0; s < order; ++s) {
        if (max_abs_diff(sigma(s, 0), id) > 1e-10 || max_abs_diff(sigma(0, s), id) > 1e-10) {
            std::ostringstream os;
            os << "TwistedSystem: normalization sigma(s, e) = sigma(e, s) = 1 fails at s = "
               << s;
            throw std::invalid_argument(os.str());
        }
    }
    for (int r = 0; r < order; ++r)
        for (int s = 0; s < order; ++s)
            for (int t = 0; t < order; ++t) {
                const ComplexMatrix lhs = sigma(r, s) * sigma(group.op(r, s), t);
                const ComplexMatrix rhs = alpha(r, sigma(s, t)) * sigma(r, group.op(s, t));
                if (max_abs_diff(lhs, rhs) > tol) {
                    std::ostringstream os;
                    os << "TwistedSystem: cocycle identity fails at (r, s, t) = (" << r << ", "
                       << s << ", " << t << ")";
                    throw std::invalid_argument(os.str());
                }
            }
    for (int s = 0; s < order; ++s)
        for (int t = 0; t < order; ++t) {
            const ComplexMatrix m = alpha_units[s] * alpha_units[t] *
                                    (sigma(s, t) * alpha_units[group.op(s, t)]).adjoint();
            if (!proportional_to_identity(m, tol)) {
                std::ostringstream os;
                os << "TwistedSystem: twisted homomorphism Ad(u_s u_t) = "
                   << "Ad(sigma(s,t) u_st) fails at (s, t) = (" << s << ", " << t << ")";
                throw std::invalid_argument(os.str());
            }
        }
}

TwistedSystem TwistedSystem::untwisted(FiniteGroup g, int fiber_dim,
                                       std::vector<ComplexMatrix> rep_units) {
    TwistedSystem sys{std::move(g), fiber_dim, std::move(rep_units), {}};
    sys.cocycle.assign(sys.group.order,
                       std::vector<ComplexMatrix>(sys.group.order,
                                                  ComplexMatrix::identity(fiber_dim)));
    sys.validate();
    return sys;
}

TwistedSystem TwistedSystem::scalar_cocycle(FiniteGroup g, int fiber_dim,
                                            const std::vector<std::vector<Complex>>& phases) {
    TwistedSystem sys{std::move(g), fiber_dim, {}, {}};
    sys.alpha_units.assign(sys.group.order, ComplexMatrix::identity(fiber_dim));
    sys.cocycle.resize(sys.group.order);
    for (int s = 0; s < sys.group.order; ++s) {
        sys.cocycle[s].reserve(sys.group.order);
        for (int t = 0; t < sys.group.order; ++t)
            sys.cocycle[s].push_back(ComplexMatrix::identity(fiber_dim) * phases[s][t]);
    }
    sys.validate();
    return sys;
}

TwistedSystem TwistedSystem::pauli(int fiber_dim) {
    const FiniteGroup g = FiniteGroup::klein_four();
    std::vector<std::vector<Complex>> phases(4, std::vector<Complex>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const int b = i >> 1;  // second component of i
            const int c = j & 1;   // first component of j
            phases[i][j] = (b & c) ? -1.0 : 1.0;
        }
    return scalar_cocycle(g, fiber_dim, phases);
}

ComplexMatrix rep_pi(const TwistedSystem& sys, const ComplexMatrix& a) {
    if (a.rows() != sys.fiber_dim || a.cols() != sys.fiber_dim)
        throw std::invalid_argument("rep_pi: fiber shape mismatch");
    const int n = sys.fiber_dim;
    ComplexMatrix big(sys.total_dim(), sys.total_dim());
    for (int h = 0; h < sys.group.order; ++h)
        big.set_block(h * n, h * n, sys.alpha(sys.group.inverse(h), a));
    return big;
}

ComplexMatrix rep_lambda(const TwistedSystem& sys, int g) {
    if (g < 0 || g >= sys.group.order) throw std::invalid_argument("rep_lambda: bad element");
    const int n = sys.fiber_dim;
    ComplexMatrix big(sys.total_dim(), sys.total_dim());
    for (int h = 0; h < sys.group.order; ++h) {
        const int src = sys.group.op(sys.group.inverse(g), h);  // g^{-1} h
        big.set_block(h * n, src * n, sys.sigma(sys.group.inverse(h), g));
    }
    return big;
}

StarSubspace crossed_subalgebra(const TwistedSystem& sys, const Subgroup& h) {
    const int n = sys.fiber_dim;
    const double scale = 1.0 / std::sqrt(static_cast<double>(sys.group.order));
    StarSubspace out{sys.total_dim(), {}, true, true};
    out.basis.reserve(static_cast<size_t>(n) * n * h.members.size());
    for (int t : h.members) {
        const ComplexMatrix lam = rep_lambda(sys, t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.basis.push_back(rep_pi(sys, matrix_unit(n, i, j)) * lam * Complex(scale));
    }
    return out;
}

ComplexMatrix cond_exp_E(const TwistedSystem& sys, const ComplexMatrix& x) {
    if (x.rows() != sys.total_dim() || x.cols() != sys.total_dim())
        throw std::invalid_argument("cond_exp_E: shape mismatch");
    return x.block(0, 0, sys.fiber_dim, sys.fiber_dim);
}

ComplexMatrix fourier(const TwistedSystem& sys, const ComplexMatrix& x, int g) {
    return cond_exp_E(sys, x * rep_lambda(sys, g).adjoint());
}

CrossedCertificates crossed_distance_certificate(const TwistedSystem& sys, const Subgroup& h,
                                                 const Subgroup& k) {
    if (h.members == k.members)
        throw std::invalid_argument("crossed_distance_certificate: subgroups are equal");
    // Lowest-index witness element in the symmetric difference; the argument
    // is symmetric, so swap roles when h is contained in k.
    int t = -1;
    for (int g : h.members)
        if (!k.contains(g)) {
            t = g;
            break;
        }
    if (t < 0)
        for (int g : k.members)
            if (!h.contains(g)) {
                t = g;
                break;
            }

    const ComplexMatrix lam = rep_lambda(sys, t);
    const int big = sys.total_dim();
    ComplexMatrix eta(big, 1);
    eta(0, 0) = 1.0;  // delta_e tensor e_1
    const ComplexMatrix xi = lam * eta;
    const ComplexMatrix phi = xi * eta.adjoint();

    CrossedCertificates out;
    out.witness_element = t;
    out.witness = lam;
    DistanceBracket b;
    b.lb = 1.0;
    b.ub = 1.0;
    b.certificate = phi;
    b.status = DistanceBracket::Status::certified;
    out.d0 = b;
    out.dkk = b;
    return out;
}

CrossedTrace tracial_crossed(const TwistedSystem& sys, const TracialState& fiber_trace) {
    if (fiber_trace.ambient_dim != sys.fiber_dim)
        throw std::invalid_argument("tracial_crossed: trace dimension mismatch");
    if (!fiber_trace.is_normalized_trace())
        throw std::invalid_argument(
            "tracial_crossed: only the normalized fiber trace is G-invariant here");
    return CrossedTrace{&sys, fiber_trace};
}

Complex CrossedTrace::apply(const ComplexMatrix& z) const {
    return fiber_trace.apply(cond_exp_E(*sys, z));
}

double CrossedTrace::norm(const ComplexMatrix& z) const {
    return std::sqrt(std::max(0.0, apply(z.adjoint() * z).real()));
}

TracialState CrossedTrace::as_state() const {
    return TracialState::normalized(sys->total_dim());
}

DmtCertificate dmt_crossed_certificate(const TwistedSystem& sys, const Subgroup& h,
                                       const Subgroup& k, const TracialState& fiber_trace) {
    const CrossedTrace trace = tracial_crossed(sys, fiber_trace);
    const CrossedCertificates base = crossed_distance_certificate(sys, h, k);

    DmtCertificate out;
    out.witness_element = base.witness_element;
    DistanceBracket b;
    b.lb = 1.0;
    b.ub = 1.0;
    // Unit tau-norm dual vector: lambda(t) itself; <lambda(t), lambda(t)-y>_tau
    // = 1 for every y in the other crossed product.
    b.certificate = base.witness;
    b.status = DistanceBracket::Status::certified;
    out.dmt = b;

    // Exact-orthogonality residual over the other algebra's basis.
    const bool t_in_h = h.contains(out.witness_element);
    const StarSubspace other = crossed_subalgebra(sys, t_in_h ? k : h);
    for (const ComplexMatrix& y : other.basis)
        out.max_overlap =
            std::max(out.max_overlap, std::abs(trace.apply(y.adjoint() * base.witness)));
    return out;
}

}  // namespace oadl
