#include "oadl/geodist.hpp"

#include <algorithm>
#include <cmath>

#include "oadl/rng.hpp"
#include "norm_sdp.hpp"

namespace oadl {

namespace {

// ---------------------------------------------------------------------------
// Coefficient-space helpers. Inner problems are solved over the coefficient
// vector of z in the HS-orthonormal basis of the target span.
// ---------------------------------------------------------------------------

ComplexMatrix combine(const StarSubspace& s, const std::vector<Complex>& c) {
    ComplexMatrix acc(s.ambient_dim, s.ambient_dim);
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != Complex(0.0)) acc += s.basis[i] * c[i];
    return acc;
}

// HS projection of phi onto the annihilator of span(z) (same as the HS
// orthocomplement; any such phi kills every element of the span).
ComplexMatrix project_annihilator(const ComplexMatrix& phi, const StarSubspace& z) {
    ComplexMatrix out = phi;
    for (const ComplexMatrix& b : z.basis) out -= b * hs_inner(b, phi);
    return out;
}

// Full trace-norm subgradient sum_k u_k v_k* at m (the phase factor of m).
ComplexMatrix trace_norm_subgradient(const ComplexMatrix& m) {
    const SvdTriplets t = svd_triplets(m, 1e-12);
    ComplexMatrix d(m.rows(), m.cols());
    for (size_t k = 0; k < t.sigma.size(); ++k) {
        if (t.sigma[k] <= 0.0) continue;
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                d(i, j) += t.u(i, static_cast<int>(k)) * std::conj(t.v(j, static_cast<int>(k)));
    }
    return d;
}

// ---------------------------------------------------------------------------
// Lower-bound certificates.
// ---------------------------------------------------------------------------

// Trace-norm upper estimate for certificate scaling: unclipped singular sum,
// so that dividing by it can only shrink the true trace norm below 1.
double trace_norm_upper(const ComplexMatrix& m) {
    const ComplexMatrix g = m.rows() < m.cols() ? m * m.adjoint() : m.adjoint() * m;
    const HermEigen e = herm_eigen(g, SpectralOptions{.herm_tol = 1e-8});
    double s = 0.0;
    for (double lam : e.values) s += std::sqrt(std::max(0.0, lam));
    return s + 1e-12;
}

// Subspace mode: any phi with trace_norm <= 1 annihilating span(z) certifies
// |tr(phi* x)| <= dist(x, span). Returns the certified value, updating the
// best certificate in place. Residual scaling noise (~1e-7 relative at worst)
// is absorbed downstream by clamping lb to the feasible ub and trimming the
// stored certificate to match.
double certify_subspace(const ComplexMatrix& x, const StarSubspace& z, ComplexMatrix phi,
                        double& best, std::optional<ComplexMatrix>& best_phi) {
    phi = project_annihilator(phi, z);
    const double tn = trace_norm(phi);
    if (tn < 1e-14) return 0.0;
    // Two scalings: conservative (shrink only when needed) and rescale to the
    // trace-ball boundary via an upper norm estimate; keep the better value.
    ComplexMatrix cand1 = phi;
    if (tn > 1.0) cand1 *= Complex(1.0 / tn);
    const double val1 = std::abs(hs_inner(cand1, x));
    const double tn_up = trace_norm_upper(phi);
    const ComplexMatrix cand2 = phi * Complex(1.0 / tn_up);
    const double val2 = std::abs(hs_inner(cand2, x));
    const double val = std::max(val1, val2);
    if (val > best) {
        best = val;
        best_phi = val1 >= val2 ? cand1 : cand2;
    }
    return val;
}

// Valid upper bound on sup { Re<phi,z> : z in span, ||z||_op <= 1 } via the
// dual form inf_{psi in annihilator} trace_norm(phi - psi); every iterate of
// the descent is feasible, so the running minimum is always an upper bound.
double support_upper_bound(const ComplexMatrix& phi, const StarSubspace& z, int iters = 12) {
    // psi ranges over the annihilator (= HS orthocomplement of the span);
    // each feasible psi yields the bound trace_norm(phi - psi). Start from
    // the HS-closest annihilator element; psi = 0 covers the global ball.
    ComplexMatrix cur = project_annihilator(phi, z);
    double best = std::min(trace_norm(phi), trace_norm(phi - cur));
    double step = 0.5 * std::max(1e-12, trace_norm(phi));
    for (int it = 0; it < iters; ++it) {
        const ComplexMatrix d = trace_norm_subgradient(phi - cur);
        const ComplexMatrix dir = project_annihilator(d, z);
        if (dir.frob_norm() < 1e-12) break;
        bool accepted = false;
        for (int ls = 0; ls < 8; ++ls) {
            const ComplexMatrix cand = cur + dir * Complex(step);
            const double v = trace_norm(phi - cand);
            if (v < best - 1e-15) {
                best = v;
                cur = cand;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return best;
}

// Ball mode: phi with trace_norm <= 1 certifies
//   dist(x, B1(span)) >= Re tr(phi* x) - S_ub(phi).
double certify_ball(const ComplexMatrix& x, const StarSubspace& z, ComplexMatrix phi,
                    double& best, std::optional<ComplexMatrix>& best_phi, double& best_support,
                    int support_iters = 12) {
    const double tn = trace_norm_upper(phi);
    if (tn < 1e-14) return 0.0;
    phi *= Complex(1.0 / tn);  // rescale to the trace-ball boundary
    // Align the phase so Re tr(phi* x) is maximal for this direction.
    const Complex pairing = hs_inner(phi, x);
    if (std::abs(pairing) > 1e-14) phi *= std::conj(pairing) / std::abs(pairing);
    const double front = hs_inner(phi, x).real();
    const double support = support_upper_bound(phi, z, support_iters);
    const double val = front - support;
    if (val > best) {
        best = val;
        best_phi = phi;
        best_support = support;
    }
    return val;
}

// ---------------------------------------------------------------------------
// Cheap inner evaluations (used inside the outer search loops).
// ---------------------------------------------------------------------------

struct InnerEval {
    double lb = 0.0;
    double ub = 0.0;
    std::optional<ComplexMatrix> witness;
    std::optional<ComplexMatrix> certificate;
    double support = 0.0;
};

InnerEval cheap_to_subspace(const ComplexMatrix& x, const StarSubspace& z) {
    InnerEval e;
    const ComplexMatrix p = z.dim() ? combine(z, z.project_coeffs(x)) : ComplexMatrix(x.rows(), x.cols());
    const ComplexMatrix r = x - p;
    const double rnorm = operator_norm(r);
    const double xnorm = operator_norm(x);
    if (rnorm <= xnorm) {
        e.ub = rnorm;
        e.witness = p;
    } else {
        e.ub = xnorm;
        e.witness = ComplexMatrix(x.rows(), x.cols());
    }
    if (r.frob_norm() < 1e-14) {
        e.lb = 0.0;
        return e;
    }
    double best = 0.0;
    certify_subspace(x, z, top_singular_outer(r), best, e.certificate);
    certify_subspace(x, z, r, best, e.certificate);
    e.lb = std::min(best, e.ub);  // guard against eval noise crossing
    return e;
}

InnerEval cheap_to_ball(const ComplexMatrix& x, const StarSubspace& z) {
    InnerEval e;
    const ComplexMatrix zero(x.rows(), x.cols());
    ComplexMatrix zbest = zero;
    double ub = operator_norm(x);
    if (z.dim()) {
        ComplexMatrix p = combine(z, z.project_coeffs(x));
        const double pn = operator_norm(p);
        if (pn > 1.0) p *= Complex(1.0 / pn);
        const double v = operator_norm(x - p);
        if (v < ub) {
            ub = v;
            zbest = p;
        }
    }
    e.ub = ub;
    e.witness = zbest;

    double best = 0.0;
    std::optional<ComplexMatrix> phi;
    double support = 0.0;
    // Candidate duals: residual direction and the direction of x itself.
    certify_ball(x, z, top_singular_outer(x - zbest), best, phi, support, 0);
    // Subspace-route bound: the ball is inside the span.
    const InnerEval sub = cheap_to_subspace(x, z);
    if (sub.lb > best && sub.certificate) {
        best = sub.lb;
        phi = sub.certificate;
        support = 0.0;
    }
    e.lb = std::min(std::max(0.0, best), e.ub);
    e.certificate = phi;
    e.support = support;
    return e;
}

InnerEval cheap_to_ball_tau(const ComplexMatrix& x, const StarSubspace& z,
                            const TracialState& trace) {
    InnerEval e;
    const int d = z.dim();
    const ComplexMatrix zero(x.rows(), x.cols());
    if (d == 0) {
        e.ub = trace.norm(x);
        e.lb = e.ub;
        e.witness = zero;
        return e;
    }
    // tau-orthogonal projection onto the span via the tau Gram matrix.
    ComplexMatrix gram(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) gram(i, j) = trace.inner(z.basis[i], z.basis[j]);
    ComplexMatrix rhs(d, 1);
    for (int i = 0; i < d; ++i) rhs(i, 0) = trace.inner(z.basis[i], x);
    const ComplexMatrix coef = solve_linear(gram, rhs);
    std::vector<Complex> c(d);
    for (int i = 0; i < d; ++i) c[i] = coef(i, 0);
    const ComplexMatrix zstar = combine(z, c);
    const double span_dist = trace.norm(x - zstar);
    e.lb = std::max(span_dist, trace.norm(x) - 1.0);

    const double zn = operator_norm(zstar);
    if (zn <= 1.0 + 1e-12) {
        e.ub = span_dist;
        e.witness = zstar;
    } else {
        ComplexMatrix zs = zstar * Complex(1.0 / zn);
        double ub = trace.norm(x - zs);
        const double ub0 = trace.norm(x);
        if (ub0 < ub) {
            ub = ub0;
            zs = zero;
        }
        e.ub = ub;
        e.witness = zs;
    }
    if (e.lb > e.ub) e.lb = e.ub;
    return e;
}

enum class InnerMode { subspace, ball, tau_ball };

InnerEval cheap_inner(const ComplexMatrix& x, const StarSubspace& z, InnerMode mode,
                      const TracialState* trace) {
    switch (mode) {
        case InnerMode::subspace: return cheap_to_subspace(x, z);
        case InnerMode::ball: return cheap_to_ball(x, z);
        case InnerMode::tau_ball: return cheap_to_ball_tau(x, z, *trace);
    }
    throw std::logic_error("cheap_inner: bad mode");
}

// ---------------------------------------------------------------------------
// Full inner solves: barrier SDP for the primal, certified duals from the
// solver state and the top-singular-block subdifferential.
// ---------------------------------------------------------------------------

// Euclidean projection onto {S Hermitian PSD, trace S = 1}: eigenvalues onto
// the unit simplex.
ComplexMatrix proj_psd_trace1(const ComplexMatrix& m) {
    const int n = m.rows();
    ComplexMatrix h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    const HermEigen e = herm_eigen(h, SpectralOptions{.herm_tol = 1e-6});
    // Simplex projection of the (sorted, non-increasing) eigenvalues.
    std::vector<double> lam = e.values;
    double cum = 0.0;
    double theta = 0.0;
    for (int i = 0; i < n; ++i) {
        cum += lam[i];
        const double t = (cum - 1.0) / (i + 1);
        if (i + 1 == n || lam[i + 1] <= t) {
            theta = t;
            break;
        }
    }
    ComplexMatrix d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = std::max(0.0, lam[i] - theta);
    return e.vectors * d * e.vectors.adjoint();
}

// Dual candidate from the top singular block of A = x - B(c): the operator
// norm subdifferential is {U1 S V1* : S PSD, tr S = 1}; choose S minimizing
// the HS mass of the span component, by projected gradient on S.
ComplexMatrix s_block_dual(const ComplexMatrix& a, const StarSubspace& z, double delta) {
    const SvdTriplets t = svd_triplets(a, 1e-14);
    const double s1 = t.sigma.front();
    int m = 0;
    while (m < static_cast<int>(t.sigma.size()) && t.sigma[m] >= s1 - delta) ++m;
    const ComplexMatrix u1 = t.u.block(0, 0, t.u.rows(), m);
    const ComplexMatrix v1 = t.v.block(0, 0, t.v.rows(), m);

    const int d = z.dim();
    std::vector<ComplexMatrix> cb;  // C_b = U1* b V1
    cb.reserve(d);
    for (const auto& b : z.basis) cb.push_back(u1.adjoint() * b * v1);

    ComplexMatrix s = ComplexMatrix::identity(m) * Complex(1.0 / m);
    auto objective = [&](const ComplexMatrix& ss) {
        double h = 0.0;
        for (const auto& c : cb) h += std::norm(hs_inner(c, ss));
        return h;
    };
    double h = objective(s);

    if (m > 1) {
        // Trace-constrained least squares over Hermitian S (KKT solve); the
        // PSD constraint is usually inactive at the optimum, so try this
        // exact step first and keep it when it does not lose positivity.
        std::vector<ComplexMatrix> hb;  // Hermitian basis of m x m
        for (int i = 0; i < m; ++i) {
            ComplexMatrix e(m, m);
            e(i, i) = 1.0;
            hb.push_back(e);
        }
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                ComplexMatrix e1(m, m), e2(m, m);
                e1(i, j) = inv_sqrt2;
                e1(j, i) = inv_sqrt2;
                e2(i, j) = Complex(0.0, inv_sqrt2);
                e2(j, i) = Complex(0.0, -inv_sqrt2);
                hb.push_back(e1);
                hb.push_back(e2);
            }
        const int q = static_cast<int>(hb.size());  // m^2
        // Normal equations with a trace-constraint Lagrange multiplier.
        ComplexMatrix kkt(q + 1, q + 1);
        ComplexMatrix rhs(q + 1, 1);
        for (int a = 0; a < q; ++a) {
            for (int b = 0; b < q; ++b) {
                Complex acc = 0.0;
                for (const auto& c : cb)
                    acc += std::conj(hs_inner(c, hb[a])) * hs_inner(c, hb[b]);
                kkt(a, b) = acc.real();
            }
            kkt(a, a) += 1e-13;
            kkt(a, q) = hb[a].trace().real();
            kkt(q, a) = hb[a].trace().real();
            rhs(a, 0) = 0.0;
        }
        rhs(q, 0) = 1.0;
        try {
            const ComplexMatrix sol = solve_linear(kkt, rhs);
            ComplexMatrix cand(m, m);
            for (int a = 0; a < q; ++a) cand += hb[a] * sol(a, 0).real();
            if (min_eigenvalue(cand) >= -1e-11) {
                const ComplexMatrix proj = proj_psd_trace1(cand);
                const double hc = objective(proj);
                if (hc < h) {
                    s = proj;
                    h = hc;
                }
            }
        } catch (const numerical_error&) {
            // singular KKT system: fall through to projected gradient
        }
    }
    double step = 1.0;
    for (int it = 0; it < 80 && h > 1e-24; ++it) {
        // h(S + E) - h(S) = 2 Re<G, E> + O(E^2) with G = sum <C_b,S> C_b.
        ComplexMatrix grad(m, m);
        for (const auto& c : cb) grad += c * hs_inner(c, s);
        bool accepted = false;
        for (int ls = 0; ls < 10; ++ls) {
            const ComplexMatrix cand = proj_psd_trace1(s - grad * Complex(step));
            const double hc = objective(cand);
            if (hc < h - 1e-18) {
                s = cand;
                h = hc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        step = std::min(step * 1.5, 4.0);
    }
    return u1 * s * v1.adjoint();
}

InnerEval full_to_subspace(const ComplexMatrix& x, const StarSubspace& z,
                           const SearchConfig& cfg) {
    InnerEval e = cheap_to_subspace(x, z);
    if (z.dim() == 0 || e.ub - e.lb <= std::min(cfg.tol, 1e-8)) return e;

    const detail::NormSdpResult sdp = detail::solve_norm_sdp(x, z, false);
    double f_best = e.ub;
    if (!sdp.coeffs.empty()) {
        const ComplexMatrix zopt = combine(z, sdp.coeffs);
        const double f = operator_norm(x - zopt);
        if (f < f_best) {
            f_best = f;
            e.ub = f;
            e.witness = zopt;
        }
    }

    double best = e.lb;
    certify_subspace(x, z, sdp.dual_phi, best, e.certificate);
    const ComplexMatrix a = x - (e.witness ? *e.witness : ComplexMatrix(x.rows(), x.cols()));
    certify_subspace(x, z, top_singular_outer(a), best, e.certificate);
    const double gap = std::max(f_best - best, 0.0);
    for (double delta : {1e-8, 1e-6, std::max(2.0 * gap, 1e-5)})
        certify_subspace(x, z, s_block_dual(a, z, delta * std::max(1.0, f_best)), best,
                         e.certificate);

    e.lb = std::min(best, e.ub);
    // Keep the reported bound and its certificate consistent: shrink the
    // certificate when clamping trimmed sub-1e-9 evaluation noise.
    if (e.certificate && e.lb > 1e-14) {
        const double val = std::abs(hs_inner(*e.certificate, x));
        if (val > e.lb) *e.certificate *= Complex(e.lb / val);
    }
    return e;
}

InnerEval full_to_ball(const ComplexMatrix& x, const StarSubspace& z, const SearchConfig& cfg) {
    InnerEval e = cheap_to_ball(x, z);
    if (z.dim() == 0 || e.ub - e.lb <= std::min(cfg.tol, 1e-8)) return e;

    const detail::NormSdpResult sdp = detail::solve_norm_sdp(x, z, true);
    if (!sdp.coeffs.empty()) {
        ComplexMatrix zopt = combine(z, sdp.coeffs);
        const double zn = operator_norm(zopt);
        if (zn > 1.0) zopt *= Complex(1.0 / zn);
        const double f = operator_norm(x - zopt);
        if (f < e.ub) {
            e.ub = f;
            e.witness = zopt;
        }
    }

    double best = e.lb;
    certify_ball(x, z, sdp.dual_phi, best, e.certificate, e.support);
    const ComplexMatrix a = x - (e.witness ? *e.witness : ComplexMatrix(x.rows(), x.cols()));
    certify_ball(x, z, top_singular_outer(a), best, e.certificate, e.support);
    // The subspace-route certificate stays valid for the ball problem.
    const InnerEval sub = full_to_subspace(x, z, cfg);
    if (sub.lb > best && sub.certificate) {
        best = sub.lb;
        e.certificate = sub.certificate;
        e.support = 0.0;
    }
    e.lb = std::min(std::max(best, 0.0), e.ub);
    if (e.certificate && e.lb > 1e-14) {
        const double val = e.support > 0.0
                               ? hs_inner(*e.certificate, x).real() - e.support
                               : std::abs(hs_inner(*e.certificate, x));
        if (val > e.lb) {
            const double s = e.lb / std::max(val, 1e-300);
            *e.certificate *= Complex(s);
            e.support *= s;
        }
    }
    return e;
}

InnerEval full_to_ball_tau(const ComplexMatrix& x, const StarSubspace& z,
                           const TracialState& trace, const SearchConfig& cfg) {
    InnerEval e = cheap_to_ball_tau(x, z, trace);
    if (z.dim() == 0 || e.ub - e.lb <= cfg.tol) return e;

    // Projected gradient descent on the smooth quadratic ||x - B(c)||_tau^2.
    const int d = z.dim();
    std::vector<Complex> c = z.project_coeffs(x);
    auto clamp_ball = [&](std::vector<Complex>& cc) {
        const double zn = operator_norm(combine(z, cc));
        if (zn > 1.0)
            for (auto& ci : cc) ci /= zn;
    };
    clamp_ball(c);
    double f = trace.norm(x - combine(z, c));
    double step = 0.5;
    for (int it = 0; it < std::min(cfg.max_iters, 120); ++it) {
        const ComplexMatrix a = x - combine(z, c);
        std::vector<Complex> dir(d);
        double gn2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const Complex gi = trace.inner(z.basis[i], a);
            dir[i] = gi;
            gn2 += std::norm(gi);
        }
        if (gn2 < 1e-26) break;
        bool accepted = false;
        for (int ls = 0; ls < 12; ++ls) {
            std::vector<Complex> cand = c;
            for (int i = 0; i < d; ++i) cand[i] += step * dir[i];
            clamp_ball(cand);
            const double fc = trace.norm(x - combine(z, cand));
            if (fc < f - 1e-12) {
                c = std::move(cand);
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        step = std::min(step * 1.5, 2.0);
    }
    if (f < e.ub) {
        ComplexMatrix zopt = combine(z, c);
        const double zn = operator_norm(zopt);
        if (zn > 1.0) zopt *= Complex(1.0 / zn);  // clamp_ball already, safety
        e.ub = trace.norm(x - zopt);
        e.witness = zopt;
    }
    if (e.lb > e.ub) e.lb = e.ub;
    return e;
}

InnerEval full_inner(const ComplexMatrix& x, const StarSubspace& z, InnerMode mode,
                     const TracialState* trace, const SearchConfig& cfg) {
    switch (mode) {
        case InnerMode::subspace: return full_to_subspace(x, z, cfg);
        case InnerMode::ball: return full_to_ball(x, z, cfg);
        case InnerMode::tau_ball: return full_to_ball_tau(x, z, *trace, cfg);
    }
    throw std::logic_error("full_inner: bad mode");
}

// ---------------------------------------------------------------------------
// Outer search: witness pools over B1(Y).
// ---------------------------------------------------------------------------

ComplexMatrix normalize_to_ball(const ComplexMatrix& y) {
    const double n = operator_norm(y);
    if (n <= 1.0 || n < 1e-300) return y;
    return y * Complex(1.0 / n);
}

ComplexMatrix random_ball_element(const StarSubspace& y, Rng& rng, bool extreme) {
    if (y.dim() == 0) return ComplexMatrix(y.ambient_dim, y.ambient_dim);
    if (extreme && y.is_algebra && y.is_unital) {
        // Unitary exp(iH) with H Hermitian inside the span: extreme point.
        std::vector<Complex> c(y.basis.size());
        for (auto& ci : c) ci = rng.cgaussian();
        ComplexMatrix a = combine(y, c);
        ComplexMatrix h = (a + a.adjoint()) * Complex(0.5);
        const double hn = operator_norm(h);
        if (hn > 1e-12) h *= Complex(rng.uniform(0.3, 3.0) / hn);
        // exp(iH) lies in the (unital) algebra generated by H, hence in Y.
        return herm_exp_i(h);
    }
    std::vector<Complex> c(y.basis.size());
    for (auto& ci : c) ci = rng.cgaussian();
    ComplexMatrix a = combine(y, c);
    const double an = operator_norm(a);
    if (an < 1e-12) return ComplexMatrix(y.ambient_dim, y.ambient_dim);
    return a * Complex(1.0 / an);
}

struct PoolEntry {
    ComplexMatrix y;
};

struct DirectionScan {
    std::vector<PoolEntry> pool;
    long samples_used = 0;
    int converged_starts = 0;
};

int outer_iterations(const SearchConfig& cfg) {
    return std::clamp(cfg.max_iters / 25, 4, 40);
}

// Finite-difference ascent of the cheap certified lb over the coefficient
// vector of y (normalized into the unit ball before each evaluation).
ComplexMatrix ascend_witness(const StarSubspace& y, const StarSubspace& z, InnerMode mode,
                             const TracialState* trace, const ComplexMatrix& y0, double h,
                             double step0, int iters, long& evals, bool& converged) {
    const int d = y.dim();
    if (d == 0) return y0;
    std::vector<Complex> c = y.project_coeffs(y0);
    auto value = [&](const std::vector<Complex>& cc) {
        const ComplexMatrix yy = normalize_to_ball(combine(y, cc));
        ++evals;
        return cheap_inner(yy, z, mode, trace).lb;
    };
    double f = value(c);
    double step = step0;
    converged = false;
    for (int it = 0; it < iters; ++it) {
        // Forward-difference gradient over the 2d real coordinates.
        std::vector<Complex> grad(d);
        double gn = 0.0;
        for (int i = 0; i < d; ++i) {
            std::vector<Complex> cc = c;
            cc[i] += h;
            const double fr = value(cc);
            cc[i] = c[i] + Complex(0.0, h);
            const double fi = value(cc);
            grad[i] = Complex((fr - f) / h, (fi - f) / h);
            gn += std::norm(grad[i]);
        }
        gn = std::sqrt(gn);
        if (gn < 1e-9) {
            converged = true;
            break;
        }
        bool accepted = false;
        for (int ls = 0; ls < 6; ++ls) {
            std::vector<Complex> cand = c;
            for (int i = 0; i < d; ++i) cand[i] += (step / gn) * grad[i];
            const double fc = value(cand);
            if (fc > f + 1e-12) {
                c = std::move(cand);
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            converged = true;
            break;
        }
        step = std::min(step * 1.5, 1.0);
    }
    return normalize_to_ball(combine(y, c));
}

// The pool is mode-independent: starts plus ascent endpoints for every
// requested mode, so every distance flavor is evaluated over the same
// witnesses and the bracket-consistent sandwich inequalities hold pointwise.
DirectionScan build_pool(const StarSubspace& y, const StarSubspace& z,
                         const std::vector<InnerMode>& modes, const TracialState* trace,
                         const SearchConfig& cfg) {
    DirectionScan scan;
    if (y.dim() == 0) {
        scan.pool.push_back({ComplexMatrix(y.ambient_dim, y.ambient_dim)});
        return scan;
    }
    if (y.is_unital) scan.pool.push_back({ComplexMatrix::identity(y.ambient_dim)});
    for (const ComplexMatrix& b : y.basis) {
        const double n = operator_norm(b);
        if (n > 1e-12) scan.pool.push_back({b * Complex(1.0 / n)});
    }
    // Signed pairs of basis elements catch axis-aligned extreme points cheaply.
    if (y.dim() >= 2 && y.dim() <= 6) {
        for (int i = 0; i < y.dim(); ++i)
            for (int j = i + 1; j < y.dim(); ++j)
                for (double sgn : {1.0, -1.0}) {
                    const ComplexMatrix m = y.basis[i] + y.basis[j] * Complex(sgn);
                    const double n = operator_norm(m);
                    if (n > 1e-12) scan.pool.push_back({m * Complex(1.0 / n)});
                }
    }
    for (int s = 0; s < cfg.num_starts; ++s) {
        Rng rng = Rng::derived(cfg.seed, static_cast<uint64_t>(s));
        const bool extreme = (s % 4) != 3;
        const ComplexMatrix y0 = random_ball_element(y, rng, extreme);
        scan.pool.push_back({y0});
        for (InnerMode mode : modes) {
            bool converged = false;
            ComplexMatrix yk = ascend_witness(y, z, mode, trace, y0, 1e-3, 0.3,
                                              outer_iterations(cfg), scan.samples_used, converged);
            if (converged) ++scan.converged_starts;
            scan.pool.push_back({std::move(yk)});
        }
    }
    return scan;
}

struct ModeScanResult {
    double best_lb = 0.0;
    double ub = 0.0;  // heuristic sup estimate: max inner ub over the pool
    int best_index = 0;
    InnerEval best_eval;
    ComplexMatrix best_witness{1, 1};
};

ModeScanResult scan_mode(const DirectionScan& scan, const StarSubspace& y,
                         const StarSubspace& z, InnerMode mode, const TracialState* trace,
                         const SearchConfig& cfg) {
    ModeScanResult r;
    double best_cheap = -1.0;
    ComplexMatrix best(z.ambient_dim, z.ambient_dim);
    for (size_t i = 0; i < scan.pool.size(); ++i) {
        const InnerEval e = cheap_inner(scan.pool[i].y, z, mode, trace);
        r.ub = std::max(r.ub, e.ub);
        if (e.lb > best_cheap) {  // strict: ties resolve to the lowest index
            best_cheap = e.lb;
            r.best_index = static_cast<int>(i);
            best = scan.pool[i].y;
        }
    }
    // Fine-step polish from the best pool point before the full inner solve.
    long evals = 0;
    bool conv = false;
    const ComplexMatrix refined =
        ascend_witness(y, z, mode, trace, best, 1e-5, 0.05, 30, evals, conv);
    const InnerEval e_best = full_inner(best, z, mode, trace, cfg);
    const InnerEval e_ref = full_inner(refined, z, mode, trace, cfg);
    if (e_ref.lb > e_best.lb) {
        r.best_witness = refined;
        r.best_eval = e_ref;
    } else {
        r.best_witness = best;
        r.best_eval = e_best;
    }
    r.best_lb = r.best_eval.lb;
    r.ub = std::max({r.ub, e_best.ub, e_ref.ub});
    return r;
}

DistanceBracket make_outer_bracket(const ModeScanResult& a, const ModeScanResult& b) {
    DistanceBracket out;
    out.lb = std::max(a.best_lb, b.best_lb);
    out.ub = std::min(1.0, std::max(a.ub, b.ub));
    out.ub = std::max(out.ub, out.lb);  // eval noise guard
    out.status = DistanceBracket::Status::heuristic;
    return out;
}

GapEstimate gap_from_scan(const DirectionScan& scan, const ModeScanResult& r) {
    GapEstimate g{r.best_lb, r.best_witness, scan.samples_used, scan.converged_starts};
    return g;
}

void require_same_ambient(const StarSubspace& y, const StarSubspace& z) {
    if (y.ambient_dim != z.ambient_dim)
        throw std::invalid_argument("ambient dimensions differ");
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------------

static DistanceBracket bracket_from_inner(const InnerEval& e, const SearchConfig& cfg) {
    DistanceBracket b;
    b.lb = e.lb;
    b.ub = e.ub;
    b.witness = e.witness;
    b.certificate = e.certificate;
    b.certificate_support = e.support;
    b.status = (e.ub - e.lb <= cfg.tol) ? DistanceBracket::Status::certified
                                        : DistanceBracket::Status::heuristic;
    return b;
}

DistanceBracket dist_to_subspace(const ComplexMatrix& x, const StarSubspace& z,
                                 const SearchConfig& cfg) {
    cfg.validate();
    if (x.rows() != z.ambient_dim || x.cols() != z.ambient_dim)
        throw std::invalid_argument("dist_to_subspace: shape mismatch");
    return bracket_from_inner(full_to_subspace(x, z, cfg), cfg);
}

DistanceBracket dist_to_unit_ball(const ComplexMatrix& x, const StarSubspace& z,
                                  const SearchConfig& cfg) {
    cfg.validate();
    if (x.rows() != z.ambient_dim || x.cols() != z.ambient_dim)
        throw std::invalid_argument("dist_to_unit_ball: shape mismatch");
    return bracket_from_inner(full_to_ball(x, z, cfg), cfg);
}

DistanceBracket dist_to_ball_tau(const ComplexMatrix& x, const StarSubspace& q,
                                 const TracialState& trace, const SearchConfig& cfg) {
    cfg.validate();
    if (x.rows() != q.ambient_dim || x.cols() != q.ambient_dim)
        throw std::invalid_argument("dist_to_ball_tau: shape mismatch");
    if (trace.ambient_dim != q.ambient_dim)
        throw std::invalid_argument("dist_to_ball_tau: trace dimension mismatch");
    return bracket_from_inner(full_to_ball_tau(x, q, trace, cfg), cfg);
}

GapEstimate one_sided_gap(const StarSubspace& y, const StarSubspace& z, GapMode mode,
                          const SearchConfig& cfg) {
    cfg.validate();
    require_same_ambient(y, z);
    const DirectionScan scan =
        build_pool(y, z, {InnerMode::subspace, InnerMode::ball}, nullptr, cfg);
    const InnerMode im = mode == GapMode::to_subspace ? InnerMode::subspace : InnerMode::ball;
    const ModeScanResult r = scan_mode(scan, y, z, im, nullptr, cfg);
    return gap_from_scan(scan, r);
}

PairEstimates estimate_pair(const StarSubspace& y, const StarSubspace& z,
                            const TracialState* trace, const SearchConfig& cfg) {
    cfg.validate();
    require_same_ambient(y, z);
    std::vector<InnerMode> modes{InnerMode::subspace, InnerMode::ball};
    if (trace) modes.push_back(InnerMode::tau_ball);

    const DirectionScan fwd = build_pool(y, z, modes, trace, cfg);
    const DirectionScan bwd = build_pool(z, y, modes, trace, cfg);

    const ModeScanResult sub_f = scan_mode(fwd, y, z, InnerMode::subspace, trace, cfg);
    const ModeScanResult sub_b = scan_mode(bwd, z, y, InnerMode::subspace, trace, cfg);
    const ModeScanResult ball_f = scan_mode(fwd, y, z, InnerMode::ball, trace, cfg);
    const ModeScanResult ball_b = scan_mode(bwd, z, y, InnerMode::ball, trace, cfg);

    PairEstimates out;
    out.d0 = make_outer_bracket(sub_f, sub_b);
    out.dkk = make_outer_bracket(ball_f, ball_b);
    out.gap_yz = gap_from_scan(fwd, sub_f);
    out.gap_zy = gap_from_scan(bwd, sub_b);
    if (trace) {
        const ModeScanResult tau_f = scan_mode(fwd, y, z, InnerMode::tau_ball, trace, cfg);
        const ModeScanResult tau_b = scan_mode(bwd, z, y, InnerMode::tau_ball, trace, cfg);
        out.dmt = make_outer_bracket(tau_f, tau_b);
    }
    return out;
}

DistanceBracket d0_estimate(const StarSubspace& y, const StarSubspace& z,
                            const SearchConfig& cfg) {
    return estimate_pair(y, z, nullptr, cfg).d0;
}

DistanceBracket dkk_estimate(const StarSubspace& y, const StarSubspace& z,
                             const SearchConfig& cfg) {
    return estimate_pair(y, z, nullptr, cfg).dkk;
}

DistanceBracket dmt_estimate(const StarSubspace& p, const StarSubspace& q,
                             const TracialState& trace, const SearchConfig& cfg) {
    if (!p.is_algebra || !p.is_unital || !q.is_algebra || !q.is_unital)
        throw std::invalid_argument("dmt_estimate: operands must be unital *-subalgebras");
    const PairEstimates est = estimate_pair(p, q, &trace, cfg);
    return *est.dmt;
}

NearInclusionVerdict near_inclusion(const StarSubspace& y, const StarSubspace& z, double gamma,
                                    const SearchConfig& cfg) {
    cfg.validate();
    require_same_ambient(y, z);
    const DirectionScan scan =
        build_pool(y, z, {InnerMode::subspace, InnerMode::ball}, nullptr, cfg);
    const ModeScanResult r = scan_mode(scan, y, z, InnerMode::subspace, nullptr, cfg);
    NearInclusionVerdict v;
    if (r.best_eval.lb > gamma + cfg.tol) {
        v.refuted = true;
        v.witness = r.best_witness;
        v.witness_lb = r.best_eval.lb;
    }
    return v;
}

}  // namespace oadl
