#include "norm_sdp.hpp"

#include <cmath>

#include "oadl/spectral.hpp"

namespace oadl::detail {

namespace {

// Hermitian block matrix [[p I, M],[M*, q I]] of size 2n.
ComplexMatrix dilation(const ComplexMatrix& m, double p, double q) {
    const int n = m.rows();
    ComplexMatrix big(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        big(i, i) = p;
        big(n + i, n + i) = q;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            big(i, n + j) = m(i, j);
            big(n + j, i) = std::conj(m(i, j));
        }
    return big;
}

ComplexMatrix offdiag_embed(const ComplexMatrix& m) { return dilation(m, 0.0, 0.0); }

struct Eig {
    HermEigen e;
    bool pd = false;
    double logdet = 0.0;
};

// Cholesky logdet: fast feasibility + value check for line searches.
bool chol_logdet(const ComplexMatrix& m, double& logdet) {
    const int n = m.rows();
    ComplexMatrix l(n, n);
    logdet = 0.0;
    for (int j = 0; j < n; ++j) {
        double diag = m(j, j).real();
        for (int k = 0; k < j; ++k) diag -= std::norm(l(j, k));
        if (diag <= 1e-300) return false;
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        logdet += 2.0 * std::log(ljj);
        for (int i = j + 1; i < n; ++i) {
            Complex s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return true;
}

Eig eig_logdet(const ComplexMatrix& m) {
    Eig out{herm_eigen(m, SpectralOptions{.herm_tol = 1e-6}), true, 0.0};
    for (double lam : out.e.values) {
        if (lam <= 1e-300) {
            out.pd = false;
            return out;
        }
        out.logdet += std::log(lam);
    }
    return out;
}

ComplexMatrix inverse_from_eig(const HermEigen& e) {
    const int n = e.vectors.rows();
    ComplexMatrix d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = 1.0 / e.values[i];
    return e.vectors * d * e.vectors.adjoint();
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    // Re tr(a b) for Hermitian a, b.
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) s += (a(i, k) * b(k, i)).real();
    return s;
}

}  // namespace

NormSdpResult solve_norm_sdp(const ComplexMatrix& x, const StarSubspace& z,
                             bool ball_constraint) {
    const int n = x.rows();
    const int d = z.dim();
    const int nv = 2 * d + 1;  // Re c, Im c, t

    // Constant derivative blocks. Norm block M1 = dilation(A, t, t) with
    // A = x - sum c_i b_i; ball block M2 = dilation(B, 1, 1).
    std::vector<ComplexMatrix> g1;  // dM1/dp, without the t coordinate
    std::vector<ComplexMatrix> g2;  // dM2/dp
    g1.reserve(2 * d);
    g2.reserve(2 * d);
    for (int i = 0; i < d; ++i) {
        g1.push_back(offdiag_embed(-z.basis[i]));
        g2.push_back(offdiag_embed(z.basis[i]));
    }
    for (int i = 0; i < d; ++i) {
        g1.push_back(offdiag_embed(z.basis[i] * Complex(0.0, -1.0)));
        g2.push_back(offdiag_embed(z.basis[i] * Complex(0.0, 1.0)));
    }

    std::vector<Complex> c = z.project_coeffs(x);
    if (ball_constraint) {
        const double bn = operator_norm(z.combine(c));
        if (bn > 0.9) {  // keep strictly inside the ball constraint
            for (auto& ci : c) ci *= 0.9 / bn;
        }
    }
    auto amat = [&](const std::vector<Complex>& cc) { return x - z.combine(cc); };
    double t = operator_norm(amat(c)) * 1.2 + 0.1;

    const double nu = ball_constraint ? 4.0 * n : 2.0 * n;
    const double target_gap = 1e-10;
    double tau = 1.0;

    NormSdpResult res;
    res.dual_phi = ComplexMatrix(n, n);

    // The linear term is anchored at the current t: at large tau the raw
    // value tau*t would swamp the logdet differences in double precision.
    auto barrier = [&](const std::vector<Complex>& cc, double tt, double t_anchor,
                       bool& feasible) {
        double ld1 = 0.0;
        feasible = chol_logdet(dilation(amat(cc), tt, tt), ld1);
        if (!feasible) return 0.0;
        double val = tau * (tt - t_anchor) - ld1;
        if (ball_constraint) {
            double ld2 = 0.0;
            feasible = chol_logdet(dilation(z.combine(cc), 1.0, 1.0), ld2);
            if (!feasible) return 0.0;
            val -= ld2;
        }
        return val;
    };

    const int max_outer = 64;
    for (int outer = 0; outer < max_outer; ++outer) {
        // Damped Newton centering at this tau.
        for (int newton = 0; newton < 14; ++newton) {
            const ComplexMatrix m1 = dilation(amat(c), t, t);
            const Eig e1 = eig_logdet(m1);
            if (!e1.pd) return res;  // should not happen from a feasible start
            const ComplexMatrix w1 = inverse_from_eig(e1.e);

            ComplexMatrix w2(1, 1);
            bool have2 = false;
            if (ball_constraint) {
                const Eig e2 = eig_logdet(dilation(z.combine(c), 1.0, 1.0));
                if (!e2.pd) return res;
                w2 = inverse_from_eig(e2.e);
                have2 = true;
            }

            // Gradient and Hessian of tau*t - logdet M1 (- logdet M2).
            std::vector<ComplexMatrix> w1g;  // M1^{-1} G_i including t-slot
            w1g.reserve(nv);
            for (int i = 0; i < 2 * d; ++i) w1g.push_back(w1 * g1[i]);
            w1g.push_back(w1);  // G_t = identity
            std::vector<ComplexMatrix> w2g;
            if (have2) {
                w2g.reserve(2 * d);
                for (int i = 0; i < 2 * d; ++i) w2g.push_back(w2 * g2[i]);
            }

            ComplexMatrix hess(nv, nv);
            ComplexMatrix grad(nv, 1);
            for (int i = 0; i < nv; ++i) {
                double gi = 0.0;
                for (int k = 0; k < w1g[i].rows(); ++k) gi -= w1g[i](k, k).real();
                if (have2 && i < 2 * d)
                    for (int k = 0; k < w2g[i].rows(); ++k) gi -= w2g[i](k, k).real();
                if (i == nv - 1) gi += tau;
                grad(i, 0) = gi;
                for (int j = i; j < nv; ++j) {
                    double hij = trace_product(w1g[i], w1g[j]);
                    if (have2 && i < 2 * d && j < 2 * d) hij += trace_product(w2g[i], w2g[j]);
                    hess(i, j) = hij;
                    hess(j, i) = hij;
                }
            }
            for (int i = 0; i < nv; ++i) hess(i, i) += 1e-12;

            const ComplexMatrix delta = solve_linear(hess, grad);
            double decrement = 0.0;
            for (int i = 0; i < nv; ++i) decrement += (grad(i, 0) * delta(i, 0)).real();
            if (!(decrement > 0)) break;

            bool moved = false;
            double stepsz = 1.0;
            bool feas = false;
            const double anchor = t;
            const double f0 = barrier(c, t, anchor, feas);
            for (int ls = 0; ls < 50; ++ls) {
                std::vector<Complex> cc = c;
                for (int i = 0; i < d; ++i)
                    cc[i] -= Complex(stepsz * delta(i, 0).real(),
                                     stepsz * delta(d + i, 0).real());
                const double tt = t - stepsz * delta(nv - 1, 0).real();
                bool ok = false;
                const double f1 = barrier(cc, tt, anchor, ok);
                if (ok && f1 <= f0 - 0.25 * stepsz * decrement) {
                    c = std::move(cc);
                    t = tt;
                    moved = true;
                    break;
                }
                stepsz *= 0.5;
            }
            if (!moved || decrement < 1e-13) break;
        }

        // Dual certificate from the centered point: Z = (1/tau) M1^{-1}.
        {
            const Eig e1 = eig_logdet(dilation(amat(c), t, t));
            if (e1.pd) {
                const ComplexMatrix w1 = inverse_from_eig(e1.e);
                ComplexMatrix z12(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) z12(i, j) = w1(i, n + j);
                res.dual_phi = z12 * Complex(-2.0 / tau);
            }
        }
        if (nu / tau <= target_gap) {
            res.converged = true;
            break;
        }
        tau *= 16.0;
    }
    res.coeffs = c;
    res.objective = t;
    return res;
}

}  // namespace oadl::detail
