// Independent reference computations used by the test suites only.
// These deliberately avoid the library's spectral kernel so that frozen
// expected values are produced by a second route.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "oadl/matrix.hpp"
#include "oadl/rng.hpp"

namespace oracles {

using oadl::Complex;
using oadl::ComplexMatrix;

// Largest singular value via power iteration on m* m, run to a 1e-12
// fixed-point tolerance on the Rayleigh quotient.
inline double power_iteration_norm(const ComplexMatrix& m, int max_iters = 20000) {
    const ComplexMatrix g = m.adjoint() * m;
    const int n = g.rows();
    ComplexMatrix v(n, 1);
    for (int i = 0; i < n; ++i) v(i, 0) = Complex(1.0 + 0.013 * i, 0.11 * (i + 1));
    double prev = -1.0;
    for (int it = 0; it < max_iters; ++it) {
        ComplexMatrix w = g * v;
        const double norm = w.frob_norm();
        if (norm < 1e-300) return 0.0;
        v = w * Complex(1.0 / norm);
        const ComplexMatrix gv = g * v;
        double lam = 0.0;
        for (int i = 0; i < n; ++i) lam += (std::conj(v(i, 0)) * gv(i, 0)).real();
        if (std::abs(lam - prev) <= 1e-12 * std::max(1.0, std::abs(lam)) && it > 4)
            return std::sqrt(std::max(0.0, lam));
        prev = lam;
    }
    return std::sqrt(std::max(0.0, prev));
}

// One-sided Jacobi SVD: rotates column pairs of a working copy until all
// columns are mutually orthogonal; singular values are the column norms.
inline std::vector<double> jacobi_svd_values(const ComplexMatrix& m, int max_sweeps = 60) {
    ComplexMatrix w = m;
    const int n = w.cols();
    auto col_dot = [&](int p, int q) {
        Complex s = 0.0;
        for (int i = 0; i < w.rows(); ++i) s += std::conj(w(i, p)) * w(i, q);
        return s;
    };
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = col_dot(p, q);
                const double app = col_dot(p, p).real();
                const double aqq = col_dot(q, q).real();
                off = std::max(off, std::abs(apq));
                const double r = std::abs(apq);
                if (r <= 1e-15 * std::max(1.0, std::sqrt(app * aqq))) continue;
                const Complex phase = apq / r;
                const double two_t = std::atan2(2.0 * r, app - aqq);
                const double c = std::cos(0.5 * two_t);
                const double s = std::sin(0.5 * two_t);
                for (int i = 0; i < w.rows(); ++i) {
                    const Complex wp = w(i, p), wq = w(i, q);
                    w(i, p) = wp * c + wq * std::conj(phase) * s;
                    w(i, q) = -wp * s + wq * std::conj(phase) * c;
                }
            }
        }
        if (off <= 1e-14) break;
    }
    std::vector<double> sv(n);
    for (int p = 0; p < n; ++p) sv[p] = std::sqrt(std::max(0.0, col_dot(p, p).real()));
    std::sort(sv.rbegin(), sv.rend());
    return sv;
}

// Index-by-index Kronecker product.
inline ComplexMatrix kron_quad_loop(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    return k;
}

// min over a complex grid of |scan|: returns min of f over c in a disc-like
// box [-radius, radius]^2, refined by repeated zooming until the cell size
// drops below tol. f takes a Complex coefficient.
template <typename F>
double grid_min_1c(F&& f, double radius = 2.5, double tol = 1e-7, int pts = 41) {
    double cx = 0.0, cy = 0.0, half = radius;
    double best = f(Complex(cx, cy));
    while (half > tol) {
        double bx = cx, by = cy;
        for (int i = 0; i < pts; ++i) {
            for (int j = 0; j < pts; ++j) {
                const double x = cx - half + 2.0 * half * i / (pts - 1);
                const double y = cy - half + 2.0 * half * j / (pts - 1);
                const double v = f(Complex(x, y));
                if (v < best) { best = v; bx = x; by = y; }
            }
        }
        cx = bx; cy = by;
        half *= 2.5 / (pts - 1);
    }
    return best;
}

// Same with two complex coefficients.
template <typename F>
double grid_min_2c(F&& f, double radius = 2.0, double tol = 1e-5, int pts = 13) {
    double c[4] = {0, 0, 0, 0};
    double half = radius;
    double best = f(Complex(c[0], c[1]), Complex(c[2], c[3]));
    while (half > tol) {
        double bc[4] = {c[0], c[1], c[2], c[3]};
        for (int i0 = 0; i0 < pts; ++i0)
            for (int i1 = 0; i1 < pts; ++i1)
                for (int i2 = 0; i2 < pts; ++i2)
                    for (int i3 = 0; i3 < pts; ++i3) {
                        const double x0 = c[0] - half + 2.0 * half * i0 / (pts - 1);
                        const double x1 = c[1] - half + 2.0 * half * i1 / (pts - 1);
                        const double x2 = c[2] - half + 2.0 * half * i2 / (pts - 1);
                        const double x3 = c[3] - half + 2.0 * half * i3 / (pts - 1);
                        const double v = f(Complex(x0, x1), Complex(x2, x3));
                        if (v < best) {
                            best = v;
                            bc[0] = x0; bc[1] = x1; bc[2] = x2; bc[3] = x3;
                        }
                    }
        for (int k = 0; k < 4; ++k) c[k] = bc[k];
        half *= 2.5 / (pts - 1);
    }
    return best;
}

}  // namespace oracles
