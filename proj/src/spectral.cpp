#include "oadl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace oadl {

double hermitian_defect(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("hermitian_defect: matrix not square");
    double d = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i; j < m.cols(); ++j)
            d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

namespace {

double off_diag_frob(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

HermEigen herm_eigen(const ComplexMatrix& m, const SpectralOptions& opts) {
    if (!m.is_square()) throw std::invalid_argument("herm_eigen: matrix not square");
    const double defect = hermitian_defect(m);
    if (defect > opts.herm_tol) {
        std::ostringstream os;
        os << "herm_eigen: input not Hermitian, asymmetry " << defect;
        throw std::invalid_argument(os.str());
    }

    const int n = m.rows();
    // Symmetrize so stored roundoff asymmetry cannot bias the iteration.
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(1.0, a.frob_norm());
    const double target = opts.off_tol * scale;

    for (int sweep = 0; sweep < opts.max_sweeps && n > 1; ++sweep) {
        if (off_diag_frob(a) <= target) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex b = a(p, q);
                const double r = std::abs(b);
                if (r <= 1e-300) continue;
                const Complex phase = b / r;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double two_t = std::atan2(2.0 * r, app - aqq);
                const double c = std::cos(0.5 * two_t);
                const double s = std::sin(0.5 * two_t);
                // Unitary J = diag(1, conj(phase)) * [[c,-s],[s,c]] on (p,q).
                const Complex jqp = std::conj(phase) * s;
                const Complex jqq = std::conj(phase) * c;
                // Columns: A <- A J, V <- V J.
                for (int i = 0; i < n; ++i) {
                    const Complex aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * c + aiq * jqp;
                    a(i, q) = -aip * s + aiq * jqq;
                    const Complex vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip * c + viq * jqp;
                    v(i, q) = -vip * s + viq * jqq;
                }
                // Rows: A <- J* A.
                for (int j = 0; j < n; ++j) {
                    const Complex apj = a(p, j), aqj = a(q, j);
                    a(p, j) = apj * c + std::conj(jqp) * aqj;
                    a(q, j) = -apj * s + std::conj(jqq) * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    if (n > 1 && off_diag_frob(a) > target)
        throw numerical_error("herm_eigen: Jacobi sweeps exhausted before convergence");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

    HermEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

namespace {

// Eigen-decomposition of the smaller Gram of m; shared by the norm routines.
HermEigen small_gram_eigen(const ComplexMatrix& m, bool& used_mmstar) {
    used_mmstar = m.rows() < m.cols();
    const ComplexMatrix g = used_mmstar ? m * m.adjoint() : m.adjoint() * m;
    return herm_eigen(g, SpectralOptions{.herm_tol = 1e-8});
}

}  // namespace

double operator_norm(const ComplexMatrix& m) {
    bool dummy;
    const HermEigen e = small_gram_eigen(m, dummy);
    return std::sqrt(std::max(0.0, e.values.front()));
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    bool dummy;
    const HermEigen e = small_gram_eigen(m, dummy);
    // Gram eigenvalues are only resolved to ~1e-13 of the largest one; the
    // sqrt would amplify that dust, so flush it to zero first.
    const double clip = 1e-13 * std::max(0.0, e.values.front());
    std::vector<double> sv(e.values.size());
    for (size_t i = 0; i < sv.size(); ++i)
        sv[i] = e.values[i] <= clip ? 0.0 : std::sqrt(e.values[i]);
    return sv;
}

double trace_norm(const ComplexMatrix& m) {
    const std::vector<double> sv = singular_values(m);
    double s = 0.0;
    for (double x : sv) s += x;
    return s;
}

SvdTriplets svd_triplets(const ComplexMatrix& m, double rel_cutoff) {
    bool used_mmstar;
    const HermEigen e = small_gram_eigen(m, used_mmstar);
    const double s1 = std::sqrt(std::max(0.0, e.values.front()));
    const double cut = std::max(s1 * rel_cutoff, 1e-300);

    std::vector<double> sigma;
    std::vector<int> keep;
    for (size_t i = 0; i < e.values.size(); ++i) {
        const double s = std::sqrt(std::max(0.0, e.values[i]));
        if (s > cut) {
            sigma.push_back(s);
            keep.push_back(static_cast<int>(i));
        }
    }
    if (keep.empty()) {
        // Zero matrix: report a single null triplet along e1.
        SvdTriplets t{{0.0}, ComplexMatrix(m.rows(), 1), ComplexMatrix(m.cols(), 1)};
        t.u(0, 0) = 1.0;
        t.v(0, 0) = 1.0;
        return t;
    }

    const int k = static_cast<int>(keep.size());
    SvdTriplets t{std::move(sigma), ComplexMatrix(m.rows(), k), ComplexMatrix(m.cols(), k)};
    for (int c = 0; c < k; ++c) {
        // Gram eigenvector column -> one factor; the other via m or m*.
        ComplexMatrix w(used_mmstar ? m.rows() : m.cols(), 1);
        for (int i = 0; i < w.rows(); ++i) w(i, 0) = e.vectors(i, keep[c]);
        if (used_mmstar) {
            const ComplexMatrix mv = m.adjoint() * w;  // sigma * v
            for (int i = 0; i < m.rows(); ++i) t.u(i, c) = w(i, 0);
            for (int i = 0; i < m.cols(); ++i) t.v(i, c) = mv(i, 0) / t.sigma[c];
        } else {
            const ComplexMatrix mu = m * w;  // sigma * u
            for (int i = 0; i < m.cols(); ++i) t.v(i, c) = w(i, 0);
            for (int i = 0; i < m.rows(); ++i) t.u(i, c) = mu(i, 0) / t.sigma[c];
        }
    }
    return t;
}

ComplexMatrix top_singular_outer(const ComplexMatrix& m) {
    const SvdTriplets t = svd_triplets(m);
    ComplexMatrix outer(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) outer(i, j) = t.u(i, 0) * std::conj(t.v(j, 0));
    return outer;
}

ComplexMatrix herm_exp_i(const ComplexMatrix& h, double t) {
    const HermEigen e = herm_eigen(h);
    const int n = h.rows();
    ComplexMatrix d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = std::exp(Complex(0.0, t * e.values[i]));
    return e.vectors * d * e.vectors.adjoint();
}

double min_eigenvalue(const ComplexMatrix& herm) {
    return herm_eigen(herm).values.back();
}

}  // namespace oadl
