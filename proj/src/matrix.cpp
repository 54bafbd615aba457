#include "oadl/matrix.hpp"

#include <cmath>

namespace oadl {

ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square()) throw std::invalid_argument("solve_linear: matrix not square");
    if (a.rows() != b.rows()) throw std::invalid_argument("solve_linear: rhs rows mismatch");
    const int n = a.rows();
    ComplexMatrix lu = a;
    ComplexMatrix x = b;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(lu(col, col));
        for (int i = col + 1; i < n; ++i) {
            const double v = std::abs(lu(i, col));
            if (v > best) { best = v; piv = i; }
        }
        if (best < 1e-300) throw numerical_error("solve_linear: singular system");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
            for (int j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(piv, j));
        }
        for (int i = col + 1; i < n; ++i) {
            const Complex f = lu(i, col) / lu(col, col);
            if (f == Complex(0.0)) continue;
            for (int j = col; j < n; ++j) lu(i, j) -= f * lu(col, j);
            for (int j = 0; j < x.cols(); ++j) x(i, j) -= f * x(col, j);
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        for (int j = 0; j < x.cols(); ++j) {
            Complex s = x(col, j);
            for (int k = col + 1; k < n; ++k) s -= lu(col, k) * x(k, j);
            x(col, j) = s / lu(col, col);
        }
    }
    return x;
}

int matrix_rank(const ComplexMatrix& m, double tol) {
    ComplexMatrix w = m;
    const int rows = w.rows(), cols = w.cols();
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        double best = tol;
        for (int i = rank; i < rows; ++i) {
            const double v = std::abs(w(i, col));
            if (v > best) { best = v; piv = i; }
        }
        if (piv < 0) continue;
        if (piv != rank)
            for (int j = 0; j < cols; ++j) std::swap(w(rank, j), w(piv, j));
        for (int i = rank + 1; i < rows; ++i) {
            const Complex f = w(i, col) / w(rank, col);
            if (f == Complex(0.0)) continue;
            for (int j = col; j < cols; ++j) w(i, j) -= f * w(rank, j);
        }
        ++rank;
    }
    return rank;
}

}  // namespace oadl
