#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oadl {

using Complex = std::complex<double>;

/// Thrown when an iterative routine exhausts its budget without converging.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Dense row-major complex matrix. Zero-dimensional matrices are rejected:
/// every instance has rows >= 1 and cols >= 1.
class ComplexMatrix {
public:
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(check_dims(rows, cols)) * cols) {}

    ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        check_dims(rows, cols);
        if (a_.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
            throw std::invalid_argument("ComplexMatrix: entries length != rows*cols");
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diag(const std::vector<Complex>& d) {
        ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return m;
    }

    /// Column vector from coefficients (used for commutative-sup factor elements).
    static ComplexMatrix col_vector(const std::vector<Complex>& v) {
        return ComplexMatrix(static_cast<int>(v.size()), 1, v);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    size_t size() const { return a_.size(); }

    Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<Complex>& entries() const { return a_; }
    std::vector<Complex>& entries() { return a_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Complex trace() const {
        if (!is_square()) throw std::invalid_argument("trace: matrix not square");
        Complex t = 0.0;
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frob_norm() const {
        double s = 0.0;
        for (const Complex& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    bool all_finite() const {
        for (const Complex& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    ComplexMatrix block(int i0, int j0, int r, int c) const {
        if (i0 < 0 || j0 < 0 || i0 + r > rows_ || j0 + c > cols_)
            throw std::invalid_argument("block: out of range");
        ComplexMatrix b(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
        return b;
    }

    void set_block(int i0, int j0, const ComplexMatrix& b) {
        if (i0 < 0 || j0 < 0 || i0 + b.rows() > rows_ || j0 + b.cols() > cols_)
            throw std::invalid_argument("set_block: out of range");
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "operator+=");
        for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "operator-=");
        for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    ComplexMatrix& operator*=(Complex s) {
        for (Complex& z : a_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator-(ComplexMatrix a) { return a *= Complex(-1.0); }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("operator*: inner dimensions differ");
        ComplexMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0)) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    void require_same_shape(const ComplexMatrix& o, const char* where) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string(where) + ": shape mismatch");
    }

private:
    static int check_dims(int rows, int cols) {
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
        return rows;
    }

    int rows_;
    int cols_;
    std::vector<Complex> a_;
};

/// Hilbert-Schmidt pairing trace(a* b); sesquilinear, conjugate-linear in a.
inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_shape(b, "hs_inner");
    Complex s = 0.0;
    const auto& ae = a.entries();
    const auto& be = b.entries();
    for (size_t k = 0; k < ae.size(); ++k) s += std::conj(ae[k]) * be[k];
    return s;
}

/// Kronecker product; (pq) x (rs) blocks a_ij * b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0)) continue;
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return k;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_shape(b, "max_abs_diff");
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

/// Solves A X = B by Gaussian elimination with partial pivoting (A square).
ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b);

/// Numerical rank by row elimination with the given absolute pivot cutoff.
int matrix_rank(const ComplexMatrix& m, double tol);

}  // namespace oadl
