#pragma once

#include <cstdint>
#include <random>

#include "oadl/matrix.hpp"

namespace oadl {

/// Deterministic random stream. Gaussian variates are produced by an explicit
/// Box-Muller transform so the byte stream depends only on the seed and the
/// call sequence, not on library distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    /// Decorrelated child stream (per-start seeds in multi-start searches).
    static Rng derived(uint64_t seed, uint64_t index) {
        uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

    double uniform() {  // [0,1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    uint64_t uniform_index(uint64_t n) { return eng_() % n; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Complex cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

    ComplexMatrix matrix(int rows, int cols) {
        ComplexMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = cgaussian();
        return m;
    }

    ComplexMatrix hermitian(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) {
            m(i, i) = gaussian();
            for (int j = i + 1; j < n; ++j) {
                const Complex z = cgaussian();
                m(i, j) = z;
                m(j, i) = std::conj(z);
            }
        }
        return m;
    }

    /// Unit column vector (Gaussian direction).
    ComplexMatrix unit_vector(int n) {
        ComplexMatrix v = matrix(n, 1);
        const double norm = v.frob_norm();
        if (norm < 1e-300) {
            v(0, 0) = 1.0;
            return v;
        }
        return v * Complex(1.0 / norm);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace oadl
