#pragma once

// Determinant / inverse for the small matrices that appear here, generic in
// the scalar so dual-number pipelines can differentiate straight through
// them. Pivoting decisions use scalar_value(), which strips derivative parts.

#include <cmath>
#include <utility>

#include "jetflow/arrays.hpp"
#include "jetflow/dual.hpp"
#include "jetflow/errors.hpp"

namespace jetflow {

template <class T>
T det(const MatT<T>& m) {
    const std::size_t n = m.rows();
    MatT<T> a = m;
    T result = T(1.0);
    double sign = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        double best = std::abs(scalar_value(a(c, c)));
        for (std::size_t r = c + 1; r < n; ++r) {
            double cand = std::abs(scalar_value(a(r, c)));
            if (cand > best) { best = cand; piv = r; }
        }
        if (best == 0.0) return T(0.0);
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
            sign = -sign;
        }
        result = result * a(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            T f = a(r, c) / a(c, c);
            for (std::size_t k = c; k < n; ++k) a(r, k) = a(r, k) - f * a(c, k);
        }
    }
    return T(sign) * result;
}

template <class T>
MatT<T> inverse(const MatT<T>& m) {
    const std::size_t n = m.rows();
    MatT<T> a = m;
    MatT<T> inv(n, n);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = T(1.0);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        double best = std::abs(scalar_value(a(c, c)));
        for (std::size_t r = c + 1; r < n; ++r) {
            double cand = std::abs(scalar_value(a(r, c)));
            if (cand > best) { best = cand; piv = r; }
        }
        if (best == 0.0) throw GeometryError("singular matrix in inverse()");
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(a(c, k), a(piv, k));
                std::swap(inv(c, k), inv(piv, k));
            }
        }
        T d = a(c, c);
        for (std::size_t k = 0; k < n; ++k) {
            a(c, k) = a(c, k) / d;
            inv(c, k) = inv(c, k) / d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            T f = a(r, c);
            if (all_zero(f)) continue;
            for (std::size_t k = 0; k < n; ++k) {
                a(r, k) = a(r, k) - f * a(c, k);
                inv(r, k) = inv(r, k) - f * inv(c, k);
            }
        }
    }
    return inv;
}

/// Counts of (positive, negative) eigenvalues of a symmetric matrix;
/// eigenvalues within `tol` of zero count as neither.
std::pair<int, int> symmetric_eigen_signs(const Mat& m, double tol = 1e-10);

/// Eigenvalues of a symmetric matrix, ascending.
Vec symmetric_eigenvalues(const Mat& m);

} // namespace jetflow
