#pragma once

// Semi-Riemann metric specifications: a symmetric grid of expressions plus a
// declared signature, evaluated pointwise to matrices, inverses and the
// induced Christoffel symbols. Everything derives from exact derivatives of
// the component expressions; nothing is tabulated.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jetflow/arrays.hpp"
#include "jetflow/expr.hpp"
#include "jetflow/linalg.hpp"

namespace jetflow {

struct MetricSpec {
    std::size_t dim = 0;
    std::vector<std::string> coords;  // e.g. {"t1"} or {"x1","x2"}
    MatT<Expr> comps;                 // entries (i,j) and (j,i) share one tree
    std::vector<int> signature;       // +1/-1 per dimension

    /// Validates shapes and symmetry; symmetric pairs are required to be
    /// structurally identical trees and are collapsed to one shared node.
    static MetricSpec make(std::vector<std::string> coords,
                           MatT<Expr> components,
                           std::vector<int> signature);

    bool is_constant() const {
        for (const auto& e : comps.data())
            if (!e.is_constant()) return false;
        return true;
    }
};

/// Degeneracy guard: |det| must exceed 1e-12 scaled by the matrix max-norm.
template <class T>
void check_nondegenerate(const MatT<T>& m, const char* what) {
    double maxn = 0.0;
    for (const auto& v : m.data()) maxn = std::max(maxn, std::abs(scalar_value(v)));
    double tol = 1e-12 * std::max(1.0, std::pow(maxn, static_cast<double>(m.rows())));
    if (std::abs(scalar_value(det(m))) <= tol)
        throw GeometryError(std::string("degenerate metric in ") + what);
}

template <class T>
MatT<T> metric_at(const MetricSpec& m, const Env<T>& p) {
    MatT<T> out(m.dim, m.dim);
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t j = i; j < m.dim; ++j) {
            T v = m.comps(i, j).template eval<T>(p);
            out(i, j) = v;
            out(j, i) = v;
        }
    check_nondegenerate(out, "metric_at");
    return out;
}

template <class T>
MatT<T> inverse_metric_at(const MetricSpec& m, const Env<T>& p) {
    return inverse(metric_at(m, p));
}

/// Christoffel symbols of the second kind, Gamma[a][b][c] symmetric in (b,c).
template <class T>
Ten3T<T> christoffel_at(const MetricSpec& m, const Env<T>& p) {
    const std::size_t d = m.dim;
    MatT<T> inv = inverse_metric_at(m, p);
    // dm[c][a][b] = d m_ab / d coord_c
    Ten3T<T> dm(d, d, d);
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) {
                T v = d1_in(m.comps(a, b), m.coords[c], p);
                dm(c, a, b) = v;
                dm(c, b, a) = v;
            }
    Ten3T<T> gamma(d, d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = b; c < d; ++c) {
                T sum = T(0.0);
                for (std::size_t e = 0; e < d; ++e)
                    sum += inv(a, e) * (dm(b, e, c) + dm(c, b, e) - dm(e, b, c));
                sum = T(0.5) * sum;
                gamma(a, b, c) = sum;
                gamma(a, c, b) = sum;
            }
    return gamma;
}

/// Verifies that the eigenvalue sign pattern at p matches the declared
/// signature; throws GeometryError otherwise.
void verify_signature(const MetricSpec& m, const EvalPoint& p);

/// Contract `slot` of an array with the inverse metric (raise) or the metric
/// (lower), evaluated at p. The slot extent must equal m.dim.
NdArray raise_index(const MetricSpec& m, const EvalPoint& p, const NdArray& v, std::size_t slot);
NdArray lower_index(const MetricSpec& m, const EvalPoint& p, const NdArray& v, std::size_t slot);

} // namespace jetflow
