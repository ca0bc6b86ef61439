#pragma once

// The distinguished tensor field X^i_a(t, x) and its derived objects:
// potential energy f, covariant derivatives, helicity, the lowered 2-form
// omega, causal classification, rescaling and the world-force law.

#include <memory>
#include <vector>

#include "jetflow/arrays.hpp"
#include "jetflow/expr.hpp"
#include "jetflow/jetpoint.hpp"
#include "jetflow/metric.hpp"

namespace jetflow {

struct DistTensorField {
    std::size_t p = 0, n = 0;
    MatT<Expr> X; // n rows, p columns: X(i, alpha) = X^i_alpha
    std::shared_ptr<const MetricSpec> h; // p x p, in t-variables
    std::shared_ptr<const MetricSpec> g; // n x n, in x-variables

    static DistTensorField make(MatT<Expr> components,
                                std::shared_ptr<const MetricSpec> h,
                                std::shared_ptr<const MetricSpec> g);
};

template <class T>
MatT<T> field_at(const DistTensorField& f, const Env<T>& p) {
    MatT<T> out(f.n, f.p);
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t a = 0; a < f.p; ++a) out(i, a) = f.X(i, a).template eval<T>(p);
    return out;
}

/// f = 1/2 h^{ab} g_ij X^i_a X^j_b
template <class T>
T potential_energy(const DistTensorField& f, const Env<T>& p) {
    MatT<T> hinv = inverse_metric_at(*f.h, p);
    MatT<T> g = metric_at(*f.g, p);
    MatT<T> X = field_at(f, p);
    T sum = T(0.0);
    for (std::size_t a = 0; a < f.p; ++a)
        for (std::size_t b = 0; b < f.p; ++b)
            for (std::size_t i = 0; i < f.n; ++i)
                for (std::size_t j = 0; j < f.n; ++j)
                    sum += hinv(a, b) * g(i, j) * X(i, a) * X(j, b);
    return T(0.5) * sum;
}

/// nabla_j X^i_a = dX^i_a/dx^j + G^i_{jk} X^k_a; indices (j, i, a).
Ten3 nabla_X(const DistTensorField& f, const EvalPoint& p);

/// D_b X^i_a = dX^i_a/dt^b - H^c_{ab} X^i_c; indices (i, a, b).
Ten3 D_X(const DistTensorField& f, const EvalPoint& p);

/// Helicity F_j{}^i{}_a = nabla_j X^i_a - g^{ih} g_{kj} nabla_h X^k_a;
/// indices (j, i, a).
Ten3 helicity_F(const DistTensorField& f, const EvalPoint& p);

/// omega_{jia} = g_{hi} F_j{}^h{}_a; skew-symmetric in (j, i); indices (j, i, a).
Ten3 omega(const DistTensorField& f, const EvalPoint& p);

enum class CausalKind { Timelike, Causal, Lightlike, Spacelike, Indefinite };

const char* causal_kind_name(CausalKind k);

struct CausalClass {
    CausalKind kind;
    double f_min = 0.0, f_max = 0.0;
};

/// Strongest class consistent with f sampled at the given (t,x) points;
/// |f| <= 1e-12 counts as zero.
CausalClass classify(const DistTensorField& f, const std::vector<EvalPoint>& samples);

/// Divides X componentwise by sqrt(|f|) so the rescaled field has potential
/// energy +-1; requires sign-definite f at the samples and no sample in the
/// critical set. Verified at the samples to 1e-8.
DistTensorField rescale_to_unit(const DistTensorField& f, const std::vector<EvalPoint>& samples);

/// Grid scan for the critical set E = {x : X(t, x) = 0 for all sampled t}.
/// A grid point belongs to E when max |X^i_a| <= 1e-10 across t_samples.
std::vector<Vec> critical_set_scan(const DistTensorField& f,
                                   const Vec& x_min, const Vec& x_max,
                                   const std::vector<std::size_t>& counts,
                                   const std::vector<Vec>& t_samples);

struct WorldForceSpec {
    Ten3T<Expr> F; // (j, i, a): F_j{}^i{}_a
    Ten3T<Expr> U; // (i, a, b): U^i_{ab}
    Expr c;        // scalar on T x M
};

/// Right-hand side of the world-force law:
/// g^{ij} dc/dx^j + h^{ab} F_j{}^i{}_a x^j_b + h^{ab} U^i_{ab}.
Vec world_force_rhs(const WorldForceSpec& wf, const MetricSpec& h, const MetricSpec& g,
                    const JetPoint& jp);

/// max_i | g^{ih} h^{ab} g_{kj} (nabla_h X^k_a) X^j_b  -  g^{ih} df/dx^h |
/// with the gradient of f computed by exact differentiation.
double grad_f_identity_residual(const DistTensorField& f, const EvalPoint& p);

/// The potential energy as an expression over (t, x); h^{ab} enters via the
/// symbolic adjugate-over-determinant inverse.
Expr potential_energy_expr(const DistTensorField& f);

} // namespace jetflow
