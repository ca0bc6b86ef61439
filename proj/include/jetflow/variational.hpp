#pragma once

// First-order Lagrangians and Hamiltonians of the prolonged dynamics, and
// discrete Euler-Lagrange residuals for variational verification of
// integrated trajectories.

#include "jetflow/field.hpp"
#include "jetflow/integrate.hpp"

namespace jetflow {

enum class LagrangianVariant { Full, Reduced };
enum class HamiltonianWeight { SqrtH, None };

struct LagrangianSpec {
    LagrangianVariant variant = LagrangianVariant::Full;
    DistTensorField field;
};

/// Full: 1/2 h^{ab} g_ij (x^i_a - X^i_a)(x^j_b - X^j_b) sqrt|det h|.
/// Reduced: (1/2 h^{ab} g_ij x^i_a x^j_b + f) sqrt|det h|.
double lagrangian(const JetPoint& jp, const LagrangianSpec& spec);

/// (1/2 h^{ab} g_ij x^i_a x^j_b - f), multiplied by sqrt|det h| for the
/// weighted variant. Both Lagrangian variants Legendre-transform to this.
double hamiltonian(const JetPoint& jp, const DistTensorField& f,
                   HamiltonianWeight weight = HamiltonianWeight::SqrtH);

/// The p == 1 Lagrangian as an expression over (t1, x1..xn, y1..yn), so
/// conjugate momenta and forces come from exact jet-variable derivatives.
Expr lagrangian_jet_expr(const DistTensorField& f, LagrangianVariant variant);

struct ElResidual {
    double max_residual = 0.0;
    std::vector<double> series; // per interior sample
};

/// Discrete Euler-Lagrange residual along a uniformly sampled trajectory:
/// r_k = (P_{k+1} - P_k)/dt - dL/dx at the interval midpoint, with
/// P = dL/dy from exact differentiation of the jet-variable Lagrangian.
ElResidual el_residual(const Trajectory& traj, const LagrangianSpec& spec);

} // namespace jetflow
