#pragma once

// Second-order systems prolonged from the first-order flow of a
// distinguished tensor field, plus the order reductions that turn a single
// higher-order DE/PDE into a first-order system of the kinematic type.

#include <functional>
#include <utility>
#include <vector>

#include "jetflow/field.hpp"
#include "jetflow/jetpoint.hpp"

namespace jetflow {

enum class SystemTag {
    Eq2, Eq3, Eq4, Eq5, Eq9, Eq10, Eq10Prime, Geodesic, OdeChain,
    HamiltonPlain, HamiltonShifted,
};

const char* system_tag_name(SystemTag t);

/// Prescribes the covariant second derivative x^i_{ab} (full systems) or
/// only its h-trace h^{ab} x^i_{ab} (tension-type systems). Carries the
/// metrics so integrators and residual checks can form the connection terms.
struct SecondOrderSystem {
    std::size_t p = 0, n = 0;
    SystemTag tag = SystemTag::Geodesic;
    bool trace_only = false;
    std::shared_ptr<const MetricSpec> h, g;
    std::function<Ten3(const JetPoint&)> accel;       // (i, a, b); valid when !trace_only
    std::function<Vec(const JetPoint&)> trace_accel;  // (i); valid when trace_only
};

/// dx^i/dt = rhs_i(t, x); rhs held as expressions so the system can be
/// printed as well as integrated.
struct FirstOrderODESystem {
    std::size_t n = 0;
    SystemTag tag = SystemTag::Eq2;
    std::vector<Expr> rhs; // in t1, x1..xn

    Vec eval_rhs(double t, const Vec& x) const;
};

/// The kinematic system dx^i/dt = X^i(t, x); requires p == 1.
FirstOrderODESystem kinematic_system(const DistTensorField& f);

/// Covariant acceleration: raw d2x - H^c_{ab} x^i_c + G^i_{jk} x^j_a x^k_b.
Ten3 geodesic_defect(const MetricSpec& h, const MetricSpec& g, const JetPoint& jp,
                     const Ten3& raw_second);

SecondOrderSystem make_geodesic(std::shared_ptr<const MetricSpec> h,
                                std::shared_ptr<const MetricSpec> g,
                                std::size_t p, std::size_t n);

/// x^i_{11} = DX^i + (nabla_j X^i) dx^j/dt           (p == 1)
SecondOrderSystem prolong_eq3(const DistTensorField& f);
/// x^i_{11} = g^{ih} g_{kj} (nabla_h X^k) dx^j/dt + F_j{}^i dx^j/dt + DX^i
SecondOrderSystem prolong_eq4(const DistTensorField& f);
/// x^i_{11} = g^{ih} g_{kj} (nabla_h X^k) X^j + F_j{}^i dx^j/dt + DX^i
SecondOrderSystem prolong_eq5(const DistTensorField& f);

/// x^i_{ab} = D_b X^i_a + (nabla_j X^i_a) x^j_b       (general p)
SecondOrderSystem prolong_eq9(const DistTensorField& f);
/// Trace form: h^{ab} x^i_{ab} = grad-energy term + h^{ab} F_j{}^i{}_a x^j_b
/// + h^{ab} D_b X^i_a.
SecondOrderSystem prolong_eq10(const DistTensorField& f);
/// Reduced trace form for unit fields; `samples` witness that f is constant
/// in {-1, 0, 1} (throws otherwise).
SecondOrderSystem prolong_eq10prime(const DistTensorField& f,
                                    const std::vector<EvalPoint>& samples);

/// d^n x / dt^n = rhs(t1, x1..xn)  ->  chain system of n first-order DEs.
FirstOrderODESystem reduce_order_ode(const Expr& rhs, std::size_t order);

struct PdeEquation {
    enum class Kind { State, Symmetry, Pde, Free };
    std::size_t state = 0; // extended-state index (0 = x, k = u^k)
    std::size_t dir = 0;   // t-direction of the derivative
    Expr rhs;
    Kind kind = Kind::State;
};

struct PdeReduction {
    DistTensorField extended; // (1+p) x p component grid mirroring `equations`
    std::vector<PdeEquation> equations; // exactly (1+p)*p entries
    std::vector<std::pair<std::size_t, std::size_t>> symmetry_constraints; // a < b
};

/// r = 2 reduction of  d^2 x / d(t^p)^2 = rhs(t^a, x1, u-states x2..x{p+1},
/// jet names x{k}_{a}) to a first-order sheet system over (x, u^1..u^p).
PdeReduction reduce_order_pde(const Expr& rhs, std::size_t p, std::size_t r = 2);

} // namespace jetflow
