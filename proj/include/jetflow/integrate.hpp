#pragma once

// Fixed-step classical RK4 for first-order systems, second-order prolonged
// systems (p == 1) and completely integrable sheet systems, plus residual
// evaluation of second-order systems along sampled solutions.

#include <optional>
#include <vector>

#include "jetflow/field.hpp"
#include "jetflow/prolongation.hpp"

namespace jetflow {

struct Trajectory {
    Vec ts;                // size steps+1, uniform
    std::vector<Vec> xs;   // positions
    std::vector<Vec> vs;   // velocities (recorded rhs for first-order runs)
    double step = 0.0;
    SystemTag provenance = SystemTag::Eq2;
    bool aborted = false;  // non-finite state encountered; samples are the good prefix

    std::size_t size() const { return ts.size(); }
    std::size_t n() const { return xs.empty() ? 0 : xs.front().size(); }
    JetPoint jet(std::size_t k) const;
};

struct Sheet {
    std::size_t p = 0, n = 0;
    Vec t0;
    std::vector<double> steps;        // per axis
    std::vector<std::size_t> counts;  // per axis; nodes per axis = counts[a]+1
    std::vector<Vec> xs;              // flat node-major storage
    std::vector<Mat> vs;              // recorded X^i_a at nodes
    SystemTag provenance = SystemTag::Eq9;
    double max_integrability_violation = 0.0;

    std::size_t node_count() const { return xs.size(); }
    std::size_t node_index(const std::vector<std::size_t>& idx) const;
    Vec t_at(const std::vector<std::size_t>& idx) const;
    JetPoint jet(const std::vector<std::size_t>& idx) const;
};

/// Classical RK4; velocities are recorded as the system rhs at each node.
/// A non-finite state aborts and returns the prefix with `aborted` set.
Trajectory integrate_first_order(const FirstOrderODESystem& sys, double t0, const Vec& x0,
                                 double step, std::size_t n_steps);

/// RK4 on (x, v) phase space; requires p == 1 and a full (non-trace) system.
Trajectory integrate_second_order(const SecondOrderSystem& sys, double t0, const Vec& x0,
                                  const Vec& v0, double step, std::size_t n_steps);

/// max over (i, a<b) of the antisymmetrized complete-integrability condition
/// dX^i_a/dt^b + dX^i_a/dx^j X^j_b  -  (a <-> b), exact derivatives.
double integrability_residual(const DistTensorField& f, const EvalPoint& p);

/// Successive one-dimensional RK4 sweeps along t^1, then t^2, ... (or the
/// given axis order). The integrability residual is collected at every node;
/// a violation above 1e-8 refuses the sheet with an IntegrabilityError
/// carrying the largest violation seen.
Sheet integrate_sheet(const DistTensorField& f, const Vec& t0, const Vec& x0,
                      const std::vector<double>& steps, const std::vector<std::size_t>& counts,
                      const std::vector<std::size_t>& axis_order = {});

/// Max norm of (covariant second derivative from central differences) minus
/// the system's prescribed acceleration (or its h-trace for trace systems).
double residual_along(const Trajectory& traj, const SecondOrderSystem& sys);
double residual_along(const Sheet& sheet, const SecondOrderSystem& sys);

} // namespace jetflow
