#include "jetflow/variational.hpp"

#include <cmath>

#include "jetflow/expr_build.hpp"

namespace jetflow {

namespace {

double sqrt_abs_det_h(const DistTensorField& f, const EvalPoint& env) {
    return std::sqrt(std::abs(det(metric_at(*f.h, env))));
}

} // namespace

double lagrangian(const JetPoint& jp, const LagrangianSpec& spec) {
    const DistTensorField& f = spec.field;
    EvalPoint env = base_point(jp.t, jp.x);
    Mat hinv = inverse_metric_at(*f.h, env);
    Mat g = metric_at(*f.g, env);
    double s = sqrt_abs_det_h(f, env);
    double sum = 0.0;
    if (spec.variant == LagrangianVariant::Full) {
        Mat X = field_at(f, env);
        for (std::size_t a = 0; a < f.p; ++a)
            for (std::size_t b = 0; b < f.p; ++b)
                for (std::size_t i = 0; i < f.n; ++i)
                    for (std::size_t j = 0; j < f.n; ++j)
                        sum += hinv(a, b) * g(i, j) * (jp.v(i, a) - X(i, a)) *
                               (jp.v(j, b) - X(j, b));
        return 0.5 * sum * s;
    }
    for (std::size_t a = 0; a < f.p; ++a)
        for (std::size_t b = 0; b < f.p; ++b)
            for (std::size_t i = 0; i < f.n; ++i)
                for (std::size_t j = 0; j < f.n; ++j)
                    sum += hinv(a, b) * g(i, j) * jp.v(i, a) * jp.v(j, b);
    return (0.5 * sum + potential_energy(f, env)) * s;
}

double hamiltonian(const JetPoint& jp, const DistTensorField& f, HamiltonianWeight weight) {
    EvalPoint env = base_point(jp.t, jp.x);
    Mat hinv = inverse_metric_at(*f.h, env);
    Mat g = metric_at(*f.g, env);
    double sum = 0.0;
    for (std::size_t a = 0; a < f.p; ++a)
        for (std::size_t b = 0; b < f.p; ++b)
            for (std::size_t i = 0; i < f.n; ++i)
                for (std::size_t j = 0; j < f.n; ++j)
                    sum += hinv(a, b) * g(i, j) * jp.v(i, a) * jp.v(j, b);
    double value = 0.5 * sum - potential_energy(f, env);
    if (weight == HamiltonianWeight::SqrtH) value *= sqrt_abs_det_h(f, env);
    return value;
}

Expr lagrangian_jet_expr(const DistTensorField& f, LagrangianVariant variant) {
    if (f.p != 1) throw GeometryError("lagrangian_jet_expr requires p == 1");
    const std::size_t n = f.n;
    Expr h11 = f.h->comps(0, 0);
    Expr hinv = ebuild::div(ebuild::one(), h11);
    Expr s = ebuild::sqrt(ebuild::abs(h11));
    Expr sum = ebuild::zero();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Expr term;
            if (variant == LagrangianVariant::Full) {
                Expr di = ebuild::sub(Expr::var(y_name(i)), f.X(i, 0));
                Expr dj = ebuild::sub(Expr::var(y_name(j)), f.X(j, 0));
                term = ebuild::mul(f.g->comps(i, j), ebuild::mul(di, dj));
            } else {
                term = ebuild::mul(f.g->comps(i, j),
                                   ebuild::mul(Expr::var(y_name(i)), Expr::var(y_name(j))));
            }
            sum = ebuild::add(sum, term);
        }
    Expr kinetic = ebuild::mul(Expr::literal(0.5), ebuild::mul(hinv, sum));
    if (variant == LagrangianVariant::Full) return ebuild::mul(kinetic, s);
    return ebuild::mul(ebuild::add(kinetic, potential_energy_expr(f)), s);
}

ElResidual el_residual(const Trajectory& traj, const LagrangianSpec& spec) {
    if (traj.size() < 3) throw InputError("el_residual: need at least 3 samples");
    const DistTensorField& f = spec.field;
    const std::size_t n = f.n;
    const double dt = traj.step;
    Expr L = lagrangian_jet_expr(f, spec.variant);

    auto jet_point_env = [n](double t, const Vec& x, const Vec& y) {
        EvalPoint env;
        env.set(t_name(0), t);
        for (std::size_t i = 0; i < n; ++i) env.set(x_name(i), x[i]);
        for (std::size_t i = 0; i < n; ++i) env.set(y_name(i), y[i]);
        return env;
    };

    // conjugate momenta at the samples
    std::vector<Vec> P(traj.size(), Vec(n));
    for (std::size_t k = 0; k < traj.size(); ++k) {
        EvalPoint env = jet_point_env(traj.ts[k], traj.xs[k], traj.vs[k]);
        for (std::size_t i = 0; i < n; ++i) P[k][i] = L.d1(y_name(i), env);
    }

    ElResidual out;
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        double tm = 0.5 * (traj.ts[k] + traj.ts[k + 1]);
        Vec xm(n), ym(n);
        for (std::size_t i = 0; i < n; ++i) {
            xm[i] = 0.5 * (traj.xs[k][i] + traj.xs[k + 1][i]);
            ym[i] = 0.5 * (traj.vs[k][i] + traj.vs[k + 1][i]);
        }
        EvalPoint env = jet_point_env(tm, xm, ym);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = (P[k + 1][i] - P[k][i]) / dt - L.d1(x_name(i), env);
            worst = std::max(worst, std::abs(r));
        }
        out.series.push_back(worst);
        out.max_residual = std::max(out.max_residual, worst);
    }
    return out;
}

} // namespace jetflow
