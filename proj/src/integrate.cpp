#include "jetflow/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace jetflow {

JetPoint Trajectory::jet(std::size_t k) const {
    JetPoint jp;
    jp.t = {ts[k]};
    jp.x = xs[k];
    jp.v = Mat(n(), 1);
    for (std::size_t i = 0; i < n(); ++i) jp.v(i, 0) = vs[k][i];
    return jp;
}

std::size_t Sheet::node_index(const std::vector<std::size_t>& idx) const {
    std::size_t off = 0, stride = 1;
    for (std::size_t a = 0; a < p; ++a) {
        off += idx[a] * stride;
        stride *= counts[a] + 1;
    }
    return off;
}

Vec Sheet::t_at(const std::vector<std::size_t>& idx) const {
    Vec t(p);
    for (std::size_t a = 0; a < p; ++a) t[a] = t0[a] + steps[a] * static_cast<double>(idx[a]);
    return t;
}

JetPoint Sheet::jet(const std::vector<std::size_t>& idx) const {
    JetPoint jp;
    jp.t = t_at(idx);
    std::size_t node = node_index(idx);
    jp.x = xs[node];
    jp.v = vs[node];
    return jp;
}

namespace {

bool finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

template <class Deriv>
Vec rk4_step(const Deriv& deriv, double t, const Vec& y, double h) {
    const std::size_t m = y.size();
    Vec k1 = deriv(t, y);
    Vec y2(m), y3(m), y4(m);
    for (std::size_t i = 0; i < m; ++i) y2[i] = y[i] + 0.5 * h * k1[i];
    Vec k2 = deriv(t + 0.5 * h, y2);
    for (std::size_t i = 0; i < m; ++i) y3[i] = y[i] + 0.5 * h * k2[i];
    Vec k3 = deriv(t + 0.5 * h, y3);
    for (std::size_t i = 0; i < m; ++i) y4[i] = y[i] + h * k3[i];
    Vec k4 = deriv(t + h, y4);
    Vec out(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

} // namespace

Trajectory integrate_first_order(const FirstOrderODESystem& sys, double t0, const Vec& x0,
                                 double step, std::size_t n_steps) {
    if (step <= 0.0) throw InputError("integrate_first_order: step must be positive");
    if (x0.size() != sys.n) throw InputError("integrate_first_order: x0 dimension mismatch");
    auto deriv = [&sys](double t, const Vec& x) { return sys.eval_rhs(t, x); };
    Trajectory traj;
    traj.step = step;
    traj.provenance = sys.tag;
    Vec x = x0;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        double t = t0 + step * static_cast<double>(k);
        Vec v = sys.eval_rhs(t, x);
        if (!finite(x) || !finite(v)) { traj.aborted = true; break; }
        traj.ts.push_back(t);
        traj.xs.push_back(x);
        traj.vs.push_back(v);
        if (k < n_steps) x = rk4_step(deriv, t, x, step);
    }
    return traj;
}

namespace {

// raw d2x/dt2 from the prescribed covariant acceleration (p == 1)
Vec raw_accel(const SecondOrderSystem& sys, double t, const Vec& x, const Vec& v) {
    const std::size_t n = sys.n;
    JetPoint jp;
    jp.t = {t};
    jp.x = x;
    jp.v = Mat(n, 1);
    for (std::size_t i = 0; i < n; ++i) jp.v(i, 0) = v[i];
    Ten3 a = sys.accel(jp);
    EvalPoint env = base_point(jp.t, jp.x);
    Ten3 H = christoffel_at(*sys.h, env);
    Ten3 G = christoffel_at(*sys.g, env);
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = a(i, 0, 0) + H(0, 0, 0) * v[i];
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) r -= G(i, j, k) * v[j] * v[k];
        out[i] = r;
    }
    return out;
}

} // namespace

Trajectory integrate_second_order(const SecondOrderSystem& sys, double t0, const Vec& x0,
                                  const Vec& v0, double step, std::size_t n_steps) {
    if (step <= 0.0) throw InputError("integrate_second_order: step must be positive");
    if (sys.p != 1) throw InputError("integrate_second_order: only p == 1 systems are integrable");
    if (sys.trace_only)
        throw InputError("integrate_second_order: trace-only systems support residual "
                         "evaluation, not integration");
    const std::size_t n = sys.n;
    if (x0.size() != n || v0.size() != n)
        throw InputError("integrate_second_order: initial data dimension mismatch");
    auto deriv = [&sys, n](double t, const Vec& y) {
        Vec x(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
        Vec v(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
        Vec a = raw_accel(sys, t, x, v);
        Vec out(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = v[i];
            out[n + i] = a[i];
        }
        return out;
    };
    Trajectory traj;
    traj.step = step;
    traj.provenance = sys.tag;
    Vec y(2 * n);
    std::copy(x0.begin(), x0.end(), y.begin());
    std::copy(v0.begin(), v0.end(), y.begin() + static_cast<std::ptrdiff_t>(n));
    for (std::size_t k = 0; k <= n_steps; ++k) {
        double t = t0 + step * static_cast<double>(k);
        if (!finite(y)) { traj.aborted = true; break; }
        traj.ts.push_back(t);
        traj.xs.push_back(Vec(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)));
        traj.vs.push_back(Vec(y.begin() + static_cast<std::ptrdiff_t>(n), y.end()));
        if (k < n_steps) y = rk4_step(deriv, t, y, step);
    }
    return traj;
}

double integrability_residual(const DistTensorField& f, const EvalPoint& p) {
    Mat X = field_at(f, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t a = 0; a < f.p; ++a)
            for (std::size_t b = a + 1; b < f.p; ++b) {
                double lhs = f.X(i, a).d1(t_name(b), p);
                double rhs = f.X(i, b).d1(t_name(a), p);
                for (std::size_t j = 0; j < f.n; ++j) {
                    lhs += f.X(i, a).d1(x_name(j), p) * X(j, b);
                    rhs += f.X(i, b).d1(x_name(j), p) * X(j, a);
                }
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    return worst;
}

Sheet integrate_sheet(const DistTensorField& f, const Vec& t0, const Vec& x0,
                      const std::vector<double>& steps, const std::vector<std::size_t>& counts,
                      const std::vector<std::size_t>& axis_order) {
    const std::size_t p = f.p, n = f.n;
    if (t0.size() != p || steps.size() != p || counts.size() != p)
        throw InputError("integrate_sheet: grid spec shape mismatch");
    if (x0.size() != n) throw InputError("integrate_sheet: x0 dimension mismatch");
    std::vector<std::size_t> order = axis_order;
    if (order.empty()) {
        order.resize(p);
        for (std::size_t a = 0; a < p; ++a) order[a] = a;
    }
    if (order.size() != p) throw InputError("integrate_sheet: axis order must list every axis");
    {
        std::vector<bool> seen(p, false);
        for (std::size_t a : order) {
            if (a >= p || seen[a])
                throw InputError("integrate_sheet: axis order must be a permutation");
            seen[a] = true;
        }
    }

    Sheet sheet;
    sheet.p = p;
    sheet.n = n;
    sheet.t0 = t0;
    sheet.steps = steps;
    sheet.counts = counts;
    std::size_t total = 1;
    for (std::size_t a = 0; a < p; ++a) total *= counts[a] + 1;
    sheet.xs.assign(total, Vec());
    sheet.vs.assign(total, Mat());

    constexpr double tol = 1e-8;
    double max_violation = 0.0;

    auto record = [&](const std::vector<std::size_t>& idx, const Vec& x) {
        Vec t = sheet.t_at(idx);
        EvalPoint env = base_point(t, x);
        max_violation = std::max(max_violation, integrability_residual(f, env));
        std::size_t node = sheet.node_index(idx);
        sheet.xs[node] = x;
        sheet.vs[node] = field_at(f, env);
    };

    record(std::vector<std::size_t>(p, 0), x0);

    // march along axis `ax` from a recorded node
    auto march = [&](std::vector<std::size_t> idx, std::size_t ax) {
        Vec x = sheet.xs[sheet.node_index(idx)];
        auto deriv = [&](double s, const Vec& xx) {
            Vec t = sheet.t_at(idx);
            t[ax] = s;
            EvalPoint env = base_point(t, xx);
            Mat X = field_at(f, env);
            Vec out(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = X(i, ax);
            return out;
        };
        for (std::size_t k = 0; k < counts[ax]; ++k) {
            double s = t0[ax] + steps[ax] * static_cast<double>(idx[ax]);
            x = rk4_step(deriv, s, x, steps[ax]);
            if (!finite(x))
                throw IntegrabilityError("integrate_sheet: non-finite state during sweep",
                                         max_violation);
            ++idx[ax];
            record(idx, x);
        }
    };

    // stage s sweeps axis order[s] out of every node filled by earlier stages
    std::vector<std::vector<std::size_t>> frontier = {std::vector<std::size_t>(p, 0)};
    for (std::size_t s = 0; s < p; ++s) {
        std::size_t ax = order[s];
        std::vector<std::vector<std::size_t>> next = frontier;
        for (const auto& idx : frontier) {
            march(idx, ax);
            for (std::size_t k = 1; k <= counts[ax]; ++k) {
                auto grown = idx;
                grown[ax] = k;
                next.push_back(grown);
            }
        }
        frontier = std::move(next);
    }

    sheet.max_integrability_violation = max_violation;
    if (max_violation > tol)
        throw IntegrabilityError("integrate_sheet: complete integrability conditions violated",
                                 max_violation);
    return sheet;
}

double residual_along(const Trajectory& traj, const SecondOrderSystem& sys) {
    if (traj.size() < 3) throw InputError("residual_along: need at least 3 samples");
    const std::size_t n = traj.n();
    const double h = traj.step;
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
        Vec vbar(n), raw(n);
        for (std::size_t i = 0; i < n; ++i) {
            vbar[i] = (traj.xs[k + 1][i] - traj.xs[k - 1][i]) / (2.0 * h);
            raw[i] = (traj.xs[k + 1][i] - 2.0 * traj.xs[k][i] + traj.xs[k - 1][i]) / (h * h);
        }
        JetPoint jp;
        jp.t = {traj.ts[k]};
        jp.x = traj.xs[k];
        jp.v = Mat(n, 1);
        for (std::size_t i = 0; i < n; ++i) jp.v(i, 0) = vbar[i];
        Ten3 raw3(n, 1, 1);
        for (std::size_t i = 0; i < n; ++i) raw3(i, 0, 0) = raw[i];
        Ten3 defect = geodesic_defect(*sys.h, *sys.g, jp, raw3);
        if (sys.trace_only) {
            EvalPoint env = base_point(jp.t, jp.x);
            Mat hinv = inverse_metric_at(*sys.h, env);
            Vec trace = sys.trace_accel(jp);
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(hinv(0, 0) * defect(i, 0, 0) - trace[i]));
        } else {
            Ten3 acc = sys.accel(jp);
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(defect(i, 0, 0) - acc(i, 0, 0)));
        }
    }
    return worst;
}

double residual_along(const Sheet& sheet, const SecondOrderSystem& sys) {
    const std::size_t p = sheet.p, n = sheet.n;
    for (std::size_t a = 0; a < p; ++a)
        if (sheet.counts[a] < 2) throw InputError("residual_along: sheet too small");
    double worst = 0.0;
    std::vector<std::size_t> idx(p, 1);
    for (;;) {
        // central differences at an interior node
        Mat vbar(n, p);
        Ten3 raw(n, p, p);
        std::size_t center = sheet.node_index(idx);
        for (std::size_t a = 0; a < p; ++a) {
            auto up = idx, dn = idx;
            ++up[a];
            --dn[a];
            std::size_t iu = sheet.node_index(up), id = sheet.node_index(dn);
            for (std::size_t i = 0; i < n; ++i) {
                vbar(i, a) = (sheet.xs[iu][i] - sheet.xs[id][i]) / (2.0 * sheet.steps[a]);
                raw(i, a, a) = (sheet.xs[iu][i] - 2.0 * sheet.xs[center][i] + sheet.xs[id][i]) /
                               (sheet.steps[a] * sheet.steps[a]);
            }
        }
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a + 1; b < p; ++b) {
                auto pp_ = idx, pm = idx, mp = idx, mm = idx;
                ++pp_[a]; ++pp_[b];
                ++pm[a]; --pm[b];
                --mp[a]; ++mp[b];
                --mm[a]; --mm[b];
                double denom = 4.0 * sheet.steps[a] * sheet.steps[b];
                for (std::size_t i = 0; i < n; ++i) {
                    double cross = (sheet.xs[sheet.node_index(pp_)][i] -
                                    sheet.xs[sheet.node_index(pm)][i] -
                                    sheet.xs[sheet.node_index(mp)][i] +
                                    sheet.xs[sheet.node_index(mm)][i]) / denom;
                    raw(i, a, b) = cross;
                    raw(i, b, a) = cross;
                }
            }
        JetPoint jp;
        jp.t = sheet.t_at(idx);
        jp.x = sheet.xs[center];
        jp.v = vbar;
        Ten3 defect = geodesic_defect(*sys.h, *sys.g, jp, raw);
        if (sys.trace_only) {
            EvalPoint env = base_point(jp.t, jp.x);
            Mat hinv = inverse_metric_at(*sys.h, env);
            Vec trace = sys.trace_accel(jp);
            for (std::size_t i = 0; i < n; ++i) {
                double tr = 0.0;
                for (std::size_t a = 0; a < p; ++a)
                    for (std::size_t b = 0; b < p; ++b) tr += hinv(a, b) * defect(i, a, b);
                worst = std::max(worst, std::abs(tr - trace[i]));
            }
        } else {
            Ten3 acc = sys.accel(jp);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t a = 0; a < p; ++a)
                    for (std::size_t b = 0; b < p; ++b)
                        worst = std::max(worst, std::abs(defect(i, a, b) - acc(i, a, b)));
        }
        // advance over interior nodes
        std::size_t k = 0;
        while (k < p && ++idx[k] > sheet.counts[k] - 1) idx[k++] = 1;
        if (k == p) break;
    }
    return worst;
}

} // namespace jetflow
