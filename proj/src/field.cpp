#include "jetflow/field.hpp"

#include <cmath>
#include <sstream>

#include "jetflow/expr_build.hpp"

namespace jetflow {

DistTensorField DistTensorField::make(MatT<Expr> components,
                                      std::shared_ptr<const MetricSpec> h,
                                      std::shared_ptr<const MetricSpec> g) {
    DistTensorField f;
    f.n = components.rows();
    f.p = components.cols();
    if (f.n == 0 || f.p == 0) throw GeometryError("field component grid is empty");
    if (!h || !g) throw GeometryError("field requires both metrics");
    if (h->dim != f.p) throw GeometryError("metric h dimension does not match field parameter count");
    if (g->dim != f.n) throw GeometryError("metric g dimension does not match field state count");
    for (const auto& e : components.data())
        if (!e.valid()) throw GeometryError("field component expression missing");
    f.X = std::move(components);
    f.h = std::move(h);
    f.g = std::move(g);
    return f;
}

Ten3 nabla_X(const DistTensorField& f, const EvalPoint& p) {
    Mat X = field_at(f, p);
    Ten3 G = christoffel_at(*f.g, p);
    Ten3 out(f.n, f.n, f.p);
    for (std::size_t j = 0; j < f.n; ++j)
        for (std::size_t i = 0; i < f.n; ++i)
            for (std::size_t a = 0; a < f.p; ++a) {
                double v = f.X(i, a).d1(x_name(j), p);
                for (std::size_t k = 0; k < f.n; ++k) v += G(i, j, k) * X(k, a);
                out(j, i, a) = v;
            }
    return out;
}

Ten3 D_X(const DistTensorField& f, const EvalPoint& p) {
    Mat X = field_at(f, p);
    Ten3 H = christoffel_at(*f.h, p);
    Ten3 out(f.n, f.p, f.p);
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t a = 0; a < f.p; ++a)
            for (std::size_t b = 0; b < f.p; ++b) {
                double v = f.X(i, a).d1(t_name(b), p);
                for (std::size_t c = 0; c < f.p; ++c) v -= H(c, a, b) * X(i, c);
                out(i, a, b) = v;
            }
    return out;
}

Ten3 helicity_F(const DistTensorField& f, const EvalPoint& p) {
    Ten3 nab = nabla_X(f, p);
    Mat g = metric_at(*f.g, p);
    Mat ginv = inverse_metric_at(*f.g, p);
    Ten3 out(f.n, f.n, f.p);
    for (std::size_t j = 0; j < f.n; ++j)
        for (std::size_t i = 0; i < f.n; ++i)
            for (std::size_t a = 0; a < f.p; ++a) {
                double v = nab(j, i, a);
                for (std::size_t h = 0; h < f.n; ++h)
                    for (std::size_t k = 0; k < f.n; ++k)
                        v -= ginv(i, h) * g(k, j) * nab(h, k, a);
                out(j, i, a) = v;
            }
    return out;
}

Ten3 omega(const DistTensorField& f, const EvalPoint& p) {
    Ten3 F = helicity_F(f, p);
    Mat g = metric_at(*f.g, p);
    Ten3 out(f.n, f.n, f.p);
    for (std::size_t j = 0; j < f.n; ++j)
        for (std::size_t i = 0; i < f.n; ++i)
            for (std::size_t a = 0; a < f.p; ++a) {
                double v = 0.0;
                for (std::size_t h = 0; h < f.n; ++h) v += g(h, i) * F(j, h, a);
                out(j, i, a) = v;
            }
    return out;
}

const char* causal_kind_name(CausalKind k) {
    switch (k) {
        case CausalKind::Timelike: return "timelike";
        case CausalKind::Causal: return "causal";
        case CausalKind::Lightlike: return "lightlike";
        case CausalKind::Spacelike: return "spacelike";
        case CausalKind::Indefinite: return "indefinite";
    }
    return "?";
}

CausalClass classify(const DistTensorField& f, const std::vector<EvalPoint>& samples) {
    if (samples.empty()) throw GeometryError("classify requires at least one sample point");
    constexpr double zero_tol = 1e-12;
    bool any_neg = false, any_zero = false, any_pos = false;
    double fmin = 0.0, fmax = 0.0;
    bool first = true;
    for (const auto& p : samples) {
        double v = potential_energy(f, p);
        if (first) { fmin = fmax = v; first = false; }
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
        if (std::abs(v) <= zero_tol) any_zero = true;
        else if (v < 0.0) any_neg = true;
        else any_pos = true;
    }
    CausalKind kind;
    if (any_pos && (any_neg || any_zero)) kind = CausalKind::Indefinite;
    else if (any_pos) kind = CausalKind::Spacelike;
    else if (any_neg && any_zero) kind = CausalKind::Causal;
    else if (any_neg) kind = CausalKind::Timelike;
    else kind = CausalKind::Lightlike;
    return {kind, fmin, fmax};
}

/// Symbolic inverse of a metric expression grid via adjugate / determinant
/// (Laplace expansion; the grids here are tiny).
static Expr det_expr(const MatT<Expr>& m) {
    const std::size_t d = m.rows();
    if (d == 1) return m(0, 0);
    Expr sum = ebuild::zero();
    for (std::size_t j = 0; j < d; ++j) {
        MatT<Expr> minor(d - 1, d - 1);
        for (std::size_t r = 1; r < d; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < d; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        Expr term = ebuild::mul(m(0, j), det_expr(minor));
        sum = (j % 2 == 0) ? ebuild::add(sum, term) : ebuild::sub(sum, term);
    }
    return sum;
}

Expr potential_energy_expr(const DistTensorField& f) {
    // h^{ab} as adjugate over determinant
    const std::size_t p = f.p, n = f.n;
    Expr deth = det_expr(f.h->comps);
    MatT<Expr> hinv(p, p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
            if (p == 1) {
                hinv(0, 0) = ebuild::div(ebuild::one(), deth);
                break;
            }
            MatT<Expr> minor(p - 1, p - 1);
            std::size_t rr = 0;
            for (std::size_t r = 0; r < p; ++r) {
                if (r == b) continue;
                std::size_t cc = 0;
                for (std::size_t c = 0; c < p; ++c) {
                    if (c == a) continue;
                    minor(rr, cc++) = f.h->comps(r, c);
                }
                ++rr;
            }
            Expr cof = det_expr(minor);
            if ((a + b) % 2 == 1) cof = ebuild::sub(ebuild::zero(), cof);
            hinv(a, b) = ebuild::div(cof, deth);
        }
    Expr sum = ebuild::zero();
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    Expr term = ebuild::mul(hinv(a, b),
                                ebuild::mul(f.g->comps(i, j),
                                ebuild::mul(f.X(i, a), f.X(j, b))));
                    sum = ebuild::add(sum, term);
                }
    return ebuild::mul(Expr::literal(0.5), sum);
}

DistTensorField rescale_to_unit(const DistTensorField& f, const std::vector<EvalPoint>& samples) {
    if (samples.empty()) throw GeometryError("rescale_to_unit requires sample points");
    constexpr double zero_tol = 1e-12;
    constexpr double critical_tol = 1e-10;
    int sign = 0;
    for (const auto& p : samples) {
        Mat X = field_at(f, p);
        double maxX = 0.0;
        for (double v : X.data()) maxX = std::max(maxX, std::abs(v));
        if (maxX <= critical_tol)
            throw GeometryError("rescale_to_unit: sample lies in the critical set");
        double v = potential_energy(f, p);
        if (std::abs(v) <= zero_tol)
            throw GeometryError("rescale_to_unit: potential energy vanishes at a sample "
                                "(cannot rescale a null field)");
        int s = v > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (sign != s)
            throw GeometryError("rescale_to_unit: potential energy changes sign across samples");
    }
    Expr scale = ebuild::sqrt(ebuild::abs(potential_energy_expr(f)));
    MatT<Expr> comps(f.n, f.p);
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t a = 0; a < f.p; ++a) comps(i, a) = ebuild::div(f.X(i, a), scale);
    DistTensorField out = DistTensorField::make(std::move(comps), f.h, f.g);
    for (const auto& p : samples) {
        double v = potential_energy(out, p);
        if (std::abs(std::abs(v) - 1.0) > 1e-8) {
            std::ostringstream os;
            os << "rescale_to_unit: rescaled energy " << v << " is not within 1e-8 of unit";
            throw GeometryError(os.str());
        }
    }
    return out;
}

std::vector<Vec> critical_set_scan(const DistTensorField& f,
                                   const Vec& x_min, const Vec& x_max,
                                   const std::vector<std::size_t>& counts,
                                   const std::vector<Vec>& t_samples) {
    if (x_min.size() != f.n || x_max.size() != f.n || counts.size() != f.n)
        throw GeometryError("critical_set_scan: grid spec shape mismatch");
    if (t_samples.empty()) throw GeometryError("critical_set_scan: no t samples");
    constexpr double tol = 1e-10;
    std::vector<Vec> found;
    std::vector<std::size_t> idx(f.n, 0);
    for (;;) {
        Vec x(f.n);
        for (std::size_t i = 0; i < f.n; ++i) {
            x[i] = counts[i] <= 1 ? x_min[i]
                                  : x_min[i] + (x_max[i] - x_min[i]) *
                                        static_cast<double>(idx[i]) / static_cast<double>(counts[i] - 1);
        }
        double maxX = 0.0;
        for (const auto& t : t_samples) {
            EvalPoint p = base_point(t, x);
            Mat X = field_at(f, p);
            for (double v : X.data()) maxX = std::max(maxX, std::abs(v));
            if (maxX > tol) break;
        }
        if (maxX <= tol) found.push_back(x);
        // advance the multi-index
        std::size_t k = 0;
        while (k < f.n && ++idx[k] >= counts[k]) idx[k++] = 0;
        if (k == f.n) break;
    }
    return found;
}

Vec world_force_rhs(const WorldForceSpec& wf, const MetricSpec& h, const MetricSpec& g,
                    const JetPoint& jp) {
    const std::size_t p = jp.p(), n = jp.n();
    EvalPoint env = base_point(jp.t, jp.x);
    Mat hinv = inverse_metric_at(h, env);
    Mat ginv = inverse_metric_at(g, env);
    Vec rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < n; ++j) v += ginv(i, j) * wf.c.d1(x_name(j), env);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) {
                for (std::size_t j = 0; j < n; ++j)
                    v += hinv(a, b) * wf.F(j, i, a).eval(env) * jp.v(j, b);
                v += hinv(a, b) * wf.U(i, a, b).eval(env);
            }
        rhs[i] = v;
    }
    return rhs;
}

double grad_f_identity_residual(const DistTensorField& f, const EvalPoint& p) {
    const std::size_t n = f.n, pp = f.p;
    Mat X = field_at(f, p);
    Mat g = metric_at(*f.g, p);
    Mat ginv = inverse_metric_at(*f.g, p);
    Mat hinv = inverse_metric_at(*f.h, p);
    Ten3 nab = nabla_X(f, p);
    // exact gradient of the potential energy
    Vec df(n);
    for (std::size_t i = 0; i < n; ++i)
        df[i] = potential_energy<Dual<double>>(f, lift_env(p, x_name(i))).d;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t hh = 0; hh < n; ++hh) {
            rhs += ginv(i, hh) * df[hh];
            for (std::size_t a = 0; a < pp; ++a)
                for (std::size_t b = 0; b < pp; ++b)
                    for (std::size_t k = 0; k < n; ++k)
                        for (std::size_t j = 0; j < n; ++j)
                            lhs += ginv(i, hh) * hinv(a, b) * g(k, j) * nab(hh, k, a) * X(j, b);
        }
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace jetflow
