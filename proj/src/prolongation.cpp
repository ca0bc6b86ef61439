#include "jetflow/prolongation.hpp"

#include <cmath>
#include <sstream>

#include "jetflow/expr_build.hpp"

namespace jetflow {

const char* system_tag_name(SystemTag t) {
    switch (t) {
        case SystemTag::Eq2: return "eq2";
        case SystemTag::Eq3: return "eq3";
        case SystemTag::Eq4: return "eq4";
        case SystemTag::Eq5: return "eq5";
        case SystemTag::Eq9: return "eq9";
        case SystemTag::Eq10: return "eq10";
        case SystemTag::Eq10Prime: return "eq10prime";
        case SystemTag::Geodesic: return "geodesic";
        case SystemTag::OdeChain: return "ode_chain";
        case SystemTag::HamiltonPlain: return "hamilton_plain";
        case SystemTag::HamiltonShifted: return "hamilton_shifted";
    }
    return "?";
}

Vec FirstOrderODESystem::eval_rhs(double t, const Vec& x) const {
    EvalPoint env;
    env.set(t_name(0), t);
    for (std::size_t i = 0; i < x.size(); ++i) env.set(x_name(i), x[i]);
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i].eval(env);
    return out;
}

FirstOrderODESystem kinematic_system(const DistTensorField& f) {
    if (f.p != 1) throw GeometryError("kinematic_system requires p == 1");
    FirstOrderODESystem sys;
    sys.n = f.n;
    sys.tag = SystemTag::Eq2;
    for (std::size_t i = 0; i < f.n; ++i) sys.rhs.push_back(f.X(i, 0));
    return sys;
}

Ten3 geodesic_defect(const MetricSpec& h, const MetricSpec& g, const JetPoint& jp,
                     const Ten3& raw_second) {
    const std::size_t p = jp.p(), n = jp.n();
    EvalPoint env = base_point(jp.t, jp.x);
    Ten3 H = christoffel_at(h, env);
    Ten3 G = christoffel_at(g, env);
    Ten3 out(n, p, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) {
                double v = raw_second(i, a, b);
                for (std::size_t c = 0; c < p; ++c) v -= H(c, a, b) * jp.v(i, c);
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k)
                        v += G(i, j, k) * jp.v(j, a) * jp.v(k, b);
                out(i, a, b) = v;
            }
    return out;
}

SecondOrderSystem make_geodesic(std::shared_ptr<const MetricSpec> h,
                                std::shared_ptr<const MetricSpec> g,
                                std::size_t p, std::size_t n) {
    SecondOrderSystem sys;
    sys.p = p;
    sys.n = n;
    sys.tag = SystemTag::Geodesic;
    sys.h = std::move(h);
    sys.g = std::move(g);
    sys.accel = [p, n](const JetPoint&) { return Ten3(n, p, p, 0.0); };
    return sys;
}

namespace {

// shared scaffolding for the p == 1 prolongations
struct OdeIngredients {
    Mat X, g, ginv;
    Ten3 nab, F, DX;
};

OdeIngredients ode_ingredients(const DistTensorField& f, const JetPoint& jp) {
    EvalPoint env = base_point(jp.t, jp.x);
    OdeIngredients ing;
    ing.X = field_at(f, env);
    ing.g = metric_at(*f.g, env);
    ing.ginv = inverse_metric_at(*f.g, env);
    ing.nab = nabla_X(f, env);
    ing.F = helicity_F(f, env);
    ing.DX = D_X(f, env);
    return ing;
}

// g^{ih} g_{kj} (nabla_h X^k_a) w^j_b  for a chosen contraction vector w
double lowered_nabla_term(const OdeIngredients& ing, std::size_t n, std::size_t i,
                          std::size_t a, const Vec& w) {
    double v = 0.0;
    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                v += ing.ginv(i, h) * ing.g(k, j) * ing.nab(h, k, a) * w[j];
    return v;
}

SecondOrderSystem prolong_ode(const DistTensorField& f, SystemTag tag) {
    if (f.p != 1) throw GeometryError("this prolongation requires p == 1");
    SecondOrderSystem sys;
    sys.p = 1;
    sys.n = f.n;
    sys.tag = tag;
    sys.h = f.h;
    sys.g = f.g;
    DistTensorField field = f;
    sys.accel = [field, tag](const JetPoint& jp) {
        const std::size_t n = field.n;
        OdeIngredients ing = ode_ingredients(field, jp);
        Vec xdot(n), Xcol(n);
        for (std::size_t i = 0; i < n; ++i) {
            xdot[i] = jp.v(i, 0);
            Xcol[i] = ing.X(i, 0);
        }
        Ten3 out(n, 1, 1);
        for (std::size_t i = 0; i < n; ++i) {
            double v = ing.DX(i, 0, 0);
            switch (tag) {
                case SystemTag::Eq3:
                    for (std::size_t j = 0; j < n; ++j) v += ing.nab(j, i, 0) * xdot[j];
                    break;
                case SystemTag::Eq4:
                    v += lowered_nabla_term(ing, n, i, 0, xdot);
                    for (std::size_t j = 0; j < n; ++j) v += ing.F(j, i, 0) * xdot[j];
                    break;
                case SystemTag::Eq5:
                    v += lowered_nabla_term(ing, n, i, 0, Xcol);
                    for (std::size_t j = 0; j < n; ++j) v += ing.F(j, i, 0) * xdot[j];
                    break;
                default:
                    throw GeometryError("prolong_ode: unsupported tag");
            }
            out(i, 0, 0) = v;
        }
        return out;
    };
    return sys;
}

} // namespace

SecondOrderSystem prolong_eq3(const DistTensorField& f) { return prolong_ode(f, SystemTag::Eq3); }
SecondOrderSystem prolong_eq4(const DistTensorField& f) { return prolong_ode(f, SystemTag::Eq4); }
SecondOrderSystem prolong_eq5(const DistTensorField& f) { return prolong_ode(f, SystemTag::Eq5); }

SecondOrderSystem prolong_eq9(const DistTensorField& f) {
    SecondOrderSystem sys;
    sys.p = f.p;
    sys.n = f.n;
    sys.tag = SystemTag::Eq9;
    sys.h = f.h;
    sys.g = f.g;
    DistTensorField field = f;
    sys.accel = [field](const JetPoint& jp) {
        const std::size_t p = field.p, n = field.n;
        EvalPoint env = base_point(jp.t, jp.x);
        Ten3 nab = nabla_X(field, env);
        Ten3 DX = D_X(field, env);
        Ten3 out(n, p, p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < p; ++a)
                for (std::size_t b = 0; b < p; ++b) {
                    double v = DX(i, a, b);
                    for (std::size_t j = 0; j < n; ++j) v += nab(j, i, a) * jp.v(j, b);
                    out(i, a, b) = v;
                }
        return out;
    };
    return sys;
}

namespace {

SecondOrderSystem prolong_trace(const DistTensorField& f, SystemTag tag) {
    SecondOrderSystem sys;
    sys.p = f.p;
    sys.n = f.n;
    sys.tag = tag;
    sys.trace_only = true;
    sys.h = f.h;
    sys.g = f.g;
    DistTensorField field = f;
    sys.trace_accel = [field, tag](const JetPoint& jp) {
        const std::size_t p = field.p, n = field.n;
        EvalPoint env = base_point(jp.t, jp.x);
        Mat X = field_at(field, env);
        Mat g = metric_at(*field.g, env);
        Mat ginv = inverse_metric_at(*field.g, env);
        Mat hinv = inverse_metric_at(*field.h, env);
        Ten3 nab = nabla_X(field, env);
        Ten3 F = helicity_F(field, env);
        Ten3 DX = D_X(field, env);
        Vec out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (std::size_t a = 0; a < p; ++a)
                for (std::size_t b = 0; b < p; ++b) {
                    if (tag == SystemTag::Eq10) {
                        for (std::size_t hh = 0; hh < n; ++hh)
                            for (std::size_t k = 0; k < n; ++k)
                                for (std::size_t j = 0; j < n; ++j)
                                    v += ginv(i, hh) * hinv(a, b) * g(k, j) * nab(hh, k, a) * X(j, b);
                    }
                    for (std::size_t j = 0; j < n; ++j)
                        v += hinv(a, b) * F(j, i, a) * jp.v(j, b);
                    v += hinv(a, b) * DX(i, a, b);
                }
            out[i] = v;
        }
        return out;
    };
    return sys;
}

} // namespace

SecondOrderSystem prolong_eq10(const DistTensorField& f) {
    return prolong_trace(f, SystemTag::Eq10);
}

SecondOrderSystem prolong_eq10prime(const DistTensorField& f,
                                    const std::vector<EvalPoint>& samples) {
    if (samples.empty()) throw GeometryError("prolong_eq10prime requires witness samples");
    constexpr double tol = 1e-6;
    double f0 = 0.0;
    bool first = true;
    for (const auto& s : samples) {
        double v = potential_energy(f, s);
        if (first) { f0 = v; first = false; }
        if (std::abs(v - f0) > tol)
            throw GeometryError("prolong_eq10prime: potential energy is not constant");
    }
    if (std::abs(f0) > tol && std::abs(std::abs(f0) - 1.0) > tol)
        throw GeometryError("prolong_eq10prime: potential energy must be rescaled into {-1,0,1}");
    return prolong_trace(f, SystemTag::Eq10Prime);
}

FirstOrderODESystem reduce_order_ode(const Expr& rhs, std::size_t order) {
    if (order == 0) throw InputError("reduce_order_ode: order must be positive");
    FirstOrderODESystem sys;
    sys.n = order;
    sys.tag = SystemTag::OdeChain;
    for (std::size_t i = 0; i + 1 < order; ++i) sys.rhs.push_back(Expr::var(x_name(i + 1)));
    sys.rhs.push_back(rhs);
    return sys;
}

PdeReduction reduce_order_pde(const Expr& rhs, std::size_t p, std::size_t r) {
    if (r != 2) throw InputError("reduce_order_pde: only r == 2 is supported");
    if (p == 0) throw InputError("reduce_order_pde: p must be positive");
    const std::size_t n_ext = 1 + p;
    PdeReduction red;
    MatT<Expr> comps(n_ext, p);
    // row 0: x_a = u^a  (u^a is state x{1+a})
    for (std::size_t a = 0; a < p; ++a) {
        comps(0, a) = Expr::var(x_name(1 + a));
        red.equations.push_back({0, a, comps(0, a), PdeEquation::Kind::State});
    }
    // rows u^a: derivative slots
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
            PdeEquation eq;
            eq.state = 1 + a;
            eq.dir = b;
            if (a == p - 1 && b == p - 1) {
                eq.rhs = rhs;
                eq.kind = PdeEquation::Kind::Pde;
            } else if (a != b) {
                // symmetry of mixed partials: u^a_b = u^b_a
                eq.rhs = Expr::var(v_name(1 + b, a));
                eq.kind = PdeEquation::Kind::Symmetry;
            } else {
                // not determined by the PDE; kept as its own jet variable
                eq.rhs = Expr::var(v_name(1 + a, b));
                eq.kind = PdeEquation::Kind::Free;
            }
            comps(1 + a, b) = eq.rhs;
            red.equations.push_back(std::move(eq));
        }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a + 1; b < p; ++b)
            red.symmetry_constraints.emplace_back(a, b);

    // identity metrics give the extended grid a DistTensorField home
    auto ident = [](std::size_t d, char which) {
        MatT<Expr> m(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                m(i, j) = Expr::literal(i == j ? 1.0 : 0.0);
        std::vector<std::string> coords;
        for (std::size_t i = 0; i < d; ++i)
            coords.push_back(which == 't' ? t_name(i) : x_name(i));
        return std::make_shared<const MetricSpec>(
            MetricSpec::make(std::move(coords), std::move(m), std::vector<int>(d, 1)));
    };
    red.extended = DistTensorField::make(std::move(comps), ident(p, 't'), ident(n_ext, 'x'));
    return red;
}

} // namespace jetflow
