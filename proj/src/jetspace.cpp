#include "jetflow/jetspace.hpp"

#include <cmath>

namespace jetflow {

namespace {

template <class T>
T sqrt_abs_det(const MetricSpec& m, const Env<T>& env) {
    return sqrt(abs(det(metric_at(m, env))));
}

} // namespace

FrameBasis frames_at(const MetricSpec& h, const MetricSpec& g, const JetPoint& jp) {
    const std::size_t p = jp.p(), n = jp.n();
    const std::size_t N = jet_dim(p, n);
    EvalPoint env = base_point(jp.t, jp.x);
    Ten3 H = christoffel_at(h, env);
    Ten3 G = christoffel_at(g, env);

    FrameBasis fb{Mat(N, N, 0.0), Mat(N, N, 0.0)};

    // frame columns
    for (std::size_t a = 0; a < p; ++a) {
        std::size_t col = z_t(a);
        fb.frame(z_t(a), col) = 1.0;
        // delta/delta t^a = d_t^a + H^c_{ab} x^i_c d/dx^i_b
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t b = 0; b < p; ++b) {
                double v = 0.0;
                for (std::size_t c = 0; c < p; ++c) v += H(c, a, b) * jp.v(i, c);
                fb.frame(z_v(p, n, i, b), col) = v;
            }
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t col = z_x(p, i);
        fb.frame(z_x(p, i), col) = 1.0;
        // delta/delta x^i = d_x^i - G^hh_{ik} x^k_a d/dx^hh_a
        for (std::size_t hh = 0; hh < n; ++hh)
            for (std::size_t a = 0; a < p; ++a) {
                double v = 0.0;
                for (std::size_t k = 0; k < n; ++k) v -= G(hh, i, k) * jp.v(k, a);
                fb.frame(z_v(p, n, hh, a), col) = v;
            }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a) {
            std::size_t col = z_v(p, n, i, a);
            fb.frame(col, col) = 1.0;
        }

    // coframe rows
    for (std::size_t b = 0; b < p; ++b) fb.coframe(z_t(b), z_t(b)) = 1.0;
    for (std::size_t j = 0; j < n; ++j) fb.coframe(z_x(p, j), z_x(p, j)) = 1.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < p; ++b) {
            std::size_t row = z_v(p, n, j, b);
            fb.coframe(row, row) = 1.0;
            // dxv^j_b = dx^j_b - H^c_{bl} x^j_c dt^l + G^j_{hk} x^h_b dx^k
            for (std::size_t l = 0; l < p; ++l) {
                double v = 0.0;
                for (std::size_t c = 0; c < p; ++c) v -= H(c, b, l) * jp.v(j, c);
                fb.coframe(row, z_t(l)) = v;
            }
            for (std::size_t k = 0; k < n; ++k) {
                double v = 0.0;
                for (std::size_t hh = 0; hh < n; ++hh) v += G(j, hh, k) * jp.v(hh, b);
                fb.coframe(row, z_x(p, k)) = v;
            }
        }
    return fb;
}

double frame_duality_residual(const FrameBasis& fb) {
    const std::size_t N = fb.frame.rows();
    double worst = 0.0;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) {
            double v = 0.0;
            for (std::size_t k = 0; k < N; ++k) v += fb.coframe(r, k) * fb.frame(k, c);
            worst = std::max(worst, std::abs(v - (r == c ? 1.0 : 0.0)));
        }
    return worst;
}

Mat sasaki_metric_at(const MetricSpec& h, const MetricSpec& g, const JetPoint& jp) {
    const std::size_t p = jp.p(), n = jp.n();
    const std::size_t N = jet_dim(p, n);
    EvalPoint env = base_point(jp.t, jp.x);
    Mat hm = metric_at(h, env);
    Mat hinv = inverse(hm);
    Mat gm = metric_at(g, env);
    // block-diagonal adapted form
    Mat B(N, N, 0.0);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) B(z_t(a), z_t(b)) = hm(a, b);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) B(z_x(p, i), z_x(p, j)) = gm(i, j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t b = 0; b < p; ++b)
                    B(z_v(p, n, i, a), z_v(p, n, j, b)) = hinv(a, b) * gm(i, j);
    // pull through the coframe: S = Theta^T B Theta
    Mat Theta = frames_at(h, g, jp).coframe;
    Mat S(N, N, 0.0);
    for (std::size_t M = 0; M < N; ++M)
        for (std::size_t Q = M; Q < N; ++Q) {
            double v = 0.0;
            for (std::size_t A = 0; A < N; ++A)
                for (std::size_t C = 0; C < N; ++C)
                    v += B(A, C) * Theta(A, M) * Theta(C, Q);
            S(M, Q) = v;
            S(Q, M) = v;
        }
    return S;
}

namespace {

/// theta_alpha coefficients in the coordinate cobasis, generic in the scalar
/// so the exterior derivative can seed any jet coordinate.
template <class T>
std::vector<std::vector<T>> theta_coeffs(const DistTensorField& f, const std::vector<T>& t,
                                         const std::vector<T>& x, const MatT<T>& v,
                                         FormVariant variant) {
    const std::size_t p = f.p, n = f.n;
    const std::size_t N = jet_dim(p, n);
    Env<T> env = base_env(t, x);
    MatT<T> gm = metric_at(*f.g, env);
    T s = sqrt_abs_det(*f.h, env);
    MatT<T> X(n, p);
    if (variant == FormVariant::Shifted) X = field_at(f, env);
    std::vector<std::vector<T>> out(p, std::vector<T>(N, T(0.0)));
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t j = 0; j < n; ++j) {
            T sum = T(0.0);
            for (std::size_t i = 0; i < n; ++i) {
                T w = v(i, a);
                if (variant == FormVariant::Shifted) w = w - X(i, a);
                sum += gm(i, j) * w;
            }
            out[a][z_x(p, j)] = s * sum;
        }
    return out;
}

void add_wedge(Mat& A, std::size_t M, std::size_t N, double c) {
    A(M, N) += c;
    A(N, M) -= c;
}

} // namespace

RelativeForm liouville_theta(const DistTensorField& f, const JetPoint& jp, FormVariant variant) {
    const std::size_t p = f.p;
    MatT<double> v = jp.v;
    auto coeffs = theta_coeffs<double>(f, jp.t, jp.x, v, variant);
    RelativeForm form;
    form.degree = 1;
    form.variant = variant;
    form.one.resize(p);
    for (std::size_t a = 0; a < p; ++a) form.one[a] = std::move(coeffs[a]);
    return form;
}

RelativeForm symplectic_omega(const DistTensorField& f, const JetPoint& jp, FormVariant variant) {
    const std::size_t p = f.p, n = f.n;
    const std::size_t N = jet_dim(p, n);
    EvalPoint env = base_point(jp.t, jp.x);
    Mat gm = metric_at(*f.g, env);
    Ten3 H = christoffel_at(*f.h, env);
    Ten3 G = christoffel_at(*f.g, env);
    double s = std::sqrt(std::abs(det(metric_at(*f.h, env))));

    RelativeForm form;
    form.degree = 2;
    form.variant = variant;
    form.two.assign(p, Mat(N, N, 0.0));

    for (std::size_t a = 0; a < p; ++a) {
        Mat& A = form.two[a];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double gij = gm(i, j);
                if (gij == 0.0) continue;
                // g_ij dx^i ^ [ dx^j_a - H^c_{al} x^j_c dt^l + G^j_{hk} x^h_a dx^k ]
                add_wedge(A, z_x(p, i), z_v(p, n, j, a), s * gij);
                for (std::size_t l = 0; l < p; ++l) {
                    double w = 0.0;
                    for (std::size_t c = 0; c < p; ++c) w += H(c, a, l) * jp.v(j, c);
                    if (w != 0.0) add_wedge(A, z_x(p, i), z_t(l), -s * gij * w);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double w = 0.0;
                    for (std::size_t hh = 0; hh < n; ++hh) w += G(j, hh, k) * jp.v(hh, a);
                    if (w != 0.0) add_wedge(A, z_x(p, i), z_x(p, k), s * gij * w);
                }
            }
        if (variant == FormVariant::Shifted) {
            Ten3 w = omega(f, env);
            Ten3 DX = D_X(f, env);
            // omega_{ij} enters so that Omega(d_i, d_j) = omega_{ij}; this is
            // the reading under which Omega_alpha = -d theta_alpha holds
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (w(i, j, a) != 0.0) add_wedge(A, z_x(p, i), z_x(p, j), s * w(i, j, a));
            for (std::size_t b = 0; b < p; ++b)
                for (std::size_t j = 0; j < n; ++j) {
                    double c = 0.0;
                    for (std::size_t i = 0; i < n; ++i) c += gm(i, j) * DX(i, a, b);
                    if (c != 0.0) add_wedge(A, z_t(b), z_x(p, j), s * c);
                }
        }
    }
    return form;
}

double check_omega_eq_minus_dtheta(const DistTensorField& f, const JetPoint& jp,
                                   FormVariant variant) {
    const std::size_t p = f.p, n = f.n;
    const std::size_t N = jet_dim(p, n);
    RelativeForm om = symplectic_omega(f, jp, variant);

    // d(theta_a)_{MN} = d_M a_N - d_N a_M via dual-number seeding of each
    // jet coordinate in turn
    using D = Dual<double>;
    std::vector<std::vector<Vec>> grad(N); // grad[M][a][N'] = d_M a_{N'}
    for (std::size_t M = 0; M < N; ++M) {
        std::vector<D> t(p), x(n);
        MatT<D> v(n, p);
        for (std::size_t a = 0; a < p; ++a) t[a] = D{jp.t[a], M == z_t(a) ? 1.0 : 0.0};
        for (std::size_t i = 0; i < n; ++i) x[i] = D{jp.x[i], M == z_x(p, i) ? 1.0 : 0.0};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < p; ++a)
                v(i, a) = D{jp.v(i, a), M == z_v(p, n, i, a) ? 1.0 : 0.0};
        auto coeffs = theta_coeffs<D>(f, t, x, v, variant);
        grad[M].assign(p, Vec(N, 0.0));
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t Q = 0; Q < N; ++Q) grad[M][a][Q] = coeffs[a][Q].d;
    }

    double worst = 0.0;
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t M = 0; M < N; ++M)
            for (std::size_t Q = 0; Q < N; ++Q) {
                double dtheta = grad[M][a][Q] - grad[Q][a][M];
                worst = std::max(worst, std::abs(om.two[a](M, Q) + dtheta));
            }
    return worst;
}

HamiltonEval hamilton_system(const DistTensorField& f, const JetPoint& jp, FormVariant variant) {
    const std::size_t p = f.p, n = f.n;
    EvalPoint env = base_point(jp.t, jp.x);
    Mat hinv = inverse_metric_at(*f.h, env);
    Mat gm = metric_at(*f.g, env);
    Mat ginv = inverse(gm);
    Mat X = field_at(f, env);
    Ten3 nab = nabla_X(f, env);
    Ten3 DX = D_X(f, env);

    HamiltonEval out;
    out.u = Mat(p, n, 0.0);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (std::size_t b = 0; b < p; ++b) v += hinv(a, b) * jp.v(i, b);
            out.u(a, i) = v;
        }

    out.du = Vec(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        for (std::size_t hh = 0; hh < n; ++hh)
            for (std::size_t a = 0; a < p; ++a)
                for (std::size_t b = 0; b < p; ++b)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t k = 0; k < n; ++k)
                            v += ginv(hh, i) * hinv(a, b) * gm(j, k) * X(j, b) * nab(hh, k, a);
        if (variant == FormVariant::Shifted) {
            Ten3 w = omega(f, env);
            for (std::size_t hh = 0; hh < n; ++hh)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t a = 0; a < p; ++a)
                        v += 2.0 * ginv(hh, i) * w(j, hh, a) * out.u(a, j);
            for (std::size_t a = 0; a < p; ++a)
                for (std::size_t b = 0; b < p; ++b) v += hinv(a, b) * DX(i, a, b);
        }
        out.du[i] = v;
    }

    out.condition = 0.0;
    for (std::size_t gma = 0; gma < p; ++gma) {
        double cond = 0.0;
        if (variant == FormVariant::Plain) {
            // h^{ab} g_ij (D_gamma X^i_a) X^j_b
            for (std::size_t a = 0; a < p; ++a)
                for (std::size_t b = 0; b < p; ++b)
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j)
                            cond += hinv(a, b) * gm(i, j) * DX(i, a, gma) * X(j, b);
        } else {
            // g_ij (D_gamma X^i_a) (u^{aj} - h^{ab} X^j_b)
            for (std::size_t a = 0; a < p; ++a)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        double slack = out.u(a, j);
                        for (std::size_t b = 0; b < p; ++b) slack -= hinv(a, b) * X(j, b);
                        cond += gm(i, j) * DX(i, a, gma) * slack;
                    }
        }
        out.condition = std::max(out.condition, std::abs(cond));
    }
    return out;
}

SecondOrderSystem hamilton_second_order(const DistTensorField& f, FormVariant variant) {
    if (f.p != 1) throw GeometryError("hamilton_second_order requires p == 1");
    SecondOrderSystem sys;
    sys.p = 1;
    sys.n = f.n;
    sys.tag = variant == FormVariant::Plain ? SystemTag::HamiltonPlain : SystemTag::HamiltonShifted;
    sys.h = f.h;
    sys.g = f.g;
    DistTensorField field = f;
    sys.accel = [field, variant](const JetPoint& jp) {
        const std::size_t n = field.n;
        EvalPoint env = base_point(jp.t, jp.x);
        double h11 = metric_at(*field.h, env)(0, 0);
        HamiltonEval ev = hamilton_system(field, jp, variant);
        Ten3 out(n, 1, 1);
        for (std::size_t i = 0; i < n; ++i) out(i, 0, 0) = h11 * ev.du[i];
        return out;
    };
    return sys;
}

double hamilton_consistency(const Trajectory& traj, const DistTensorField& f,
                            FormVariant variant) {
    if (traj.size() < 3) throw InputError("hamilton_consistency: need at least 3 samples");
    const std::size_t n = f.n;
    const double dt = traj.step;
    // u^{1i} at every sample
    std::vector<Vec> u(traj.size(), Vec(n));
    for (std::size_t k = 0; k < traj.size(); ++k) {
        EvalPoint env = base_point({traj.ts[k]}, traj.xs[k]);
        double hinv = inverse_metric_at(*f.h, env)(0, 0);
        for (std::size_t i = 0; i < n; ++i) u[k][i] = hinv * traj.vs[k][i];
    }
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
        JetPoint jp = traj.jet(k);
        EvalPoint env = base_point(jp.t, jp.x);
        Ten3 H = christoffel_at(*f.h, env);
        Ten3 G = christoffel_at(*f.g, env);
        HamiltonEval ev = hamilton_system(f, jp, variant);
        for (std::size_t i = 0; i < n; ++i) {
            double rate = (u[k + 1][i] - u[k - 1][i]) / (2.0 * dt) + H(0, 0, 0) * u[k][i];
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t m = 0; m < n; ++m) rate += G(i, j, m) * traj.vs[k][j] * u[k][m];
            worst = std::max(worst, std::abs(rate - ev.du[i]));
        }
    }
    return worst;
}

double hamilton_consistency(const Sheet& sheet, const DistTensorField& f, FormVariant variant) {
    const std::size_t p = sheet.p, n = sheet.n;
    for (std::size_t a = 0; a < p; ++a)
        if (sheet.counts[a] < 2) throw InputError("hamilton_consistency: sheet too small");
    // u^{ai} at every node
    std::vector<Mat> u(sheet.node_count());
    std::vector<std::size_t> idx(p, 0);
    for (;;) {
        JetPoint jp = sheet.jet(idx);
        EvalPoint env = base_point(jp.t, jp.x);
        Mat hinv = inverse_metric_at(*f.h, env);
        Mat& un = u[sheet.node_index(idx)];
        un = Mat(p, n, 0.0);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t i = 0; i < n; ++i) {
                double v = 0.0;
                for (std::size_t b = 0; b < p; ++b) v += hinv(a, b) * jp.v(i, b);
                un(a, i) = v;
            }
        std::size_t k = 0;
        while (k < p && ++idx[k] > sheet.counts[k]) idx[k++] = 0;
        if (k == p) break;
    }

    double worst = 0.0;
    idx.assign(p, 1);
    for (;;) {
        JetPoint jp = sheet.jet(idx);
        EvalPoint env = base_point(jp.t, jp.x);
        Ten3 H = christoffel_at(*f.h, env);
        Ten3 G = christoffel_at(*f.g, env);
        HamiltonEval ev = hamilton_system(f, jp, variant);
        const Mat& uc = u[sheet.node_index(idx)];
        for (std::size_t i = 0; i < n; ++i) {
            double rate = 0.0;
            for (std::size_t a = 0; a < p; ++a) {
                auto up = idx, dn = idx;
                ++up[a];
                --dn[a];
                rate += (u[sheet.node_index(up)](a, i) - u[sheet.node_index(dn)](a, i)) /
                        (2.0 * sheet.steps[a]);
                for (std::size_t c = 0; c < p; ++c) rate += H(a, a, c) * uc(c, i);
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t m = 0; m < n; ++m)
                        rate += G(i, j, m) * jp.v(j, a) * uc(a, m);
            }
            worst = std::max(worst, std::abs(rate - ev.du[i]));
        }
        std::size_t k = 0;
        while (k < p && ++idx[k] > sheet.counts[k] - 1) idx[k++] = 1;
        if (k == p) break;
    }
    return worst;
}

} // namespace jetflow
