// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Each criterion pins its tolerance in code; measured values are printed so
// failures are diagnosable from the log alone.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jetflow/export.hpp"
#include "jetflow/integrate.hpp"
#include "jetflow/jetspace.hpp"
#include "jetflow/problem.hpp"
#include "jetflow/variational.hpp"

using namespace jetflow;

namespace {

const std::string kProblems = JETFLOW_PROBLEMS_DIR;
const std::string kCli = JETFLOW_CLI_PATH;

struct Criterion {
    std::string name;
    std::function<bool(std::ostringstream&)> run;
};

Problem load(const std::string& name) { return load_problem(kProblems + "/" + name + ".json"); }

Vec on_shell_v0(const Problem& pr) {
    Mat X = field_at(pr.field, base_point(pr.initial->t0, pr.initial->x0));
    Vec v(pr.n);
    for (std::size_t i = 0; i < pr.n; ++i) v[i] = X(i, 0);
    return v;
}

bool in_ratio_band(double ratio) { return ratio >= 3.0 && ratio <= 5.0; }

// ------------------------------------------------------------------ criteria

bool prolongation_theorem(std::ostringstream& log) {
    auto start = std::chrono::steady_clock::now();
    Problem pr = load("rotation_flat");
    auto eq2 = kinematic_system(pr.field);
    auto sys5 = prolong_eq5(pr.field);
    std::size_t steps = static_cast<std::size_t>(std::lround(2.0 * M_PI / 1e-3));
    auto coarse = integrate_first_order(eq2, 0.0, pr.initial->x0, 1e-3, steps);
    double res = residual_along(coarse, sys5);
    auto fine = integrate_first_order(eq2, 0.0, pr.initial->x0, 5e-4, 2 * steps);
    double res_half = residual_along(fine, sys5);
    double ratio = res / res_half;
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << "residual=" << res << " (<=1e-5), ratio=" << ratio << " (in [3,5]), runtime="
        << seconds << "s (<1s)";
    return res <= 1e-5 && in_ratio_band(ratio) && seconds < 1.0;
}

bool trajectory_coincidence(std::ostringstream& log) {
    bool ok = true;
    for (const char* name : {"rotation_flat", "sphere_geodesic", "timelike_constant",
                             "sphere_rotation"}) {
        Problem pr = load(name);
        double h = 1e-3;
        std::size_t steps = 1000;
        auto a = integrate_first_order(kinematic_system(pr.field), pr.initial->t0[0],
                                       pr.initial->x0, h, steps);
        auto b = integrate_second_order(prolong_eq5(pr.field), pr.initial->t0[0],
                                        pr.initial->x0, on_shell_v0(pr), h, steps);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            for (std::size_t i = 0; i < pr.n; ++i)
                worst = std::max(worst, std::abs(a.xs[k][i] - b.xs[k][i]));
        log << name << "=" << worst << " ";
        ok = ok && worst <= 1e-5;
    }
    log << "(each <=1e-5 over t in [0,1])";
    return ok;
}

bool el_extremality(std::ostringstream& log) {
    Problem pr = load("rotation_flat");
    LagrangianSpec spec{LagrangianVariant::Full, pr.field};
    auto sys = prolong_eq5(pr.field);
    Vec v0 = on_shell_v0(pr);
    v0[0] += 0.4;
    v0[1] += -0.3; // off shell so the Lagrangian is active
    auto coarse = integrate_second_order(sys, 0.0, pr.initial->x0, v0, 2e-3, 500);
    auto fine = integrate_second_order(sys, 0.0, pr.initial->x0, v0, 1e-3, 1000);
    double r1 = el_residual(coarse, spec).max_residual;
    double r2 = el_residual(fine, spec).max_residual;
    double order = std::log2(r1 / r2);

    // negative control: x(t) = (t^3, 0) against the X = 0 problem
    Problem flat = load("sphere_geodesic"); // curved; use a flat zero field instead
    Problem rot = load("rotation_flat");
    MatT<Expr> zero(2, 1);
    zero(0, 0) = Expr::literal(0.0);
    zero(1, 0) = Expr::literal(0.0);
    DistTensorField zfield = DistTensorField::make(std::move(zero), rot.h, rot.g);
    LagrangianSpec zspec{LagrangianVariant::Full, zfield};
    Trajectory cubic;
    cubic.step = 1e-2;
    for (int k = 0; k <= 50; ++k) {
        double t = 0.5 + 1e-2 * k;
        cubic.ts.push_back(t);
        cubic.xs.push_back({t * t * t, 0.0});
        cubic.vs.push_back({3.0 * t * t, 0.0});
    }
    double control = el_residual(cubic, zspec).max_residual;
    log << "order=" << order << " (>=1.8), negative control residual=" << control << " (>=0.05)";
    return order >= 1.8 && control >= 0.05;
}

bool same_hamiltonian(std::ostringstream& log) {
    Problem pr = load("rotation_flat");
    Expr Lf = lagrangian_jet_expr(pr.field, LagrangianVariant::Full);
    Expr Lr = lagrangian_jet_expr(pr.field, LagrangianVariant::Reduced);
    double worst = 0.0;
    for (const auto& jp : sample_jet_points(pr, 1000)) {
        EvalPoint env = jet_env(jp);
        double legf = -Lf.eval(env), legr = -Lr.eval(env);
        for (std::size_t i = 0; i < pr.n; ++i) {
            legf += jp.v(i, 0) * Lf.d1(y_name(i), env);
            legr += jp.v(i, 0) * Lr.d1(y_name(i), env);
        }
        worst = std::max(worst, std::abs(legf - legr));
    }
    auto traj = integrate_first_order(kinematic_system(pr.field), 0.0, pr.initial->x0, 1e-3, 1000);
    double hdrift = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k)
        hdrift = std::max(hdrift, std::abs(hamiltonian(traj.jet(k), pr.field,
                                                       HamiltonianWeight::SqrtH)));
    log << "legendre gap=" << worst << " (<=1e-10 at 1000 jets), |H| along eq2=" << hdrift
        << " (<=1e-8)";
    return worst <= 1e-10 && hdrift <= 1e-8;
}

bool grad_f_identity(std::ostringstream& log) {
    bool ok = true;
    for (const char* name : {"rotation_flat", "timelike_constant", "sheet_integrable"}) {
        Problem pr = load(name);
        double worst = 0.0;
        for (const auto& p : sample_base_points(pr, 100))
            worst = std::max(worst, grad_f_identity_residual(pr.field, p));
        log << name << "=" << worst << " ";
        ok = ok && worst <= 1e-8;
    }
    log << "(each <=1e-8 at 100 random points, constant-g examples)";
    return ok;
}

bool omega_is_minus_dtheta(std::ostringstream& log) {
    bool ok = true;
    // flat examples at 1e-12
    for (const char* name : {"rotation_flat", "timelike_constant", "sheet_integrable"}) {
        Problem pr = load(name);
        double worst = 0.0;
        for (const auto& jp : sample_jet_points(pr, 100)) {
            worst = std::max(worst, check_omega_eq_minus_dtheta(pr.field, jp, FormVariant::Plain));
            worst = std::max(worst,
                             check_omega_eq_minus_dtheta(pr.field, jp, FormVariant::Shifted));
        }
        log << name << "=" << worst << " ";
        ok = ok && worst <= 1e-12;
    }
    // curved-metric examples at 1e-8
    for (const char* name : {"sphere_geodesic", "sphere_rotation"}) {
        Problem pr = load(name);
        double worst = 0.0;
        for (const auto& jp : sample_jet_points(pr, 100)) {
            worst = std::max(worst, check_omega_eq_minus_dtheta(pr.field, jp, FormVariant::Plain));
            worst = std::max(worst,
                             check_omega_eq_minus_dtheta(pr.field, jp, FormVariant::Shifted));
        }
        log << name << "=" << worst << " ";
        ok = ok && worst <= 1e-8;
    }
    log << "(flat <=1e-12, curved <=1e-8, both variants)";
    return ok;
}

bool frame_duality(std::ostringstream& log) {
    bool ok = true;
    for (const char* name : {"rotation_flat", "sphere_geodesic", "timelike_constant",
                             "sphere_rotation", "sheet_integrable"}) {
        Problem pr = load(name);
        double worst = 0.0;
        for (const auto& jp : sample_jet_points(pr, 100))
            worst = std::max(worst, frame_duality_residual(frames_at(*pr.h, *pr.g, jp)));
        log << name << "=" << worst << " ";
        ok = ok && worst <= 1e-12;
    }
    log << "(each <=1e-12 at 100 random jets)";
    return ok;
}

bool hamilton_transfer(std::ostringstream& log) {
    Problem pr = load("rotation_flat");
    bool ok = true;
    for (FormVariant variant : {FormVariant::Plain, FormVariant::Shifted}) {
        auto sys = hamilton_second_order(pr.field, variant);
        auto coarse = integrate_second_order(sys, 0.0, pr.initial->x0, on_shell_v0(pr), 2e-3, 500);
        auto fine = integrate_second_order(sys, 0.0, pr.initial->x0, on_shell_v0(pr), 1e-3, 1000);
        double ratio = hamilton_consistency(coarse, pr.field, variant) /
                       hamilton_consistency(fine, pr.field, variant);
        log << (variant == FormVariant::Plain ? "plain" : "shifted") << " ratio=" << ratio << " ";
        ok = ok && in_ratio_band(ratio);
    }
    // covariant (p = 2) transfer along the integrable sheet
    Problem sh = load("sheet_integrable");
    auto coarse = integrate_sheet(sh.field, {0.0, 0.0}, sh.initial->x0, {0.02, 0.02}, {50, 50});
    auto fine = integrate_sheet(sh.field, {0.0, 0.0}, sh.initial->x0, {0.01, 0.01}, {100, 100});
    double sheet_ratio = hamilton_consistency(coarse, sh.field, FormVariant::Shifted) /
                         hamilton_consistency(fine, sh.field, FormVariant::Shifted);
    log << "sheet ratio=" << sheet_ratio << " ";
    ok = ok && in_ratio_band(sheet_ratio);

    // side conditions on the autonomous examples
    double cond = 0.0;
    for (const char* name : {"rotation_flat", "timelike_constant", "sheet_integrable"}) {
        Problem apr = load(name);
        for (const auto& jp : sample_jet_points(apr, 100)) {
            cond = std::max(cond, hamilton_system(apr.field, jp, FormVariant::Plain).condition);
            cond = std::max(cond, hamilton_system(apr.field, jp, FormVariant::Shifted).condition);
        }
    }
    log << "side conditions=" << cond << " (<=1e-12)";
    return ok && cond <= 1e-12;
}

bool sheets(std::ostringstream& log) {
    Problem pr = load("sheet_integrable");
    auto sheet = integrate_sheet(pr.field, {0.0, 0.0}, pr.initial->x0,
                                 pr.integration.grid_steps, pr.integration.grid_counts);
    double worst = 0.0;
    std::vector<std::size_t> idx(2, 0);
    for (idx[0] = 0; idx[0] <= pr.integration.grid_counts[0]; ++idx[0])
        for (idx[1] = 0; idx[1] <= pr.integration.grid_counts[1]; ++idx[1]) {
            Vec t = sheet.t_at(idx);
            worst = std::max(worst, std::abs(sheet.xs[sheet.node_index(idx)][0] -
                                             std::exp(t[0] + t[1])));
        }
    auto rev = integrate_sheet(pr.field, {0.0, 0.0}, pr.initial->x0,
                               pr.integration.grid_steps, pr.integration.grid_counts, {1, 0});
    double path = 0.0;
    for (std::size_t k = 0; k < sheet.node_count(); ++k)
        path = std::max(path, std::abs(sheet.xs[k][0] - rev.xs[k][0]));

    std::string cmd = kCli + " integrate " + kProblems +
                      "/sheet_nonintegrable.json --system sheet > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    int exit_code = WEXITSTATUS(rc);

    log << "exp error=" << worst << " (<=1e-6), path independence=" << path
        << " (<=1e-7), non-integrable exit=" << exit_code << " (!=0)";
    return worst <= 1e-6 && path <= 1e-7 && exit_code != 0;
}

bool order_reduction(std::ostringstream& log) {
    auto chain = reduce_order_ode(Expr::parse("-x1"), 2);
    auto traj = integrate_first_order(chain, 0.0, {1.0, 0.0}, 1e-3,
                                      static_cast<std::size_t>(std::lround(M_PI / 1e-3)));
    // land exactly on pi by a fractional last step via the closed form
    double at_end = traj.xs.back()[0];
    double expect = std::cos(traj.ts.back());
    double err = std::abs(at_end - expect);
    double err_pi = std::abs(at_end - (-1.0));

    auto red = reduce_order_pde(Expr::parse("-x1"), 2);
    std::size_t count = red.equations.size();
    log << "cos error=" << err << ", |x(end) - cos(pi)|=" << err_pi
        << " (<=1e-6), pde equations=" << count << " (== p(1+p) = 6)";
    return err <= 1e-6 && err_pi <= 1e-6 && count == 6;
}

bool skewness_and_speed(std::ostringstream& log) {
    bool ok = true;
    double worst = 0.0;
    for (const char* name : {"rotation_flat", "sphere_rotation", "sheet_integrable"}) {
        Problem pr = load(name);
        for (const auto& p : sample_base_points(pr, 100)) {
            Ten3 w = omega(pr.field, p);
            for (std::size_t j = 0; j < pr.n; ++j)
                for (std::size_t i = 0; i < pr.n; ++i)
                    for (std::size_t a = 0; a < pr.p; ++a)
                        worst = std::max(worst, std::abs(w(j, i, a) + w(i, j, a)));
        }
    }
    ok = ok && worst <= 1e-13;

    Problem sph = load("sphere_geodesic");
    auto geo = make_geodesic(sph.h, sph.g, 1, sph.n);
    std::size_t steps = static_cast<std::size_t>(std::lround(M_PI / 1e-3));
    auto traj = integrate_second_order(geo, 0.0, sph.initial->x0, {1.0, 0.0}, 1e-3, steps);
    double lo = 1e300, hi = -1e300;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        EvalPoint env = base_point({traj.ts[k]}, traj.xs[k]);
        Mat g = metric_at(*sph.g, env);
        double q = 0.0;
        for (std::size_t i = 0; i < sph.n; ++i)
            for (std::size_t j = 0; j < sph.n; ++j) q += g(i, j) * traj.vs[k][i] * traj.vs[k][j];
        double speed = std::sqrt(q);
        lo = std::min(lo, speed);
        hi = std::max(hi, speed);
    }
    double drift = hi - lo;
    log << "omega skewness=" << worst << " (<=1e-13), sphere speed drift=" << drift
        << " (<=1e-6 over t in [0,pi])";
    return ok && drift <= 1e-6;
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"1 prolongation theorem (eq2 solutions satisfy eq5)", prolongation_theorem},
        {"2 trajectory coincidence (eq2 vs eq5, on-shell data)", trajectory_coincidence},
        {"3 Euler-Lagrange extremality (order >= 1.8, control >= 0.05)", el_extremality},
        {"4 same Hamiltonian from both Lagrangians; H = 0 on shell", same_hamiltonian},
        {"5 grad-f identity on constant-g examples", grad_f_identity},
        {"6 Omega = -d theta (both variants)", omega_is_minus_dtheta},
        {"7 frame duality pairing identity", frame_duality},
        {"8 Hamilton transfer (rate matches du; side conditions)", hamilton_transfer},
        {"9 sheets: exp closed form, path independence, refusal", sheets},
        {"10 order reduction (ODE chain; p(1+p) PDE equations)", order_reduction},
        {"11 omega skew-symmetry; sphere geodesic speed conservation", skewness_and_speed},
    };

    auto start = std::chrono::steady_clock::now();
    int failures = 0;
    for (auto& c : criteria) {
        std::ostringstream log;
        bool pass = false;
        try {
            pass = c.run(log);
        } catch (const std::exception& e) {
            log << "exception: " << e.what();
        }
        std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.name << "  [" << log.str()
                  << "]\n";
        if (!pass) ++failures;
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << " ("
              << criteria.size() - failures << "/" << criteria.size() << ") in " << seconds
              << "s\n";
    return failures == 0 ? 0 : 1;
}
