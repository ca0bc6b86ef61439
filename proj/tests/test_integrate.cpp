#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jetflow/integrate.hpp"
#include "support.hpp"

using namespace jetflow;
using namespace testsupport;

TEST_CASE("RK4 integrates xdot = x to e and shows fourth-order error decay") {
    FirstOrderODESystem sys;
    sys.n = 1;
    sys.rhs = {Expr::parse("x1")};

    auto traj = integrate_first_order(sys, 0.0, {1.0}, 1e-3, 1000);
    REQUIRE(traj.size() == 1001);
    CHECK(std::abs(traj.xs.back()[0] - std::exp(1.0)) < 1e-6);
    CHECK(traj.ts.back() == doctest::Approx(1.0));

    double err_h = std::abs(integrate_first_order(sys, 0.0, {1.0}, 0.1, 10).xs.back()[0] -
                            std::exp(1.0));
    double err_h2 = std::abs(integrate_first_order(sys, 0.0, {1.0}, 0.05, 20).xs.back()[0] -
                             std::exp(1.0));
    double ratio = err_h / err_h2;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("constant rhs stays put; rotation closes its orbit") {
    FirstOrderODESystem still;
    still.n = 2;
    still.rhs = {Expr::parse("0"), Expr::parse("0")};
    auto traj = integrate_first_order(still, 0.0, {0.3, -0.7}, 0.01, 100);
    for (const auto& x : traj.xs) {
        CHECK(x[0] == 0.3);
        CHECK(x[1] == -0.7);
    }

    auto rot = rotation_field();
    auto eq2 = kinematic_system(rot);
    std::size_t steps = static_cast<std::size_t>(std::lround(2.0 * M_PI / 1e-3));
    auto orbit = integrate_first_order(eq2, 0.0, {1.0, 0.0}, 1e-3, steps);
    double endt = orbit.ts.back();
    // integrate the leftover arc analytically: compare against the exact circle
    CHECK(std::abs(orbit.xs.back()[0] - std::cos(endt)) < 1e-6);
    CHECK(std::abs(orbit.xs.back()[1] - std::sin(endt)) < 1e-6);
}

TEST_CASE("non-finite states abort with the good prefix") {
    FirstOrderODESystem blow;
    blow.n = 1;
    blow.rhs = {Expr::parse("x1^2")}; // finite-time blow-up from x(0)=1 at t=1
    auto traj = integrate_first_order(blow, 0.0, {1.0}, 0.01, 200);
    CHECK(traj.aborted);
    CHECK(traj.size() >= 2);
    CHECK(traj.size() < 201);
    for (const auto& x : traj.xs) CHECK(std::isfinite(x[0]));
}

TEST_CASE("second-order integration") {
    // flat geodesic: straight line
    auto geo = make_geodesic(h_unit(), g_flat2(), 1, 2);
    auto line = integrate_second_order(geo, 0.0, {0.0, 0.0}, {1.0, 1.0}, 0.01, 100);
    CHECK(std::abs(line.xs.back()[0] - 1.0) <= 1e-10);
    CHECK(std::abs(line.xs.back()[1] - 1.0) <= 1e-10);

    // prolongation: eq5 with on-shell start reproduces the eq2 flow
    auto rot = rotation_field();
    auto eq2 = integrate_first_order(kinematic_system(rot), 0.0, {1.0, 0.0}, 1e-3, 1000);
    auto eq5 = integrate_second_order(prolong_eq5(rot), 0.0, {1.0, 0.0}, {0.0, 1.0}, 1e-3, 1000);
    for (std::size_t k = 0; k < eq2.size(); ++k)
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(std::abs(eq2.xs[k][i] - eq5.xs[k][i]) < 1e-5);

    // sphere geodesic from the equator pointing north: great circle with
    // constant speed
    auto sphere_geo = make_geodesic(h_unit(), g_sphere(), 1, 2);
    std::size_t steps = static_cast<std::size_t>(std::lround(M_PI / 1e-3));
    auto great = integrate_second_order(sphere_geo, 0.0, {M_PI / 2, 0.0}, {1.0, 0.0}, 1e-3, steps);
    CHECK(!great.aborted);
    double lo = 1e300, hi = -1e300;
    for (std::size_t k = 0; k < great.size(); ++k) {
        EvalPoint env = base_point({great.ts[k]}, great.xs[k]);
        Mat g = metric_at(*sphere_geo.g, env);
        double q = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) q += g(i, j) * great.vs[k][i] * great.vs[k][j];
        double speed = std::sqrt(q);
        lo = std::min(lo, speed);
        hi = std::max(hi, speed);
    }
    CHECK(hi - lo <= 1e-6);

    // trace-only systems cannot be integrated
    auto trace = prolong_eq10(rot);
    CHECK_THROWS_AS(integrate_second_order(trace, 0.0, {1.0, 0.0}, {0.0, 1.0}, 0.01, 10),
                    InputError);
}

TEST_CASE("integrability residual") {
    auto constants = make_field({{"2", "-1"}}, h_flat2(), g_unit1());
    CHECK(integrability_residual(constants, at({{"t1", 0.3}, {"t2", 0.6}, {"x1", 1.0}})) == 0.0);

    auto exp_sheet = make_field({{"x1", "x1"}}, h_flat2(), g_unit1());
    CHECK(integrability_residual(exp_sheet, at({{"t1", 0.1}, {"t2", 0.2}, {"x1", 1.7}})) <= 1e-14);

    // X^1_1 = x, X^1_2 = t1: residual |t1 - 1|
    auto bad = make_field({{"x1", "t1"}}, h_flat2(), g_unit1());
    CHECK(integrability_residual(bad, at({{"t1", 0.0}, {"t2", 0.0}, {"x1", 1.0}})) ==
          doctest::Approx(1.0));
    CHECK(integrability_residual(bad, at({{"t1", 3.0}, {"t2", 0.0}, {"x1", 1.0}})) ==
          doctest::Approx(2.0));
    CHECK(integrability_residual(bad, at({{"t1", 1.0}, {"t2", 0.5}, {"x1", 2.0}})) <= 1e-14);
}

TEST_CASE("sheet integration") {
    // constants: exact affine sheet
    auto constants = make_field({{"2", "-1"}}, h_flat2(), g_unit1());
    auto flat_sheet = integrate_sheet(constants, {0.0, 0.0}, {0.5}, {0.1, 0.1}, {10, 10});
    std::vector<std::size_t> idx = {7, 4};
    Vec t = flat_sheet.t_at(idx);
    double expected = 0.5 + 2.0 * t[0] - 1.0 * t[1];
    CHECK(std::abs(flat_sheet.xs[flat_sheet.node_index(idx)][0] - expected) <= 1e-10);

    // X^1_1 = X^1_2 = x: sheet x = exp(t1 + t2)
    auto exp_sheet_field = make_field({{"x1", "x1"}}, h_flat2(), g_unit1());
    auto sheet = integrate_sheet(exp_sheet_field, {0.0, 0.0}, {1.0}, {0.01, 0.01}, {100, 100});
    double worst = 0.0;
    std::vector<std::size_t> node = {0, 0};
    for (node[0] = 0; node[0] <= 100; ++node[0])
        for (node[1] = 0; node[1] <= 100; ++node[1]) {
            Vec tt = sheet.t_at(node);
            worst = std::max(worst, std::abs(sheet.xs[sheet.node_index(node)][0] -
                                             std::exp(tt[0] + tt[1])));
        }
    CHECK(worst <= 1e-6);

    // path independence between axis orders
    auto rev = integrate_sheet(exp_sheet_field, {0.0, 0.0}, {1.0}, {0.01, 0.01}, {100, 100},
                               {1, 0});
    double diff = 0.0;
    for (std::size_t k = 0; k < sheet.node_count(); ++k)
        diff = std::max(diff, std::abs(sheet.xs[k][0] - rev.xs[k][0]));
    CHECK(diff <= 1e-7);

    // the recorded jet values are the field values
    JetPoint jp = sheet.jet({3, 5});
    EvalPoint env = base_point(jp.t, jp.x);
    Mat X = field_at(exp_sheet_field, env);
    CHECK(jp.v(0, 0) == X(0, 0));
    CHECK(jp.v(0, 1) == X(0, 1));

    // non-integrable fields are refused with the max violation reported
    auto bad = make_field({{"x1", "t1"}}, h_flat2(), g_unit1());
    try {
        integrate_sheet(bad, {0.0, 0.0}, {1.0}, {0.01, 0.01}, {100, 100});
        FAIL("expected IntegrabilityError");
    } catch (const IntegrabilityError& e) {
        CHECK(e.max_violation() == doctest::Approx(1.0));
    }
}

TEST_CASE("residual_along trajectories") {
    // straight line against the flat geodesic system
    auto geo = make_geodesic(h_unit(), g_flat2(), 1, 2);
    auto line = integrate_second_order(geo, 0.0, {0.0, 0.0}, {1.0, -2.0}, 0.01, 100);
    CHECK(residual_along(line, geo) <= 1e-10);

    // eq2 solutions against eq5: second-order convergence under halving
    auto rot = rotation_field();
    auto sys5 = prolong_eq5(rot);
    auto eq2 = kinematic_system(rot);
    double res_h = residual_along(integrate_first_order(eq2, 0.0, {1.0, 0.0}, 2e-3, 500), sys5);
    double res_h2 = residual_along(integrate_first_order(eq2, 0.0, {1.0, 0.0}, 1e-3, 1000), sys5);
    double ratio = res_h / res_h2;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);

    CHECK_THROWS_AS(residual_along(Trajectory{}, sys5), InputError);
}

TEST_CASE("residual_along sheets") {
    // constant sheet against eq9: exact
    auto constants = make_field({{"2", "-1"}}, h_flat2(), g_unit1());
    auto sheet = integrate_sheet(constants, {0.0, 0.0}, {0.5}, {0.1, 0.1}, {10, 10});
    CHECK(residual_along(sheet, prolong_eq9(constants)) <= 1e-10);

    // exp sheet against eq9: truncation-level residual
    auto exp_field = make_field({{"x1", "x1"}}, h_flat2(), g_unit1());
    auto es = integrate_sheet(exp_field, {0.0, 0.0}, {1.0}, {0.01, 0.01}, {100, 100});
    CHECK(residual_along(es, prolong_eq9(exp_field)) <= 2e-3);

    // and against the eq10 trace form
    CHECK(residual_along(es, prolong_eq10(exp_field)) <= 2e-3);
}
