#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "jetflow/prolongation.hpp"
#include "support.hpp"

using namespace jetflow;
using namespace testsupport;

TEST_CASE("geodesic_defect") {
    // flat metrics: defect equals the raw second derivative
    auto h = h_unit();
    auto g = g_flat2();
    JetPoint jp = jet1(0.2, {1.0, -1.0}, {0.5, 2.0});
    Ten3 raw(2, 1, 1);
    raw(0, 0, 0) = 3.0;
    raw(1, 0, 0) = -4.0;
    Ten3 d = geodesic_defect(*h, *g, jp, raw);
    CHECK(d(0, 0, 0) == 3.0);
    CHECK(d(1, 0, 0) == -4.0);

    // sphere great circle theta(t) = t, phi const: covariant accel vanishes
    auto gs = g_sphere();
    JetPoint great = jet1(0.3, {1.1, 0.7}, {1.0, 0.0});
    Ten3 zero_raw(2, 1, 1, 0.0);
    Ten3 dg = geodesic_defect(*h, *gs, great, zero_raw);
    CHECK(std::abs(dg(0, 0, 0)) <= 1e-14);
    CHECK(std::abs(dg(1, 0, 0)) <= 1e-14);

    // h11 = exp(2t), x(t) = exp(t): d2x - H dx = e^t - e^t = 0
    auto hw = h_exp2t();
    auto g1 = g_unit1();
    double t = 0.4;
    JetPoint warped;
    warped.t = {t};
    warped.x = {std::exp(t)};
    warped.v = Mat(1, 1);
    warped.v(0, 0) = std::exp(t);
    Ten3 raw1(1, 1, 1);
    raw1(0, 0, 0) = std::exp(t);
    Ten3 dw = geodesic_defect(*hw, *g1, warped, raw1);
    CHECK(std::abs(dw(0, 0, 0)) <= 1e-13);
}

TEST_CASE("prolong_eq3") {
    auto rot = rotation_field();
    auto sys = prolong_eq3(rot);
    JetPoint jp = jet1(0.0, {1.0, 2.0}, {0.3, -0.8});
    Ten3 a = sys.accel(jp);
    // flat rotation field: a = (-xdot2, xdot1)
    CHECK(a(0, 0, 0) == doctest::Approx(0.8));
    CHECK(a(1, 0, 0) == doctest::Approx(0.3));

    // zero field gives the geodesic system (zero covariant acceleration)
    auto zero = make_field({{"0"}, {"0"}}, h_unit(), g_flat2());
    Ten3 az = prolong_eq3(zero).accel(jp);
    CHECK(az(0, 0, 0) == 0.0);
    CHECK(az(1, 0, 0) == 0.0);

    // constant field over flat metrics: no acceleration
    auto constant = make_field({{"2"}, {"5"}}, h_unit(), g_flat2());
    Ten3 ac = prolong_eq3(constant).accel(jp);
    CHECK(ac(0, 0, 0) == 0.0);
    CHECK(ac(1, 0, 0) == 0.0);
}

TEST_CASE("prolong_eq5 and the grad-energy term") {
    auto rot = rotation_field();
    auto sys = prolong_eq5(rot);
    // at rest (xdot = 0) only grad f survives: (x1, x2)
    JetPoint rest = jet1(0.0, {1.0, 2.0}, {0.0, 0.0});
    Ten3 a = sys.accel(rest);
    CHECK(a(0, 0, 0) == doctest::Approx(1.0));
    CHECK(a(1, 0, 0) == doctest::Approx(2.0));

    auto zero = make_field({{"0"}, {"0"}}, h_unit(), g_flat2());
    Ten3 az = prolong_eq5(zero).accel(rest);
    CHECK(az(0, 0, 0) == 0.0);
    CHECK(az(1, 0, 0) == 0.0);
}

TEST_CASE("eq3, eq4 and eq5 coincide on the shell xdot = X") {
    auto skewed = make_field({{"-x2 + x1^2/4"}, {"x1*x2 - 1"}}, h_unit(), g_diag14());
    auto sys3 = prolong_eq3(skewed);
    auto sys4 = prolong_eq4(skewed);
    auto sys5 = prolong_eq5(skewed);
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int k = 0; k < 1000; ++k) {
        Vec x = {dist(rng), dist(rng)};
        EvalPoint env = at({{"t1", dist(rng)}, {"x1", x[0]}, {"x2", x[1]}});
        Mat X = field_at(skewed, env);
        JetPoint jp = jet1(*env.find("t1"), x, {X(0, 0), X(1, 0)});
        Ten3 a3 = sys3.accel(jp);
        Ten3 a4 = sys4.accel(jp);
        Ten3 a5 = sys5.accel(jp);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(std::abs(a4(i, 0, 0) - a5(i, 0, 0)) <= 1e-12);
            CHECK(std::abs(a3(i, 0, 0) - a5(i, 0, 0)) <= 1e-12);
        }
    }
}

TEST_CASE("eq9: p = 1 specialization and the two-sheet example") {
    auto rot = rotation_field();
    auto sys9 = prolong_eq9(rot);
    auto sys3 = prolong_eq3(rot);
    JetPoint jp = jet1(0.2, {0.5, -1.2}, {1.0, 0.7});
    Ten3 a9 = sys9.accel(jp);
    Ten3 a3 = sys3.accel(jp);
    CHECK(a9(0, 0, 0) == doctest::Approx(a3(0, 0, 0)).epsilon(1e-14));
    CHECK(a9(1, 0, 0) == doctest::Approx(a3(1, 0, 0)).epsilon(1e-14));

    // constants with p = 2, n = 1: zero acceleration
    auto constants = make_field({{"2", "-1"}}, h_flat2(), g_unit1());
    JetPoint sheet_jp;
    sheet_jp.t = {0.1, 0.2};
    sheet_jp.x = {1.0};
    sheet_jp.v = Mat(1, 2);
    sheet_jp.v(0, 0) = 2.0;
    sheet_jp.v(0, 1) = -1.0;
    Ten3 ac = prolong_eq9(constants).accel(sheet_jp);
    for (double v : ac.data()) CHECK(v == 0.0);

    // X^1_1 = X^1_2 = x at x = 1, on shell: every component equals 1
    auto exp_sheet = make_field({{"x1", "x1"}}, h_flat2(), g_unit1());
    JetPoint shell;
    shell.t = {0.0, 0.0};
    shell.x = {1.0};
    shell.v = Mat(1, 2);
    shell.v(0, 0) = 1.0;
    shell.v(0, 1) = 1.0;
    Ten3 ae = prolong_eq9(exp_sheet).accel(shell);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) CHECK(ae(0, a, b) == doctest::Approx(1.0));
}

TEST_CASE("eq10 trace: p = 1 reduction to eq5 and symmetry of ingredients") {
    auto rot = rotation_field();
    auto sys10 = prolong_eq10(rot);
    auto sys5 = prolong_eq5(rot);
    CHECK(sys10.trace_only);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        JetPoint jp = jet1(dist(rng), {dist(rng), dist(rng)}, {dist(rng), dist(rng)});
        Vec tr = sys10.trace_accel(jp);
        Ten3 a5 = sys5.accel(jp);
        // h = 1 so the trace is exactly the eq5 acceleration
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(std::abs(tr[i] - a5(i, 0, 0)) <= 1e-12);
    }
}

TEST_CASE("eq10 equals the h-trace of eq9 on the shell (p = 2)") {
    auto exp_sheet = make_field({{"x1", "x1"}}, h_flat2(), g_unit1());
    auto sys9 = prolong_eq9(exp_sheet);
    auto sys10 = prolong_eq10(exp_sheet);
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> dist(0.3, 2.0);
    for (int k = 0; k < 200; ++k) {
        JetPoint jp;
        jp.t = {dist(rng), dist(rng)};
        jp.x = {dist(rng)};
        EvalPoint env = base_point(jp.t, jp.x);
        jp.v = field_at(exp_sheet, env); // on shell
        Ten3 a9 = sys9.accel(jp);
        Vec tr = sys10.trace_accel(jp);
        double lhs = a9(0, 0, 0) + a9(0, 1, 1); // h = identity
        CHECK(std::abs(lhs - tr[0]) <= 1e-10);
        // symmetric ingredients keep the prescribed acceleration symmetric
        CHECK(std::abs(a9(0, 0, 1) - a9(0, 1, 0)) <= 1e-10);
    }
}

TEST_CASE("eq10prime requires a unit field") {
    auto rot = rotation_field();
    std::vector<EvalPoint> samples = {at({{"t1", 0.0}, {"x1", 1.0}, {"x2", 0.0}}),
                                      at({{"t1", 0.0}, {"x1", 0.0}, {"x2", 2.0}})};
    // f varies over these samples: refused
    CHECK_THROWS_AS(prolong_eq10prime(rot, samples), GeometryError);

    DistTensorField unit = rescale_to_unit(rot, samples);
    auto sys = prolong_eq10prime(unit, samples);
    CHECK(sys.trace_only);
    CHECK(sys.tag == SystemTag::Eq10Prime);

    // for the unit field, eq10' = eq10 minus the grad-f term; with f
    // constant the grad term is zero, so the two coincide on shell
    auto sys10 = prolong_eq10(unit);
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dist(0.5, 2.0);
    for (int k = 0; k < 100; ++k) {
        Vec x = {dist(rng), dist(rng)};
        EvalPoint env = at({{"t1", 0.0}, {"x1", x[0]}, {"x2", x[1]}});
        Mat X = field_at(unit, env);
        JetPoint jp = jet1(0.0, x, {X(0, 0), X(1, 0)});
        Vec a = sys.trace_accel(jp);
        Vec b = sys10.trace_accel(jp);
        for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-8);
    }
}

TEST_CASE("reduce_order_ode") {
    // x'' = -x
    auto sys = reduce_order_ode(Expr::parse("-x1"), 2);
    CHECK(sys.n == 2);
    CHECK(sys.rhs[0].str() == "x2");
    CHECK(sys.rhs[1].str() == "-x1");
    Vec r = sys.eval_rhs(0.0, {1.0, 0.5});
    CHECK(r[0] == 0.5);
    CHECK(r[1] == -1.0);

    // first order wraps unchanged
    auto first = reduce_order_ode(Expr::parse("x1"), 1);
    CHECK(first.n == 1);
    CHECK(first.rhs[0].str() == "x1");

    // x''' = t
    auto third = reduce_order_ode(Expr::parse("t1"), 3);
    CHECK(third.n == 3);
    CHECK(third.rhs[0].str() == "x2");
    CHECK(third.rhs[1].str() == "x3");
    CHECK(third.rhs[2].str() == "t1");
}

TEST_CASE("reduce_order_pde emits p(1+p) equations") {
    // d^2 x / d(t^2)^2 = -x with p = 2
    auto red = reduce_order_pde(Expr::parse("-x1"), 2);
    CHECK(red.extended.n == 3);
    CHECK(red.extended.p == 2);
    CHECK(red.equations.size() == 6); // p (1 + p)
    // state rows x_a = u^a
    CHECK(red.equations[0].rhs.str() == "x2");
    CHECK(red.equations[1].rhs.str() == "x3");
    // pde slot carries the right-hand side verbatim
    bool found_pde = false;
    for (const auto& eq : red.equations)
        if (eq.kind == PdeEquation::Kind::Pde) {
            found_pde = true;
            CHECK(eq.state == 2);
            CHECK(eq.dir == 1);
            CHECK(eq.rhs.str() == "-x1");
        }
    CHECK(found_pde);
    CHECK(red.symmetry_constraints.size() == 1);

    // Laplace-type: u^2_2 = -u^1_1 with u^1_1 the jet variable x2_1
    auto laplace = reduce_order_pde(Expr::parse("-x2_1"), 2);
    CHECK(laplace.equations.size() == 6);
    int free_count = 0, sym_count = 0;
    for (const auto& eq : laplace.equations) {
        if (eq.kind == PdeEquation::Kind::Free) ++free_count;
        if (eq.kind == PdeEquation::Kind::Symmetry) ++sym_count;
    }
    CHECK(free_count == 1); // u^1_1
    CHECK(sym_count == 2);  // u^1_2 and u^2_1

    // p = 3: 3 * 4 = 12 equations
    CHECK(reduce_order_pde(Expr::parse("-x1"), 3).equations.size() == 12);

    // only r = 2 is supported
    CHECK_THROWS_AS(reduce_order_pde(Expr::parse("-x1"), 2, 3), InputError);
}

TEST_CASE("second-order systems carry their metrics") {
    auto rot = rotation_field();
    auto sys = prolong_eq5(rot);
    CHECK(sys.h == rot.h);
    CHECK(sys.g == rot.g);
    CHECK(system_tag_name(sys.tag) == std::string("eq5"));
}
