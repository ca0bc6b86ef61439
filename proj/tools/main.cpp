// jetflow command-line interface: validate / classify / integrate / verify /
// reduce over JSON problem files. Exit codes: 0 success, 1 check failure,
// 2 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jetflow/export.hpp"
#include "jetflow/integrate.hpp"
#include "jetflow/jetspace.hpp"
#include "jetflow/problem.hpp"
#include "jetflow/variational.hpp"
#include "jetflow/verify.hpp"

using namespace jetflow;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw InputError("cannot open output file '" + path + "'");
    return file;
}

int cmd_validate(const std::string& path) {
    json report;
    report["problem"] = path;
    try {
        Problem pr = load_problem(path);
        validate_problem(pr);
        report["valid"] = true;
        report["p"] = pr.p;
        report["n"] = pr.n;
        std::cout << report.dump(2) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        report["valid"] = false;
        report["error"] = e.what();
        std::cout << report.dump(2) << "\n";
        return kExitInputError;
    }
}

int cmd_classify(const std::string& path, std::size_t count) {
    Problem pr = load_problem(path);
    auto samples = sample_base_points(pr, count ? count : pr.samples.count);
    CausalClass cls = classify(pr.field, samples);
    json report;
    report["problem"] = path;
    report["class"] = causal_kind_name(cls.kind);
    report["f_min"] = cls.f_min;
    report["f_max"] = cls.f_max;
    report["samples"] = samples.size();
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_integrate(const std::string& path, const std::string& system, const std::string& out,
                  const std::string& format) {
    Problem pr = load_problem(path);
    std::ofstream file;
    std::ostream& os = open_output(file, out);

    if (system == "sheet") {
        if (pr.p < 2) throw InputError("sheet integration requires p >= 2");
        if (!pr.initial) throw InputError("problem file has no initial data");
        if (pr.integration.grid_steps.empty())
            throw InputError("problem file has no integration.grid");
        Sheet sheet;
        try {
            sheet = integrate_sheet(pr.field, pr.initial->t0, pr.initial->x0,
                                    pr.integration.grid_steps, pr.integration.grid_counts);
        } catch (const IntegrabilityError& e) {
            json report;
            report["error"] = e.what();
            report["max_violation"] = e.max_violation();
            std::cerr << report.dump(2) << "\n";
            return kExitCheckFailure;
        }
        if (format == "csv") write_sheet_csv(os, sheet);
        else write_sheet_json(os, sheet);
        return kExitOk;
    }

    if (pr.p != 1) throw InputError("system '" + system + "' requires p == 1");
    if (!pr.initial) throw InputError("problem file has no initial data");
    const InitialData& init = *pr.initial;
    double t0 = init.t0[0];
    double step = pr.integration.step;
    std::size_t n_steps = pr.integration.n_steps;

    Trajectory traj;
    if (system == "eq2") {
        traj = integrate_first_order(kinematic_system(pr.field), t0, init.x0, step, n_steps);
    } else {
        Vec v0;
        if (init.v0) {
            v0.resize(pr.n);
            for (std::size_t i = 0; i < pr.n; ++i) v0[i] = (*init.v0)(i, 0);
        } else {
            Mat shell = field_at(pr.field, base_point(init.t0, init.x0));
            v0.resize(pr.n);
            for (std::size_t i = 0; i < pr.n; ++i) v0[i] = shell(i, 0);
        }
        SecondOrderSystem sys;
        if (system == "eq3") sys = prolong_eq3(pr.field);
        else if (system == "eq5") sys = prolong_eq5(pr.field);
        else if (system == "geodesic") sys = make_geodesic(pr.h, pr.g, 1, pr.n);
        else throw InputError("unknown system '" + system + "'");
        traj = integrate_second_order(sys, t0, init.x0, v0, step, n_steps);
    }
    if (format == "csv") write_trajectory_csv(os, traj, pr.n);
    else write_trajectory_json(os, traj, pr.n);
    if (traj.aborted) {
        std::cerr << "integration aborted at t = " << traj.ts.back()
                  << " (non-finite state); wrote the good prefix\n";
        return kExitCheckFailure;
    }
    return kExitOk;
}

int cmd_verify(const std::string& path, const std::string& suite_name, const std::string& out) {
    Problem pr = load_problem(path);
    validate_problem(pr);
    VerifyReport report = run_verify(pr, parse_suite(suite_name), default_worker_count());
    std::ofstream file;
    std::ostream& os = open_output(file, out);
    write_report_json(os, report);
    return report.pass() ? kExitOk : kExitCheckFailure;
}

int cmd_reduce_ode(const std::string& rhs_text, std::size_t order) {
    FirstOrderODESystem sys = reduce_order_ode(Expr::parse(rhs_text), order);
    for (std::size_t i = 0; i < sys.n; ++i)
        std::cout << "d" << x_name(i) << "/dt1 = " << sys.rhs[i].str() << "\n";
    return kExitOk;
}

int cmd_reduce_pde(const std::string& rhs_text, std::size_t p) {
    PdeReduction red = reduce_order_pde(Expr::parse(rhs_text), p);
    std::cout << "states: x1 (unknown)";
    for (std::size_t a = 0; a < p; ++a)
        std::cout << ", " << x_name(1 + a) << " = d x1/d" << t_name(a);
    std::cout << "\n";
    for (const auto& eq : red.equations) {
        const char* kind = "";
        switch (eq.kind) {
            case PdeEquation::Kind::State: kind = "state"; break;
            case PdeEquation::Kind::Symmetry: kind = "symmetry"; break;
            case PdeEquation::Kind::Pde: kind = "pde"; break;
            case PdeEquation::Kind::Free: kind = "free"; break;
        }
        std::cout << "d" << x_name(eq.state) << "/d" << t_name(eq.dir) << " = " << eq.rhs.str()
                  << "   [" << kind << "]\n";
    }
    std::cout << red.equations.size() << " equations over " << (1 + p) << " states\n";
    for (auto [a, b] : red.symmetry_constraints)
        std::cout << "monitor: " << v_name(1 + a, b) << " == " << v_name(1 + b, a) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jet-bundle geometry of first-order flows: build, integrate and "
                 "verify prolonged systems, Lagrangians and Hamilton systems"};
    app.require_subcommand(1);

    std::string path, out, format = "csv", system = "eq2", suite = "all";
    std::size_t count = 0, order = 2, pdims = 2;
    std::string rhs;

    auto* validate = app.add_subcommand("validate", "parse and check a problem file");
    validate->add_option("file", path, "problem JSON file")->required();

    auto* classify_cmd = app.add_subcommand("classify", "causal classification by sampled energy");
    classify_cmd->add_option("file", path, "problem JSON file")->required();
    classify_cmd->add_option("--samples", count, "number of sample points");

    auto* integrate = app.add_subcommand("integrate", "integrate a system and export the result");
    integrate->add_option("file", path, "problem JSON file")->required();
    integrate->add_option("--system", system, "eq2|eq3|eq5|geodesic|sheet")->required();
    integrate->add_option("--out", out, "output path (default stdout)");
    integrate->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("file", path, "problem JSON file")->required();
    verify->add_option("--suite", suite, "prolongation|variational|hamilton|forms|all");
    verify->add_option("--out", out, "report path (default stdout)");

    auto* reduce = app.add_subcommand("reduce", "order reduction to a first-order system");
    auto* reduce_ode = reduce->add_subcommand("ode", "d^n x/dt^n = f(t1, x1..xn)");
    reduce_ode->add_option("--rhs", rhs, "right-hand side expression")->required();
    reduce_ode->add_option("--order", order, "derivative order n")->required();
    auto* reduce_pde = reduce->add_subcommand("pde", "d^2 x/d(t^p)^2 = F(...), r = 2");
    reduce_pde->add_option("--rhs", rhs, "right-hand side expression")->required();
    reduce_pde->add_option("--p", pdims, "number of parameters")->required();
    reduce->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return cmd_validate(path);
        if (*classify_cmd) return cmd_classify(path, count);
        if (*integrate) return cmd_integrate(path, system, out, format);
        if (*verify) return cmd_verify(path, suite, out);
        if (*reduce_ode) return cmd_reduce_ode(rhs, order);
        if (*reduce_pde) return cmd_reduce_pde(rhs, pdims);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const GeometryError& e) {
        // geometry errors escaping to here mean the problem data itself is bad
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    return kExitInputError;
}
