#include "jetflow/problem.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace jetflow {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw InputError(msg); }

const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing key \"") + key + "\"");
    return *it;
}

std::size_t get_dim(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
        fail(std::string("\"") + key + "\" must be a positive integer");
    return v.get<std::size_t>();
}

Expr parse_expr_field(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where + " must be an expression string");
    try {
        return Expr::parse(v.get<std::string>());
    } catch (const ParseError& e) {
        fail(where + ": " + e.what());
    }
}

MatT<Expr> parse_expr_grid(const json& v, std::size_t rows, std::size_t cols,
                           const std::string& where) {
    if (!v.is_array() || v.size() != rows)
        fail(where + " must be an array of " + std::to_string(rows) + " rows");
    MatT<Expr> out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = v[i];
        if (!row.is_array() || row.size() != cols)
            fail(where + " row " + std::to_string(i + 1) + " must have " +
                 std::to_string(cols) + " entries");
        for (std::size_t j = 0; j < cols; ++j) {
            std::ostringstream os;
            os << where << "[" << i + 1 << "][" << j + 1 << "]";
            out(i, j) = parse_expr_field(row[j], os.str());
        }
    }
    return out;
}

std::vector<int> parse_signature(const json& j, const char* key, std::size_t dim) {
    const json& v = need(j, key);
    if (!v.is_array() || v.size() != dim)
        fail(std::string("\"") + key + "\" must list " + std::to_string(dim) + " entries");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer()) fail(std::string("\"") + key + "\" entries must be +1/-1");
        out.push_back(e.get<int>());
    }
    return out;
}

Vec parse_vec(const json& v, std::size_t dim, const std::string& where) {
    if (!v.is_array() || v.size() != dim)
        fail(where + " must be an array of " + std::to_string(dim) + " numbers");
    Vec out;
    for (const auto& e : v) {
        if (!e.is_number()) fail(where + " entries must be numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<std::pair<double, double>> parse_boxes(const json& v, std::size_t dim,
                                                   const std::string& where) {
    if (!v.is_array() || v.size() != dim)
        fail(where + " must list " + std::to_string(dim) + " [lo, hi] ranges");
    std::vector<std::pair<double, double>> out;
    for (const auto& e : v) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            fail(where + " entries must be [lo, hi] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
        if (!(out.back().first <= out.back().second)) fail(where + " has an empty range");
    }
    return out;
}

std::shared_ptr<const MetricSpec> make_metric(const json& grid, const json& doc, const char* sigkey,
                                              std::size_t dim, char coord, const char* name) {
    std::vector<std::string> coords;
    for (std::size_t i = 0; i < dim; ++i)
        coords.push_back(coord == 't' ? t_name(i) : x_name(i));
    MatT<Expr> comps = parse_expr_grid(grid, dim, dim, name);
    try {
        return std::make_shared<const MetricSpec>(
            MetricSpec::make(std::move(coords), std::move(comps), parse_signature(doc, sigkey, dim)));
    } catch (const GeometryError& e) {
        fail(std::string(name) + ": " + e.what());
    }
}

} // namespace

Problem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open problem file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }

    Problem pr;
    pr.path = path;
    pr.p = get_dim(doc, "p");
    pr.n = get_dim(doc, "n");
    pr.h = make_metric(need(doc, "metric_h"), doc, "signature_h", pr.p, 't', "metric_h");
    pr.g = make_metric(need(doc, "metric_g"), doc, "signature_g", pr.n, 'x', "metric_g");
    pr.field = DistTensorField::make(
        parse_expr_grid(need(doc, "field_X"), pr.n, pr.p, "field_X"), pr.h, pr.g);

    if (doc.contains("world_force")) {
        const json& wf = doc["world_force"];
        WorldForceSpec spec;
        const json& fj = need(wf, "F");
        if (!fj.is_array() || fj.size() != pr.n) fail("world_force.F must have n rows");
        spec.F = Ten3T<Expr>(pr.n, pr.n, pr.p);
        for (std::size_t j = 0; j < pr.n; ++j) {
            MatT<Expr> grid = parse_expr_grid(fj[j], pr.n, pr.p, "world_force.F row");
            for (std::size_t i = 0; i < pr.n; ++i)
                for (std::size_t a = 0; a < pr.p; ++a) spec.F(j, i, a) = grid(i, a);
        }
        const json& uj = need(wf, "U");
        if (!uj.is_array() || uj.size() != pr.n) fail("world_force.U must have n entries");
        spec.U = Ten3T<Expr>(pr.n, pr.p, pr.p);
        for (std::size_t i = 0; i < pr.n; ++i) {
            MatT<Expr> grid = parse_expr_grid(uj[i], pr.p, pr.p, "world_force.U entry");
            for (std::size_t a = 0; a < pr.p; ++a)
                for (std::size_t b = 0; b < pr.p; ++b) spec.U(i, a, b) = grid(a, b);
        }
        spec.c = parse_expr_field(need(wf, "c"), "world_force.c");
        pr.world_force = std::move(spec);
    }

    if (doc.contains("initial")) {
        const json& init = doc["initial"];
        InitialData id;
        id.t0 = parse_vec(need(init, "t0"), pr.p, "initial.t0");
        id.x0 = parse_vec(need(init, "x0"), pr.n, "initial.x0");
        if (init.contains("v0")) {
            const json& v0 = init["v0"];
            Mat v(pr.n, pr.p);
            if (pr.p == 1 && v0.is_array() && !v0.empty() && v0[0].is_number()) {
                Vec flat = parse_vec(v0, pr.n, "initial.v0");
                for (std::size_t i = 0; i < pr.n; ++i) v(i, 0) = flat[i];
            } else {
                if (!v0.is_array() || v0.size() != pr.n) fail("initial.v0 must have n rows");
                for (std::size_t i = 0; i < pr.n; ++i) {
                    Vec row = parse_vec(v0[i], pr.p, "initial.v0 row");
                    for (std::size_t a = 0; a < pr.p; ++a) v(i, a) = row[a];
                }
            }
            id.v0 = std::move(v);
        }
        pr.initial = std::move(id);
    }

    if (doc.contains("integration")) {
        const json& integ = doc["integration"];
        if (integ.contains("step")) {
            pr.integration.step = integ["step"].get<double>();
            if (!(pr.integration.step > 0.0)) fail("integration.step must be positive");
        }
        if (integ.contains("n_steps")) pr.integration.n_steps = integ["n_steps"].get<std::size_t>();
        if (integ.contains("grid")) {
            const json& grid = integ["grid"];
            const json& st = need(grid, "steps");
            const json& ct = need(grid, "counts");
            Vec steps = parse_vec(st, pr.p, "integration.grid.steps");
            pr.integration.grid_steps.assign(steps.begin(), steps.end());
            if (!ct.is_array() || ct.size() != pr.p) fail("integration.grid.counts must list p entries");
            for (const auto& e : ct) pr.integration.grid_counts.push_back(e.get<std::size_t>());
        }
    }

    // sampling defaults: t in [0,1]^p, x in [-2,2]^n
    pr.samples.t_box.assign(pr.p, {0.0, 1.0});
    pr.samples.x_box.assign(pr.n, {-2.0, 2.0});
    if (doc.contains("samples")) {
        const json& s = doc["samples"];
        if (s.contains("count")) pr.samples.count = s["count"].get<std::size_t>();
        if (s.contains("seed")) pr.samples.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("t_box")) pr.samples.t_box = parse_boxes(s["t_box"], pr.p, "samples.t_box");
        if (s.contains("x_box")) pr.samples.x_box = parse_boxes(s["x_box"], pr.n, "samples.x_box");
        if (s.contains("v_range")) {
            auto r = parse_boxes(json::array({s["v_range"]}), 1, "samples.v_range");
            pr.samples.v_range = r[0];
        }
    }
    return pr;
}

namespace {

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng);
}

} // namespace

std::vector<EvalPoint> sample_base_points(const Problem& pr, std::size_t count) {
    std::mt19937_64 rng(pr.samples.seed);
    std::vector<EvalPoint> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Vec t(pr.p), x(pr.n);
        for (std::size_t a = 0; a < pr.p; ++a)
            t[a] = uniform_in(rng, pr.samples.t_box[a].first, pr.samples.t_box[a].second);
        for (std::size_t i = 0; i < pr.n; ++i)
            x[i] = uniform_in(rng, pr.samples.x_box[i].first, pr.samples.x_box[i].second);
        out.push_back(base_point(t, x));
    }
    return out;
}

std::vector<JetPoint> sample_jet_points(const Problem& pr, std::size_t count, bool on_shell) {
    std::mt19937_64 rng(pr.samples.seed + 1);
    std::vector<JetPoint> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        JetPoint jp;
        jp.t.resize(pr.p);
        jp.x.resize(pr.n);
        jp.v = Mat(pr.n, pr.p);
        for (std::size_t a = 0; a < pr.p; ++a)
            jp.t[a] = uniform_in(rng, pr.samples.t_box[a].first, pr.samples.t_box[a].second);
        for (std::size_t i = 0; i < pr.n; ++i)
            jp.x[i] = uniform_in(rng, pr.samples.x_box[i].first, pr.samples.x_box[i].second);
        if (on_shell) {
            jp.v = field_at(pr.field, base_point(jp.t, jp.x));
        } else {
            for (std::size_t i = 0; i < pr.n; ++i)
                for (std::size_t a = 0; a < pr.p; ++a)
                    jp.v(i, a) = uniform_in(rng, pr.samples.v_range.first, pr.samples.v_range.second);
        }
        out.push_back(std::move(jp));
    }
    return out;
}

void validate_problem(const Problem& pr) {
    auto points = sample_base_points(pr, std::min<std::size_t>(pr.samples.count, 32));
    for (const auto& p : points) {
        verify_signature(*pr.h, p);
        verify_signature(*pr.g, p);
        field_at(pr.field, p); // evaluates every component
        if (pr.world_force) {
            for (const auto& e : pr.world_force->F.data()) e.eval(p);
            for (const auto& e : pr.world_force->U.data()) e.eval(p);
            pr.world_force->c.eval(p);
        }
    }
}

} // namespace jetflow
