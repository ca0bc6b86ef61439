#pragma once

// Shared fixtures for the unit suites: small metrics and fields built from
// source strings, plus jet-point helpers.

#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "jetflow/field.hpp"
#include "jetflow/jetpoint.hpp"
#include "jetflow/metric.hpp"

namespace testsupport {

using namespace jetflow;

inline std::shared_ptr<const MetricSpec> make_metric(std::vector<std::string> coords,
                                                     std::vector<std::vector<const char*>> grid,
                                                     std::vector<int> sig) {
    std::size_t d = coords.size();
    MatT<Expr> comps(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) comps(i, j) = Expr::parse(grid[i][j]);
    return std::make_shared<const MetricSpec>(
        MetricSpec::make(std::move(coords), std::move(comps), std::move(sig)));
}

inline std::shared_ptr<const MetricSpec> h_unit() { return make_metric({"t1"}, {{"1"}}, {1}); }

inline std::shared_ptr<const MetricSpec> h_minus() { return make_metric({"t1"}, {{"-1"}}, {-1}); }

inline std::shared_ptr<const MetricSpec> h_exp2t() {
    return make_metric({"t1"}, {{"exp(2*t1)"}}, {1});
}

inline std::shared_ptr<const MetricSpec> h_flat2() {
    return make_metric({"t1", "t2"}, {{"1", "0"}, {"0", "1"}}, {1, 1});
}

inline std::shared_ptr<const MetricSpec> g_flat2() {
    return make_metric({"x1", "x2"}, {{"1", "0"}, {"0", "1"}}, {1, 1});
}

inline std::shared_ptr<const MetricSpec> g_diag14() {
    return make_metric({"x1", "x2"}, {{"1", "0"}, {"0", "4"}}, {1, 1});
}

inline std::shared_ptr<const MetricSpec> g_sphere() {
    return make_metric({"x1", "x2"}, {{"1", "0"}, {"0", "sin(x1)^2"}}, {1, 1});
}

inline std::shared_ptr<const MetricSpec> g_unit1() { return make_metric({"x1"}, {{"1"}}, {1}); }

inline DistTensorField make_field(std::vector<std::vector<const char*>> comps,
                                  std::shared_ptr<const MetricSpec> h,
                                  std::shared_ptr<const MetricSpec> g) {
    std::size_t n = comps.size(), p = comps[0].size();
    MatT<Expr> X(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a) X(i, a) = Expr::parse(comps[i][a]);
    return DistTensorField::make(std::move(X), std::move(h), std::move(g));
}

/// The flat-plane rotation field X = (-x2, x1).
inline DistTensorField rotation_field() {
    return make_field({{"-x2"}, {"x1"}}, h_unit(), g_flat2());
}

inline EvalPoint at(std::initializer_list<std::pair<const char*, double>> vars) {
    EvalPoint p;
    for (const auto& [k, v] : vars) p.set(k, v);
    return p;
}

inline JetPoint jet1(double t, std::vector<double> x, std::vector<double> v) {
    JetPoint jp;
    jp.t = {t};
    jp.x = std::move(x);
    jp.v = Mat(jp.x.size(), 1);
    for (std::size_t i = 0; i < jp.x.size(); ++i) jp.v(i, 0) = v[i];
    return jp;
}

} // namespace testsupport
