#pragma once

// A point of the first-order jet bundle: parameters t^a, base point x^i and
// first-derivative coordinates x^i_a (named y^i when p == 1). Also the
// variable-naming conventions shared by every module: t1..tp, x1..xn,
// y1..yn, x1_1 style jet names.

#include <string>

#include "jetflow/arrays.hpp"
#include "jetflow/expr.hpp"

namespace jetflow {

inline std::string t_name(std::size_t alpha) { return "t" + std::to_string(alpha + 1); }
inline std::string x_name(std::size_t i) { return "x" + std::to_string(i + 1); }
inline std::string y_name(std::size_t i) { return "y" + std::to_string(i + 1); }
inline std::string v_name(std::size_t i, std::size_t alpha) {
    return "x" + std::to_string(i + 1) + "_" + std::to_string(alpha + 1);
}

struct JetPoint {
    Vec t;  // size p
    Vec x;  // size n
    Mat v;  // n x p, entry (i, alpha) = x^i_alpha

    std::size_t p() const { return t.size(); }
    std::size_t n() const { return x.size(); }
};

/// Environment binding t/x names only (for expressions on T x M).
template <class T>
Env<T> base_env(const std::vector<T>& t, const std::vector<T>& x) {
    Env<T> env;
    for (std::size_t a = 0; a < t.size(); ++a) env.set(t_name(a), t[a]);
    for (std::size_t i = 0; i < x.size(); ++i) env.set(x_name(i), x[i]);
    return env;
}

inline EvalPoint base_point(const Vec& t, const Vec& x) { return base_env<double>(t, x); }

/// Full jet environment: t, x, x{i}_{a} names, plus y{i} aliases when p == 1.
inline EvalPoint jet_env(const JetPoint& jp) {
    EvalPoint env = base_point(jp.t, jp.x);
    for (std::size_t i = 0; i < jp.n(); ++i)
        for (std::size_t a = 0; a < jp.p(); ++a) env.set(v_name(i, a), jp.v(i, a));
    if (jp.p() == 1)
        for (std::size_t i = 0; i < jp.n(); ++i) env.set(y_name(i), jp.v(i, 0));
    return env;
}

} // namespace jetflow
