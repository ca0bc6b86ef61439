#pragma once

// Scalar expression language over named variables (t1..tp, x1..xn, jet
// velocities y1..yn / x1_1 style). Trees are immutable after parse; first and
// second partial derivatives come from dual-number evaluation, never from a
// symbolic derivative pass or finite differences.

#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jetflow/dual.hpp"
#include "jetflow/errors.hpp"

namespace jetflow {

/// Variable binding environment, templated so eval can run on doubles or
/// (nested) dual numbers. Linear lookup: environments here hold a handful
/// of variables.
template <class T>
class Env {
public:
    void set(std::string name, T value) {
        for (auto& kv : vars_)
            if (kv.first == name) { kv.second = std::move(value); return; }
        vars_.emplace_back(std::move(name), std::move(value));
    }
    const T* find(std::string_view name) const {
        for (const auto& kv : vars_)
            if (kv.first == name) return &kv.second;
        return nullptr;
    }
    const std::vector<std::pair<std::string, T>>& entries() const { return vars_; }

private:
    std::vector<std::pair<std::string, T>> vars_;
};

using EvalPoint = Env<double>;

/// Lifts every binding to a dual number, seeding d/d(seed) = 1.
template <class T>
Env<Dual<T>> lift_env(const Env<T>& env, std::string_view seed) {
    Env<Dual<T>> out;
    for (const auto& kv : env.entries())
        out.set(kv.first, Dual<T>{kv.second, T(kv.first == seed ? 1.0 : 0.0)});
    return out;
}

enum class FuncId { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sinh, Cosh, Tanh };

const char* func_name(FuncId f);

class Expr;

namespace detail {

struct Node {
    enum class Kind { Lit, Var, Add, Sub, Mul, Div, Pow, Neg, Fun };
    Kind kind;
    double lit = 0.0;                  // Lit
    std::string name;                  // Var
    FuncId fn = FuncId::Sin;           // Fun
    std::shared_ptr<const Node> a, b;  // children
};

template <class T>
T eval_node(const Node& node, const Env<T>& env);

} // namespace detail

class Expr {
public:
    Expr() = default;

    /// Parses `source` under standard precedence: ^ (right-assoc) binds
    /// tighter than unary minus, then * /, then + -. Throws ParseError.
    static Expr parse(std::string_view source);

    static Expr literal(double v);
    static Expr var(std::string name);
    static Expr call(FuncId fn, Expr arg);
    static Expr pow(Expr base, Expr exponent);

    friend Expr operator+(Expr a, Expr b);
    friend Expr operator-(Expr a, Expr b);
    friend Expr operator*(Expr a, Expr b);
    friend Expr operator/(Expr a, Expr b);
    friend Expr operator-(Expr a);

    bool valid() const { return node_ != nullptr; }

    /// Serialization; parse(str()) reproduces the identical tree.
    std::string str() const;

    template <class T>
    T eval(const Env<T>& env) const {
        return detail::eval_node<T>(*node_, env);
    }

    double eval(const EvalPoint& p) const { return eval<double>(p); }

    /// Exact partial derivative d(this)/d(v) at p.
    double d1(std::string_view v, const EvalPoint& p) const {
        return eval<Dual<double>>(lift_env(p, v)).d;
    }

    /// Exact mixed second partial; symmetric in (v1, v2) by construction
    /// (arguments are ordered canonically before seeding).
    double d2(std::string_view v1, std::string_view v2, const EvalPoint& p) const {
        if (v2 < v1) std::swap(v1, v2);
        auto inner = lift_env(p, v2);
        auto outer = lift_env(inner, v1);
        // seed the outer derivative on the value part only
        return eval<Dual<Dual<double>>>(outer).d.d;
    }

    /// Sorted list of distinct variable names appearing in the tree.
    std::vector<std::string> variables() const;

    bool is_constant() const { return variables().empty(); }

    /// Structural equality of trees (exact literal comparison).
    bool same_tree(const Expr& other) const;

    const detail::Node& node() const { return *node_; }

private:
    explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::Node> node_;
};

namespace detail {

inline bool all_zero_deriv(double) { return true; }
template <class T> bool all_zero_deriv(const Dual<T>& x) { return all_zero(x.d); }

template <class T>
T pow_eval(const T& base, const T& expo) {
    const double bv = scalar_value(base);
    const double ev = scalar_value(expo);
    const double rounded = std::nearbyint(ev);
    const bool integral_const = all_zero_deriv(expo) && ev == rounded && std::abs(ev) < 1e9;
    if (integral_const) {
        // integer power by repeated squaring; exact values and derivatives
        // for polynomial expressions, and the only real branch for bv <= 0
        long n = static_cast<long>(rounded);
        if (bv == 0.0 && n < 0) throw EvalError("pow: zero base with negative exponent");
        T acc = T(1.0);
        T b = base;
        long k = n < 0 ? -n : n;
        while (k > 0) {
            if (k & 1) acc = acc * b;
            b = b * b;
            k >>= 1;
        }
        return n < 0 ? T(1.0) / acc : acc;
    }
    if (bv > 0.0) return exp(expo * log(base));
    if (bv == 0.0 && ev > 0.0) {
        if (ev > 1.0 || all_zero_deriv(base)) return T(0.0);
        throw EvalError("pow: derivative at zero base with exponent below 1");
    }
    if (!all_zero_deriv(expo))
        throw EvalError("pow: derivative with respect to the exponent requires a positive base");
    throw EvalError("pow: non-integer exponent of a non-positive base");
}

template <class T>
T apply_func(FuncId fn, const T& x) {
    switch (fn) {
        case FuncId::Sin: return sin(x);
        case FuncId::Cos: return cos(x);
        case FuncId::Tan: return tan(x);
        case FuncId::Exp: return exp(x);
        case FuncId::Log:
            if (scalar_value(x) <= 0.0) throw EvalError("log of non-positive value");
            return log(x);
        case FuncId::Sqrt:
            if (scalar_value(x) < 0.0) throw EvalError("sqrt of negative value");
            return sqrt(x);
        case FuncId::Abs: return abs(x);
        case FuncId::Sinh: return sinh(x);
        case FuncId::Cosh: return cosh(x);
        case FuncId::Tanh: return tanh(x);
    }
    throw EvalError("unknown function id");
}

template <class T>
T eval_node(const Node& node, const Env<T>& env) {
    switch (node.kind) {
        case Node::Kind::Lit: return T(node.lit);
        case Node::Kind::Var: {
            const T* v = env.find(node.name);
            if (!v) throw EvalError("unbound variable '" + node.name + "'");
            return *v;
        }
        case Node::Kind::Add: return eval_node(*node.a, env) + eval_node(*node.b, env);
        case Node::Kind::Sub: return eval_node(*node.a, env) - eval_node(*node.b, env);
        case Node::Kind::Mul: return eval_node(*node.a, env) * eval_node(*node.b, env);
        case Node::Kind::Div: {
            T num = eval_node(*node.a, env);
            T den = eval_node(*node.b, env);
            if (scalar_value(den) == 0.0) throw EvalError("division by zero");
            return num / den;
        }
        case Node::Kind::Pow:
            return pow_eval(eval_node(*node.a, env), eval_node(*node.b, env));
        case Node::Kind::Neg: return -eval_node(*node.a, env);
        case Node::Kind::Fun: return apply_func(node.fn, eval_node(*node.a, env));
    }
    throw EvalError("corrupt expression node");
}

} // namespace detail

/// Exact partial derivative in a T-valued context (T = double or Dual<...>);
/// used by the geometry layer to differentiate metric components while the
/// surrounding computation is itself being differentiated.
template <class T>
T d1_in(const Expr& e, std::string_view v, const Env<T>& env) {
    return e.eval<Dual<T>>(lift_env(env, v)).d;
}

} // namespace jetflow
