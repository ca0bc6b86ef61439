#pragma once

// Convenience constructors for assembling expression trees programmatically
// (symbolic Lagrangians, rescaled fields, order-reduction output). The 0/1
// folding keeps emitted trees readable; it is construction-time tidying, not
// an algebra pass.

#include "jetflow/expr.hpp"

namespace jetflow::ebuild {

inline bool is_lit(const Expr& e, double v) {
    return e.node().kind == detail::Node::Kind::Lit && e.node().lit == v;
}

inline Expr zero() { return Expr::literal(0.0); }
inline Expr one() { return Expr::literal(1.0); }

inline Expr add(Expr a, Expr b) {
    if (is_lit(a, 0.0)) return b;
    if (is_lit(b, 0.0)) return a;
    return std::move(a) + std::move(b);
}

inline Expr sub(Expr a, Expr b) {
    if (is_lit(b, 0.0)) return a;
    if (is_lit(a, 0.0)) return -std::move(b);
    return std::move(a) - std::move(b);
}

inline Expr mul(Expr a, Expr b) {
    if (is_lit(a, 0.0) || is_lit(b, 0.0)) return zero();
    if (is_lit(a, 1.0)) return b;
    if (is_lit(b, 1.0)) return a;
    return std::move(a) * std::move(b);
}

inline Expr div(Expr a, Expr b) {
    if (is_lit(a, 0.0)) return zero();
    if (is_lit(b, 1.0)) return a;
    return std::move(a) / std::move(b);
}

inline Expr sqrt(Expr a) { return Expr::call(FuncId::Sqrt, std::move(a)); }
inline Expr abs(Expr a) { return Expr::call(FuncId::Abs, std::move(a)); }

} // namespace jetflow::ebuild
