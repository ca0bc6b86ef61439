#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> yields exact mixed
// second derivatives; all expression evaluation is templated over the scalar
// so a single AST walk serves values, gradients and Hessian entries.

#include <cmath>
#include <ostream>
#include <type_traits>

namespace jetflow {

template <class T>
struct Dual {
    T v{}; // value
    T d{}; // derivative

    constexpr Dual() = default;
    constexpr Dual(const T& value) : v(value), d() {}
    constexpr Dual(const T& value, const T& deriv) : v(value), d(deriv) {}
    constexpr Dual(double s) requires(!std::is_same_v<T, double>) : v(s), d() {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
    friend Dual operator*(const Dual& a, const Dual& b) {
        return {a.v * b.v, a.v * b.d + a.d * b.v};
    }
    friend Dual operator/(const Dual& a, const Dual& b) {
        T q = a.v / b.v;
        return {q, (a.d - q * b.d) / b.v};
    }
};

// -- scalar helpers, recursive through nesting -------------------------------

inline double scalar_value(double x) { return x; }
template <class T> double scalar_value(const Dual<T>& x) { return scalar_value(x.v); }

inline bool all_zero(double x) { return x == 0.0; }
template <class T> bool all_zero(const Dual<T>& x) { return all_zero(x.v) && all_zero(x.d); }

// -- math functions -----------------------------------------------------------

using std::abs;
using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;
using std::tanh;

template <class T> Dual<T> sin(const Dual<T>& x) { return {sin(x.v), cos(x.v) * x.d}; }
template <class T> Dual<T> cos(const Dual<T>& x) { return {cos(x.v), -sin(x.v) * x.d}; }
template <class T> Dual<T> tan(const Dual<T>& x) {
    T t = tan(x.v);
    return {t, (T(1.0) + t * t) * x.d};
}
template <class T> Dual<T> exp(const Dual<T>& x) {
    T e = exp(x.v);
    return {e, e * x.d};
}
template <class T> Dual<T> log(const Dual<T>& x) { return {log(x.v), x.d / x.v}; }
template <class T> Dual<T> sqrt(const Dual<T>& x) {
    T r = sqrt(x.v);
    return {r, x.d / (T(2.0) * r)};
}
template <class T> Dual<T> abs(const Dual<T>& x) {
    double s = scalar_value(x.v) < 0.0 ? -1.0 : 1.0;
    return {abs(x.v), T(s) * x.d};
}
template <class T> Dual<T> sinh(const Dual<T>& x) { return {sinh(x.v), cosh(x.v) * x.d}; }
template <class T> Dual<T> cosh(const Dual<T>& x) { return {cosh(x.v), sinh(x.v) * x.d}; }
template <class T> Dual<T> tanh(const Dual<T>& x) {
    T t = tanh(x.v);
    return {t, (T(1.0) - t * t) * x.d};
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& x) {
    return os << "{" << x.v << ", " << x.d << "}";
}

} // namespace jetflow
