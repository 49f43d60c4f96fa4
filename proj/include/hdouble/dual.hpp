#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace hdouble {

/// Forward-mode scalar: value + one derivative slot. Nest for higher order.
template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(const T& value) : v(value) {}
  Dual(const T& value, const T& deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v = v * o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    v = v / o.v;
    d = (d - v * o.d) / o.v;
    return *this;
  }
};

template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator+(const Dual<T>& a) { return a; }

template <class T> Dual<T> operator+(const T& a, Dual<T> b) { b.v = a + b.v; return b; }
template <class T> Dual<T> operator+(Dual<T> a, const T& b) { a.v += b; return a; }
template <class T> Dual<T> operator-(const T& a, const Dual<T>& b) { return {a - b.v, -b.d}; }
template <class T> Dual<T> operator-(Dual<T> a, const T& b) { a.v -= b; return a; }
template <class T> Dual<T> operator*(const T& a, const Dual<T>& b) { return {a * b.v, a * b.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const T& b) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const T& b) { return {a.v / b, a.d / b}; }
template <class T> Dual<T> operator/(const T& a, const Dual<T>& b) { return Dual<T>(a) / b; }

using std::exp;
using std::log;
using std::sqrt;

template <class T> Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T> Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> sqrt(const Dual<T>& a) {
  T r = sqrt(a.v);
  return {r, a.d / (T(2) * r)};
}

/// magnitude of the value part, recursing through nesting (pivoting / norms)
inline double mag(double x) { return std::abs(x); }
inline double mag(const std::complex<double>& x) { return std::abs(x); }
template <class T> double mag(const Dual<T>& x) { return mag(x.v); }

/// magnitude including derivative parts (conservative scaling estimates)
inline double mag_all(double x) { return std::abs(x); }
inline double mag_all(const std::complex<double>& x) { return std::abs(x); }
template <class T> double mag_all(const Dual<T>& x) { return mag_all(x.v) + mag_all(x.d); }

/// strip every derivative slot
inline double value_of(double x) { return x; }
inline std::complex<double> value_of(const std::complex<double>& x) { return x; }
template <class T> auto value_of(const Dual<T>& x) { return value_of(x.v); }

// ---- scalar towers -------------------------------------------------------

template <class B, int K>
struct LevelT { using type = Dual<typename LevelT<B, K - 1>::type>; };
template <class B>
struct LevelT<B, 0> { using type = B; };
template <class B, int K>
using Level = typename LevelT<B, K>::type;

template <class S> struct ScalarTraits {
  using base = S;
  static constexpr int depth = 0;
};
template <class T> struct ScalarTraits<Dual<T>> {
  using base = typename ScalarTraits<T>::base;
  static constexpr int depth = ScalarTraits<T>::depth + 1;
};

template <class S> struct InnerT { using type = S; };
template <class T> struct InnerT<Dual<T>> { using type = T; };

/// embed a plain double into any tower scalar
template <class S> S scal(double x) {
  if constexpr (std::is_same_v<S, double>) return x;
  else if constexpr (std::is_same_v<S, std::complex<double>>) return {x, 0.0};
  else return S(scal<typename InnerT<S>::type>(x));
}

/// promote a scalar from a lower level of the same tower to level S
template <class S, class L> S promote_scalar(const L& x) {
  if constexpr (std::is_same_v<S, L>) return x;
  else {
    static_assert(ScalarTraits<S>::depth > ScalarTraits<L>::depth,
                  "promotion goes up the tower only");
    return S(promote_scalar<typename InnerT<S>::type, L>(x));
  }
}

}  // namespace hdouble
