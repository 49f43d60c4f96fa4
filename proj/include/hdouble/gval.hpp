#pragma once

#include <vector>

#include "hdouble/smat.hpp"

namespace hdouble {

/// A group element or Lie-algebra element of one of the realizations.
/// `chi` is the translational part of a semidirect pair (empty for plain
/// matrix groups); `g` is the matrix part. Fields are grids of matrices
/// for loop realizations (one entry per collocation point), single-entry
/// otherwise. Algebra elements use the same shape: chi = phi, g = alpha.
template <class S>
struct GVal {
  std::vector<SqMat<S>> chi;
  std::vector<SqMat<S>> g;

  bool empty() const { return g.empty() && chi.empty(); }
};

template <class S>
GVal<S> operator+(const GVal<S>& a, const GVal<S>& b) {
  GVal<S> r = a;
  for (size_t i = 0; i < r.chi.size(); ++i) r.chi[i] += b.chi[i];
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] += b.g[i];
  return r;
}

template <class S>
GVal<S> operator-(const GVal<S>& a, const GVal<S>& b) {
  GVal<S> r = a;
  for (size_t i = 0; i < r.chi.size(); ++i) r.chi[i] -= b.chi[i];
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] -= b.g[i];
  return r;
}

template <class S>
GVal<S> operator*(const S& c, GVal<S> a) {
  for (auto& m : a.chi) m *= c;
  for (auto& m : a.g) m *= c;
  return a;
}

template <class S, class = std::enable_if_t<!std::is_same_v<S, double>>>
GVal<S> operator*(double c, GVal<S> a) {
  return scal<S>(c) * std::move(a);
}

template <class S>
GVal<S> operator-(const GVal<S>& a) {
  return scal<S>(-1.0) * a;
}

template <class TO, class FROM>
SqMat<TO> promote_mat(const SqMat<FROM>& m) {
  SqMat<TO> r(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) r(i, j) = promote_scalar<TO, FROM>(m(i, j));
  return r;
}

template <class TO, class FROM>
GVal<TO> promote_gval(const GVal<FROM>& v) {
  GVal<TO> r;
  r.chi.reserve(v.chi.size());
  r.g.reserve(v.g.size());
  for (const auto& m : v.chi) r.chi.push_back(promote_mat<TO, FROM>(m));
  for (const auto& m : v.g) r.g.push_back(promote_mat<TO, FROM>(m));
  return r;
}

template <class S>
auto value_mat(const SqMat<S>& m) {
  using V = decltype(value_of(S{}));
  SqMat<V> r(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) r(i, j) = value_of(m(i, j));
  return r;
}

/// strip all derivative slots
template <class S>
auto value_gval(const GVal<S>& v) {
  using V = decltype(value_of(S{}));
  GVal<V> r;
  r.chi.reserve(v.chi.size());
  r.g.reserve(v.g.size());
  for (const auto& m : v.chi) r.chi.push_back(value_mat(m));
  for (const auto& m : v.g) r.g.push_back(value_mat(m));
  return r;
}

/// value part of the top dual level only
template <class S>
GVal<S> top_value_gval(const GVal<Dual<S>>& v) {
  GVal<S> r;
  r.chi.reserve(v.chi.size());
  r.g.reserve(v.g.size());
  auto vpart = [](const SqMat<Dual<S>>& m) {
    SqMat<S> out(m.n());
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j) out(i, j) = m(i, j).v;
    return out;
  };
  for (const auto& m : v.chi) r.chi.push_back(vpart(m));
  for (const auto& m : v.g) r.g.push_back(vpart(m));
  return r;
}

/// derivative part (top dual level) of every entry
template <class S>
GVal<S> deriv_gval(const GVal<Dual<S>>& v) {
  GVal<S> r;
  r.chi.reserve(v.chi.size());
  r.g.reserve(v.g.size());
  auto dpart = [](const SqMat<Dual<S>>& m) {
    SqMat<S> out(m.n());
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j) out(i, j) = m(i, j).d;
    return out;
  };
  for (const auto& m : v.chi) r.chi.push_back(dpart(m));
  for (const auto& m : v.g) r.g.push_back(dpart(m));
  return r;
}

template <class S>
double gval_norm(const GVal<S>& v) {
  double s = 0;
  for (const auto& m : v.chi) { double f = m.frob_value(); s += f * f; }
  for (const auto& m : v.g) { double f = m.frob_value(); s += f * f; }
  return std::sqrt(s);
}

}  // namespace hdouble
