#pragma once

#include <functional>
#include <memory>

#include "hdouble/realization.hpp"

namespace hdouble {

/// Differentiable scalar function on group elements over base field B
/// (double or complex<double>). Evaluation is provided at the plain level
/// and under one, two or three nested tangent seeds, which is the nesting
/// depth needed by iterated-bracket residuals.
template <class B>
struct Obs {
  using S0 = B;
  using S1 = Dual<S0>;
  using S2 = Dual<S1>;
  using S3 = Dual<S2>;

  virtual ~Obs() = default;
  virtual S0 ev(const GVal<S0>&) const = 0;
  virtual S1 ev(const GVal<S1>&) const = 0;
  virtual S2 ev(const GVal<S2>&) const = 0;
  virtual S3 ev(const GVal<S3>&) const = 0;
};

template <class B>
using ObsPtr = std::shared_ptr<const Obs<B>>;

template <class B, class F>
struct FnObs final : Obs<B> {
  F f;
  explicit FnObs(F fn) : f(std::move(fn)) {}
  typename Obs<B>::S0 ev(const GVal<typename Obs<B>::S0>& k) const override { return f(k); }
  typename Obs<B>::S1 ev(const GVal<typename Obs<B>::S1>& k) const override { return f(k); }
  typename Obs<B>::S2 ev(const GVal<typename Obs<B>::S2>& k) const override { return f(k); }
  typename Obs<B>::S3 ev(const GVal<typename Obs<B>::S3>& k) const override { return f(k); }
};

template <class B, class F>
ObsPtr<B> make_obs(F f) {
  return std::make_shared<FnObs<B, F>>(std::move(f));
}

template <class B>
ObsPtr<B> const_obs(B c) {
  return make_obs<B>([c](const auto& k) {
    using S = typename std::decay_t<decltype(k.g[0](0, 0))>;
    (void)k;
    return promote_scalar<S, B>(c);
  });
}

template <class B>
ObsPtr<B> obs_sum(ObsPtr<B> a, ObsPtr<B> b) {
  return make_obs<B>([a, b](const auto& k) { return a->ev(k) + b->ev(k); });
}

template <class B>
ObsPtr<B> obs_prod(ObsPtr<B> a, ObsPtr<B> b) {
  return make_obs<B>([a, b](const auto& k) { return a->ev(k) * b->ev(k); });
}

template <class B>
ObsPtr<B> obs_scale(B c, ObsPtr<B> a) {
  return make_obs<B>([a, c](const auto& k) {
    using S = typename std::decay_t<decltype(a->ev(k))>;
    return promote_scalar<S, B>(c) * a->ev(k);
  });
}

// ---- group curves and directional derivatives -----------------------------

/// Id + eps*T as a dual-seeded group element (the exact first-order jet of
/// exp(sT) in the curve parameter).
template <class S, class B>
GVal<Dual<S>> curve_seed(const Realization& R, const GVal<B>& T) {
  using D = Dual<S>;
  GVal<D> e;
  e.g.reserve(R.npts);
  if (R.semidirect()) e.chi.reserve(R.npts);
  for (int p = 0; p < R.npts; ++p) {
    SqMat<D> m = SqMat<D>::identity(R.n);
    for (int i = 0; i < R.n; ++i)
      for (int j = 0; j < R.n; ++j) m(i, j).d = promote_scalar<S, B>(T.g[p](i, j));
    e.g.push_back(m);
    if (R.semidirect()) {
      SqMat<D> c = SqMat<D>::zero(R.n);
      for (int i = 0; i < R.n; ++i)
        for (int j = 0; j < R.n; ++j) c(i, j).d = promote_scalar<S, B>(T.chi[p](i, j));
      e.chi.push_back(c);
    }
  }
  return e;
}

/// jet of K exp(sT) at s = 0
template <class S, class B>
GVal<Dual<S>> curve_right(const Realization& R, const GVal<S>& K, const GVal<B>& T) {
  return multiply(R, promote_gval<Dual<S>>(K), curve_seed<S, B>(R, T));
}

/// jet of exp(sT) K at s = 0
template <class S, class B>
GVal<Dual<S>> curve_left(const Realization& R, const GVal<S>& K, const GVal<B>& T) {
  return multiply(R, curve_seed<S, B>(R, T), promote_gval<Dual<S>>(K));
}

/// (d/ds) f(K exp(sT)) at s = 0
template <class S, class B>
S right_deriv(const Realization& R, const Obs<B>& f, const GVal<S>& K, const GVal<B>& T) {
  return f.ev(curve_right(R, K, T)).d;
}

/// (d/ds) f(exp(sT) K) at s = 0
template <class S, class B>
S left_deriv(const Realization& R, const Obs<B>& f, const GVal<S>& K, const GVal<B>& T) {
  return f.ev(curve_left(R, K, T)).d;
}

/// Right-invariant Maurer-Cartan form of a map along the curve exp(sv) K:
/// d/ds [ m(K(s)) m(K(0))^{-1} ] at s = 0, an algebra element of the
/// target realization.
template <class S, class B, class M>
GVal<S> map_mc_right(const Realization& Rsrc, const Realization& Rtgt, M&& map,
                     const GVal<S>& K, const GVal<B>& v) {
  using D = Dual<S>;
  GVal<D> img = map(curve_left(Rsrc, K, v));
  GVal<S> base = top_value_gval(img);
  GVal<D> c = multiply(Rtgt, img, promote_gval<D>(inv(Rtgt, base)));
  return deriv_gval(c);
}

/// Left-invariant variant: d/ds [ m(K(0))^{-1} m(K(s)) ] at s = 0.
template <class S, class B, class M>
GVal<S> map_mc_left(const Realization& Rsrc, const Realization& Rtgt, M&& map,
                    const GVal<S>& K, const GVal<B>& v) {
  using D = Dual<S>;
  GVal<D> img = map(curve_left(Rsrc, K, v));
  GVal<S> base = top_value_gval(img);
  GVal<D> c = multiply(Rtgt, promote_gval<D>(inv(Rtgt, base)), img);
  return deriv_gval(c);
}

}  // namespace hdouble
