#pragma once

#include "hdouble/obs.hpp"
#include "hdouble/rng.hpp"

namespace hdouble {

/// Observable given by an expression tree over the components of a
/// matrix-realization element: matrix words in chi, g and fixed constant
/// matrices, combined through arithmetic, trace, and exp/log of scalars.
/// Evaluation propagates whatever tangent seeds the element carries.
template <class B>
class ExprObs final : public Obs<B> {
 public:
  enum class MOp { Chi, G, ConstMat, Mul, Add, Neg, Transpose };
  enum class SOp { Const, Trace, Add, Sub, Mul, Div, Neg, Exp, Log };

  struct MNode {
    MOp op;
    int a = -1, b = -1;
    SqMat<B> cm;
  };
  struct SNode {
    SOp op;
    int a = -1, b = -1;  // scalar children
    int m = -1;          // matrix child (Trace)
    double c = 0;        // Const payload
  };

  int mat_chi() { return push_m({MOp::Chi}); }
  int mat_g() { return push_m({MOp::G}); }
  int mat_const(const SqMat<B>& m) {
    MNode n{MOp::ConstMat};
    n.cm = m;
    return push_m(std::move(n));
  }
  int mat_mul(int a, int b) { return push_m({MOp::Mul, a, b}); }
  int mat_add(int a, int b) { return push_m({MOp::Add, a, b}); }
  int mat_neg(int a) { return push_m({MOp::Neg, a}); }
  int mat_transpose(int a) { return push_m({MOp::Transpose, a}); }

  int s_const(double c) {
    SNode n{SOp::Const};
    n.c = c;
    return push_s(std::move(n));
  }
  int s_trace(int m) {
    SNode n{SOp::Trace};
    n.m = m;
    return push_s(std::move(n));
  }
  int s_add(int a, int b) { return push_s({SOp::Add, a, b}); }
  int s_sub(int a, int b) { return push_s({SOp::Sub, a, b}); }
  int s_mul(int a, int b) { return push_s({SOp::Mul, a, b}); }
  int s_div(int a, int b) { return push_s({SOp::Div, a, b}); }
  int s_neg(int a) { return push_s({SOp::Neg, a}); }
  int s_exp(int a) { return push_s({SOp::Exp, a}); }
  int s_log(int a) { return push_s({SOp::Log, a}); }

  void set_root(int s) { root_ = s; }

  typename Obs<B>::S0 ev(const GVal<typename Obs<B>::S0>& k) const override { return run(k); }
  typename Obs<B>::S1 ev(const GVal<typename Obs<B>::S1>& k) const override { return run(k); }
  typename Obs<B>::S2 ev(const GVal<typename Obs<B>::S2>& k) const override { return run(k); }
  typename Obs<B>::S3 ev(const GVal<typename Obs<B>::S3>& k) const override { return run(k); }

 private:
  std::vector<MNode> mnodes_;
  std::vector<SNode> snodes_;
  int root_ = -1;

  int push_m(MNode n) {
    mnodes_.push_back(std::move(n));
    return static_cast<int>(mnodes_.size()) - 1;
  }
  int push_s(SNode n) {
    snodes_.push_back(std::move(n));
    return static_cast<int>(snodes_.size()) - 1;
  }

  template <class S>
  SqMat<S> mval(int id, const GVal<S>& k) const {
    const MNode& n = mnodes_[id];
    switch (n.op) {
      case MOp::Chi: return k.chi.at(0);
      case MOp::G: return k.g.at(0);
      case MOp::ConstMat: return promote_mat<S>(n.cm);
      case MOp::Mul: return mval(n.a, k) * mval(n.b, k);
      case MOp::Add: return mval(n.a, k) + mval(n.b, k);
      case MOp::Neg: return -mval(n.a, k);
      case MOp::Transpose: return mval(n.a, k).transposed();
    }
    return SqMat<S>(0);
  }

  template <class S>
  S sval(int id, const GVal<S>& k) const {
    const SNode& n = snodes_[id];
    switch (n.op) {
      case SOp::Const: return scal<S>(n.c);
      case SOp::Trace: return mval(n.m, k).trace();
      case SOp::Add: return sval(n.a, k) + sval(n.b, k);
      case SOp::Sub: return sval(n.a, k) - sval(n.b, k);
      case SOp::Mul: return sval(n.a, k) * sval(n.b, k);
      case SOp::Div: return sval(n.a, k) / sval(n.b, k);
      case SOp::Neg: return -sval(n.a, k);
      case SOp::Exp: return exp(sval(n.a, k));
      case SOp::Log: return log(sval(n.a, k));
    }
    return S{};
  }

  template <class S>
  S run(const GVal<S>& k) const {
    return sval(root_, k);
  }
};

/// Random smooth observable on a matrix-realization double: a few trace
/// words plus a product of traces and a damped exponential term, all with
/// seeded coefficients. Polynomial enough to be benign, nonlinear enough
/// to exercise Leibniz and second derivatives.
template <class B>
ObsPtr<B> random_expr_obs(Rng& rng, const Realization& R, int terms = 3) {
  auto obs = std::make_shared<ExprObs<B>>();
  auto rand_const = [&] {
    SqMat<B> m(R.n);
    for (int i = 0; i < R.n; ++i)
      for (int j = 0; j < R.n; ++j) m(i, j) = scal<B>(rng.uniform(-1, 1));
    return obs->mat_const(m);
  };
  auto rand_word = [&] {
    int w = rand_const();
    int len = 1 + static_cast<int>(rng.uniform(0, 2.999));
    for (int l = 0; l < len; ++l) {
      double pick = rng.uniform(0, 1);
      int f;
      if (R.semidirect() && pick < 0.4) f = obs->mat_chi();
      else if (pick < 0.8) f = obs->mat_g();
      else f = rand_const();
      w = obs->mat_mul(w, f);
    }
    return obs->s_trace(w);
  };

  int acc = obs->s_mul(obs->s_const(rng.uniform(-1, 1)), rand_word());
  for (int t = 1; t < terms; ++t) {
    int term = obs->s_mul(obs->s_const(rng.uniform(-1, 1)), rand_word());
    acc = obs->s_add(acc, term);
  }
  // product of two traces
  acc = obs->s_add(acc, obs->s_mul(obs->s_const(rng.uniform(-0.5, 0.5)),
                                   obs->s_mul(rand_word(), rand_word())));
  // damped exponential of a trace
  acc = obs->s_add(acc, obs->s_exp(obs->s_mul(obs->s_const(0.1 * rng.uniform(-1, 1)), rand_word())));
  obs->set_root(acc);
  return obs;
}

}  // namespace hdouble
