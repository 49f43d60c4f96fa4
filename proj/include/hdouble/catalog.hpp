#pragma once

#include <optional>
#include <string>
#include <variant>

#include "hdouble/double_spec.hpp"

namespace hdouble {

// ---- expressions over a coordinate catalog ---------------------------------

/// Closed-form function of catalog coordinates. Used for the stored
/// coproduct components (which may contain exponentials of coordinates)
/// and for fundamental-bracket tables.
template <class B>
struct CExpr {
  enum class Op { Const, Coord, Add, Mul, Scale, Exp, Neg };
  Op op = Op::Const;
  B c{};
  int coord = -1;
  std::shared_ptr<const CExpr> a, b;

  template <class S>
  S eval(const std::vector<S>& x) const {
    switch (op) {
      case Op::Const: return promote_scalar<S, B>(c);
      case Op::Coord: return x[coord];
      case Op::Add: return a->template eval<S>(x) + b->template eval<S>(x);
      case Op::Mul: return a->template eval<S>(x) * b->template eval<S>(x);
      case Op::Scale: return promote_scalar<S, B>(c) * a->template eval<S>(x);
      case Op::Exp: return exp(a->template eval<S>(x));
      case Op::Neg: return -a->template eval<S>(x);
    }
    return S{};
  }
};

template <class B>
using CExprPtr = std::shared_ptr<const CExpr<B>>;

template <class B>
CExprPtr<B> ce_const(B v) {
  auto e = std::make_shared<CExpr<B>>();
  e->op = CExpr<B>::Op::Const;
  e->c = v;
  return e;
}
template <class B>
CExprPtr<B> ce_one() { return ce_const<B>(scal<B>(1.0)); }
template <class B>
CExprPtr<B> ce_coord(int i) {
  auto e = std::make_shared<CExpr<B>>();
  e->op = CExpr<B>::Op::Coord;
  e->coord = i;
  return e;
}
template <class B>
CExprPtr<B> ce_add(CExprPtr<B> a, CExprPtr<B> b) {
  auto e = std::make_shared<CExpr<B>>();
  e->op = CExpr<B>::Op::Add;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
template <class B>
CExprPtr<B> ce_mul(CExprPtr<B> a, CExprPtr<B> b) {
  auto e = std::make_shared<CExpr<B>>();
  e->op = CExpr<B>::Op::Mul;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
template <class B>
CExprPtr<B> ce_scale(B c, CExprPtr<B> a) {
  auto e = std::make_shared<CExpr<B>>();
  e->op = CExpr<B>::Op::Scale;
  e->c = c;
  e->a = std::move(a);
  return e;
}
template <class B>
CExprPtr<B> ce_exp(CExprPtr<B> a) {
  auto e = std::make_shared<CExpr<B>>();
  e->op = CExpr<B>::Op::Exp;
  e->a = std::move(a);
  return e;
}
template <class B>
CExprPtr<B> ce_neg(CExprPtr<B> a) {
  auto e = std::make_shared<CExpr<B>>();
  e->op = CExpr<B>::Op::Neg;
  e->a = std::move(a);
  return e;
}
/// exp(sum_i coef_i x_i)
template <class B>
CExprPtr<B> ce_exp_lin(const std::vector<std::pair<B, int>>& terms) {
  CExprPtr<B> s = ce_const<B>(B{});
  for (const auto& [c, i] : terms) s = ce_add(s, ce_scale(c, ce_coord<B>(i)));
  return ce_exp(s);
}

// ---- catalog ----------------------------------------------------------------

/// Coordinate functions on a cosymmetry group realized pointwise: the
/// antipode is evaluation at the inverse, the counit evaluation at the
/// identity, and the coproduct evaluation at products. Selected
/// coordinates may carry an explicit finite coproduct expansion and a
/// fundamental-bracket table; both are closed-form expressions in the
/// coordinates.
template <class B>
struct CoordCatalog {
  const Realization* Rg = nullptr;
  std::vector<std::string> names;
  std::vector<ObsPtr<B>> coord;

  struct Coproduct {
    std::vector<std::pair<CExprPtr<B>, CExprPtr<B>>> terms;
  };
  std::vector<std::optional<Coproduct>> coproduct;

  /// fundamental brackets pi(i,j) = {x_i, x_j}; empty when no closed form
  std::vector<std::vector<CExprPtr<B>>> pi;

  /// sampler of group elements for pointwise checks
  std::function<GVal<B>(Rng&)> sample;

  int dim() const { return static_cast<int>(coord.size()); }

  template <class S>
  std::vector<S> coords_at(const GVal<S>& b) const {
    std::vector<S> out(coord.size());
    for (size_t i = 0; i < coord.size(); ++i) out[i] = coord[i]->ev(b);
    return out;
  }

  /// wrap a coordinate expression as an observable on the group
  ObsPtr<B> expr_obs(CExprPtr<B> e) const {
    const CoordCatalog* self = this;
    return make_obs<B>([self, e](const auto& b) {
      auto x = self->coords_at(b);
      return e->template eval<std::decay_t<decltype(x[0])>>(x);
    });
  }

  bool has_pi() const { return !pi.empty(); }
};

/// {E, F}(b) from the fundamental table by the Leibniz/chain rule:
/// sum_{i<j} pi_ij (dE/dx_i dF/dx_j - dE/dx_j dF/dx_i), partials taken by
/// coordinate-space tangent seeds.
template <class S, class B>
S catalog_bracket(const CoordCatalog<B>& C, const CExprPtr<B>& E, const CExprPtr<B>& F,
                  const GVal<S>& b) {
  const int d = C.dim();
  std::vector<S> x = C.coords_at(b);
  using DS = Dual<S>;
  std::vector<DS> seeded(d);
  for (int i = 0; i < d; ++i) seeded[i] = DS(x[i]);

  std::vector<S> dE(d), dF(d);
  for (int i = 0; i < d; ++i) {
    seeded[i].d = scal<S>(1.0);
    dE[i] = E->template eval<DS>(seeded).d;
    dF[i] = F->template eval<DS>(seeded).d;
    seeded[i].d = S{};
  }
  S acc{};
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      if (!C.pi[i][j]) continue;
      S pij = C.pi[i][j]->template eval<S>(x);
      acc += pij * (dE[i] * dF[j] - dE[j] * dF[i]);
    }
  return acc;
}

/// bracket of two coordinate expressions as an observable on the group
template <class B>
ObsPtr<B> catalog_bracket_obs(const CoordCatalog<B>* C, CExprPtr<B> E, CExprPtr<B> F) {
  return make_obs<B>([C, E, F](const auto& b) { return catalog_bracket(*C, E, F, b); });
}

// ---- pointwise Hopf structure -----------------------------------------------

/// counit: evaluation at the unit element
template <class B>
B counit(const CoordCatalog<B>& C, const ObsPtr<B>& y) {
  return y->ev(identity_el<B>(*C.Rg));
}

/// antipode realized as composition with the group inverse
template <class B>
ObsPtr<B> antipode_obs(const CoordCatalog<B>& C, ObsPtr<B> y) {
  const Realization* R = C.Rg;
  return make_obs<B>([R, y](const auto& b) { return y->ev(inv(*R, b)); });
}

/// y(b b0^{-1}): the pointwise realization of sum y'(b) S(y'')(b0).
/// The translation parameter may itself carry tangent seeds; it is stored
/// at its own level and promoted to the evaluation level.
template <class B>
class TranslateObs final : public Obs<B> {
 public:
  using S0 = typename Obs<B>::S0;
  using S1 = typename Obs<B>::S1;
  using S2 = typename Obs<B>::S2;
  using S3 = typename Obs<B>::S3;

  TranslateObs(const Realization* R, ObsPtr<B> y,
               std::variant<GVal<S0>, GVal<S1>, GVal<S2>, GVal<S3>> b0inv)
      : R_(R), y_(std::move(y)), b0inv_(std::move(b0inv)) {}

  S0 ev(const GVal<S0>& b) const override { return go(b); }
  S1 ev(const GVal<S1>& b) const override { return go(b); }
  S2 ev(const GVal<S2>& b) const override { return go(b); }
  S3 ev(const GVal<S3>& b) const override { return go(b); }

 private:
  const Realization* R_;
  ObsPtr<B> y_;
  std::variant<GVal<S0>, GVal<S1>, GVal<S2>, GVal<S3>> b0inv_;

  template <class S>
  S go(const GVal<S>& b) const {
    S out{};
    std::visit(
        [&](const auto& stored) {
          using F = std::decay_t<decltype(stored.g[0](0, 0))>;
          if constexpr (ScalarTraits<S>::depth >= ScalarTraits<F>::depth) {
            out = y_->ev(multiply(*R_, b, promote_gval<S>(stored)));
          } else {
            throw std::logic_error("translation parameter deeper than evaluation level");
          }
        },
        b0inv_);
    return out;
  }
};

template <class B, class S>
ObsPtr<B> sweedler_translate(const Realization& R, ObsPtr<B> y, const GVal<S>& b0) {
  using T = TranslateObs<B>;
  return std::make_shared<T>(&R, std::move(y),
                             std::variant<GVal<typename Obs<B>::S0>, GVal<typename Obs<B>::S1>,
                                          GVal<typename Obs<B>::S2>, GVal<typename Obs<B>::S3>>(
                                 inv(R, b0)));
}

/// d/ds x(exp(s t)) at s = 0: the epsilon-derivation attached to t
template <class B>
B epsilon_derivation(const Realization& R, const GVal<B>& t, const Obs<B>& x) {
  GVal<Dual<B>> jet = exp_alg(R, curve_seed_alg(R, t));
  return x.ev(jet).d;
}

/// algebra element with a unit tangent seed, as a dual-valued element
template <class B>
GVal<Dual<B>> curve_seed_alg(const Realization& R, const GVal<B>& t) {
  using D = Dual<B>;
  GVal<D> x = zero_alg<D>(R);
  for (int p = 0; p < R.npts; ++p) {
    for (int i = 0; i < R.n; ++i)
      for (int j = 0; j < R.n; ++j) {
        x.g[p](i, j) = D(B{}, t.g[p](i, j));
        if (R.semidirect()) x.chi[p](i, j) = D(B{}, t.chi[p](i, j));
      }
  }
  return x;
}

// ---- catalog-level verification ----------------------------------------------

struct HopfReport {
  double coproduct = 0;     // stored expansion vs group law
  double coassoc = 0;       // x((ab)c) vs x(a(bc)) through evaluators
  double antipode = 0;      // x(b b^{-1}) vs x(e), both sides
  int coords_with_coproduct = 0;
};

template <class B>
HopfReport hopf_axiom_check(const CoordCatalog<B>& C, Rng& rng, int samples) {
  HopfReport rep;
  const Realization& R = *C.Rg;
  GVal<B> e = identity_el<B>(R);
  for (int s = 0; s < samples; ++s) {
    GVal<B> b1 = C.sample(rng), b2 = C.sample(rng), b3 = C.sample(rng);
    GVal<B> b12 = multiply(R, b1, b2);
    auto x1 = C.coords_at(b1);
    auto x2 = C.coords_at(b2);
    auto x12 = C.coords_at(b12);
    for (int i = 0; i < C.dim(); ++i) {
      if (C.coproduct[i]) {
        B acc{};
        for (const auto& [u, v] : C.coproduct[i]->terms)
          acc += u->template eval<B>(x1) * v->template eval<B>(x2);
        rep.coproduct = std::max(rep.coproduct, mag(acc - x12[i]));
      }
      B l = C.coord[i]->ev(multiply(R, b12, b3));
      B r = C.coord[i]->ev(multiply(R, b1, multiply(R, b2, b3)));
      rep.coassoc = std::max(rep.coassoc, mag(l - r));
      B idl = C.coord[i]->ev(multiply(R, b1, inv(R, b1)));
      B idr = C.coord[i]->ev(multiply(R, inv(R, b1), b1));
      B ce = C.coord[i]->ev(e);
      rep.antipode = std::max(rep.antipode, std::max(mag(idl - ce), mag(idr - ce)));
    }
  }
  for (int i = 0; i < C.dim(); ++i)
    if (C.coproduct[i]) ++rep.coords_with_coproduct;
  return rep;
}

struct PoissonLieReport {
  double eq1 = 0;       // coproduct compatibility of the bracket
  double antipode = 0;  // S{x,y} = -{Sx, Sy}
  double counit = 0;    // eps{x,y} = 0
  int pairs_checked = 0;
  int pairs_skipped = 0;
};

/// Pointwise check of the multiplicativity of a Poisson-Lie bracket and of
/// its antipode/counit behaviour. `geom_bracket` evaluates the bracket of
/// two arbitrary observables at a point (used for the antipode identity);
/// the Sweedler expansions use the catalog's fundamental table.
template <class B>
PoissonLieReport poisson_lie_property_check(
    const CoordCatalog<B>& C,
    const std::function<B(const ObsPtr<B>&, const ObsPtr<B>&, const GVal<B>&)>& geom_bracket,
    Rng& rng, int samples) {
  PoissonLieReport rep;
  const Realization& R = *C.Rg;
  for (int i = 0; i < C.dim(); ++i)
    for (int j = i + 1; j < C.dim(); ++j) {
      if (!C.coproduct[i] || !C.coproduct[j] || !C.has_pi()) {
        ++rep.pairs_skipped;
        continue;
      }
      ++rep.pairs_checked;
      auto xi = ce_coord<B>(i), xj = ce_coord<B>(j);
      for (int s = 0; s < samples; ++s) {
        GVal<B> b1 = C.sample(rng), b2 = C.sample(rng);
        auto c1 = C.coords_at(b1);
        auto c2 = C.coords_at(b2);
        // LHS: {x_i, x_j}(b1 b2)
        auto c12 = C.coords_at(multiply(R, b1, b2));
        B lhs = catalog_bracket(C, xi, xj, multiply(R, b1, b2));
        (void)c12;
        // RHS: sum {u_p, u_q}(b1) (v_p v_q)(b2) + (u_p u_q)(b1) {v_p, v_q}(b2)
        B rhs{};
        for (const auto& [up, vp] : C.coproduct[i]->terms)
          for (const auto& [uq, vq] : C.coproduct[j]->terms) {
            rhs += catalog_bracket(C, up, uq, b1) * vp->template eval<B>(c2) *
                   vq->template eval<B>(c2);
            rhs += up->template eval<B>(c1) * uq->template eval<B>(c1) *
                   catalog_bracket(C, vp, vq, b2);
          }
        rep.eq1 = std::max(rep.eq1, mag(lhs - rhs));

        // antipode: {x,y}(b^{-1}) = -{x o inv, y o inv}(b)
        ObsPtr<B> sx = antipode_obs(C, C.expr_obs(xi));
        ObsPtr<B> sy = antipode_obs(C, C.expr_obs(xj));
        B l2 = catalog_bracket(C, xi, xj, inv(R, b1));
        B r2 = geom_bracket(sx, sy, b1);
        rep.antipode = std::max(rep.antipode, mag(l2 + r2));
      }
      // counit annihilates brackets
      rep.counit = std::max(rep.counit,
                            mag(catalog_bracket(C, xi, xj, identity_el<B>(R))));
    }
  return rep;
}

}  // namespace hdouble
