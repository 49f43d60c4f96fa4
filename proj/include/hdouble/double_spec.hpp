#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "hdouble/lie_algebra.hpp"
#include "hdouble/obs.hpp"

namespace hdouble {

template <class B>
using MatX = Eigen::Matrix<B, Eigen::Dynamic, Eigen::Dynamic>;
template <class B>
using VecX = Eigen::Matrix<B, Eigen::Dynamic, 1>;

/// bilinear dot (no conjugation, unlike Eigen's dot on complex types)
template <class B>
B bdot(const VecX<B>& a, const VecX<B>& b) {
  B acc{};
  for (int i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// A twisted double: realization of D, the twist, and dual bases
/// T^i of Lie(G) and t_i of Lie(B) with (T^i, t_j) = delta^i_j and both
/// halves isotropic. Tangent vectors are handled as right-frame
/// coordinates: the coordinate vector v represents the curve exp(s v) K,
/// ordered (T-coefficients, t-coefficients).
template <class B>
struct DoubleSpec {
  Realization R;
  Twist twist;
  std::vector<GVal<B>> basisG;  // T^i
  std::vector<GVal<B>> basisB;  // t_i
  std::vector<GVal<B>> kG, kB;    // twist images of T^i, t_i
  std::vector<GVal<B>> kGi, kBi;  // inverse-twist images

  /// optional fast coordinate map (defaults to dual-pairing extraction)
  std::function<VecX<B>(const GVal<B>&)> coords_fn;

  int half() const { return static_cast<int>(basisG.size()); }
  int dim() const { return 2 * half(); }

  void finish() {
    kG.clear(); kB.clear(); kGi.clear(); kBi.clear();
    for (const auto& t : basisG) {
      kG.push_back(twist_alg(R, twist, t));
      kGi.push_back(twist_alg(R, twist, t, true));
    }
    for (const auto& t : basisB) {
      kB.push_back(twist_alg(R, twist, t));
      kBi.push_back(twist_alg(R, twist, t, true));
    }
  }

  /// coordinates via duality: X = (X, t_i) T^i + (X, T^i) t_i
  VecX<B> coords(const GVal<B>& x) const {
    if (coords_fn) return coords_fn(x);
    const int n = half();
    VecX<B> v(2 * n);
    for (int i = 0; i < n; ++i) {
      v[i] = pairing(R, x, basisB[i]);
      v[n + i] = pairing(R, x, basisG[i]);
    }
    return v;
  }

  GVal<B> from_coords(const VecX<B>& v) const {
    const int n = half();
    GVal<B> x = zero_alg<B>(R);
    for (int i = 0; i < n; ++i) {
      x = x + v[i] * basisG[i];
      x = x + v[n + i] * basisB[i];
    }
    return x;
  }

  /// Gram matrix of the pairing in the (T, t) frame; exactly the duality
  /// block structure when the basis invariants hold.
  Eigen::MatrixXd gram() const {
    const int n = half();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      g(i, n + i) = 1.0;
      g(n + i, i) = 1.0;
    }
    return g;
  }
};

template <class B>
struct DualityReport {
  double duality = 0;    // max |(T^i,t_j) - delta|
  double isotropyG = 0;  // max |(T^i,T^j)|
  double isotropyB = 0;  // max |(t_i,t_j)|
  double twist_metric = 0;  // max |(kx,ky)-(x,y)| over sampled pairs
};

template <class B>
DualityReport<B> duality_residuals(const DoubleSpec<B>& D, Rng* rng = nullptr, int trials = 20) {
  DualityReport<B> rep;
  const int n = D.half();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double dl = mag(pairing(D.R, D.basisG[i], D.basisB[j]) - scal<B>(i == j ? 1.0 : 0.0));
      rep.duality = std::max(rep.duality, dl);
      rep.isotropyG = std::max(rep.isotropyG, mag(pairing(D.R, D.basisG[i], D.basisG[j])));
      rep.isotropyB = std::max(rep.isotropyB, mag(pairing(D.R, D.basisB[i], D.basisB[j])));
    }
  if (rng) {
    std::vector<GVal<B>> all = D.basisG;
    all.insert(all.end(), D.basisB.begin(), D.basisB.end());
    for (int t = 0; t < trials; ++t) {
      GVal<B> x = rng->alg(D.R, all), y = rng->alg(D.R, all);
      B before = pairing(D.R, x, y);
      B after = pairing(D.R, twist_alg(D.R, D.twist, x), twist_alg(D.R, D.twist, y));
      rep.twist_metric = std::max(rep.twist_metric, mag(after - before));
    }
  }
  return rep;
}

// ---- anomaly matrices ------------------------------------------------------

template <class B>
struct AnomalyMatrices {
  MatX<B> P, Q, M;      // for the twist
  MatX<B> Pi, Qi, Mi;   // for its inverse
};

/// P_i^j = (k(t_i), T^j), Q^{ij} = (k(T^i), T^j), M = Q P^{-1}.
template <class B>
AnomalyMatrices<B> anomaly_matrices(const DoubleSpec<B>& D) {
  const int n = D.half();
  AnomalyMatrices<B> a;
  a.P.resize(n, n); a.Q.resize(n, n); a.Pi.resize(n, n); a.Qi.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a.P(i, j) = pairing(D.R, D.kB[i], D.basisG[j]);
      a.Q(i, j) = pairing(D.R, D.kG[i], D.basisG[j]);
      a.Pi(i, j) = pairing(D.R, D.kBi[i], D.basisG[j]);
      a.Qi(i, j) = pairing(D.R, D.kGi[i], D.basisG[j]);
    }
  Eigen::FullPivLU<MatX<B>> lp(a.P), lpi(a.Pi);
  if (!lp.isInvertible() || !lpi.isInvertible())
    throw std::runtime_error("twist not decomposable at the infinitesimal level (P singular)");
  a.M = a.Q * lp.inverse();
  a.Mi = a.Qi * lpi.inverse();
  return a;
}

// ---- the Semenov-Tian-Shansky bracket --------------------------------------

/// Eq-(6)-style bracket by direct summation over the dual bases.
template <class S, class B>
S sts_bracket(const DoubleSpec<B>& D, const Obs<B>& f, const Obs<B>& g, const GVal<S>& K) {
  const int n = D.half();
  S acc{};
  for (int i = 0; i < n; ++i) {
    acc += right_deriv(D.R, f, K, D.basisG[i]) * right_deriv(D.R, g, K, D.basisB[i]);
    acc -= left_deriv(D.R, f, K, D.kB[i]) * left_deriv(D.R, g, K, D.kG[i]);
  }
  return acc;
}

/// Per-point workbench: transported frames, the bracket matrix A in the
/// right frame, and cached curve jets so that many observables and
/// iterated brackets at one point cost little.
template <class B>
struct STSFrame {
  const DoubleSpec<B>* D;
  GVal<B> K;
  MatX<B> A;                       // {f,g} = Gf^T A Gg
  std::vector<MatX<B>> dA;         // frame derivative of A (if requested)
  std::vector<GVal<Dual<B>>> curves;              // exp(s E_a) K jets
  std::vector<GVal<Dual<Dual<B>>>> curves2;       // exp(t E_b) exp(s E_a) K jets (row-major, if requested)

  int dim() const { return D->dim(); }

  const GVal<B>& frame_dir(int a) const {
    const int n = D->half();
    return a < n ? D->basisG[a] : D->basisB[a - n];
  }

  /// gradient of f in the right frame
  VecX<B> grad(const Obs<B>& f) const {
    const int m = dim();
    VecX<B> v(m);
    for (int a = 0; a < m; ++a) v[a] = f.ev(curves[a]).d;
    return v;
  }

  /// moving-frame second derivatives H[a][b] = d_s d_t f(exp(t E_b) exp(s E_a) K)
  MatX<B> hess(const Obs<B>& f) const {
    const int m = dim();
    MatX<B> h(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) h(a, b) = f.ev(curves2[a * m + b]).d.d;
    return h;
  }

  B bracket(const VecX<B>& gf, const VecX<B>& gg) const { return bdot<B>(gf, A * gg); }

  B bracket(const Obs<B>& f, const Obs<B>& g) const { return bracket(grad(f), grad(g)); }

  /// right-frame gradient of the function K' -> {f, g}(K')
  VecX<B> bracket_grad(const VecX<B>& gf, const MatX<B>& hf, const VecX<B>& gg,
                       const MatX<B>& hg) const {
    const int m = dim();
    VecX<B> out(m);
    VecX<B> ag = A * gg;
    VecX<B> atf = A.transpose() * gf;
    for (int a = 0; a < m; ++a) {
      B s{};
      for (int b = 0; b < m; ++b)
        s += hf(a, b) * ag[b] + hg(a, b) * atf[b];
      s += bdot<B>(gf, dA[a] * gg);
      out[a] = s;
    }
    return out;
  }
};

template <class B>
STSFrame<B> make_frame(const DoubleSpec<B>& D, const GVal<B>& K, bool second_order = false,
                       bool with_dA = false) {
  STSFrame<B> F;
  F.D = &D;
  F.K = K;
  const int n = D.half();
  const int m = 2 * n;

  std::vector<VecX<B>> cAdT(n), cAdt(n), ckB(n), ckG(n);
  std::vector<GVal<B>> adT(n), adt(n);
  for (int i = 0; i < n; ++i) {
    adT[i] = Ad(D.R, K, D.basisG[i]);
    adt[i] = Ad(D.R, K, D.basisB[i]);
    cAdT[i] = D.coords(adT[i]);
    cAdt[i] = D.coords(adt[i]);
    ckB[i] = D.coords(D.kB[i]);
    ckG[i] = D.coords(D.kG[i]);
  }
  F.A = MatX<B>::Zero(m, m);
  for (int i = 0; i < n; ++i)
    F.A += cAdT[i] * cAdt[i].transpose() - ckB[i] * ckG[i].transpose();

  F.curves.reserve(m);
  for (int a = 0; a < m; ++a) F.curves.push_back(curve_left(D.R, K, F.frame_dir(a)));

  if (second_order) {
    F.curves2.reserve(size_t(m) * m);
    for (int a = 0; a < m; ++a) {
      const auto& inner = F.curves[a];
      for (int b = 0; b < m; ++b) F.curves2.push_back(curve_left(D.R, inner, F.frame_dir(b)));
    }
  }

  if (with_dA) {
    F.dA.assign(m, MatX<B>::Zero(m, m));
    for (int a = 0; a < m; ++a) {
      const GVal<B>& e = F.frame_dir(a);
      for (int i = 0; i < n; ++i) {
        VecX<B> dT = D.coords(ad(D.R, e, adT[i]));
        VecX<B> dt = D.coords(ad(D.R, e, adt[i]));
        F.dA[a] += dT * cAdt[i].transpose() + cAdT[i] * dt.transpose();
      }
    }
  }
  return F;
}

/// Jacobi residual {{f,g},h} + {{g,h},f} + {{h,f},g} at the frame's point.
template <class B>
B jacobi_residual(const STSFrame<B>& F, const Obs<B>& f, const Obs<B>& g, const Obs<B>& h) {
  VecX<B> gf = F.grad(f), gg = F.grad(g), gh = F.grad(h);
  MatX<B> hf = F.hess(f), hg = F.hess(g), hh = F.hess(h);
  B r{};
  r += F.bracket(F.bracket_grad(gf, hf, gg, hg), gh);
  r += F.bracket(F.bracket_grad(gg, hg, gh, hh), gf);
  r += F.bracket(F.bracket_grad(gh, hh, gf, hf), gg);
  return r;
}

// ---- projectors, symplectic form, bivector ---------------------------------

template <class B>
struct ProjectorSet {
  MatX<B> pi_LRt;  // image R_{K*} k(Lie B), kernel L_{K*} Lie G
  MatX<B> pi_LtR;  // image R_{K*} k(Lie G), kernel L_{K*} Lie B
  double cond = 0;  // worst conditioning of the two frame solves
};

/// Assemble the oblique projectors of the two decompositions at K.
template <class B>
ProjectorSet<B> projectors(const DoubleSpec<B>& D, const GVal<B>& K) {
  const int n = D.half();
  const int m = 2 * n;
  ProjectorSet<B> P;

  auto build = [&](const std::vector<GVal<B>>& kernel_base, bool kernel_is_G,
                   const std::vector<GVal<B>>& image, MatX<B>& out) {
    MatX<B> M(m, m);
    for (int i = 0; i < n; ++i) {
      GVal<B> kv = Ad(D.R, K, kernel_base[i]);
      M.col(i) = D.coords(kv);
      M.col(n + i) = D.coords(image[i]);
    }
    (void)kernel_is_G;
    Eigen::FullPivLU<MatX<B>> lu(M);
    if (!lu.isInvertible()) throw std::runtime_error("point outside the decomposable locus");
    MatX<B> Minv = lu.inverse();
    // conditioning estimate
    P.cond = std::max(P.cond, M.norm() * Minv.norm());
    // projector onto the image block
    MatX<B> sel = MatX<B>::Zero(m, m);
    for (int i = 0; i < n; ++i) sel(n + i, n + i) = 1.0;
    out = M * sel * Minv;
  };

  build(D.basisG, true, D.kB, P.pi_LRt);
  build(D.basisB, false, D.kG, P.pi_LtR);
  return P;
}

/// omega(t, u) = (t, (Pi_LtR - Pi_LRt) u) on right-frame coordinates
template <class B>
B symplectic_form(const DoubleSpec<B>& D, const ProjectorSet<B>& P, const VecX<B>& t,
                  const VecX<B>& u) {
  Eigen::MatrixXd G = D.gram();
  VecX<B> w = (P.pi_LtR - P.pi_LRt) * u;
  B acc{};
  for (int i = 0; i < D.dim(); ++i)
    for (int j = 0; j < D.dim(); ++j)
      if (G(i, j) != 0.0) acc += t[i] * scal<B>(G(i, j)) * w[j];
  return acc;
}

/// Poisson bivector in the right frame (the frame matrix A).
template <class B>
MatX<B> bivector(const DoubleSpec<B>& D, const GVal<B>& K) {
  return make_frame(D, K).A;
}

/// inversion identity: alpha(. , omega(. , u)) = u, as a matrix residual
template <class B>
double inversion_residual(const DoubleSpec<B>& D, const GVal<B>& K) {
  ProjectorSet<B> P = projectors(D, K);
  MatX<B> A = bivector(D, K);
  MatX<B> G = D.gram().template cast<B>();
  MatX<B> lhs = A * G * (P.pi_LtR - P.pi_LRt);
  MatX<B> id = MatX<B>::Identity(D.dim(), D.dim());
  return (lhs - id).cwiseAbs().maxCoeff();
}

// ---- Schouten bracket of the r-matrices -------------------------------------

struct SchoutenReport {
  double equality = 0;    // max |[r^k, r^k]_S - [r, r]_S|
  double invariance = 0;  // max |ad_X [r,r]_S|
};

/// [r,r]_S for r = (1/2) T^i wedge t_i and its twist image, contracted via
/// the structure constants of Lie(D) in the (T, t) basis.
template <class B>
SchoutenReport schouten_check(const DoubleSpec<B>& D, const LieAlgebra<B>& LD) {
  const int m = D.dim();
  const int n = D.half();

  auto build_r = [&](bool twisted) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(m, m);
    if (!twisted) {
      for (int i = 0; i < n; ++i) {
        r(i, n + i) += 0.5;
        r(n + i, i) -= 0.5;
      }
    } else {
      for (int i = 0; i < n; ++i) {
        VecX<B> x = D.coords(D.kG[i]), y = D.coords(D.kB[i]);
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b) {
            double xa, yb, ya, xb;
            if constexpr (std::is_same_v<B, double>) {
              xa = x[a]; yb = y[b]; ya = y[a]; xb = x[b];
            } else {
              xa = x[a].real(); yb = y[b].real(); ya = y[a].real(); xb = x[b].real();
            }
            r(a, b) += 0.5 * (xa * yb - ya * xb);
          }
      }
    }
    return r;
  };

  auto schouten = [&](const Eigen::MatrixXd& r) {
    std::vector<Eigen::MatrixXd> S(m, Eigen::MatrixXd::Zero(m, m));  // S[p](q,s)
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        for (int s = 0; s < m; ++s) {
          double acc = 0;
          for (int a = 0; a < m; ++a)
            for (int c = 0; c < m; ++c) {
              acc += LD.c[p](a, c) * r(a, q) * r(c, s);   // [r12, r13]
              acc += r(p, a) * LD.c[q](a, c) * r(c, s);   // [r12, r23]
              acc += r(p, a) * r(q, c) * LD.c[s](a, c);   // [r13, r23]
            }
          S[p](q, s) = acc;
        }
    return S;
  };

  auto S0 = schouten(build_r(false));
  auto S1 = schouten(build_r(true));

  SchoutenReport rep;
  for (int p = 0; p < m; ++p)
    rep.equality = std::max(rep.equality, (S1[p] - S0[p]).cwiseAbs().maxCoeff());

  // infinitesimal invariance: ad_x acts on each tensor slot
  for (int x = 0; x < m; ++x) {
    double worst = 0;
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        for (int s = 0; s < m; ++s) {
          double acc = 0;
          for (int a = 0; a < m; ++a)
            acc += LD.c[p](x, a) * S0[a](q, s) + LD.c[q](x, a) * S0[p](a, s) +
                   LD.c[s](x, a) * S0[p](q, a);
          worst = std::max(worst, std::abs(acc));
        }
    rep.invariance = std::max(rep.invariance, worst);
  }
  return rep;
}

}  // namespace hdouble
