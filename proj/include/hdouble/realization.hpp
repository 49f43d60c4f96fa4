#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "hdouble/gval.hpp"

namespace hdouble {

/// Concrete group model shared by every construction here: either a plain
/// matrix group, or the semidirect product of a matrix group acting by Ad
/// on its own Lie algebra, possibly loop-valued on a collocation grid.
struct Realization {
  enum class Kind { Matrix, Semidirect };

  Kind kind = Kind::Matrix;
  int n = 0;      // matrix block size
  int npts = 1;   // collocation points (1 = not a loop)
  Eigen::MatrixXd dsigma;  // spectral derivative on the grid (loop only)

  bool loop() const { return npts > 1; }
  bool semidirect() const { return kind == Kind::Semidirect; }
};

/// Uniform grid on the circle, sigma_j in [-pi, pi).
inline std::vector<double> loop_grid(int npts) {
  std::vector<double> s(npts);
  for (int j = 0; j < npts; ++j) s[j] = -M_PI + 2.0 * M_PI * j / npts;
  return s;
}

/// Exact spectral differentiation matrix for trigonometric interpolants
/// on an even uniform grid.
inline Eigen::MatrixXd spectral_derivative(int npts) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(npts, npts);
  for (int j = 0; j < npts; ++j)
    for (int k = 0; k < npts; ++k) {
      if (j == k) continue;
      double sgn = ((j - k) % 2 == 0) ? 1.0 : -1.0;
      d(j, k) = 0.5 * sgn / std::tan(M_PI * (j - k) / npts);
    }
  return d;
}

inline Realization make_matrix_group(int n) {
  Realization r;
  r.kind = Realization::Kind::Matrix;
  r.n = n;
  return r;
}

inline Realization make_semidirect(int n, int npts = 1) {
  Realization r;
  r.kind = Realization::Kind::Semidirect;
  r.n = n;
  r.npts = npts;
  if (npts > 1) r.dsigma = spectral_derivative(npts);
  return r;
}

template <class S>
GVal<S> identity_el(const Realization& R) {
  GVal<S> e;
  e.g.assign(R.npts, SqMat<S>::identity(R.n));
  if (R.semidirect()) e.chi.assign(R.npts, SqMat<S>::zero(R.n));
  return e;
}

template <class S>
GVal<S> zero_alg(const Realization& R) {
  GVal<S> z;
  z.g.assign(R.npts, SqMat<S>::zero(R.n));
  if (R.semidirect()) z.chi.assign(R.npts, SqMat<S>::zero(R.n));
  return z;
}

/// entrywise spectral derivative of a grid of matrices
template <class S>
std::vector<SqMat<S>> dsigma_apply(const Realization& R, const std::vector<SqMat<S>>& f) {
  const int N = R.npts;
  std::vector<SqMat<S>> out(N, SqMat<S>::zero(R.n));
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      const double w = R.dsigma(j, k);
      if (w == 0.0) continue;
      out[j] += f[k] * scal<S>(w);
    }
  return out;
}

template <class S>
GVal<S> multiply(const Realization& R, const GVal<S>& a, const GVal<S>& b) {
  GVal<S> r;
  r.g.reserve(R.npts);
  if (!R.semidirect()) {
    for (int p = 0; p < R.npts; ++p) r.g.push_back(a.g[p] * b.g[p]);
    return r;
  }
  r.chi.reserve(R.npts);
  for (int p = 0; p < R.npts; ++p) {
    r.g.push_back(a.g[p] * b.g[p]);
    r.chi.push_back(a.chi[p] + a.g[p] * b.chi[p] * inverse(a.g[p]));
  }
  return r;
}

template <class S>
GVal<S> inv(const Realization& R, const GVal<S>& a) {
  GVal<S> r;
  r.g.reserve(R.npts);
  if (!R.semidirect()) {
    for (int p = 0; p < R.npts; ++p) r.g.push_back(inverse(a.g[p]));
    return r;
  }
  r.chi.reserve(R.npts);
  for (int p = 0; p < R.npts; ++p) {
    SqMat<S> gi = inverse(a.g[p]);
    r.g.push_back(gi);
    r.chi.push_back(-(gi * a.chi[p] * a.g[p]));
  }
  return r;
}

/// Lie bracket of algebra elements (pointwise on grids)
template <class S>
GVal<S> ad(const Realization& R, const GVal<S>& x, const GVal<S>& y) {
  GVal<S> r;
  r.g.reserve(R.npts);
  auto comm = [](const SqMat<S>& a, const SqMat<S>& b) { return a * b - b * a; };
  if (!R.semidirect()) {
    for (int p = 0; p < R.npts; ++p) r.g.push_back(comm(x.g[p], y.g[p]));
    return r;
  }
  r.chi.reserve(R.npts);
  for (int p = 0; p < R.npts; ++p) {
    r.g.push_back(comm(x.g[p], y.g[p]));
    r.chi.push_back(comm(x.g[p], y.chi[p]) + comm(x.chi[p], y.g[p]));
  }
  return r;
}

/// Adjoint action of a group element on an algebra element
template <class S>
GVal<S> Ad(const Realization& R, const GVal<S>& a, const GVal<S>& x) {
  GVal<S> r;
  r.g.reserve(R.npts);
  if (!R.semidirect()) {
    for (int p = 0; p < R.npts; ++p) r.g.push_back(a.g[p] * x.g[p] * inverse(a.g[p]));
    return r;
  }
  r.chi.reserve(R.npts);
  auto comm = [](const SqMat<S>& u, const SqMat<S>& v) { return u * v - v * u; };
  for (int p = 0; p < R.npts; ++p) {
    SqMat<S> adg = a.g[p] * x.g[p] * inverse(a.g[p]);
    SqMat<S> adphi = a.g[p] * x.chi[p] * inverse(a.g[p]);
    r.g.push_back(adg);
    r.chi.push_back(adphi + comm(a.chi[p], adg));
  }
  return r;
}

/// Group exponential of an algebra element. For semidirect pairs this uses
/// the faithful block representation [[alpha, phi],[0, alpha]].
template <class S>
GVal<S> exp_alg(const Realization& R, const GVal<S>& x) {
  GVal<S> r;
  r.g.reserve(R.npts);
  if (!R.semidirect()) {
    for (int p = 0; p < R.npts; ++p) r.g.push_back(matexp(x.g[p]));
    return r;
  }
  const int n = R.n;
  r.chi.reserve(R.npts);
  for (int p = 0; p < R.npts; ++p) {
    SqMat<S> blk(2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        blk(i, j) = x.g[p](i, j);
        blk(n + i, n + j) = x.g[p](i, j);
        blk(i, n + j) = x.chi[p](i, j);
      }
    SqMat<S> e = matexp(blk);
    SqMat<S> g(n), cg(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        g(i, j) = e(i, j);
        cg(i, j) = e(i, n + j);
      }
    r.g.push_back(g);
    r.chi.push_back(cg * inverse(g));
  }
  return r;
}

/// Invariant pairing. Matrix kind: Tr(xy). Semidirect: (phi|beta)+(psi|alpha)
/// with the loop quadrature average over the grid.
template <class S>
S pairing(const Realization& R, const GVal<S>& x, const GVal<S>& y) {
  S acc{};
  if (!R.semidirect()) {
    for (int p = 0; p < R.npts; ++p) acc += (x.g[p] * y.g[p]).trace();
  } else {
    for (int p = 0; p < R.npts; ++p)
      acc += (x.chi[p] * y.g[p]).trace() + (y.chi[p] * x.g[p]).trace();
  }
  if (R.npts > 1) acc = acc * scal<S>(1.0 / R.npts);
  return acc;
}

// ---------------------------------------------------------------------------

/// Metric-preserving twist automorphisms used by the concrete doubles.
struct Twist {
  enum class Kind {
    Identity,
    NegTranspose,  // (chi, g) -> (-chi^T, (g^{-1})^T)
    Cocycle,       // (chi, g) -> (chi + k dsigma(g) g^{-1}, g)
  };
  Kind kind = Kind::Identity;
  double k = 0.0;

  bool trivial() const { return kind == Kind::Identity; }
};

template <class S>
GVal<S> twist_group(const Realization& R, const Twist& t, const GVal<S>& a,
                    bool inverse_twist = false) {
  switch (t.kind) {
    case Twist::Kind::Identity:
      return a;
    case Twist::Kind::NegTranspose: {  // involutive
      GVal<S> r;
      r.chi.reserve(R.npts);
      r.g.reserve(R.npts);
      for (int p = 0; p < R.npts; ++p) {
        r.chi.push_back(-(a.chi[p].transposed()));
        r.g.push_back(inverse(a.g[p]).transposed());
      }
      return r;
    }
    case Twist::Kind::Cocycle: {
      const double k = inverse_twist ? -t.k : t.k;
      GVal<S> r = a;
      auto dg = dsigma_apply(R, a.g);
      for (int p = 0; p < R.npts; ++p)
        r.chi[p] += scal<S>(k) * (dg[p] * inverse(a.g[p]));
      return r;
    }
  }
  return a;
}

template <class S>
GVal<S> twist_alg(const Realization& R, const Twist& t, const GVal<S>& x,
                  bool inverse_twist = false) {
  switch (t.kind) {
    case Twist::Kind::Identity:
      return x;
    case Twist::Kind::NegTranspose: {
      GVal<S> r;
      r.chi.reserve(R.npts);
      r.g.reserve(R.npts);
      for (int p = 0; p < R.npts; ++p) {
        r.chi.push_back(-(x.chi[p].transposed()));
        r.g.push_back(-(x.g[p].transposed()));
      }
      return r;
    }
    case Twist::Kind::Cocycle: {
      const double k = inverse_twist ? -t.k : t.k;
      GVal<S> r = x;
      auto da = dsigma_apply(R, x.g);
      for (int p = 0; p < R.npts; ++p) r.chi[p] += scal<S>(k) * da[p];
      return r;
    }
  }
  return x;
}

}  // namespace hdouble
