#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdouble/obs.hpp"
#include "hdouble/rng.hpp"

namespace hdouble {

template <class B>
int flat_dim(const Realization& R) {
  constexpr int per = std::is_same_v<B, double> ? 1 : 2;
  int blocks = R.semidirect() ? 2 : 1;
  return per * blocks * R.npts * R.n * R.n;
}

template <class B>
Eigen::VectorXd flatten(const Realization& R, const GVal<B>& x) {
  Eigen::VectorXd v(flat_dim<B>(R));
  int at = 0;
  auto put = [&](const SqMat<B>& m) {
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j) {
        if constexpr (std::is_same_v<B, double>) {
          v[at++] = m(i, j);
        } else {
          v[at++] = m(i, j).real();
          v[at++] = m(i, j).imag();
        }
      }
  };
  for (const auto& m : x.chi) put(m);
  for (const auto& m : x.g) put(m);
  return v;
}

/// Finite-dimensional Lie algebra presented by a basis of realization
/// elements, the invariant pairing restricted to it, and the structure
/// constants [e_i, e_j] = c^k_{ij} e_k recovered by least squares.
template <class B>
struct LieAlgebra {
  const Realization* R = nullptr;
  std::vector<GVal<B>> basis;
  Eigen::MatrixXd form;              // (e_i, e_j), real parts
  std::vector<Eigen::MatrixXd> c;    // c[k](i,j)
  double lsq_residual = 0.0;

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Solve for structure constants; throws if the basis is not closed under
/// the bracket to the requested residual.
template <class B>
LieAlgebra<B> make_lie_algebra(const Realization& R, std::vector<GVal<B>> basis,
                               double closure_tol = 1e-10) {
  LieAlgebra<B> L;
  L.R = &R;
  L.basis = std::move(basis);
  const int d = L.dim();

  Eigen::MatrixXd A(flat_dim<B>(R), d);
  for (int i = 0; i < d; ++i) A.col(i) = flatten(R, L.basis[i]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < d) throw std::runtime_error("lie algebra basis not linearly independent");

  L.form.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      B p = pairing(R, L.basis[i], L.basis[j]);
      if constexpr (std::is_same_v<B, double>) L.form(i, j) = p;
      else L.form(i, j) = p.real();
    }

  L.c.assign(d, Eigen::MatrixXd::Zero(d, d));
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Eigen::VectorXd rhs = flatten(R, ad(R, L.basis[i], L.basis[j]));
      Eigen::VectorXd x = qr.solve(rhs);
      worst = std::max(worst, (A * x - rhs).norm());
      for (int k = 0; k < d; ++k) {
        L.c[k](i, j) = x[k];
        L.c[k](j, i) = -x[k];
      }
    }
  L.lsq_residual = worst;
  if (worst > closure_tol)
    throw std::runtime_error("basis not closed under bracket, residual " + std::to_string(worst));
  return L;
}

template <class B>
double jacobi_residual(const LieAlgebra<B>& L) {
  const int d = L.dim();
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0;
          for (int m = 0; m < d; ++m)
            s += L.c[m](i, j) * L.c[l](m, k) + L.c[m](j, k) * L.c[l](m, i) +
                 L.c[m](k, i) * L.c[l](m, j);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

/// ([x,y],z) + (y,[x,z]) = 0 over basis triples
template <class B>
double ad_invariance_residual(const LieAlgebra<B>& L) {
  const int d = L.dim();
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0;
        for (int m = 0; m < d; ++m) s += L.c[m](i, j) * L.form(m, k) + L.c[m](i, k) * L.form(j, m);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

template <class B>
double antisymmetry_residual(const Realization& R, const LieAlgebra<B>& L, Rng& rng,
                             int trials = 10) {
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    GVal<B> x = rng.alg(R, L.basis);
    GVal<B> y = rng.alg(R, L.basis);
    worst = std::max(worst, gval_norm(ad(R, x, y) + ad(R, y, x)));
  }
  return worst;
}

}  // namespace hdouble
