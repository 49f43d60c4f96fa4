#pragma once

#include "hdouble/moments.hpp"

namespace hdouble::sl3 {

using hdouble::DoubleSpec;

/// The non-decomposable double sl(3,R) x| SL(3,R) with the
/// negative-transpose twist, its 8+8 dual basis, the cosymmetry chart,
/// the closed-form factorization with its domain conditions, and the
/// quotient chart group C with its Hopf/Poisson data.
struct Sl3Double {
  double eps = 1.0;
  DoubleSpec<double> D;
  Factorization<double> fact;
  CoordCatalog<double> catalogB;  // chart coordinates s, chi<, chi>, chi^{1+-}, chi^{2+-}, chi^{3+}
  std::vector<GVal<double>> idealN;  // t_<, t_>, t_{1-}, t_{2-}, t_{3-}

  Realization Rc;                    // quotient chart group C = B/N
  CoordCatalog<double> catalogC;     // xi^1, xi^2, xi^3
  GroupMapPtr<double> rho;           // B -> C
  GroupMapPtr<double> nuR;           // rho o lamR : D -> C

  /// basis order used everywhere: <, >, 1+, 1-, 2+, 2-, 3+, 3-
  enum Index { IL = 0, IR = 1, I1p = 2, I1m = 3, I2p = 4, I2m = 5, I3p = 6, I3m = 7 };
};

Sl3Double build_sl3(double eps);

/// chart element of the quotient group C from (xi1, xi2, xi3)
template <class S>
GVal<S> c_chart(double eps, const S& x1, const S& x2, const S& x3) {
  SqMat<S> g(3);
  S e = exp(scal<S>(-0.5 * eps) * x3);
  g(0, 0) = e;
  g(1, 1) = e;
  g(2, 2) = scal<S>(1.0);
  g(0, 2) = x1;
  g(1, 2) = x2;
  GVal<S> v;
  v.g = {g};
  return v;
}

/// leaf membership: Tr(J_L E^{3-}) > -1/eps and Tr(J_R E^{3+}) < 1/eps
bool in_leaf(const Sl3Double& S, const GVal<double>& K, double* tL = nullptr,
             double* tR = nullptr);

/// random point of the symplectic leaf (rejection sampling)
GVal<double> sample_leaf(const Sl3Double& S, Rng& rng, double amp = 0.6);

/// random element of the Heisenberg subgroup H (upper unitriangular)
GVal<double> sample_H(const Sl3Double& S, Rng& rng, double amp = 0.8);

/// the two factorization-based evaluations of the leaf symplectic form on
/// right-frame tangent coordinates
double omega_leaf_pullback(const Sl3Double& S, const GVal<double>& K, const VecX<double>& v,
                           const VecX<double>& w);
double omega_leaf_explicit(const Sl3Double& S, const GVal<double>& K, const VecX<double>& v,
                           const VecX<double>& w);

struct ImproperReport {
  double action_preserves_leaf = 0;  // worst violation of the leaf bounds
  double realization = 0;            // nu_R realization residual
  double c_bracket = 0;              // chart bracket vs closed form
};

ImproperReport improper_subsymmetry_check(const Sl3Double& S, Rng& rng, int trials, int realization_trials = 2);

}  // namespace hdouble::sl3
