#pragma once

#include "hdouble/moments.hpp"

namespace hdouble::uwzw {

using cplx = std::complex<double>;

/// su(N) root-system data in the defining representation, normalized so
/// that (H^mu, H^nu) = delta and (E^alpha, E^-alpha) = 2/|alpha|^2 = 1.
struct SuData {
  int N = 3;
  std::vector<SqMat<cplx>> Hc;                // orthonormal Hermitian Cartans, N-1
  std::vector<SqMat<cplx>> E;                 // step generators e_pq, one per root
  std::vector<std::pair<int, int>> root_pq;   // (p, q), root e_p - e_q
  std::vector<int> opposite;                  // index of -alpha
  std::vector<std::vector<double>> alphaH;    // <alpha_r, H^mu>
  std::vector<std::vector<double>> cab;       // c^{ab}: [E^a, E^b] = c E^{a+b}
  std::vector<std::vector<int>> sum_root;     // root index of alpha_a + alpha_b or -1
  std::vector<SqMat<cplx>> realONB;           // orthonormal basis of su(N) wrt -(.,.)

  int nroots() const { return static_cast<int>(E.size()); }
  int rank() const { return N - 1; }
  int dimK() const { return N * N - 1; }
};

SuData make_su(int N);

struct WZWConfig {
  int N = 3;          // su(N)
  int Nmax = 8;       // Fourier band of the fields
  double k = 1.0;     // level
  Eigen::MatrixXd U;  // skew operator on the Cartan in the iH^mu basis
  bool twist_identity = false;  // control configuration with kappa = Id

  int grid() const { return 4 * Nmax; }
  double cocycle_k() const { return twist_identity ? 0.0 : k; }
};

/// theta times the rotation generator acting on a 2-plane of the Cartan
Eigen::MatrixXd rotation_U(int rank, double theta, int axis1 = 0, int axis2 = 1);

/// generator label: Cartan index mu in [0, rank) or root index; the catalog
/// and the bracket tables index pairs (label, mode)
struct GenId {
  bool cartan = true;
  int idx = 0;  // mu or root index
  int n = 0;    // mode
};

struct LoopDouble {
  WZWConfig cfg;
  SuData su;
  DoubleSpec<cplx> D;
  Factorization<cplx> fact;
  std::vector<double> grid;

  CoordCatalog<cplx> catalogB;  // F^{mu,n}, F^{alpha,n} for |n| <= ncat
  int ncat = 0;
  int cat_index(const GenId& g) const {
    int label = g.cartan ? g.idx : su.rank() + g.idx;
    return label * (2 * ncat + 1) + (g.n + ncat);
  }

  /// the generator matrix X with J^{X,n} = (J | X e^{in sigma})
  const SqMat<cplx>& gen_matrix(const GenId& g) const {
    return g.cartan ? su.Hc[g.idx] : su.E[g.idx];
  }
};

/// ncat bounds the catalog band; the double itself carries modes to Nmax
LoopDouble build_loop_double(const WZWConfig& cfg, int ncat = 2);

// ---- fields and currents ----------------------------------------------------

template <class S>
using Field = std::vector<SqMat<S>>;

/// J_L = chi, J_R = -Ad_{g^{-1}} chi + k g^{-1} dsigma g
template <class S>
std::pair<Field<S>, Field<S>> currents(const LoopDouble& LD, const GVal<S>& K) {
  const auto& R = LD.D.R;
  Field<S> jl = K.chi;
  Field<S> jr(R.npts, SqMat<S>(R.n));
  auto dg = dsigma_apply(R, K.g);
  const double k = LD.cfg.cocycle_k();
  for (int p = 0; p < R.npts; ++p) {
    SqMat<S> gi = inverse(K.g[p]);
    jr[p] = -(gi * K.chi[p] * K.g[p]) + scal<S>(k) * (gi * dg[p]);
  }
  return {jl, jr};
}

/// u(chi) = U(P0 chi): a constant Cartan-valued matrix. P0 projects onto
/// the constant Cartan modes; coefficients are taken in the iH^mu frame
/// and extended linearly to complex arguments.
template <class S>
SqMat<S> u_of(const LoopDouble& LD, const Field<S>& chi) {
  const int rank = LD.su.rank();
  const int np = static_cast<int>(chi.size());
  std::vector<S> c(rank, S{});
  for (int mu = 0; mu < rank; ++mu) {
    SqMat<cplx> iH = LD.su.Hc[mu] * cplx(0.0, 1.0);
    S acc{};
    for (int p = 0; p < np; ++p) acc += (chi[p] * promote_mat<S>(iH)).trace();
    c[mu] = -(acc * scal<S>(1.0 / np));
  }
  SqMat<S> out(LD.su.N);
  for (int nu = 0; nu < rank; ++nu) {
    S w{};
    for (int mu = 0; mu < rank; ++mu) w += scal<S>(LD.cfg.U(nu, mu)) * c[mu];
    SqMat<cplx> iH = LD.su.Hc[nu] * cplx(0.0, 1.0);
    out += promote_mat<S>(iH) * w;
  }
  return out;
}

/// (a | b) = average over the grid of Tr(a b)
template <class S>
S loop_pair(const LoopDouble& LD, const Field<S>& a, const Field<S>& b) {
  S acc{};
  const int n = LD.D.R.npts;
  for (int p = 0; p < n; ++p) acc += (a[p] * b[p]).trace();
  return acc * scal<S>(1.0 / n);
}

/// J^{X,n} = (J | X e^{in sigma})
template <class S>
S gen_pullback(const LoopDouble& LD, const Field<S>& J, const GenId& g) {
  const SqMat<cplx>& X = LD.gen_matrix(g);
  S acc{};
  const int np = LD.D.R.npts;
  for (int p = 0; p < np; ++p) {
    cplx ph = std::exp(cplx(0.0, g.n * LD.grid[p]));
    acc += (J[p] * promote_mat<S>(X)).trace() * promote_scalar<S, cplx>(ph);
  }
  return acc * scal<S>(1.0 / np);
}

/// observable K -> J_{L or R}^{X,n}(K)
ObsPtr<cplx> gen_obs(const LoopDouble& LD, bool left, const GenId& g);

/// H = -(1/2k) [(J_L|J_L) + (J_R|J_R)]
double hamiltonian(const LoopDouble& LD, const GVal<cplx>& K);

/// fraction of spectral energy of g in the top third of the band
double aliasing_fraction(const LoopDouble& LD, const GVal<cplx>& K);

/// Theorem-2 actions in their loop-group closed form. h is a loop-group
/// element (grid of unitaries).
GVal<cplx> act_35(const LoopDouble& LD, bool left, const Field<cplx>& h, const GVal<cplx>& K);

/// Eq-30-style evaluation of the symplectic form on right-frame tangents
double omega_u(const LoopDouble& LD, const GVal<cplx>& K, const VecX<cplx>& v,
               const VecX<cplx>& w);

/// the factorized (Lemma-3 style) evaluation of the same form
double omega_u_pullback(const LoopDouble& LD, const GVal<cplx>& K, const VecX<cplx>& v,
                        const VecX<cplx>& w);

// ---- cached current gradients at a point --------------------------------------

/// Per-point table: jets of (J_L, J_R) along every frame direction, from
/// which gradients of all generator pullbacks (and the brackets among
/// them) follow by spectral pairing.
struct CurrentTable {
  const LoopDouble* LD = nullptr;
  const STSFrame<cplx>* F = nullptr;
  Field<cplx> JL0, JR0;
  std::vector<Field<cplx>> dJL, dJR;  // one field per frame direction

  VecX<cplx> grad(bool left, const GenId& g) const;
  cplx value(bool left, const GenId& g) const;
  /// {J_a, J_b}_D via the frame bivector
  cplx bracket(bool leftA, const GenId& a, bool leftB, const GenId& b) const;
};

CurrentTable make_current_table(const LoopDouble& LD, const STSFrame<cplx>& F);

/// expected right-hand side of the current-algebra relations for a pair of
/// generator pullbacks, evaluated from the table values
cplx km_expected(const LoopDouble& LD, const CurrentTable& T, bool left, const GenId& a,
                 const GenId& b);

/// random band-limited loop-algebra field with decaying mode amplitudes
Field<cplx> random_field(const LoopDouble& LD, Rng& rng, double amp, int band);

/// random point of the double with smooth factors
GVal<cplx> sample_point(const LoopDouble& LD, Rng& rng, double amp = 0.5, int band = 2);

}  // namespace hdouble::uwzw
