#include <complex>

#include "doctest.h"
#include "hdouble/lie_algebra.hpp"
#include "hdouble/obs.hpp"
#include "hdouble/rng.hpp"

using namespace hdouble;
using cplx = std::complex<double>;

namespace {

GVal<double> pair_el(const SqMat<double>& chi, const SqMat<double>& g) {
  GVal<double> e;
  e.chi = {chi};
  e.g = {g};
  return e;
}

SqMat<double> random_mat(Rng& rng, int n, double amp = 1.0) {
  SqMat<double> m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(-amp, amp);
  return m;
}

SqMat<double> traceless(SqMat<double> m) {
  double t = m.trace() / m.n();
  for (int i = 0; i < m.n(); ++i) m(i, i) -= t;
  return m;
}

}  // namespace

TEST_CASE("dual arithmetic differentiates elementary functions") {
  Dual<double> x(0.7, 1.0);
  auto y = exp(x * x) / (1.0 + x);
  double v = std::exp(0.49) / 1.7;
  double d = (2 * 0.7 * std::exp(0.49) * 1.7 - std::exp(0.49)) / (1.7 * 1.7);
  CHECK(y.v == doctest::Approx(v).epsilon(1e-14));
  CHECK(y.d == doctest::Approx(d).epsilon(1e-12));

  // second order: d^2/dx^2 exp(x) = exp(x)
  Dual<Dual<double>> z(Dual<double>(0.3, 1.0), Dual<double>(1.0, 0.0));
  auto w = exp(z);
  CHECK(w.d.d == doctest::Approx(std::exp(0.3)).epsilon(1e-13));
}

TEST_CASE("matexp matches closed forms and respects the accuracy target") {
  // nilpotent
  SqMat<double> nil(3);
  nil(0, 1) = 2.0;
  nil(1, 2) = -1.0;
  auto e = matexp(nil);
  CHECK(e(0, 1) == doctest::Approx(2.0));
  CHECK(e(0, 2) == doctest::Approx(-1.0));  // (1/2) * 2 * (-1)
  CHECK(e(2, 2) == doctest::Approx(1.0));

  // rotation block of norm ~10
  double th = 9.0;
  SqMat<double> rot(2);
  rot(0, 1) = -th;
  rot(1, 0) = th;
  auto r = matexp(rot);
  CHECK(std::abs(r(0, 0) - std::cos(th)) < 1e-12);
  CHECK(std::abs(r(1, 0) - std::sin(th)) < 1e-12);

  // derivative through matexp: d/ds exp(s A) = A at s=0
  Rng rng(7);
  SqMat<Dual<double>> sm(3);
  SqMat<double> a = random_mat(rng, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sm(i, j) = Dual<double>(0.0, a(i, j));
  auto de = matexp(sm);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(de(i, j).d == doctest::Approx(a(i, j)).epsilon(1e-12));
}

TEST_CASE("inverse handles dual and complex scalars") {
  Rng rng(11);
  SqMat<double> a = random_mat(rng, 3);
  for (int i = 0; i < 3; ++i) a(i, i) += 3.0;
  auto ai = inverse(a);
  auto id = a * ai;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(id(i, j) - (i == j ? 1.0 : 0.0)) < 1e-13);
}

TEST_CASE("semidirect group law and inverse satisfy the realization axioms") {
  Realization R = make_semidirect(3);
  Rng rng(3);
  auto sample = [&] {
    return pair_el(traceless(random_mat(rng, 3)),
                   matexp(traceless(random_mat(rng, 3, 0.6))));
  };
  GVal<double> e = identity_el<double>(R);
  for (int t = 0; t < 25; ++t) {
    auto a = sample(), b = sample(), c = sample();
    auto ab_c = multiply(R, multiply(R, a, b), c);
    auto a_bc = multiply(R, a, multiply(R, b, c));
    CHECK(gval_norm(ab_c - a_bc) < 1e-10);
    CHECK(gval_norm(multiply(R, a, inv(R, a)) - e) < 1e-11);
    CHECK(gval_norm(multiply(R, a, e) - a) < 1e-14);
  }
}

TEST_CASE("semidirect exponential is a one-parameter subgroup") {
  Realization R = make_semidirect(3);
  Rng rng(5);
  GVal<double> x = pair_el(traceless(random_mat(rng, 3)), traceless(random_mat(rng, 3)));
  auto half = exp_alg(R, 0.5 * x);
  auto whole = exp_alg(R, x);
  CHECK(gval_norm(multiply(R, half, half) - whole) < 1e-12);

  // d/ds exp(s x) = x at s = 0
  GVal<Dual<double>> xd;
  xd.chi = {SqMat<Dual<double>>(3)};
  xd.g = {SqMat<Dual<double>>(3)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      xd.chi[0](i, j) = Dual<double>(0.0, x.chi[0](i, j));
      xd.g[0](i, j) = Dual<double>(0.0, x.g[0](i, j));
    }
  auto je = exp_alg(R, xd);
  auto d = deriv_gval(je);
  CHECK(gval_norm(d - x) < 1e-12);
}

TEST_CASE("Ad is the derivative of conjugation and ad of Ad") {
  Realization R = make_semidirect(3);
  Rng rng(9);
  auto x = pair_el(traceless(random_mat(rng, 3)), traceless(random_mat(rng, 3)));
  auto y = pair_el(traceless(random_mat(rng, 3)), traceless(random_mat(rng, 3)));
  auto a = exp_alg(R, 0.3 * x);

  // finite difference of Ad_{exp(s x)} y vs ad_x y
  double h = 1e-6;
  auto plus = Ad(R, exp_alg(R, h * x), y);
  auto minus = Ad(R, exp_alg(R, (-h) * x), y);
  auto fd = (1.0 / (2 * h)) * (plus - minus);
  CHECK(gval_norm(fd - ad(R, x, y)) < 1e-8);

  // Ad_a is an algebra automorphism
  auto lhs = Ad(R, a, ad(R, x, y));
  auto rhs = ad(R, Ad(R, a, x), Ad(R, a, y));
  CHECK(gval_norm(lhs - rhs) < 1e-11);

  // pairing invariance under Ad
  double before = pairing(R, x, y);
  double after = pairing(R, Ad(R, a, x), Ad(R, a, y));
  CHECK(before == doctest::Approx(after).epsilon(1e-11));
}

TEST_CASE("directional derivatives match central finite differences") {
  Realization R = make_semidirect(3);
  Rng rng(13);
  auto K = pair_el(traceless(random_mat(rng, 3)), matexp(traceless(random_mat(rng, 3, 0.5))));
  auto T = pair_el(traceless(random_mat(rng, 3)), traceless(random_mat(rng, 3)));
  SqMat<double> Mc = random_mat(rng, 3);

  auto f = make_obs<double>([Mc](const auto& k) {
    using S = std::decay_t<decltype(k.g[0](0, 0))>;
    SqMat<S> M = promote_mat<S>(Mc);
    auto w = k.chi[0] * k.g[0] * M;
    return w.trace() + exp(scal<S>(0.1) * (k.g[0] * M).trace());
  });

  double h = 1e-5;
  auto shift = [&](double s) {
    return f->ev(multiply(R, K, exp_alg(R, s * T)));
  };
  double fd = (shift(h) - shift(-h)) / (2 * h);
  double ad_ = right_deriv(R, *f, K, T);
  CHECK(std::abs(fd - ad_) / (std::abs(ad_) + 1) < 1e-6);

  auto shiftL = [&](double s) { return f->ev(multiply(R, exp_alg(R, s * T), K)); };
  double fdL = (shiftL(h) - shiftL(-h)) / (2 * h);
  double adL = left_deriv(R, *f, K, T);
  CHECK(std::abs(fdL - adL) / (std::abs(adL) + 1) < 1e-6);

  // linearity in the direction
  auto T2 = pair_el(traceless(random_mat(rng, 3)), traceless(random_mat(rng, 3)));
  double lin = right_deriv(R, *f, K, 2.0 * T + (-0.5) * T2);
  CHECK(std::abs(lin - (2.0 * right_deriv(R, *f, K, T) - 0.5 * right_deriv(R, *f, K, T2))) <
        1e-10);
}

TEST_CASE("structure constants recover sl(2,R) and reject non-closed bases") {
  Realization R = make_matrix_group(2);
  GVal<double> H, E, F;
  SqMat<double> h(2), e(2), f(2);
  h(0, 0) = 1; h(1, 1) = -1;
  e(0, 1) = 1;
  f(1, 0) = 1;
  H.g = {h}; E.g = {e}; F.g = {f};

  auto L = make_lie_algebra<double>(R, {H, E, F});
  CHECK(L.c[0](1, 2) == doctest::Approx(1.0));   // [E,F] = H
  CHECK(L.c[1](0, 1) == doctest::Approx(2.0));   // [H,E] = 2E
  CHECK(L.c[2](0, 2) == doctest::Approx(-2.0));  // [H,F] = -2F
  CHECK(jacobi_residual(L) < 1e-12);

  // abelian: diagonal matrices
  GVal<double> D1, D2;
  SqMat<double> d1(2), d2(2);
  d1(0, 0) = 1;
  d2(1, 1) = 1;
  D1.g = {d1}; D2.g = {d2};
  auto A = make_lie_algebra<double>(R, {D1, D2});
  for (auto& ck : A.c) CHECK(ck.cwiseAbs().maxCoeff() < 1e-14);

  // {E, F} alone is not closed: [E,F] = H leaves the span
  CHECK_THROWS(make_lie_algebra<double>(R, {E, F}, 1e-10));
}

TEST_CASE("spectral derivative is exact on band-limited loops") {
  int N = 16;
  Realization R = make_semidirect(2, N);
  auto grid = loop_grid(N);
  std::vector<SqMat<double>> field(N, SqMat<double>(2));
  for (int j = 0; j < N; ++j) {
    field[j](0, 0) = std::cos(3 * grid[j]);
    field[j](1, 1) = std::sin(5 * grid[j]);
  }
  auto d = dsigma_apply(R, field);
  for (int j = 0; j < N; ++j) {
    CHECK(d[j](0, 0) == doctest::Approx(-3 * std::sin(3 * grid[j])).epsilon(1e-11));
    CHECK(d[j](1, 1) == doctest::Approx(5 * std::cos(5 * grid[j])).epsilon(1e-11));
  }
}
