#pragma once

#include <array>
#include <cassert>
#include <cstdint>

#include "hdouble/dual.hpp"

namespace hdouble {

/// Dense square matrix of small fixed capacity with tower-scalar entries.
/// Sized for the group blocks used here (pairs over su(4) at most).
template <class S>
class SqMat {
 public:
  static constexpr int kCap = 8;

  SqMat() : n_(0) {}
  explicit SqMat(int n) : n_(n) {
    assert(n >= 0 && n <= kCap);
    a_.fill(S{});
  }

  static SqMat identity(int n) {
    SqMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = scal<S>(1.0);
    return m;
  }
  static SqMat zero(int n) { return SqMat(n); }

  int n() const { return n_; }

  S& operator()(int i, int j) { return a_[i * n_ + j]; }
  const S& operator()(int i, int j) const { return a_[i * n_ + j]; }

  SqMat& operator+=(const SqMat& o) {
    for (int i = 0; i < n_ * n_; ++i) a_[i] += o.a_[i];
    return *this;
  }
  SqMat& operator-=(const SqMat& o) {
    for (int i = 0; i < n_ * n_; ++i) a_[i] -= o.a_[i];
    return *this;
  }
  SqMat& operator*=(const S& c) {
    for (int i = 0; i < n_ * n_; ++i) a_[i] = a_[i] * c;
    return *this;
  }

  friend SqMat operator+(SqMat a, const SqMat& b) { return a += b; }
  friend SqMat operator-(SqMat a, const SqMat& b) { return a -= b; }
  friend SqMat operator*(SqMat a, const S& c) { return a *= c; }
  friend SqMat operator*(const S& c, SqMat a) { return a *= c; }
  friend SqMat operator-(const SqMat& a) {
    SqMat r(a.n_);
    for (int i = 0; i < a.n_ * a.n_; ++i) r.a_[i] = -a.a_[i];
    return r;
  }

  friend SqMat operator*(const SqMat& a, const SqMat& b) {
    const int n = a.n_;
    SqMat r(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const S aik = a(i, k);
        for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  S trace() const {
    S t{};
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  SqMat transposed() const {
    SqMat r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  double norm1() const {  // max column sum of value magnitudes
    double best = 0;
    for (int j = 0; j < n_; ++j) {
      double s = 0;
      for (int i = 0; i < n_; ++i) s += mag_all((*this)(i, j));
      if (s > best) best = s;
    }
    return best;
  }

  double frob_value() const {  // Frobenius norm of the value parts
    double s = 0;
    for (int i = 0; i < n_ * n_; ++i) {
      double m = mag(a_[i]);
      s += m * m;
    }
    return std::sqrt(s);
  }

 private:
  int n_;
  std::array<S, kCap * kCap> a_;
};

/// Gauss-Jordan inverse, partial pivoting on value magnitudes.
template <class S>
SqMat<S> inverse(SqMat<S> m) {
  const int n = m.n();
  SqMat<S> inv = SqMat<S>::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = mag(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      double c = mag(m(r, col));
      if (c > best) { best = c; piv = r; }
    }
    assert(best > 0 && "singular matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    S pinv = scal<S>(1.0) / m(col, col);
    for (int j = 0; j < n; ++j) { m(col, j) = m(col, j) * pinv; inv(col, j) = inv(col, j) * pinv; }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      S f = m(r, col);
      if (mag_all(f) == 0) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Matrix exponential: scaling and squaring with a Taylor series at the
/// scaled argument. Accurate to ~1e-14 for norms up to O(10).
template <class S>
SqMat<S> matexp(const SqMat<S>& m) {
  const int n = m.n();
  double nrm = m.norm1();
  int s = 0;
  while (nrm > 0.25 && s < 40) { nrm *= 0.5; ++s; }
  SqMat<S> x = m;
  if (s > 0) x *= scal<S>(std::ldexp(1.0, -s));

  SqMat<S> result = SqMat<S>::identity(n);
  SqMat<S> term = SqMat<S>::identity(n);
  for (int k = 1; k <= 22; ++k) {
    term = term * x;
    term *= scal<S>(1.0 / k);
    result += term;
    if (term.norm1() < 1e-22) break;
  }
  for (int i = 0; i < s; ++i) result = result * result;
  return result;
}

}  // namespace hdouble
