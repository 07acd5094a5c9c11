#pragma once

#include <initializer_list>
#include <random>
#include <vector>

#include "nilkt/matrix.hpp"
#include "nilkt/scalar.hpp"

namespace nilkt::testing {

inline Mat<Rational> rmat(std::initializer_list<std::initializer_list<long>> rows) {
  const int r = int(rows.size());
  const int c = r ? int(rows.begin()->size()) : 0;
  Mat<Rational> m(r, c);
  int i = 0;
  for (auto& row : rows) {
    int j = 0;
    for (auto x : row) m(i, j++) = Rational(x);
    ++i;
  }
  return m;
}

inline Vec<Rational> rvec(std::initializer_list<long> xs) {
  Vec<Rational> v;
  for (auto x : xs) v.push_back(Rational(x));
  return v;
}

inline Mat<double> dmat(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = int(rows.size());
  const int c = r ? int(rows.begin()->size()) : 0;
  Mat<double> m(r, c);
  int i = 0;
  for (auto& row : rows) {
    int j = 0;
    for (auto x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

/// Small random rationals with seeded engine, for property tests.
class RationalSampler {
 public:
  explicit RationalSampler(uint64_t seed) : eng_(seed) {}

  Rational next(long lo = -5, long hi = 5) {
    std::uniform_int_distribution<long> num(lo, hi);
    std::uniform_int_distribution<long> den(1, 4);
    return Rational(num(eng_), den(eng_));
  }

  Vec<Rational> vec(int n, long lo = -5, long hi = 5) {
    Vec<Rational> v(n);
    for (auto& x : v) x = next(lo, hi);
    return v;
  }

  Mat<Rational> mat(int r, int c, long lo = -5, long hi = 5) {
    Mat<Rational> m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = next(lo, hi);
    return m;
  }

  Mat<Rational> symmetric(int n, long lo = -5, long hi = 5) {
    Mat<Rational> m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) = m(j, i) = next(lo, hi);
    return m;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace nilkt::testing
