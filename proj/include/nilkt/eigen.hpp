#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "nilkt/linsolve.hpp"

namespace nilkt {

template <typename T>
struct SpectralPart {
  T value;
  SubspaceBasis<T> space;  // ambient coordinates
};

template <typename T>
struct SpectralDecomposition {
  std::vector<SpectralPart<T>> parts;  // sorted by eigenvalue ascending

  Mat<T> reconstruct(const T& tol = T(0)) const {
    const int n = parts.empty() ? 0 : parts.front().space.ambient();
    Mat<T> m(n, n);
    for (auto& p : parts) m = m + p.space.projector(tol).scaled(p.value);
    return m;
  }
};

/// Characteristic polynomial coefficients [c_0, ..., c_{k-1}, 1] of a square matrix,
/// by the Faddeev-LeVerrier recurrence (exact over rationals).
template <typename T>
std::vector<T> char_poly(const Mat<T>& a) {
  const int n = a.rows();
  std::vector<T> c(n + 1, T(0));
  c[n] = T(1);
  Mat<T> m = Mat<T>::identity(n);
  for (int i = 1; i <= n; ++i) {
    m = a * m;
    T t = m.trace() / T(i);
    c[n - i] = -t;
    for (int d = 0; d < n; ++d) m(d, d) -= t;
  }
  return c;
}

template <typename T>
T eval_poly(const std::vector<T>& c, const T& x) {
  T v(0);
  for (int i = int(c.size()) - 1; i >= 0; --i) v = v * x + c[i];
  return v;
}

namespace detail {

/// Trial-division factorization. Returns false (incomplete) when the unfactored
/// remainder is composite beyond the trial bound; callers then fall back to floats.
inline bool factorize(Integer n, std::map<Integer, int>& factors) {
  if (n < 0) n = -n;
  if (n == 0) return true;
  for (Integer p = 2; p * p <= n && p < 1000000; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      ++factors[p];
      n /= p;
    }
  }
  if (n > 1) {
    // remainder has no factor below 1e6; if composite we may miss divisors,
    // which the dimension count below detects
    ++factors[n];
    if (n > Integer(1000000) * Integer(1000000)) return false;
  }
  return true;
}

inline std::vector<Integer> divisors(const Integer& n, size_t cap = 4096) {
  std::map<Integer, int> f;
  factorize(n, f);
  std::vector<Integer> divs{1};
  for (auto& [p, e] : f) {
    std::vector<Integer> next;
    Integer pe = 1;
    for (int i = 0; i <= e; ++i) {
      for (auto& d : divs) {
        next.push_back(d * pe);
        if (next.size() > cap) return next;
      }
      pe *= p;
    }
    divs = std::move(next);
  }
  return divs;
}

}  // namespace detail

/// All rational roots of a rational polynomial, found by divisor search over the
/// integer-scaled primitive polynomial.
inline std::vector<Rational> rational_roots(const std::vector<Rational>& poly) {
  // strip leading zeros (degree) and trailing zeros (roots at 0)
  int deg = int(poly.size()) - 1;
  while (deg > 0 && poly[deg] == 0) --deg;
  std::vector<Rational> roots;
  int low = 0;
  while (low < deg && poly[low] == 0) ++low;
  if (low > 0) roots.push_back(Rational(0));
  if (deg == low) return roots;

  Integer scale = 1;
  for (int i = low; i <= deg; ++i) scale = lcm(scale, denominator(poly[i]));
  std::vector<Integer> ip;
  for (int i = low; i <= deg; ++i) ip.push_back(numerator(poly[i] * Rational(scale)));
  Integer content = 0;
  for (auto& a : ip) content = gcd(content, a);
  if (content > 1)
    for (auto& a : ip) a /= content;

  const auto ps = detail::divisors(ip.front());
  const auto qs = detail::divisors(ip.back());
  std::vector<Rational> seen;
  for (auto& p : ps)
    for (auto& q : qs)
      for (int sign = -1; sign <= 1; sign += 2) {
        Rational cand(p * sign, q);
        if (std::find(seen.begin(), seen.end(), cand) != seen.end()) continue;
        seen.push_back(cand);
        if (eval_poly(poly, cand) == 0) roots.push_back(cand);
      }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

/// Exact eigendecomposition of the restriction of symmetric S to the subspace V.
/// Returns nullopt when the spectrum is not (provably) rational; callers rerun in floats.
inline std::optional<SpectralDecomposition<Rational>> eigendecompose_symmetric_restricted(
    const Mat<Rational>& s, const SubspaceBasis<Rational>& v) {
  if (!s.is_symmetric()) throw not_symmetric("eigendecomposition needs a symmetric matrix");
  const int k = v.dim();
  SpectralDecomposition<Rational> out;
  if (k == 0) return out;
  const Mat<Rational>& b = v.basis();
  const Mat<Rational> bt = b.transpose();
  // representation matrix of S|_V in the (non-orthonormal) RREF basis: (B B^T)^{-1} B S B^T
  const Mat<Rational> rep = solve_square(b * bt, b * (s * bt));
  const auto poly = char_poly(rep);
  const auto roots = rational_roots(poly);

  int total = 0;
  for (auto& lambda : roots) {
    Mat<Rational> shifted = rep;
    for (int i = 0; i < k; ++i) shifted(i, i) -= lambda;
    const Mat<Rational> coeffs = nullspace(shifted);  // eigenvectors in V-coordinates
    if (coeffs.rows() == 0) continue;
    SpectralPart<Rational> part;
    part.value = lambda;
    part.space = SubspaceBasis<Rational>::from_span(coeffs * b);
    total += part.space.dim();
    out.parts.push_back(std::move(part));
  }
  if (total != k) return std::nullopt;  // irrational spectrum (or divisor search overflow)
  std::sort(out.parts.begin(), out.parts.end(),
            [](auto& a, auto& b2) { return a.value < b2.value; });
  return out;
}

inline std::optional<SpectralDecomposition<Rational>> eigendecompose_symmetric(
    const Mat<Rational>& s) {
  return eigendecompose_symmetric_restricted(s, SubspaceBasis<Rational>::full(s.rows()));
}

/// Float eigendecomposition with eigenvalue clustering: eigenvalues closer than
/// 1e-9 * (1 + spectral radius) share an eigenspace. Verifies the reconstruction
/// ||sum lambda_i P_i - P S P||_F <= 1e-8 and throws on failure.
inline SpectralDecomposition<double> eigendecompose_symmetric_restricted(
    const Mat<double>& s, const SubspaceBasis<double>& v) {
  if (!s.is_symmetric(1e-12 * (1.0 + s.max_abs())))
    throw not_symmetric("eigendecomposition needs a symmetric matrix");
  const int k = v.dim(), n = v.ambient();
  SpectralDecomposition<double> out;
  if (k == 0) return out;

  // orthonormal basis of V via modified Gram-Schmidt on the RREF rows
  std::vector<Vec<double>> q;
  for (int i = 0; i < k; ++i) {
    Vec<double> w = v.basis_row(i);
    for (auto& u : q) axpy(-dot(u, w), u, w);
    double norm = std::sqrt(to_double(dot(w, w)));
    if (norm < 1e-12) throw internal_inconsistency("degenerate basis in float eigensolver");
    for (auto& x : w) x /= norm;
    q.push_back(std::move(w));
  }

  Eigen::MatrixXd h(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double acc = 0;
      for (int a = 0; a < n; ++a)
        for (int bcol = 0; bcol < n; ++bcol) acc += q[i][a] * s(a, bcol) * q[j][bcol];
      h(i, j) = acc;
    }
  h = 0.5 * (h + h.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw internal_inconsistency("float eigensolver failed");

  const double radius = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(k - 1)));
  const double gap = 1e-9 * (1.0 + radius);
  int at = 0;
  while (at < k) {
    int end = at + 1;
    while (end < k && es.eigenvalues()(end) - es.eigenvalues()(end - 1) < gap) ++end;
    double mean = 0;
    for (int i = at; i < end; ++i) mean += es.eigenvalues()(i);
    mean /= (end - at);
    std::vector<Vec<double>> rows;
    for (int i = at; i < end; ++i) {
      Vec<double> ambient(n, 0.0);
      for (int c = 0; c < k; ++c) axpy(es.eigenvectors()(c, i), q[c], ambient);
      rows.push_back(std::move(ambient));
    }
    SpectralPart<double> part;
    part.value = mean;
    part.space = SubspaceBasis<double>::from_span(rows, n, 1e-12);
    out.parts.push_back(std::move(part));
    at = end;
  }

  // reconstruction check against P S P with the clustered means
  Mat<double> psp(n, n);
  for (int a = 0; a < n; ++a)
    for (int bcol = 0; bcol < n; ++bcol) {
      double acc = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) acc += q[i][a] * h(i, j) * q[j][bcol];
      psp(a, bcol) = acc;
    }
  Mat<double> rec = out.reconstruct(1e-12);
  double frob = 0;
  for (int a = 0; a < n; ++a)
    for (int bcol = 0; bcol < n; ++bcol) {
      double d = rec(a, bcol) - psp(a, bcol);
      frob += d * d;
    }
  if (std::sqrt(frob) > 1e-8)
    throw internal_inconsistency("clustered eigendecomposition failed reconstruction check");
  return out;
}

inline SpectralDecomposition<double> eigendecompose_symmetric(const Mat<double>& s) {
  return eigendecompose_symmetric_restricted(s, SubspaceBasis<double>::full(s.rows()));
}

}  // namespace nilkt
