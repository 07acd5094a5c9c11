#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "nilkt/matrix.hpp"

namespace nilkt {

/// Reduced row echelon form. E (when requested) satisfies E * input == R exactly,
/// so rows of E below the rank are left-kernel vectors of the input.
template <typename T>
struct Rref {
  Mat<T> r;
  Mat<T> e;                        // row transform, empty unless requested
  std::vector<int> pivot_col;      // per pivot row, ascending
  std::vector<int> pivot_row_of;   // per column, -1 if free
  int rank = 0;
};

/// tol is an absolute zero threshold (0 in the exact field). Pivots are searched in the
/// first pivot_limit columns only (-1 means all), which is how augmented solves keep
/// right-hand-side columns out of the pivot set.
template <typename T>
Rref<T> rref(const Mat<T>& a, const T& tol = T(0), bool want_transform = false,
             int pivot_limit = -1) {
  Rref<T> out;
  out.r = a;
  const int rows = a.rows(), cols = a.cols();
  const int limit = pivot_limit < 0 ? cols : pivot_limit;
  if (want_transform) out.e = Mat<T>::identity(rows);
  out.pivot_row_of.assign(cols, -1);

  auto row_op = [&](Mat<T>& m, int dst, const T& s, int src, int from_col) {
    if (s == T(0)) return;
    for (int j = from_col; j < m.cols(); ++j) m(dst, j) -= s * m(src, j);
  };

  int r = 0;
  for (int c = 0; c < limit && r < rows; ++c) {
    int p = -1;
    if constexpr (is_exact_v<T>) {
      for (int i = r; i < rows; ++i)
        if (!(out.r(i, c) == T(0))) {
          p = i;
          break;
        }
    } else {
      T best = tol;
      for (int i = r; i < rows; ++i)
        if (abs_val(out.r(i, c)) > best) {
          best = abs_val(out.r(i, c));
          p = i;
        }
    }
    if (p < 0) continue;
    if (p != r) {
      for (int j = 0; j < cols; ++j) std::swap(out.r(p, j), out.r(r, j));
      if (want_transform)
        for (int j = 0; j < rows; ++j) std::swap(out.e(p, j), out.e(r, j));
    }
    const T inv = T(1) / out.r(r, c);
    for (int j = c; j < cols; ++j) out.r(r, j) *= inv;
    if (want_transform)
      for (int j = 0; j < rows; ++j) out.e(r, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const T s = out.r(i, c);
      if (abs_val(s) <= tol) continue;
      row_op(out.r, i, s, r, 0);
      if (want_transform) row_op(out.e, i, s, r, 0);
      out.r(i, c) = T(0);  // exact zero by construction; kills float dust
    }
    out.pivot_col.push_back(c);
    out.pivot_row_of[c] = r;
    ++r;
  }
  out.rank = r;
  return out;
}

template <typename T>
int rank(const Mat<T>& a, const T& tol = T(0)) {
  return rref(a, tol).rank;
}

/// Canonical nullspace basis: one RREF pass for elimination, a second to canonicalize.
template <typename T>
Mat<T> nullspace(const Mat<T>& a, const T& tol = T(0)) {
  const auto rr = rref(a, tol);
  const int cols = a.cols();
  std::vector<Vec<T>> basis;
  for (int f = 0; f < cols; ++f) {
    if (rr.pivot_row_of[f] >= 0) continue;
    Vec<T> x(cols, T(0));
    x[f] = T(1);
    for (int pr = 0; pr < rr.rank; ++pr) x[rr.pivot_col[pr]] = -rr.r(pr, f);
    basis.push_back(std::move(x));
  }
  auto m = Mat<T>::from_row_vectors(basis, cols);
  return rref(m, tol).r;  // rows already independent, this just canonicalizes
}

/// A linear subspace, stored as canonical RREF rows (exact mode: representation equality
/// is subspace equality). Zero rows are never stored.
template <typename T>
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  explicit SubspaceBasis(int ambient) : ambient_(ambient), b_(0, ambient) {}

  static SubspaceBasis from_span(const Mat<T>& rows, const T& tol = T(0)) {
    SubspaceBasis s(rows.cols());
    auto rr = rref(rows, tol);
    Mat<T> kept(rr.rank, rows.cols());
    for (int i = 0; i < rr.rank; ++i)
      for (int j = 0; j < rows.cols(); ++j) kept(i, j) = rr.r(i, j);
    s.b_ = kept;
    return s;
  }

  static SubspaceBasis from_span(const std::vector<Vec<T>>& rows, int ambient,
                                 const T& tol = T(0)) {
    return from_span(Mat<T>::from_row_vectors(rows, ambient), tol);
  }

  static SubspaceBasis full(int ambient) { return from_span(Mat<T>::identity(ambient)); }

  int ambient() const { return ambient_; }
  int dim() const { return b_.rows(); }
  const Mat<T>& basis() const { return b_; }
  Vec<T> basis_row(int i) const { return b_.row(i); }

  /// Residual of v after eliminating against the RREF rows; zero iff v is in the span.
  Vec<T> reduce(const Vec<T>& v) const {
    Vec<T> w = v;
    for (int i = 0; i < b_.rows(); ++i) {
      int lead = leading_col(i);
      axpy(-w[lead], b_.row(i), w);
    }
    return w;
  }

  bool contains(const Vec<T>& v, const T& tol = T(0)) const {
    return vec_is_zero(reduce(v), tol);
  }
  bool contains(const SubspaceBasis& o, const T& tol = T(0)) const {
    for (int i = 0; i < o.dim(); ++i)
      if (!contains(o.basis_row(i), tol)) return false;
    return true;
  }
  bool equals(const SubspaceBasis& o, const T& tol = T(0)) const {
    if (dim() != o.dim()) return false;
    if constexpr (is_exact_v<T>)
      return b_ == o.b_;
    else
      return contains(o, tol) && o.contains(*this, tol);
  }

  /// Orthogonal complement (the metric is the ambient dot product throughout).
  SubspaceBasis perp(const T& tol = T(0)) const {
    SubspaceBasis s(ambient_);
    s.b_ = nullspace(b_, tol);
    return s;
  }

  SubspaceBasis intersect(const SubspaceBasis& o, const T& tol = T(0)) const {
    auto pa = perp(tol), pb = o.perp(tol);
    auto stacked = Mat<T>::vstack({pa.b_, pb.b_});
    SubspaceBasis s(ambient_);
    s.b_ = nullspace(stacked, tol);
    return s;
  }

  SubspaceBasis direct_sum(const SubspaceBasis& o, const T& tol = T(0)) const {
    return from_span(Mat<T>::vstack({b_, o.b_}), tol);
  }

  /// Orthogonal projector B^T (B B^T)^{-1} B; rational for rational subspaces.
  Mat<T> projector(const T& tol = T(0)) const;

 private:
  int leading_col(int i) const {
    for (int j = 0; j < b_.cols(); ++j)
      if (!(b_(i, j) == T(0))) return j;
    return -1;  // impossible: zero rows are dropped
  }

  int ambient_ = 0;
  Mat<T> b_;
};

template <typename T>
struct AffineSolution {
  bool feasible = false;
  Vec<T> particular;           // canonical: all free coordinates zero
  SubspaceBasis<T> homogeneous;
  Vec<T> witness;              // infeasible (exact): y with y^T M = 0 and y^T b != 0
  T residual = T(0);           // ||M x - b||_inf of the returned particular
  int rank = 0;
};

/// Solves M x = b for several right-hand sides with one elimination.
/// residual_tol decides float-mode feasibility; exact mode demands residual zero.
/// want_witness controls whether the O(rows^2) row transform is carried for
/// infeasibility certificates; large span solves that only need verdicts skip it.
template <typename T>
std::vector<AffineSolution<T>> solve_affine_many(const Mat<T>& m, const std::vector<Vec<T>>& bs,
                                                 const T& tol = T(0),
                                                 const T& residual_tol = T(0),
                                                 bool want_witness = true) {
  const int rows = m.rows(), cols = m.cols(), k = int(bs.size());
  Mat<T> aug(rows, cols + k);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug(i, j) = m(i, j);
    for (int t = 0; t < k; ++t) aug(i, cols + t) = bs[t][i];
  }
  auto rr = rref(aug, tol, /*want_transform=*/want_witness, /*pivot_limit=*/cols);

  SubspaceBasis<T> hom(cols);
  {
    std::vector<Vec<T>> basis;
    for (int f = 0; f < cols; ++f) {
      if (rr.pivot_row_of[f] >= 0) continue;
      Vec<T> x(cols, T(0));
      x[f] = T(1);
      for (int pr = 0; pr < rr.rank; ++pr) x[rr.pivot_col[pr]] = -rr.r(pr, f);
      basis.push_back(std::move(x));
    }
    hom = SubspaceBasis<T>::from_span(basis, cols, tol);
  }

  std::vector<AffineSolution<T>> out(k);
  for (int t = 0; t < k; ++t) {
    auto& sol = out[t];
    sol.rank = rr.rank;
    sol.homogeneous = hom;
    sol.particular.assign(cols, T(0));
    for (int pr = 0; pr < rr.rank; ++pr) sol.particular[rr.pivot_col[pr]] = rr.r(pr, cols + t);
    // rows past the rank have zero M-part; a nonzero entry there certifies infeasibility
    sol.feasible = true;
    for (int i = rr.rank; i < rows; ++i) {
      if (abs_val(rr.r(i, cols + t)) > residual_tol) {
        sol.feasible = false;
        if (want_witness && is_exact_v<T>) sol.witness = rr.e.row(i);
        break;
      }
    }
    auto mv = m.apply(sol.particular);
    sol.residual = vec_max_abs(vsub(mv, bs[t]));
    if constexpr (is_exact_v<T>) {
      // the elimination's verdict must match an independent residual check
      if (sol.feasible != (sol.residual == T(0)))
        throw internal_inconsistency("affine solve verdict contradicts residual");
      if (!sol.feasible && want_witness) {
        Vec<T> ytm(cols, T(0));
        for (int j = 0; j < cols; ++j) ytm[j] = dot(sol.witness, m.col(j));
        if (!vec_is_zero(ytm) || dot(sol.witness, bs[t]) == T(0))
          throw internal_inconsistency("infeasibility witness failed verification");
      }
    }
  }
  return out;
}

template <typename T>
AffineSolution<T> solve_affine(const Mat<T>& m, const Vec<T>& b, const T& tol = T(0),
                               const T& residual_tol = T(0)) {
  return solve_affine_many(m, std::vector<Vec<T>>{b}, tol, residual_tol)[0];
}

/// Solves the square nonsingular system A X = B (used for Gram inverses).
template <typename T>
Mat<T> solve_square(const Mat<T>& a, const Mat<T>& b, const T& tol = T(0)) {
  assert(a.rows() == a.cols() && a.rows() == b.rows());
  const int n = a.rows(), k = b.cols();
  Mat<T> aug(n, n + k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = a(i, j);
    for (int j = 0; j < k; ++j) aug(i, n + j) = b(i, j);
  }
  auto rr = rref(aug, tol, false, n);
  if (rr.rank != n) throw internal_inconsistency("singular system in solve_square");
  Mat<T> x(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) x(i, j) = rr.r(i, n + j);
  return x;
}

template <typename T>
Mat<T> SubspaceBasis<T>::projector(const T& tol) const {
  if (dim() == 0) return Mat<T>(ambient_, ambient_);
  const Mat<T> bt = b_.transpose();
  const Mat<T> gram = b_ * bt;
  const Mat<T> x = solve_square(gram, b_, tol);  // (B B^T)^{-1} B
  return bt * x;
}

}  // namespace nilkt
