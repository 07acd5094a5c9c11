#pragma once

#include <cassert>
#include <initializer_list>
#include <type_traits>
#include <vector>

#include "nilkt/errors.hpp"
#include "nilkt/scalar.hpp"

namespace nilkt {

template <typename T>
using Vec = std::vector<T>;

/// Dense row-major matrix over an exact or floating field.
template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : r_(rows), c_(cols), d_(size_t(rows) * size_t(cols)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Mat from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    Mat m(int(rows.size()), rows.size() ? int(rows.begin()->size()) : 0);
    int i = 0;
    for (auto& row : rows) {
      assert(int(row.size()) == m.c_);
      int j = 0;
      for (auto& x : row) m(i, j++) = x;
      ++i;
    }
    return m;
  }

  /// a b^T
  static Mat outer(const Vec<T>& a, const Vec<T>& b) {
    Mat m(int(a.size()), int(b.size()));
    for (int i = 0; i < m.r_; ++i)
      for (int j = 0; j < m.c_; ++j) m(i, j) = a[i] * b[j];
    return m;
  }

  /// a b^T + b a^T
  static Mat sym_outer(const Vec<T>& a, const Vec<T>& b) {
    assert(a.size() == b.size());
    Mat m(int(a.size()), int(a.size()));
    for (int i = 0; i < m.r_; ++i)
      for (int j = 0; j < m.c_; ++j) m(i, j) = a[i] * b[j] + b[i] * a[j];
    return m;
  }

  static Mat skew_outer(const Vec<T>& a, const Vec<T>& b) {
    assert(a.size() == b.size());
    Mat m(int(a.size()), int(a.size()));
    for (int i = 0; i < m.r_; ++i)
      for (int j = 0; j < m.c_; ++j) m(i, j) = a[i] * b[j] - b[i] * a[j];
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  T& operator()(int i, int j) { return d_[size_t(i) * c_ + j]; }
  const T& operator()(int i, int j) const { return d_[size_t(i) * c_ + j]; }

  bool operator==(const Mat&) const = default;

  Mat operator+(const Mat& o) const {
    assert(r_ == o.r_ && c_ == o.c_);
    Mat m(r_, c_);
    for (size_t k = 0; k < d_.size(); ++k) m.d_[k] = d_[k] + o.d_[k];
    return m;
  }
  Mat operator-(const Mat& o) const {
    assert(r_ == o.r_ && c_ == o.c_);
    Mat m(r_, c_);
    for (size_t k = 0; k < d_.size(); ++k) m.d_[k] = d_[k] - o.d_[k];
    return m;
  }
  Mat operator-() const {
    Mat m(r_, c_);
    for (size_t k = 0; k < d_.size(); ++k) m.d_[k] = -d_[k];
    return m;
  }
  Mat operator*(const Mat& o) const {
    assert(c_ == o.r_);
    Mat m(r_, o.c_);
    for (int i = 0; i < r_; ++i)
      for (int k = 0; k < c_; ++k) {
        const T& a = (*this)(i, k);
        if (a == T(0)) continue;  // pays off: our matrices are mostly sparse
        for (int j = 0; j < o.c_; ++j) m(i, j) += a * o(k, j);
      }
    return m;
  }
  Mat scaled(const T& s) const {
    Mat m(r_, c_);
    for (size_t k = 0; k < d_.size(); ++k) m.d_[k] = d_[k] * s;
    return m;
  }

  Mat transpose() const {
    Mat m(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  Vec<T> apply(const Vec<T>& x) const {
    assert(int(x.size()) == c_);
    Vec<T> y(r_, T(0));
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j)
        if (!((*this)(i, j) == T(0))) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  Vec<T> row(int i) const {
    Vec<T> v(c_);
    for (int j = 0; j < c_; ++j) v[j] = (*this)(i, j);
    return v;
  }
  Vec<T> col(int j) const {
    Vec<T> v(r_);
    for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_row(int i, const Vec<T>& v) {
    assert(int(v.size()) == c_);
    for (int j = 0; j < c_; ++j) (*this)(i, j) = v[j];
  }
  void set_col(int j, const Vec<T>& v) {
    assert(int(v.size()) == r_);
    for (int i = 0; i < r_; ++i) (*this)(i, j) = v[i];
  }

  T trace() const {
    assert(r_ == c_);
    T t(0);
    for (int i = 0; i < r_; ++i) t += (*this)(i, i);
    return t;
  }

  T max_abs() const {
    T m(0);
    for (auto& x : d_)
      if (abs_val(x) > m) m = abs_val(x);
    return m;
  }

  bool is_zero(const T& tol = T(0)) const {
    for (auto& x : d_)
      if (abs_val(x) > tol) return false;
    return true;
  }
  bool is_symmetric(const T& tol = T(0)) const {
    if (r_ != c_) return false;
    return ((*this) - transpose()).is_zero(tol);
  }
  bool is_skew(const T& tol = T(0)) const {
    if (r_ != c_) return false;
    return ((*this) + transpose()).is_zero(tol);
  }

  static Mat vstack(const std::vector<Mat>& blocks) {
    int rows = 0, cols = blocks.empty() ? 0 : blocks.front().c_;
    for (auto& b : blocks) {
      assert(b.c_ == cols);
      rows += b.r_;
    }
    Mat m(rows, cols);
    int at = 0;
    for (auto& b : blocks) {
      for (int i = 0; i < b.r_; ++i)
        for (int j = 0; j < cols; ++j) m(at + i, j) = b(i, j);
      at += b.r_;
    }
    return m;
  }

  static Mat from_row_vectors(const std::vector<Vec<T>>& rows, int cols) {
    Mat m(int(rows.size()), cols);
    for (int i = 0; i < m.r_; ++i) m.set_row(i, rows[i]);
    return m;
  }

  template <typename To>
  Mat<To> cast() const {
    Mat<To> m(r_, c_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(i, j) = scalar_cast<To>((*this)(i, j));
    return m;
  }

 private:
  int r_ = 0, c_ = 0;
  std::vector<T> d_;
};

template <typename T>
Mat<T> commutator(const Mat<T>& a, const Mat<T>& b) {
  return a * b - b * a;
}

// ---- vector helpers ----

template <typename T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  assert(a.size() == b.size());
  T s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
Vec<T> vadd(const Vec<T>& a, const Vec<T>& b) {
  assert(a.size() == b.size());
  Vec<T> r(a);
  for (size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

template <typename T>
Vec<T> vsub(const Vec<T>& a, const Vec<T>& b) {
  assert(a.size() == b.size());
  Vec<T> r(a);
  for (size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

template <typename T>
Vec<T> vscale(const std::type_identity_t<T>& s, const Vec<T>& a) {
  Vec<T> r(a);
  for (auto& x : r) x *= s;
  return r;
}

/// y += s x
template <typename T>
void axpy(const std::type_identity_t<T>& s, const Vec<T>& x, Vec<T>& y) {
  assert(x.size() == y.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

template <typename T>
bool vec_is_zero(const Vec<T>& v, const T& tol = T(0)) {
  for (auto& x : v)
    if (abs_val(x) > tol) return false;
  return true;
}

template <typename T>
T vec_max_abs(const Vec<T>& v) {
  T m(0);
  for (auto& x : v)
    if (abs_val(x) > m) m = abs_val(x);
  return m;
}

template <typename T>
Vec<T> unit_vec(int n, int i) {
  Vec<T> v(n, T(0));
  v[i] = T(1);
  return v;
}

/// Row-major flattening, used to treat matrices as vectors in span computations.
template <typename T>
Vec<T> vec_of_mat(const Mat<T>& m) {
  Vec<T> v;
  v.reserve(size_t(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

template <typename T>
Mat<T> mat_of_vec(const Vec<T>& v, int rows, int cols) {
  assert(int(v.size()) == rows * cols);
  Mat<T> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v[size_t(i) * cols + j];
  return m;
}

}  // namespace nilkt
