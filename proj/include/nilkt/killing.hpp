#pragma once

#include <optional>
#include <tuple>

#include "nilkt/liealg.hpp"

namespace nilkt {

// ---- coordinates on symmetric and skew matrices ----

inline int sym_dim(int n) { return n * (n + 1) / 2; }
inline int skew_dim(int n) { return n * (n - 1) / 2; }

/// Basis element of the symmetric matrices: E_ii, or E_ij + E_ji for i < j.
template <typename T>
Mat<T> sym_unit(int n, int i, int j) {
  Mat<T> m(n, n);
  m(i, j) = T(1);
  m(j, i) = T(1);
  return m;
}

/// Basis element of the skew matrices: E_ij - E_ji for i < j.
template <typename T>
Mat<T> skew_unit(int n, int i, int j) {
  Mat<T> m(n, n);
  m(i, j) = T(1);
  m(j, i) = T(-1);
  return m;
}

/// Coordinates of a symmetric matrix in the sym_unit basis (upper triangle, row-major).
template <typename T>
Vec<T> svec(const Mat<T>& s) {
  const int n = s.rows();
  Vec<T> v;
  v.reserve(sym_dim(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) v.push_back(s(i, j));
  return v;
}

template <typename T>
Mat<T> unsvec(const Vec<T>& v, int n) {
  Mat<T> s(n, n);
  int at = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      s(i, j) = v[at];
      s(j, i) = v[at];
      ++at;
    }
  return s;
}

/// Coordinates of a skew matrix in the skew_unit basis (strict upper triangle).
template <typename T>
Vec<T> kvec(const Mat<T>& s) {
  const int n = s.rows();
  Vec<T> v;
  v.reserve(skew_dim(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v.push_back(s(i, j));
  return v;
}

template <typename T>
Mat<T> unkvec(const Vec<T>& v, int n) {
  Mat<T> s(n, n);
  int at = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      s(i, j) = v[at];
      s(j, i) = -v[at];
      ++at;
    }
  return s;
}

/// A linear space of matrices, canonically represented in a coordinate space
/// (symmetric or skew coordinates depending on the producing operation).
template <typename T>
struct TensorSpace {
  int n = 0;
  bool symmetric = true;  // coordinate convention: svec when true, kvec otherwise
  SubspaceBasis<T> coords;

  int dim() const { return coords.dim(); }
  Mat<T> basis_matrix(int i) const {
    return symmetric ? unsvec(coords.basis_row(i), n) : unkvec(coords.basis_row(i), n);
  }
  std::vector<Mat<T>> basis_matrices() const {
    std::vector<Mat<T>> out;
    for (int i = 0; i < dim(); ++i) out.push_back(basis_matrix(i));
    return out;
  }
  bool contains(const Mat<T>& m, const T& tol = T(0)) const {
    return coords.contains(symmetric ? svec(m) : kvec(m), tol);
  }
};

// ---- the symmetric Killing equations ----

/// Structured residuals of the two Killing conditions for a symmetric S:
///   (a) over v-basis pairs (i <= k): [S x_i, x_k] - [x_i, S x_k]   (vector valued)
///   (b) over v-basis x_p and z-basis pairs (s <= t):
///       <[x_p, S z_s], z_t> + <[x_p, S z_t], z_s>                  (scalar valued)
template <typename T>
struct KillingResiduals {
  std::vector<std::tuple<int, int, Vec<T>>> cond_a;
  std::vector<std::tuple<int, int, int, T>> cond_b;

  Vec<T> stacked() const {
    Vec<T> out;
    for (auto& [i, k, r] : cond_a) out.insert(out.end(), r.begin(), r.end());
    for (auto& [p, s, t, r] : cond_b) out.push_back(r);
    return out;
  }
};

template <typename T>
KillingResiduals<T> killing_residuals(const Context<T>& ctx, const Mat<T>& s) {
  KillingResiduals<T> out;
  const auto& v = ctx.split.v;
  const auto& z = ctx.split.z;
  for (int i = 0; i < v.dim(); ++i) {
    const Vec<T> sxi = s.apply(v.basis_row(i));
    for (int k = i; k < v.dim(); ++k) {
      Vec<T> r = ctx.alg.bracket(sxi, v.basis_row(k));
      axpy(T(-1), ctx.alg.bracket(v.basis_row(i), s.apply(v.basis_row(k))), r);
      out.cond_a.emplace_back(i, k, std::move(r));
    }
  }
  std::vector<Vec<T>> sz;
  for (int t = 0; t < z.dim(); ++t) sz.push_back(s.apply(z.basis_row(t)));
  for (int p = 0; p < v.dim(); ++p)
    for (int t = 0; t < z.dim(); ++t)
      for (int u = t; u < z.dim(); ++u) {
        T r = dot(ctx.alg.bracket(v.basis_row(p), sz[t]), z.basis_row(u)) +
              dot(ctx.alg.bracket(v.basis_row(p), sz[u]), z.basis_row(t));
        out.cond_b.emplace_back(p, t, u, std::move(r));
      }
  return out;
}

/// All symmetric S with both Killing conditions: one nullspace over svec coordinates.
template <typename T>
TensorSpace<T> killing_space(const Context<T>& ctx) {
  const int n = ctx.alg.n;
  const int cols = sym_dim(n);
  std::vector<Vec<T>> columns;
  int rows = -1;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto col = killing_residuals(ctx, sym_unit<T>(n, i, j)).stacked();
      rows = int(col.size());
      columns.push_back(std::move(col));
    }
  Mat<T> system(rows, cols);
  for (int c = 0; c < cols; ++c) system.set_col(c, columns[c]);
  TensorSpace<T> out;
  out.n = n;
  out.symmetric = true;
  out.coords = SubspaceBasis<T>::from_span(nullspace(system, ctx.alg.tol), ctx.alg.tol);
  return out;
}

template <typename T>
struct KillingViolation {
  char condition;   // 'a' or 'b'
  int i = -1, j = -1;  // v-pair for (a); z-pair for (b)
  int x = -1;          // v-index, condition (b) only
  T residual = T(0);
};

template <typename T>
struct KillingReport {
  bool killing = false;
  std::optional<KillingViolation<T>> worst;  // maximal residual over all conditions
};

template <typename T>
KillingReport<T> is_killing(const Context<T>& ctx, const Mat<T>& s) {
  if (s.rows() != ctx.alg.n || s.cols() != ctx.alg.n)
    throw dimension_mismatch("tensor size does not match the algebra dimension");
  const T tol = ctx.alg.tol * (T(1) + s.max_abs());
  if (!s.is_symmetric(tol)) throw not_symmetric("Killing test needs a symmetric tensor");

  auto res = killing_residuals(ctx, s);
  KillingReport<T> rep;
  KillingViolation<T> worst;
  for (auto& [i, k, r] : res.cond_a) {
    T mag = vec_max_abs(r);
    if (mag > worst.residual) worst = {'a', i, k, -1, mag};
  }
  for (auto& [p, t, u, r] : res.cond_b) {
    T mag = abs_val(r);
    if (mag > worst.residual) worst = {'b', t, u, p, mag};
  }
  rep.killing = !(worst.residual > tol);
  if (!rep.killing) rep.worst = worst;
  return rep;
}

// ---- block components of a symmetric tensor ----

template <typename T>
struct SymTensorComponents {
  Mat<T> s_v, s_m, s_z;  // v-block, mixed block, center block; sum reconstructs S
};

/// Exact block projection along n = v + z. When the input is Killing, the v and
/// mixed parts must individually be Killing; that consequence is re-verified.
template <typename T>
SymTensorComponents<T> component_split(const Context<T>& ctx, const Mat<T>& s) {
  const T tol = ctx.alg.tol * (T(1) + s.max_abs());
  if (!s.is_symmetric(tol)) throw not_symmetric("component split needs a symmetric tensor");
  const Mat<T> pv = ctx.split.v.projector(ctx.alg.tol);
  const Mat<T> pz = ctx.split.z.projector(ctx.alg.tol);
  SymTensorComponents<T> out;
  out.s_v = pv * s * pv;
  out.s_z = pz * s * pz;
  out.s_m = pv * s * pz + pz * s * pv;
  if (!(out.s_v + out.s_m + out.s_z - s).is_zero(tol))
    throw internal_inconsistency("component split failed to reconstruct the tensor");
  if (is_killing(ctx, s).killing) {
    if (!is_killing(ctx, out.s_v).killing || !is_killing(ctx, out.s_m).killing)
      throw internal_inconsistency("components of a Killing tensor must be Killing");
  }
  return out;
}

// ---- Levi-Civita connection on left-invariant fields ----

/// Matrices L[i] with L[i] w = the covariant derivative of the field w in direction e_i:
/// half the bracket on the v-parts minus the two J-corrections on the center parts.
template <typename T>
std::vector<Mat<T>> connection_table(const Context<T>& ctx) {
  const int n = ctx.alg.n;
  const Mat<T> pv = ctx.split.v.projector(ctx.alg.tol);
  const Mat<T> pz = ctx.split.z.projector(ctx.alg.tol);
  const T half(1), two(2);
  const T h = half / two;  // exact 1/2 in both scalar modes
  std::vector<Vec<T>> vpart(n), zpart(n);
  std::vector<Mat<T>> jz(n);
  for (int i = 0; i < n; ++i) {
    vpart[i] = pv.col(i);
    zpart[i] = pz.col(i);
    jz[i] = ctx.alg.j(zpart[i]);
  }
  std::vector<Mat<T>> table;
  for (int i = 0; i < n; ++i) {
    Mat<T> li(n, n);
    for (int k = 0; k < n; ++k) {
      Vec<T> col = ctx.alg.bracket(vpart[i], vpart[k]);
      for (auto& x : col) x *= h;
      axpy(-h, jz[k].apply(vpart[i]), col);
      axpy(-h, jz[i].apply(vpart[k]), col);
      li.set_col(k, col);
    }
    table.push_back(std::move(li));
  }
  return table;
}

/// Connection matrix in an arbitrary direction (the table is linear in the direction).
template <typename T>
Mat<T> nabla_op(const std::vector<Mat<T>>& table, const Vec<T>& u) {
  Mat<T> m(table.front().rows(), table.front().cols());
  for (size_t i = 0; i < u.size(); ++i)
    if (!(u[i] == T(0))) m = m + table[i].scaled(u[i]);
  return m;
}

// ---- parallel symmetric tensors, two ways ----

/// Method A: symmetric matrices commuting with every connection matrix (a left-invariant
/// tensor is parallel iff its endomorphism commutes with the connection in every
/// direction). Method B: the span of the component projectors plus everything symmetric
/// on the abelian factor (components and the flat factor are the only parallel ideals).
/// The two must agree exactly; disagreement is an internal failure.
template <typename T>
TensorSpace<T> parallel_space(const Context<T>& ctx) {
  const int n = ctx.alg.n;
  const auto table = connection_table(ctx);

  const int cols = sym_dim(n);
  std::vector<Vec<T>> columns;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Mat<T> s = sym_unit<T>(n, i, j);
      Vec<T> col;
      for (auto& li : table) {
        auto c = vec_of_mat(commutator(li, s));
        col.insert(col.end(), c.begin(), c.end());
      }
      columns.push_back(std::move(col));
    }
  Mat<T> system(int(columns.front().size()), cols);
  for (int c = 0; c < cols; ++c) system.set_col(c, columns[c]);
  TensorSpace<T> method_a;
  method_a.n = n;
  method_a.coords = SubspaceBasis<T>::from_span(nullspace(system, ctx.alg.tol), ctx.alg.tol);

  auto dec = ideal_decomposition(ctx);
  std::vector<Vec<T>> span;
  for (auto& comp : dec.components)
    span.push_back(svec(comp.v.direct_sum(comp.z, ctx.alg.tol).projector(ctx.alg.tol)));
  for (int p = 0; p < dec.abelian.dim(); ++p)
    for (int q = p; q < dec.abelian.dim(); ++q)
      span.push_back(svec(Mat<T>::sym_outer(dec.abelian.basis_row(p), dec.abelian.basis_row(q))));
  TensorSpace<T> method_b;
  method_b.n = n;
  method_b.coords = SubspaceBasis<T>::from_span(span, cols, ctx.alg.tol);

  if (!method_a.coords.equals(method_b.coords, ctx.alg.tol))
    throw method_mismatch("parallel tensors: connection commutant and ideal span disagree");
  return method_a;
}

// ---- Killing 2-forms ----

/// Skew T preserving v and z with the two bracket conditions
///   [Tx, y] = [x, Ty]  and  T[x, y] = 3 [Tx, y]  for x, y in v.
template <typename T>
TensorSpace<T> killing_two_forms(const Context<T>& ctx) {
  const int n = ctx.alg.n;
  const auto& v = ctx.split.v;
  const Mat<T> pv = ctx.split.v.projector(ctx.alg.tol);
  const Mat<T> pz = ctx.split.z.projector(ctx.alg.tol);

  auto residual = [&](const Mat<T>& t) {
    Vec<T> col = vec_of_mat(pz * t * pv);  // preserves v
    auto zv = vec_of_mat(pv * t * pz);     // preserves z
    col.insert(col.end(), zv.begin(), zv.end());
    for (int i = 0; i < v.dim(); ++i) {
      const Vec<T> txi = t.apply(v.basis_row(i));
      for (int k = i; k < v.dim(); ++k) {
        Vec<T> r = ctx.alg.bracket(txi, v.basis_row(k));
        axpy(T(-1), ctx.alg.bracket(v.basis_row(i), t.apply(v.basis_row(k))), r);
        col.insert(col.end(), r.begin(), r.end());
      }
      for (int k = i + 1; k < v.dim(); ++k) {
        Vec<T> r = t.apply(ctx.alg.bracket(v.basis_row(i), v.basis_row(k)));
        axpy(T(-3), ctx.alg.bracket(txi, v.basis_row(k)), r);
        col.insert(col.end(), r.begin(), r.end());
      }
    }
    return col;
  };

  const int cols = skew_dim(n);
  std::vector<Vec<T>> columns;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) columns.push_back(residual(skew_unit<T>(n, i, j)));
  TensorSpace<T> out;
  out.n = n;
  out.symmetric = false;
  if (cols == 0) {
    out.coords = SubspaceBasis<T>(0);
    return out;
  }
  Mat<T> system(int(columns.front().size()), cols);
  for (int c = 0; c < cols; ++c) system.set_col(c, columns[c]);
  out.coords = SubspaceBasis<T>::from_span(nullspace(system, ctx.alg.tol), ctx.alg.tol);
  return out;
}

/// The symmetric Killing tensor induced by a Killing 2-form.
template <typename T>
Mat<T> form_to_tensor(const Mat<T>& t) {
  return -(t * t);
}

}  // namespace nilkt
