#pragma once

#include <optional>

#include "nilkt/killing.hpp"

namespace nilkt {

/// Worst violation of D[e_i,e_j] = [De_i,e_j] + [e_i,De_j] over all basis pairs.
template <typename T>
T derivation_defect(const LieAlgebra<T>& alg, const Mat<T>& d) {
  T worst(0);
  for (int i = 0; i < alg.n; ++i) {
    const Vec<T> dei = d.col(i);
    Vec<T> ei(alg.n, T(0));
    ei[i] = T(1);
    for (int j = i + 1; j < alg.n; ++j) {
      Vec<T> ej(alg.n, T(0));
      ej[j] = T(1);
      Vec<T> r = d.apply(alg.basis_bracket(i, j));
      axpy(T(-1), alg.bracket(dei, ej), r);
      axpy(T(-1), alg.bracket(ei, d.col(j)), r);
      const T mag = vec_max_abs(r);
      if (mag > worst) worst = mag;
    }
  }
  return worst;
}

/// Skew-symmetric derivations. A skew endomorphism preserving v and z is a
/// derivation exactly when j(A z_t) = [T, j(z_t)] for the blocks T on v and A
/// on z, so the space is computed as one nullspace over those blocks; every
/// basis element is then re-verified against the raw derivation identity.
template <typename T>
TensorSpace<T> skew_derivations(const Context<T>& ctx) {
  const int n = ctx.alg.n;
  const auto& v = ctx.split.v;
  const auto& z = ctx.split.z;
  const Mat<T> pv = v.projector(ctx.alg.tol);
  const Mat<T> pz = z.projector(ctx.alg.tol);

  std::vector<Mat<T>> units;
  for (int p = 0; p < v.dim(); ++p)
    for (int q = p + 1; q < v.dim(); ++q)
      units.push_back(Mat<T>::skew_outer(v.basis_row(p), v.basis_row(q)));
  for (int p = 0; p < z.dim(); ++p)
    for (int q = p + 1; q < z.dim(); ++q)
      units.push_back(Mat<T>::skew_outer(z.basis_row(p), z.basis_row(q)));

  TensorSpace<T> out;
  out.n = n;
  out.symmetric = false;
  if (units.empty()) {
    out.coords = SubspaceBasis<T>(skew_dim(n));
    return out;
  }

  std::vector<Mat<T>> jz;
  for (int s = 0; s < z.dim(); ++s) jz.push_back(ctx.alg.j(z.basis_row(s)));
  std::vector<Vec<T>> columns;
  for (auto& u : units) {
    const Mat<T> uv = pv * u * pv;
    Vec<T> col;
    for (int s = 0; s < z.dim(); ++s) {
      auto r = vec_of_mat(ctx.alg.j(u.apply(z.basis_row(s))) - commutator(uv, jz[s]));
      col.insert(col.end(), r.begin(), r.end());
    }
    columns.push_back(std::move(col));
  }
  Mat<T> system(int(columns.front().size()), int(units.size()));
  for (size_t c = 0; c < units.size(); ++c) system.set_col(int(c), columns[c]);
  const Mat<T> coeffs = nullspace(system, ctx.alg.tol);

  std::vector<Vec<T>> rows;
  for (int r = 0; r < coeffs.rows(); ++r) {
    Mat<T> d(n, n);
    for (size_t u = 0; u < units.size(); ++u) d = d + units[u].scaled(coeffs(r, int(u)));
    rows.push_back(kvec(d));
  }
  out.coords = SubspaceBasis<T>::from_span(rows, skew_dim(n), ctx.alg.tol);

  for (auto& d : out.basis_matrices()) {
    const T tol = ctx.alg.tol * (T(1) + d.max_abs());
    if (!(d + d.transpose()).is_zero(tol) || !(pz * d * pv).is_zero(tol) ||
        !(pv * d * pz).is_zero(tol) || derivation_defect(ctx.alg, d) > tol)
      throw internal_inconsistency("skew derivation basis fails the raw identity");
  }
  return out;
}

/// Result of extending a skew map on v to a skew derivation of the whole algebra.
template <typename T>
struct ExtensionResult {
  std::optional<Mat<T>> derivation;  // input on v, solved skew block on z
  std::vector<Mat<T>> freedom;       // homogeneous z-blocks; empty when j is injective
  Vec<T> witness;                    // left-kernel infeasibility certificate otherwise

  bool feasible() const { return derivation.has_value(); }
};

template <typename T>
ExtensionResult<T> extend_skew(const Context<T>& ctx, const Mat<T>& t) {
  const int n = ctx.alg.n;
  if (t.rows() != n || t.cols() != n)
    throw dimension_mismatch("extension input must match the algebra dimension");
  const T in_tol = ctx.alg.tol * (T(1) + t.max_abs());
  if (!(t + t.transpose()).is_zero(in_tol)) throw not_skew("extension input must be skew");
  const Mat<T> pv = ctx.split.v.projector(ctx.alg.tol);
  if (!(pv * t * pv - t).is_zero(in_tol))
    throw not_skew("extension input must be supported on v");

  const auto& z = ctx.split.z;
  std::vector<Mat<T>> units;
  for (int p = 0; p < z.dim(); ++p)
    for (int q = p + 1; q < z.dim(); ++q)
      units.push_back(Mat<T>::skew_outer(z.basis_row(p), z.basis_row(q)));

  Vec<T> rhs;
  std::vector<Vec<T>> columns(units.size());
  for (int s = 0; s < z.dim(); ++s) {
    auto b = vec_of_mat(commutator(t, ctx.alg.j(z.basis_row(s))));
    rhs.insert(rhs.end(), b.begin(), b.end());
    for (size_t u = 0; u < units.size(); ++u) {
      auto col = vec_of_mat(ctx.alg.j(units[u].apply(z.basis_row(s))));
      columns[u].insert(columns[u].end(), col.begin(), col.end());
    }
  }
  Mat<T> system(int(rhs.size()), int(units.size()));
  for (size_t u = 0; u < units.size(); ++u) system.set_col(int(u), columns[u]);

  auto sol = solve_affine(system, rhs, ctx.alg.tol, in_tol);
  ExtensionResult<T> out;
  if (!sol.feasible) {
    out.witness = sol.witness;
    return out;
  }
  Mat<T> d = t;
  for (size_t u = 0; u < units.size(); ++u) d = d + units[u].scaled(sol.particular[int(u)]);
  const T tol = ctx.alg.tol * (T(1) + d.max_abs());
  if (derivation_defect(ctx.alg, d) > tol || !(d + d.transpose()).is_zero(tol))
    throw internal_inconsistency("assembled extension is not a skew derivation");
  out.derivation = std::move(d);
  for (int h = 0; h < sol.homogeneous.dim(); ++h) {
    Mat<T> a(n, n);
    const Vec<T> row = sol.homogeneous.basis_row(h);
    for (size_t u = 0; u < units.size(); ++u) a = a + units[u].scaled(row[int(u)]);
    out.freedom.push_back(std::move(a));
  }
  if (j_injective(ctx) && !out.freedom.empty())
    throw internal_inconsistency("injective j admits at most one extension");
  return out;
}

}  // namespace nilkt
