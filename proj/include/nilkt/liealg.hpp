#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nilkt/linsolve.hpp"

namespace nilkt {

/// A finite-dimensional metric Lie algebra given by structure constants over a basis
/// that is declared orthonormal: [e_i, e_j] = sum_l c[l](i,j) e_l.
template <typename T>
struct LieAlgebra {
  int n = 0;
  std::vector<Mat<T>> c;  // c[l] is the n x n matrix of l-th bracket coordinates
  T tol = T(0);

  Vec<T> basis_bracket(int i, int j) const {
    Vec<T> out(n);
    for (int l = 0; l < n; ++l) out[l] = c[l](i, j);
    return out;
  }

  Vec<T> bracket(const Vec<T>& x, const Vec<T>& y) const {
    Vec<T> out(n);
    for (int l = 0; l < n; ++l) {
      T acc(0);
      for (int i = 0; i < n; ++i) {
        if (x[i] == T(0)) continue;
        T row(0);
        for (int j = 0; j < n; ++j) row += c[l](i, j) * y[j];
        acc += x[i] * row;
      }
      out[l] = acc;
    }
    return out;
  }

  /// J(u) defined by <J(u) x, y> = <u, [x, y]>, i.e. J(u) = sum_l u_l c[l]^T.
  /// Skew; maps the center to zero and its complement into itself.
  Mat<T> j(const Vec<T>& u) const {
    Mat<T> m(n, n);
    for (int l = 0; l < n; ++l) {
      if (u[l] == T(0)) continue;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) m(k, i) += u[l] * c[l](i, k);
    }
    return m;
  }

  bool is_abelian() const {
    for (auto& m : c)
      if (!m.is_zero(tol)) return false;
    return true;
  }
};

/// Structural validation. Collects every failed identity rather than stopping at the first.
template <typename T>
std::vector<diagnostic> validate(const LieAlgebra<T>& alg) {
  std::vector<diagnostic> out;
  const int n = alg.n;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const T defect = alg.c[l](i, j) + alg.c[l](j, i);
        if (abs_val(defect) > alg.tol) {
          out.push_back({diagnostic::kind::not_antisymmetric, i, j, l,
                         "bracket coordinates are not antisymmetric in (e_" +
                             std::to_string(i + 1) + ", e_" + std::to_string(j + 1) +
                             ") at coordinate " + std::to_string(l + 1)});
        }
      }
  if (!out.empty()) return out;  // identities below assume antisymmetry

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec<T> bij = alg.basis_bracket(i, j);
      for (int k = j + 1; k < n; ++k) {
        Vec<T> s = alg.bracket(bij, unit_vec<T>(n, k));
        axpy(T(1), alg.bracket(alg.basis_bracket(j, k), unit_vec<T>(n, i)), s);
        axpy(T(1), alg.bracket(alg.basis_bracket(k, i), unit_vec<T>(n, j)), s);
        if (!vec_is_zero(s, alg.tol))
          out.push_back({diagnostic::kind::jacobi_fails, i, j, k,
                         "Jacobi identity fails on (e_" + std::to_string(i + 1) + ", e_" +
                             std::to_string(j + 1) + ", e_" + std::to_string(k + 1) + ")"});
      }
      for (int k = 0; k < n; ++k)
        if (!vec_is_zero(alg.bracket(bij, unit_vec<T>(n, k)), alg.tol)) {
          out.push_back({diagnostic::kind::not_two_step, i, j, k,
                         "[[e_" + std::to_string(i + 1) + ", e_" + std::to_string(j + 1) +
                             "], e_" + std::to_string(k + 1) + "] is nonzero"});
          break;  // one witness per generating pair keeps the list readable
        }
    }
  if (alg.is_abelian())
    out.push_back({diagnostic::kind::abelian, 0, 0, 0, "the algebra is abelian"});
  return out;
}

template <typename T>
void validate_or_throw(const LieAlgebra<T>& alg) {
  auto d = validate(alg);
  if (!d.empty()) throw validation_error("structure constants failed validation", d);
}

/// The metric splitting: center z, its complement v, the derived subalgebra, and the
/// abelian factor a = z intersect derived-perp.
template <typename T>
struct Split {
  SubspaceBasis<T> z, v, derived, a;
};

template <typename T>
Split<T> center_split(const LieAlgebra<T>& alg) {
  const int n = alg.n;
  // x is central iff for every i the vector [x, e_i] vanishes; row-block i has
  // entries A_i(l, p) = c[l](p, i)
  Mat<T> stacked(n * n, n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p) stacked(i * n + l, p) = alg.c[l](p, i);
  Split<T> s;
  s.z = SubspaceBasis<T>(n);
  s.z = SubspaceBasis<T>::from_span(nullspace(stacked, alg.tol), alg.tol);

  std::vector<Vec<T>> gens;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) gens.push_back(alg.basis_bracket(i, j));
  s.derived = SubspaceBasis<T>::from_span(gens, n, alg.tol);
  s.v = s.z.perp(alg.tol);
  s.a = s.z.intersect(s.derived.perp(alg.tol), alg.tol);
  return s;
}

/// Validated algebra plus its splitting and the J-operators of the derived basis.
template <typename T>
struct Context {
  LieAlgebra<T> alg;
  Split<T> split;
  std::vector<Mat<T>> jbasis;  // J(u_s), u_s the canonical basis rows of the derived space

  explicit Context(LieAlgebra<T> a) : alg(std::move(a)) {
    validate_or_throw(alg);
    split = center_split(alg);
    if (!split.z.contains(split.derived, alg.tol))
      throw internal_inconsistency("derived subalgebra escapes the center in a 2-step algebra");
    for (int s = 0; s < split.derived.dim(); ++s)
      jbasis.push_back(alg.j(split.derived.basis_row(s)));
  }

  int dim() const { return alg.n; }
  Mat<T> jz(const Vec<T>& u) const { return alg.j(u); }
};

template <typename T>
bool j_injective(const Context<T>& ctx) {
  return ctx.split.a.dim() == 0;
}

inline Mat<double> to_double(const Mat<Rational>& m) {
  Mat<double> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = double(m(i, j));
  return out;
}

inline LieAlgebra<double> to_double(const LieAlgebra<Rational>& a, double tol = 1e-9) {
  LieAlgebra<double> out;
  out.n = a.n;
  out.tol = tol;
  for (auto& cl : a.c) out.c.push_back(to_double(cl));
  return out;
}

template <typename T>
struct Component {
  SubspaceBasis<T> v;  // inside the center's complement
  SubspaceBasis<T> z;  // = [v, v], inside the derived subalgebra
};

template <typename T>
struct Decomposition {
  std::vector<Component<T>> components;  // the non-abelian factors
  SubspaceBasis<T> abelian;              // central factor orthogonal to every component
  std::vector<SubspaceBasis<T>> modules;  // finest J-invariant splitting of v (pre-merge)
};

namespace detail {

template <typename T>
bool spans_orthogonal(const SubspaceBasis<T>& a, const SubspaceBasis<T>& b, const T& tol) {
  if (a.dim() == 0 || b.dim() == 0) return true;
  return (a.basis() * b.basis().transpose()).is_zero(tol);
}

/// Smallest subspace containing the seed and closed under every operator in ops.
template <typename T>
SubspaceBasis<T> invariant_closure(const Vec<T>& seed, const std::vector<Mat<T>>& ops,
                                   const T& tol) {
  auto u = SubspaceBasis<T>::from_span({seed}, int(seed.size()), tol);
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<Vec<T>> span;
    for (int i = 0; i < u.dim(); ++i) {
      span.push_back(u.basis_row(i));
      for (auto& op : ops) span.push_back(op.apply(u.basis_row(i)));
    }
    auto bigger = SubspaceBasis<T>::from_span(span, u.ambient(), tol);
    if (bigger.dim() > u.dim()) {
      u = bigger;
      grew = true;
    }
  }
  return u;
}

/// Splits an invariant subspace into orthogonal invariant pieces by peeling off the
/// smallest closure seeded from any basis vector. Closures of orthogonal complements
/// stay inside them because the operators are skew.
template <typename T>
std::vector<SubspaceBasis<T>> split_invariant(SubspaceBasis<T> w, const std::vector<Mat<T>>& ops,
                                              const T& tol) {
  std::vector<SubspaceBasis<T>> out;
  while (w.dim() > 0) {
    auto best = invariant_closure(w.basis_row(0), ops, tol);
    for (int i = 1; i < w.dim() && best.dim() > 1; ++i) {
      auto u = invariant_closure(w.basis_row(i), ops, tol);
      if (u.dim() < best.dim()) best = u;
    }
    out.push_back(best);
    w = w.intersect(best.perp(tol), tol);
  }
  return out;
}

}  // namespace detail

/// Finest orthogonal splitting n = a + n_1 + ... + n_r into the central abelian factor
/// and mutually orthogonal ideals, computed by peeling J-invariant closures off v and
/// merging the ones whose derived spans are not orthogonal. Every claimed property is
/// re-verified on the result.
template <typename T>
Decomposition<T> ideal_decomposition(const Context<T>& ctx) {
  const T& tol = ctx.alg.tol;
  const int n = ctx.alg.n;

  const std::vector<SubspaceBasis<T>> modules =
      detail::split_invariant(ctx.split.v, ctx.jbasis, tol);
  const int m = int(modules.size());
  std::vector<SubspaceBasis<T>> derived_spans;
  for (auto& u : modules) {
    std::vector<Vec<T>> gens;
    for (int p = 0; p < u.dim(); ++p)
      for (int q = p + 1; q < u.dim(); ++q)
        gens.push_back(ctx.alg.bracket(u.basis_row(p), u.basis_row(q)));
    derived_spans.push_back(SubspaceBasis<T>::from_span(gens, n, tol));
  }

  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (!detail::spans_orthogonal(derived_spans[a], derived_spans[b], tol))
        parent[find(a)] = find(b);

  Decomposition<T> out;
  out.abelian = ctx.split.a;
  out.modules = modules;
  for (int root = 0; root < m; ++root) {
    if (find(root) != root) continue;
    std::vector<Mat<T>> vparts, zparts;
    for (int a = 0; a < m; ++a)
      if (find(a) == root) {
        vparts.push_back(modules[a].basis());
        zparts.push_back(derived_spans[a].basis());
      }
    Component<T> comp;
    comp.v = SubspaceBasis<T>::from_span(Mat<T>::vstack(vparts), tol);
    comp.z = SubspaceBasis<T>::from_span(Mat<T>::vstack(zparts), tol);
    out.components.push_back(std::move(comp));
  }
  std::sort(out.components.begin(), out.components.end(), [](auto& a, auto& b) {
    return a.v.dim() > 0 && b.v.dim() > 0 && a.v.basis_row(0) > b.v.basis_row(0);
  });

  // post-verification: dimensions, orthogonality, invariance, vanishing cross-brackets
  int vdim = 0, zdim = 0;
  for (auto& comp : out.components) {
    vdim += comp.v.dim();
    zdim += comp.z.dim();
    for (auto& op : ctx.jbasis)
      for (int i = 0; i < comp.v.dim(); ++i)
        if (!comp.v.contains(op.apply(comp.v.basis_row(i)), tol))
          throw internal_inconsistency("decomposition component is not J-invariant");
  }
  if (vdim != ctx.split.v.dim() || zdim != ctx.split.derived.dim())
    throw internal_inconsistency("decomposition does not exhaust the algebra");
  for (size_t a = 0; a < out.components.size(); ++a)
    for (size_t b = a + 1; b < out.components.size(); ++b) {
      auto& ca = out.components[a];
      auto& cb = out.components[b];
      if (!detail::spans_orthogonal(ca.v, cb.v, tol) || !detail::spans_orthogonal(ca.z, cb.z, tol))
        throw internal_inconsistency("decomposition components are not orthogonal");
      for (int p = 0; p < ca.v.dim(); ++p)
        for (int q = 0; q < cb.v.dim(); ++q)
          if (!vec_is_zero(ctx.alg.bracket(ca.v.basis_row(p), cb.v.basis_row(q)), tol))
            throw internal_inconsistency("decomposition components fail to commute");
    }
  return out;
}

enum class Certainty { CertainlyTrue, ProbablyTrue, CertainlyFalse };

inline std::string to_string(Certainty c) {
  switch (c) {
    case Certainty::CertainlyTrue: return "certainly-true";
    case Certainty::ProbablyTrue: return "probably-true";
    default: return "certainly-false";
  }
}

/// Verdict on whether every nonzero x in v has [x, n] equal to the whole center.
/// A negative verdict carries an exact witness pair: J(witness_z) witness_x = 0.
template <typename T>
struct NonsingularReport {
  Certainty verdict = Certainty::ProbablyTrue;
  Vec<T> witness_x, witness_z;
  int samples_checked = 0;
};

/// Decides singularity exactly where structure permits (abelian factor, several
/// components, one-dimensional center) and otherwise samples: deterministic probes
/// through the v-basis first, then seeded random v-vectors. Each sample's rank is
/// computed in the ambient field, so a negative answer is always certain.
template <typename T>
NonsingularReport<T> is_nonsingular(const Context<T>& ctx, int samples = 64,
                                    uint64_t seed = 0x6b696c6c696e67ULL) {
  const T& tol = ctx.alg.tol;
  NonsingularReport<T> rep;

  if (ctx.split.a.dim() > 0) {
    rep.verdict = Certainty::CertainlyFalse;
    if (ctx.split.v.dim() > 0) rep.witness_x = ctx.split.v.basis_row(0);
    rep.witness_z = ctx.split.a.basis_row(0);
    return rep;
  }

  const int m = int(ctx.jbasis.size());
  if (ctx.split.z.dim() == 1) {
    auto ker = SubspaceBasis<T>::from_span(nullspace(ctx.jbasis[0], tol), tol)
                   .intersect(ctx.split.v, tol);
    if (ker.dim() == 0) {
      rep.verdict = Certainty::CertainlyTrue;
    } else {
      rep.verdict = Certainty::CertainlyFalse;
      rep.witness_x = ker.basis_row(0);
      rep.witness_z = ctx.split.z.basis_row(0);
    }
    return rep;
  }

  auto dec = ideal_decomposition(ctx);
  if (dec.components.size() >= 2) {
    rep.verdict = Certainty::CertainlyFalse;
    rep.witness_x = dec.components[0].v.basis_row(0);
    rep.witness_z = dec.components[1].z.basis_row(0);
    return rep;
  }

  const int n = ctx.alg.n;
  auto probe = [&](const Vec<T>& x) -> bool {  // true when a kernel witness was found
    Mat<T> k(n, m);
    for (int s = 0; s < m; ++s) k.set_col(s, ctx.jbasis[s].apply(x));
    Mat<T> ker = nullspace(k, tol);
    if (ker.rows() == 0) return false;
    rep.verdict = Certainty::CertainlyFalse;
    rep.witness_x = x;
    rep.witness_z = Vec<T>(n, T(0));
    for (int s = 0; s < m; ++s) axpy(ker(0, s), ctx.split.derived.basis_row(s), rep.witness_z);
    return true;
  };

  for (int i = 0; i < ctx.split.v.dim(); ++i) {
    ++rep.samples_checked;
    if (probe(ctx.split.v.basis_row(i))) return rep;
  }
  std::mt19937_64 eng(seed);
  std::uniform_int_distribution<int> coeff(-9, 9);
  for (int t = 0; t < samples; ++t) {
    Vec<T> x(n, T(0));
    bool nonzero = false;
    for (int i = 0; i < ctx.split.v.dim(); ++i) {
      int ci = coeff(eng);
      if (ci == 0) continue;
      nonzero = true;
      axpy(T(ci), ctx.split.v.basis_row(i), x);
    }
    if (!nonzero) continue;
    ++rep.samples_checked;
    if (probe(x)) return rep;
  }
  rep.verdict = Certainty::ProbablyTrue;
  return rep;
}

}  // namespace nilkt
