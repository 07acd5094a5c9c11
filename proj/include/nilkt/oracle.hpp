#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nilkt/classify.hpp"
#include "nilkt/derivations.hpp"
#include "nilkt/killing.hpp"

namespace nilkt {

// Brute-force decomposability oracle, independent of the classification
// engine.  A left-invariant tensor field is trivialized to a polynomial map
// w -> coefficient in exponential coordinates; left-invariant tensors are
// exactly the constant polynomials.  A decomposable tensor is a parallel
// tensor plus a combination of symmetric products of Killing vector fields,
// so membership of a constant tensor in the span of those products decides
// decomposability by construction.

/// Monomial in the coordinates w_0..w_{n-1}: variable indices sorted
/// ascending, with multiplicity; the empty monomial is the constant term.
using Monomial = std::vector<int>;

inline Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Vector-valued polynomial in w: the trivialization of a Killing vector
/// field.  On a 2-step algebra these have degree at most 2.
template <typename T>
struct OmegaVectorPoly {
  int n = 0;
  std::map<Monomial, Vec<T>> coeff;  // absent monomial = zero coefficient

  void add(const Monomial& m, const Vec<T>& v) {
    if (int(m.size()) > 2)
      throw internal_inconsistency("Killing-field polynomial exceeds degree 2");
    auto it = coeff.find(m);
    if (it == coeff.end()) {
      if (!vec_is_zero(v)) coeff.emplace(m, v);
      return;
    }
    for (int i = 0; i < n; ++i) {
      const T s = it->second[i] + v[i];
      it->second[i] = s;
    }
    if (vec_is_zero(it->second)) coeff.erase(it);
  }

  void add_scaled(const OmegaVectorPoly& p, const T& c) {
    for (const auto& [m, v] : p.coeff) add(m, vscale(c, v));
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, v] : coeff) d = std::max(d, int(m.size()));
    return d;
  }
  bool is_zero() const { return coeff.empty(); }
};

/// Matrix-valued polynomial in w: the trivialization of a symmetric 2-tensor
/// field.  Products of two Killing fields have degree at most 4.
template <typename T>
struct OmegaPolynomial {
  int n = 0;
  std::map<Monomial, Mat<T>> coeff;  // symmetric coefficient matrices

  void add(const Monomial& m, const Mat<T>& v) {
    if (int(m.size()) > 4)
      throw internal_inconsistency("2-tensor polynomial exceeds degree 4");
    if (!v.is_symmetric())
      throw internal_inconsistency("2-tensor polynomial coefficient is not symmetric");
    auto it = coeff.find(m);
    if (it == coeff.end()) {
      if (!v.is_zero()) coeff.emplace(m, v);
      return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) coeff.erase(it);
  }

  void add_scaled(const OmegaPolynomial& p, const T& c) {
    for (const auto& [m, v] : p.coeff) add(m, v.scaled(c));
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, v] : coeff) d = std::max(d, int(m.size()));
    return d;
  }
  bool is_zero() const { return coeff.empty(); }
  bool is_constant() const { return degree() == 0; }

  /// The constant term (zero matrix when absent).
  Mat<T> constant_term() const {
    auto it = coeff.find(Monomial{});
    return it == coeff.end() ? Mat<T>(n, n) : it->second;
  }

  T max_abs() const {
    T m(0);
    for (const auto& [mono, v] : coeff) m = std::max(m, v.max_abs());
    return m;
  }
};

template <typename T>
bool omega_equal(const OmegaPolynomial<T>& a, const OmegaPolynomial<T>& b,
                 const T& tol = T(0)) {
  OmegaPolynomial<T> d = a;
  d.add_scaled(b, T(-1));
  return d.max_abs() <= tol;
}

/// Evaluates the polynomial at a point w of the algebra.
template <typename T>
Vec<T> omega_evaluate(const OmegaVectorPoly<T>& f, const Vec<T>& w) {
  if (int(w.size()) != f.n)
    throw dimension_mismatch("evaluation point size does not match the polynomial");
  Vec<T> out(f.n, T(0));
  for (const auto& [mono, v] : f.coeff) {
    T x(1);
    for (int idx : mono) x *= w[idx];
    axpy(x, v, out);
  }
  return out;
}

template <typename T>
Mat<T> omega_evaluate(const OmegaPolynomial<T>& f, const Vec<T>& w) {
  if (int(w.size()) != f.n)
    throw dimension_mismatch("evaluation point size does not match the polynomial");
  Mat<T> out(f.n, f.n);
  for (const auto& [mono, m] : f.coeff) {
    T x(1);
    for (int idx : mono) x *= w[idx];
    out = out + m.scaled(x);
  }
  return out;
}

// ---- Killing vector fields as polynomials ----

/// Killing field of right translation by x, trivialized:
///   Omega(w) = x - [w, x].
template <typename T>
OmegaVectorPoly<T> omega_vector(const Context<T>& ctx, const Vec<T>& x) {
  const int n = ctx.dim();
  if (int(x.size()) != n) throw dimension_mismatch("vector size does not match the algebra");
  OmegaVectorPoly<T> p;
  p.n = n;
  p.add({}, x);
  for (int k = 0; k < n; ++k) {
    Vec<T> ek(n, T(0));
    ek[k] = T(1);
    p.add({k}, vscale(T(-1), ctx.alg.bracket(ek, x)));
  }
  return p;
}

/// Killing field of right translation by the basis vector e_i.
template <typename T>
OmegaVectorPoly<T> omega_vector(const Context<T>& ctx, int i) {
  const int n = ctx.dim();
  if (i < 0 || i >= n) throw dimension_mismatch("basis index out of range");
  Vec<T> x(n, T(0));
  x[i] = T(1);
  return omega_vector(ctx, x);
}

/// Killing field of the one-parameter isometry group generated by a skew
/// derivation D, trivialized:
///   Omega(w) = D w - 1/2 [w, D w].
template <typename T>
OmegaVectorPoly<T> omega_vector(const Context<T>& ctx, const Mat<T>& d) {
  const int n = ctx.dim();
  const T& tol = ctx.alg.tol;
  if (d.rows() != n || d.cols() != n)
    throw dimension_mismatch("derivation size does not match the algebra");
  if (!(d + d.transpose()).is_zero(tol)) throw not_skew("the generator matrix is not skew");
  if (derivation_defect(ctx.alg, d) > tol)
    throw user_error("the generator matrix is not a derivation");
  OmegaVectorPoly<T> p;
  p.n = n;
  const T half = T(1) / T(2);
  for (int k = 0; k < n; ++k) p.add({k}, d.col(k));
  for (int k = 0; k < n; ++k) {
    Vec<T> ek(n, T(0));
    ek[k] = T(1);
    for (int l = k; l < n; ++l) {
      Vec<T> el(n, T(0));
      el[l] = T(1);
      Vec<T> v = ctx.alg.bracket(ek, d.col(l));
      if (l != k) axpy(T(1), ctx.alg.bracket(el, d.col(k)), v);
      p.add({k, l}, vscale(-half, v));
    }
  }
  return p;
}

/// Symmetric product of two Killing fields, coefficientwise.  The symmetric
/// product of vectors x, y is pinned to the matrix x y^T + y x^T, so the
/// metric is one half the sum of the squared orthonormal basis vectors.
template <typename T>
OmegaPolynomial<T> omega_product(const OmegaVectorPoly<T>& a, const OmegaVectorPoly<T>& b) {
  if (a.n != b.n) throw dimension_mismatch("product factors live on different algebras");
  OmegaPolynomial<T> out;
  out.n = a.n;
  for (const auto& [ma, va] : a.coeff)
    for (const auto& [mb, vb] : b.coeff)
      out.add(monomial_product(ma, mb), Mat<T>::sym_outer(va, vb));
  return out;
}

// ---- generator set ----

/// The complete Killing-field basis of the ambient isometry algebra
/// (translations plus one field per skew-derivation basis element) and the
/// parallel-tensor basis as constant polynomials.
template <typename T>
struct GeneratorSet {
  std::vector<OmegaVectorPoly<T>> fields;  // first n translations, then derivations
  std::vector<Mat<T>> derivations;         // the basis behind fields[n..]
  std::vector<Mat<T>> parallel;            // constant polynomials
  int translations = 0;

  int field_count() const { return int(fields.size()); }
  int size() const { return int(fields.size() + parallel.size()); }
};

template <typename T>
GeneratorSet<T> generator_set(const Context<T>& ctx) {
  GeneratorSet<T> g;
  g.translations = ctx.dim();
  for (int i = 0; i < ctx.dim(); ++i) g.fields.push_back(omega_vector(ctx, i));
  for (const auto& d : skew_derivations(ctx).basis_matrices()) {
    g.derivations.push_back(d);
    g.fields.push_back(omega_vector(ctx, d));
  }
  g.parallel = parallel_space(ctx).basis_matrices();
  return g;
}

// ---- span membership ----

inline constexpr int kDefaultOracleCap = 10;

namespace detail {
inline void check_oracle_cap(int n, int cap) {
  if (n > cap)
    throw oracle_cap_exceeded("algebra dimension " + std::to_string(n) +
                              " exceeds the oracle cap " + std::to_string(cap) +
                              "; the membership system grows like n^4, raise the cap "
                              "explicitly to force the computation");
}
}  // namespace detail

template <typename T>
struct MembershipResult {
  bool member = false;
  std::vector<T> parallel_coeff;                    // one per parallel basis element
  std::vector<std::tuple<int, int, T>> pair_coeff;  // nonzero coefficients on fields a <= b
};

/// Expands a membership certificate back into a polynomial; a valid
/// certificate for S reproduces the constant polynomial S.
template <typename T>
OmegaPolynomial<T> reconstruct(const GeneratorSet<T>& gens, const MembershipResult<T>& r) {
  OmegaPolynomial<T> out;
  out.n = gens.fields.empty() ? 0 : gens.fields.front().n;
  for (size_t p = 0; p < r.parallel_coeff.size(); ++p)
    out.add({}, gens.parallel[p].scaled(r.parallel_coeff[p]));
  for (const auto& [a, b, c] : r.pair_coeff)
    out.add_scaled(omega_product(gens.fields[a], gens.fields[b]), c);
  return out;
}

/// Decides, for each tensor, membership in
///   span({parallel basis} u {field_a . field_b : a <= b})
/// with one elimination.  Pairwise products of the fixed Killing basis span
/// all products of Killing fields: the symmetric product is bilinear, so
/// (sum_j a_j xi_j).(sum_k b_k xi_k) = sum_{j,k} a_j b_k xi_j.xi_k.
template <typename T>
std::vector<MembershipResult<T>> membership_many(const Context<T>& ctx,
                                                 const GeneratorSet<T>& gens,
                                                 const std::vector<Mat<T>>& tensors,
                                                 int cap = kDefaultOracleCap) {
  const int n = ctx.dim();
  detail::check_oracle_cap(n, cap);
  const int sd = sym_dim(n);
  const int np = int(gens.parallel.size());
  const int nf = gens.field_count();

  for (const auto& s : tensors) {
    if (s.rows() != n || s.cols() != n)
      throw dimension_mismatch("tensor size does not match the algebra");
    if (!s.is_symmetric(ctx.alg.tol)) throw not_symmetric("membership needs a symmetric tensor");
  }

  // Column polynomials: the parallel constants, then the products over
  // ordered pairs of Killing basis fields.
  std::vector<OmegaPolynomial<T>> cols;
  std::vector<std::pair<int, int>> pairs;
  for (const auto& t : gens.parallel) {
    OmegaPolynomial<T> c;
    c.n = n;
    c.add({}, t);
    cols.push_back(std::move(c));
  }
  for (int a = 0; a < nf; ++a)
    for (int b = a; b < nf; ++b) {
      pairs.emplace_back(a, b);
      cols.push_back(omega_product(gens.fields[a], gens.fields[b]));
    }

  // Coefficient space: one svec block per monomial.  Rows that are zero in
  // every column and every right-hand side cannot affect the verdicts and
  // are dropped before the elimination.
  std::map<Monomial, int> mono_index;
  mono_index.emplace(Monomial{}, 0);
  for (const auto& c : cols)
    for (const auto& [m, v] : c.coeff) mono_index.emplace(m, 0);
  {
    int next = 0;
    for (auto it = mono_index.begin(); it != mono_index.end(); ++it) it->second = next++;
  }
  const int blocks = int(mono_index.size());

  std::vector<char> occupied(size_t(blocks) * sd, 0);
  auto mark = [&](int block, const Vec<T>& sv) {
    for (int k = 0; k < sd; ++k)
      if (!(sv[k] == T(0))) occupied[size_t(block) * sd + k] = 1;
  };
  for (const auto& c : cols)
    for (const auto& [m, v] : c.coeff) mark(mono_index.at(m), svec(v));
  for (const auto& s : tensors) mark(0, svec(s));

  std::vector<int> row_of(size_t(blocks) * sd, -1);
  int rows = 0;
  for (size_t r = 0; r < occupied.size(); ++r)
    if (occupied[r]) row_of[r] = rows++;

  Mat<T> m(rows, int(cols.size()));
  for (int j = 0; j < int(cols.size()); ++j)
    for (const auto& [mono, v] : cols[j].coeff) {
      const Vec<T> sv = svec(v);
      const size_t base = size_t(mono_index.at(mono)) * sd;
      for (int k = 0; k < sd; ++k)
        if (row_of[base + k] >= 0) m(row_of[base + k], j) = sv[k];
    }

  std::vector<Vec<T>> rhs;
  T scale(1);
  for (const auto& s : tensors) {
    Vec<T> b(rows, T(0));
    const Vec<T> sv = svec(s);
    for (int k = 0; k < sd; ++k)
      if (row_of[k] >= 0) b[row_of[k]] = sv[k];
    rhs.push_back(std::move(b));
    const T cand = T(1) + s.max_abs();
    scale = std::max(scale, cand);
  }

  const T tol = is_exact_v<T> ? T(0) : ctx.alg.tol;
  T residual_tol(0);
  if constexpr (!is_exact_v<T>) residual_tol = ctx.alg.tol * scale;
  auto sols = solve_affine_many(m, rhs, tol, residual_tol, /*want_witness=*/false);

  std::vector<MembershipResult<T>> out;
  for (size_t q = 0; q < sols.size(); ++q) {
    MembershipResult<T> r;
    r.member = sols[q].feasible;
    if (r.member) {
      for (int p = 0; p < np; ++p) r.parallel_coeff.push_back(sols[q].particular[p]);
      for (size_t pi = 0; pi < pairs.size(); ++pi) {
        const T c = sols[q].particular[np + int(pi)];
        if (!(c == T(0))) r.pair_coeff.emplace_back(pairs[pi].first, pairs[pi].second, c);
      }
      // A certificate must reproduce the tensor as a polynomial (the tensor
      // is read through svec, which symmetrizes sub-tolerance asymmetry).
      OmegaPolynomial<T> rec = reconstruct(gens, r);
      rec.add({}, unsvec(svec(tensors[q]), n).scaled(T(-1)));
      if (rec.max_abs() > residual_tol)
        throw internal_inconsistency("membership certificate fails to reproduce the tensor");
    }
    out.push_back(std::move(r));
  }
  return out;
}

template <typename T>
MembershipResult<T> decomposable_membership(const Context<T>& ctx, const GeneratorSet<T>& gens,
                                            const Mat<T>& s, int cap = kDefaultOracleCap) {
  return membership_many(ctx, gens, std::vector<Mat<T>>{s}, cap)[0];
}

template <typename T>
MembershipResult<T> decomposable_membership(const Context<T>& ctx, const Mat<T>& s,
                                            int cap = kDefaultOracleCap) {
  detail::check_oracle_cap(ctx.dim(), cap);
  return decomposable_membership(ctx, generator_set(ctx), s, cap);
}

// ---- crosscheck against the classification engine ----

/// Deterministic pseudo-random combinations of a tensor basis with small
/// rational coefficients (numerators in [-6, 6], denominators in {1, 2, 3});
/// the raw engine words are mapped by hand so every platform draws the same
/// sequence.
template <typename T>
std::vector<Mat<T>> random_combinations(const std::vector<Mat<T>>& basis, int count,
                                        unsigned seed) {
  std::mt19937 eng(seed);
  std::vector<Mat<T>> out;
  if (basis.empty()) return out;
  const int n = basis.front().rows();
  while (int(out.size()) < count) {
    Mat<T> s(n, n);
    for (const auto& b : basis) {
      const int num = int(eng() % 13u) - 6;
      const int den = int(eng() % 3u) + 1;
      if (num != 0) s = s + b.scaled(T(num) / T(den));
    }
    if (!s.is_zero()) out.push_back(std::move(s));
  }
  return out;
}

struct CrosscheckRecord {
  std::string label;
  bool member = false;
  Verdict verdict = Verdict::Decomposable;
  bool numerical = false;  // classification fell back to float arithmetic
};

struct CrosscheckReport {
  int checked = 0;
  int decomposable = 0;
  int numerical = 0;
  std::vector<CrosscheckRecord> records;
};

namespace detail {
/// Classification verdict with the float fallback applied when the exact
/// spectrum cannot be computed.
template <typename T>
std::pair<Verdict, bool> classify_verdict(const Context<T>& ctx, const Mat<T>& s) {
  if constexpr (is_exact_v<T>) {
    try {
      return {classify(ctx, s).verdict, false};
    } catch (const needs_float_fallback&) {
      Context<double> fctx(to_double(ctx.alg));
      return {classify(fctx, to_double(s)).verdict, true};
    }
  } else {
    return {classify(ctx, s).verdict, false};
  }
}
}  // namespace detail

/// Runs the membership oracle and the classification engine on every Killing
/// basis element plus `trials` seeded random Killing combinations, and
/// demands that the two verdicts agree on each tensor.
template <typename T>
CrosscheckReport crosscheck(const Context<T>& ctx, int trials = 5, unsigned seed = 1,
                            int cap = kDefaultOracleCap) {
  detail::check_oracle_cap(ctx.dim(), cap);
  const GeneratorSet<T> gens = generator_set(ctx);
  const std::vector<Mat<T>> basis = killing_space(ctx).basis_matrices();

  std::vector<Mat<T>> tensors = basis;
  for (auto& s : random_combinations(basis, trials, seed)) tensors.push_back(std::move(s));
  std::vector<std::string> labels;
  for (size_t i = 0; i < basis.size(); ++i) labels.push_back("basis " + std::to_string(i));
  for (int i = 0; i < trials; ++i) labels.push_back("random " + std::to_string(i));

  const auto memberships = membership_many(ctx, gens, tensors, cap);

  CrosscheckReport report;
  for (size_t i = 0; i < tensors.size(); ++i) {
    const auto [verdict, numerical] = detail::classify_verdict(ctx, tensors[i]);
    const bool member = memberships[i].member;
    if (member != (verdict == Verdict::Decomposable))
      throw oracle_disagreement("oracle disagreement on " + labels[i] + ": membership says " +
                                (member ? "member" : "not_member") +
                                ", classification says " + to_string(verdict) +
                                (numerical ? " (float fallback)" : " (exact)"));
    report.records.push_back({labels[i], member, verdict, numerical});
    ++report.checked;
    if (verdict == Verdict::Decomposable) ++report.decomposable;
    if (numerical) ++report.numerical;
  }
  return report;
}

}  // namespace nilkt
