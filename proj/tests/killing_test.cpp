#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "nilkt/catalog.hpp"
#include "nilkt/killing.hpp"

using namespace nilkt;
using namespace nilkt::testing;

namespace {

// Independent oracle. S is a Killing tensor exactly when the cubic form
// <[y, Sy], y> vanishes identically; extracting monomial coefficients, that is
// equivalent to the symmetrization of (a,b,c) -> <[e_a, S e_b], e_c> vanishing
// on every basis triple. Uses only the bracket and the metric, no connection.
bool cubic_killing_oracle(const Context<Rational>& ctx, const Mat<Rational>& s) {
  const int n = ctx.alg.n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Rational acc(0);
        const int perms[6][3] = {{i, j, k}, {i, k, j}, {j, i, k},
                                 {j, k, i}, {k, i, j}, {k, j, i}};
        for (auto& p : perms) {
          Vec<Rational> ea(n, Rational(0)), eb(n, Rational(0)), ec(n, Rational(0));
          ea[p[0]] = 1;
          eb[p[1]] = 1;
          ec[p[2]] = 1;
          acc += dot(ctx.alg.bracket(ea, s.apply(eb)), ec);
        }
        if (!(acc == Rational(0))) return false;
      }
  return true;
}

Context<Rational> ctx_of(const std::string& name) {
  return Context<Rational>(catalog_entry(name).algebra);
}

// Nonsingular fixture: two anticommuting complex structures, so every nonzero
// central direction acts invertibly on v.
LieAlgebra<Rational> nonsingular_dim6_algebra() {
  LieAlgebra<Rational> alg;
  alg.n = 6;
  alg.c.assign(6, Mat<Rational>(6, 6));
  auto set = [&](int i, int j, int l, long v) {
    alg.c[l - 1](i - 1, j - 1) = v;
    alg.c[l - 1](j - 1, i - 1) = -v;
  };
  set(1, 2, 5, 1);
  set(3, 4, 5, 1);
  set(1, 3, 6, 1);
  set(2, 4, 6, -1);
  return alg;
}

const char* kCatalog[] = {"heisenberg-1", "heisenberg-2", "heisenberg-3",
                          "dim6-free2step", "dim8-double", "h1-plus-h1",
                          "h1-plus-abelian2"};

}  // namespace

TEST_CASE("symmetric and skew coordinates round-trip") {
  CHECK(sym_dim(4) == 10);
  CHECK(skew_dim(4) == 6);
  RationalSampler sampler(41);
  auto s = sampler.symmetric(5);
  CHECK(unsvec(svec(s), 5) == s);
  Mat<Rational> a = sampler.mat(5, 5);
  Mat<Rational> k = a - a.transpose();
  CHECK(unkvec(kvec(k), 5) == k);
  CHECK(sym_unit<Rational>(3, 0, 0) == rmat({{2, 0, 0}, {0, 0, 0}, {0, 0, 0}}) -
                                           rmat({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
  CHECK(skew_unit<Rational>(3, 0, 2) == rmat({{0, 0, 1}, {0, 0, 0}, {-1, 0, 0}}));
}

TEST_CASE("killing_space agrees with the cubic oracle on the whole catalog") {
  for (auto name : kCatalog) {
    CAPTURE(name);
    auto ctx = ctx_of(name);
    auto space = killing_space(ctx);
    for (auto& b : space.basis_matrices()) {
      CHECK(cubic_killing_oracle(ctx, b));
      CHECK(is_killing(ctx, b).killing);
    }
    // Two-route agreement on random symmetric tensors, exact.
    RationalSampler sampler(1000 + ctx.alg.n);
    for (int trial = 0; trial < 15; ++trial) {
      auto s = sampler.symmetric(ctx.alg.n);
      CHECK(is_killing(ctx, s).killing == cubic_killing_oracle(ctx, s));
      CHECK(is_killing(ctx, s).killing == space.contains(s));
    }
    // Killing combinations stay Killing (it is a linear space).
    if (space.dim() >= 2) {
      auto mix = space.basis_matrix(0).scaled(Rational(3, 2)) +
                 space.basis_matrix(space.dim() - 1).scaled(Rational(-7, 3));
      CHECK(cubic_killing_oracle(ctx, mix));
      CHECK(is_killing(ctx, mix).killing);
    }
  }
}

TEST_CASE("killing_space dimensions across the catalog") {
  CHECK(killing_space(ctx_of("heisenberg-1")).dim() == 2);
  CHECK(killing_space(ctx_of("heisenberg-2")).dim() == 5);
  CHECK(killing_space(ctx_of("heisenberg-3")).dim() == 10);
  CHECK(killing_space(ctx_of("dim6-free2step")).dim() == 8);
  CHECK(killing_space(ctx_of("dim8-double")).dim() == 8);
  CHECK(killing_space(ctx_of("h1-plus-h1")).dim() == 5);
  CHECK(killing_space(ctx_of("h1-plus-abelian2")).dim() == 7);
  Context<Rational> ns(nonsingular_dim6_algebra());
  CHECK(killing_space(ns).dim() == 4);
}

TEST_CASE("metric, v-identity and central squares are always Killing") {
  for (auto name : kCatalog) {
    CAPTURE(name);
    auto ctx = ctx_of(name);
    auto space = killing_space(ctx);
    const int n = ctx.alg.n;
    CHECK(space.contains(Mat<Rational>::identity(n)));
    CHECK(space.contains(ctx.split.v.projector()));
    for (int p = 0; p < ctx.split.z.dim(); ++p)
      for (int q = p; q < ctx.split.z.dim(); ++q)
        CHECK(space.contains(
            Mat<Rational>::sym_outer(ctx.split.z.basis_row(p), ctx.split.z.basis_row(q))));
  }
}

TEST_CASE("heisenberg-1 Killing space is the v-identity plus central square") {
  auto ctx = ctx_of("heisenberg-1");
  auto space = killing_space(ctx);
  REQUIRE(space.dim() == 2);
  auto expected = SubspaceBasis<Rational>::from_span(
      {svec(rmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}})),
       svec(rmat({{0, 0, 0}, {0, 0, 0}, {0, 0, 1}}))},
      sym_dim(3));
  CHECK(space.coords.equals(expected));
  CHECK_FALSE(space.contains(rmat({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}})));
}

TEST_CASE("dim6 Killing space matches the known eight-dimensional family") {
  auto ctx = ctx_of("dim6-free2step");
  auto space = killing_space(ctx);
  REQUIRE(space.dim() == 8);
  std::vector<Vec<Rational>> rows;
  Mat<Rational> idv(6, 6);
  for (int i = 0; i < 3; ++i) idv(i, i) = 1;
  rows.push_back(svec(idv));
  // The mixed generator pairs each v-direction with the opposite central one.
  Mat<Rational> mixed(6, 6);
  auto put = [&](int i, int j, long v) {
    mixed(i - 1, j - 1) = v;
    mixed(j - 1, i - 1) = v;
  };
  put(1, 6, 1);
  put(2, 5, -1);
  put(3, 4, 1);
  rows.push_back(svec(mixed));
  for (int p = 3; p < 6; ++p)
    for (int q = p; q < 6; ++q) rows.push_back(svec(sym_unit<Rational>(6, p, q)));
  auto expected = SubspaceBasis<Rational>::from_span(rows, sym_dim(6));
  REQUIRE(expected.dim() == 8);
  CHECK(space.coords.equals(expected));
  CHECK(is_killing(ctx, mixed).killing);
  CHECK(cubic_killing_oracle(ctx, mixed));
}

TEST_CASE("is_killing reports the worst violated condition") {
  auto ctx = ctx_of("heisenberg-1");
  auto rep = is_killing(ctx, rmat({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
  REQUIRE_FALSE(rep.killing);
  REQUIRE(rep.worst.has_value());
  CHECK(rep.worst->condition == 'a');
  CHECK(rep.worst->i == 0);
  CHECK(rep.worst->j == 1);
  CHECK(rep.worst->residual == Rational(1));

  // A mixed-block violation in a singular algebra hits condition (b).
  auto ctx6 = ctx_of("dim6-free2step");
  Mat<Rational> bad(6, 6);
  bad(0, 3) = 1;  // pairs e1 with the central e4
  bad(3, 0) = 1;
  auto rep6 = is_killing(ctx6, bad);
  REQUIRE_FALSE(rep6.killing);
  CHECK(rep6.worst->condition == 'b');

  CHECK_THROWS_AS(is_killing(ctx, Mat<Rational>(2, 2)), dimension_mismatch);
  CHECK_THROWS_AS(is_killing(ctx, rmat({{0, 1, 0}, {0, 0, 0}, {0, 0, 0}})),
                  not_symmetric);
}

TEST_CASE("component_split reconstructs and lands in the expected blocks") {
  auto ctx = ctx_of("h1-plus-abelian2");
  auto parts = component_split(ctx, Mat<Rational>::identity(5));
  CHECK(parts.s_v == rmat({{1, 0, 0, 0, 0},
                           {0, 1, 0, 0, 0},
                           {0, 0, 0, 0, 0},
                           {0, 0, 0, 0, 0},
                           {0, 0, 0, 0, 0}}));
  CHECK(parts.s_m.is_zero());
  CHECK(parts.s_z == rmat({{0, 0, 0, 0, 0},
                           {0, 0, 0, 0, 0},
                           {0, 0, 1, 0, 0},
                           {0, 0, 0, 1, 0},
                           {0, 0, 0, 0, 1}}));

  auto ctx6 = ctx_of("dim6-free2step");
  Mat<Rational> mixed(6, 6);
  auto put = [&](int i, int j, long v) {
    mixed(i - 1, j - 1) = v;
    mixed(j - 1, i - 1) = v;
  };
  put(1, 6, 1);
  put(2, 5, -1);
  put(3, 4, 1);
  auto parts6 = component_split(ctx6, mixed);
  CHECK(parts6.s_v.is_zero());
  CHECK(parts6.s_m == mixed);
  CHECK(parts6.s_z.is_zero());

  auto entry8 = catalog_entry("dim8-double");
  Context<Rational> ctx8(entry8.algebra);
  auto s8 = entry8.tensors.at("S");
  CHECK(is_killing(ctx8, s8).killing);
  auto parts8 = component_split(ctx8, s8);
  CHECK(parts8.s_v == s8);
  CHECK(parts8.s_m.is_zero());
  CHECK(parts8.s_z.is_zero());

  // Split of a random (generally non-Killing) tensor still reconstructs.
  RationalSampler sampler(77);
  auto s = sampler.symmetric(5);
  auto rparts = component_split(ctx, s);
  CHECK(rparts.s_v + rparts.s_m + rparts.s_z == s);
}

TEST_CASE("Killing tensors have no mixed part when no central direction degenerates") {
  std::vector<Context<Rational>> nonsingular;
  nonsingular.push_back(ctx_of("heisenberg-1"));
  nonsingular.push_back(ctx_of("heisenberg-2"));
  nonsingular.push_back(ctx_of("heisenberg-3"));
  nonsingular.emplace_back(nonsingular_dim6_algebra());
  for (auto& ctx : nonsingular) {
    auto verdict = is_nonsingular(ctx).verdict;
    REQUIRE(verdict != Certainty::CertainlyFalse);
    for (auto& b : killing_space(ctx).basis_matrices())
      CHECK(component_split(ctx, b).s_m.is_zero());
  }
  // dim6 is singular and genuinely has a mixed Killing tensor.
  auto ctx6 = ctx_of("dim6-free2step");
  bool found_mixed = false;
  for (auto& b : killing_space(ctx6).basis_matrices())
    found_mixed = found_mixed || !component_split(ctx6, b).s_m.is_zero();
  CHECK(found_mixed);
}

TEST_CASE("connection_table satisfies the Koszul formula exactly") {
  for (auto name : kCatalog) {
    CAPTURE(name);
    auto ctx = ctx_of(name);
    const int n = ctx.alg.n;
    auto table = connection_table(ctx);
    for (int i = 0; i < n; ++i) {
      // Metric compatibility: each direction acts skewly.
      CHECK((table[i] + table[i].transpose()).is_zero());
      for (int j = 0; j < n; ++j) {
        // Torsion-free: nabla_i e_j - nabla_j e_i = [e_i, e_j].
        Vec<Rational> ei(n, Rational(0)), ej(n, Rational(0));
        ei[i] = 1;
        ej[j] = 1;
        auto lhs = table[i].col(j);
        axpy(Rational(-1), table[j].col(i), lhs);
        CHECK(lhs == ctx.alg.bracket(ei, ej));
        for (int k = 0; k < n; ++k) {
          // 2<nabla_i e_j, e_k> = <[e_i,e_j],e_k> - <[e_j,e_k],e_i> + <[e_k,e_i],e_j>.
          Vec<Rational> ek(n, Rational(0));
          ek[k] = 1;
          Rational rhs = dot(ctx.alg.bracket(ei, ej), ek) -
                         dot(ctx.alg.bracket(ej, ek), ei) +
                         dot(ctx.alg.bracket(ek, ei), ej);
          CHECK(Rational(2) * table[i](k, j) == rhs);
        }
      }
    }
  }
}

TEST_CASE("connection_table on heisenberg-1 matches the hand computation") {
  auto table = connection_table(ctx_of("heisenberg-1"));
  auto half = [](long n, long d) { return Rational(n, d); };
  Mat<Rational> l0(3, 3), l1(3, 3), l2(3, 3);
  l0(2, 1) = half(1, 2);
  l0(1, 2) = half(-1, 2);
  l1(2, 0) = half(-1, 2);
  l1(0, 2) = half(1, 2);
  l2(1, 0) = half(-1, 2);
  l2(0, 1) = half(1, 2);
  CHECK(table[0] == l0);
  CHECK(table[1] == l1);
  CHECK(table[2] == l2);
}

TEST_CASE("abelian directions are flat") {
  auto ctx = ctx_of("h1-plus-abelian2");
  auto table = connection_table(ctx);
  CHECK(table[3].is_zero());
  CHECK(table[4].is_zero());
  for (auto& li : table) {
    CHECK(vec_max_abs(li.col(3)) == Rational(0));
    CHECK(vec_max_abs(li.col(4)) == Rational(0));
  }
}

TEST_CASE("parallel_space matches known dimensions and sits inside the Killing space") {
  const std::pair<const char*, int> expected[] = {
      {"heisenberg-1", 1}, {"heisenberg-2", 1},     {"heisenberg-3", 1},
      {"dim6-free2step", 1}, {"dim8-double", 1},    {"h1-plus-h1", 2},
      {"h1-plus-abelian2", 4}};
  for (auto& [name, dim] : expected) {
    CAPTURE(name);
    auto ctx = ctx_of(name);
    auto par = parallel_space(ctx);  // method agreement asserted internally
    CHECK(par.dim() == dim);
    auto kill = killing_space(ctx);
    CHECK(kill.coords.contains(par.coords));
    for (auto& b : par.basis_matrices()) CHECK(cubic_killing_oracle(ctx, b));
    // The full projector onto each component is parallel.
    for (auto& comp : ideal_decomposition(ctx).components)
      CHECK(par.contains(comp.v.direct_sum(comp.z).projector()));
    CHECK(par.contains(Mat<Rational>::identity(ctx.alg.n)));
  }
}

TEST_CASE("parallel_space picks up every symmetric tensor on the flat factor") {
  auto ctx = ctx_of("h1-plus-abelian2");
  auto par = parallel_space(ctx);
  REQUIRE(par.dim() == 4);
  for (int p = 3; p < 5; ++p)
    for (int q = p; q < 5; ++q) CHECK(par.contains(sym_unit<Rational>(5, p, q)));
  // But not the central square of the bracket-generated direction.
  Mat<Rational> zz(5, 5);
  zz(2, 2) = 1;
  CHECK_FALSE(par.contains(zz));
  CHECK(killing_space(ctx).contains(zz));
}

TEST_CASE("killing_two_forms across the catalog") {
  CHECK(killing_two_forms(ctx_of("heisenberg-1")).dim() == 0);
  CHECK(killing_two_forms(ctx_of("heisenberg-2")).dim() == 0);
  CHECK(killing_two_forms(ctx_of("dim6-free2step")).dim() == 0);
  CHECK(killing_two_forms(ctx_of("h1-plus-h1")).dim() == 0);
  auto ctx = ctx_of("h1-plus-abelian2");
  auto forms = killing_two_forms(ctx);
  REQUIRE(forms.dim() == 1);
  CHECK(forms.basis_matrix(0) == skew_unit<Rational>(5, 3, 4));
}

TEST_CASE("squares of Killing 2-forms are Killing tensors") {
  for (auto name : kCatalog) {
    CAPTURE(name);
    auto ctx = ctx_of(name);
    for (auto& t : killing_two_forms(ctx).basis_matrices()) {
      auto s = form_to_tensor(t);
      CHECK(s.is_symmetric());
      CHECK(is_killing(ctx, s).killing);
      CHECK(cubic_killing_oracle(ctx, s));
    }
  }
  auto ctx = ctx_of("h1-plus-abelian2");
  auto t = killing_two_forms(ctx).basis_matrix(0);
  Mat<Rational> expected(5, 5);
  expected(3, 3) = 1;
  expected(4, 4) = 1;
  CHECK(form_to_tensor(t) == expected);
}

TEST_CASE("float mode mirrors the exact results") {
  auto entry = catalog_entry("h1-plus-abelian2");
  LieAlgebra<double> alg;
  alg.n = entry.algebra.n;
  alg.tol = 1e-9;
  for (auto& cl : entry.algebra.c) {
    Mat<double> m(alg.n, alg.n);
    for (int i = 0; i < alg.n; ++i)
      for (int j = 0; j < alg.n; ++j) m(i, j) = double(cl(i, j));
    alg.c.push_back(m);
  }
  Context<double> ctx(alg);
  CHECK(killing_space(ctx).dim() == 7);
  CHECK(parallel_space(ctx).dim() == 4);
  CHECK(killing_two_forms(ctx).dim() == 1);
  CHECK(is_killing(ctx, Mat<double>::identity(5)).killing);
  Mat<double> e11(5, 5);
  e11(0, 0) = 1.0;
  CHECK_FALSE(is_killing(ctx, e11).killing);
  // Residuals below the scaled tolerance are accepted.
  Mat<double> nearly = Mat<double>::identity(5);
  nearly(0, 1) = 1e-12;
  nearly(1, 0) = 1e-12;
  CHECK(is_killing(ctx, nearly).killing);
}
