#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "nilkt/catalog.hpp"
#include "nilkt/liealg.hpp"

using namespace nilkt;
using namespace nilkt::testing;

namespace {

LieAlgebra<Rational> algebra_with(int n,
                                  std::initializer_list<std::array<int, 3>> brackets) {
  LieAlgebra<Rational> alg;
  alg.n = n;
  alg.c.assign(n, Mat<Rational>(n, n));
  for (auto [i, j, l] : brackets) {
    alg.c[l - 1](i - 1, j - 1) = 1;
    alg.c[l - 1](j - 1, i - 1) = -1;
  }
  return alg;
}

/// Complex Heisenberg-type algebra: two anticommuting complex structures on R^4,
/// every nonzero central direction acts invertibly.
LieAlgebra<Rational> nonsingular_dim6() {
  auto alg = algebra_with(6, {{1, 2, 5}, {3, 4, 5}, {1, 3, 6}});
  alg.c[5](1, 3) = -1;  // [e2, e4] = -e6
  alg.c[5](3, 1) = 1;
  return alg;
}

}  // namespace

TEST_CASE("catalog algebras validate cleanly except the designated counterexample") {
  for (auto& name : catalog_names()) {
    auto entry = catalog_entry(name);
    auto diags = validate(entry.algebra);
    if (name == "solvable-counterexample") {
      CHECK(!diags.empty());
    } else {
      CAPTURE(name);
      CHECK(diags.empty());
    }
  }
  CHECK_THROWS_AS(catalog_entry("no-such-algebra"), unknown_example);
}

TEST_CASE("validator pinpoints a broken Jacobi identity") {
  // [e1,e2]=e3 and [e1,e3]=e1: the cyclic sum over (e1,e2,e3) equals -e3
  auto alg = algebra_with(3, {{1, 2, 3}, {1, 3, 1}});
  auto diags = validate(alg);
  REQUIRE(!diags.empty());
  bool found = false;
  for (auto& d : diags)
    if (d.k == diagnostic::kind::jacobi_fails && d.i == 0 && d.j == 1 && d.l == 2) found = true;
  CHECK(found);
}

TEST_CASE("validator separates two-step failure from Jacobi failure") {
  // filiform algebra: Jacobi holds but the derived algebra is not central
  auto alg = algebra_with(4, {{1, 2, 3}, {1, 3, 4}});
  auto diags = validate(alg);
  REQUIRE(!diags.empty());
  for (auto& d : diags) CHECK(d.k != diagnostic::kind::jacobi_fails);
  bool two_step = false;
  for (auto& d : diags)
    if (d.k == diagnostic::kind::not_two_step) two_step = true;
  CHECK(two_step);
  CHECK_THROWS_AS(validate_or_throw(alg), validation_error);
}

TEST_CASE("validator flags the solvable counterexample as not two-step") {
  auto entry = catalog_entry("solvable-counterexample");
  auto diags = validate(entry.algebra);
  REQUIRE(!diags.empty());
  bool two_step = false;
  for (auto& d : diags) {
    CHECK(d.k != diagnostic::kind::jacobi_fails);  // Jacobi actually holds here
    if (d.k == diagnostic::kind::not_two_step) two_step = true;
  }
  CHECK(two_step);
}

TEST_CASE("validator flags asymmetric coordinates and abelian input") {
  LieAlgebra<Rational> bad;
  bad.n = 2;
  bad.c.assign(2, Mat<Rational>(2, 2));
  bad.c[0](0, 1) = 1;  // mirror entry left at zero
  auto diags = validate(bad);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].k == diagnostic::kind::not_antisymmetric);
  CHECK(diags[0].i == 0);
  CHECK(diags[0].j == 1);
  CHECK(diags[0].l == 0);

  LieAlgebra<Rational> flat;
  flat.n = 3;
  flat.c.assign(3, Mat<Rational>(3, 3));
  auto ad = validate(flat);
  REQUIRE(ad.size() == 1);
  CHECK(ad[0].k == diagnostic::kind::abelian);
}

TEST_CASE("center splitting on frozen examples") {
  auto h1 = Context<Rational>(catalog_entry("heisenberg-1").algebra);
  CHECK(h1.split.z.equals(SubspaceBasis<Rational>::from_span(rmat({{0, 0, 1}}))));
  CHECK(h1.split.v.equals(SubspaceBasis<Rational>::from_span(rmat({{1, 0, 0}, {0, 1, 0}}))));
  CHECK(h1.split.derived.equals(h1.split.z));
  CHECK(h1.split.a.dim() == 0);

  auto mixed = Context<Rational>(catalog_entry("h1-plus-abelian2").algebra);
  CHECK(mixed.split.z.dim() == 3);
  CHECK(mixed.split.derived.dim() == 1);
  CHECK(mixed.split.a.dim() == 2);
  CHECK(mixed.split.a.contains(rvec({0, 0, 0, 1, 0})));
  CHECK(mixed.split.a.contains(rvec({0, 0, 0, 0, 1})));
  CHECK(!mixed.split.a.contains(rvec({0, 0, 1, 0, 0})));

  auto free3 = Context<Rational>(catalog_entry("dim6-free2step").algebra);
  CHECK(free3.split.z.dim() == 3);
  CHECK(free3.split.v.dim() == 3);
  CHECK(free3.split.derived.equals(free3.split.z));
  CHECK(free3.split.a.dim() == 0);
}

TEST_CASE("J operator on the smallest Heisenberg algebra") {
  auto ctx = Context<Rational>(catalog_entry("heisenberg-1").algebra);
  auto j = ctx.jz(rvec({0, 0, 1}));
  CHECK(j.apply(rvec({1, 0, 0})) == rvec({0, 1, 0}));
  CHECK(j.apply(rvec({0, 1, 0})) == rvec({-1, 0, 0}));
  CHECK(j.apply(rvec({0, 0, 1})) == rvec({0, 0, 0}));
  CHECK(j.is_skew());
}

TEST_CASE("J operator satisfies its defining identity on random inputs") {
  RationalSampler s(909);
  for (auto& name : {"heisenberg-2", "dim6-free2step", "dim8-double", "h1-plus-abelian2"}) {
    auto ctx = Context<Rational>(catalog_entry(name).algebra);
    const int n = ctx.dim();
    for (int trial = 0; trial < 5; ++trial) {
      auto u = s.vec(n), x = s.vec(n), y = s.vec(n);
      // <J(u) x, y> == <u, [x, y]>
      CHECK(dot(ctx.jz(u).apply(x), y) == dot(u, ctx.alg.bracket(x, y)));
      CHECK(ctx.jz(u).is_skew());
    }
    // J kills the center and preserves its complement
    for (int i = 0; i < ctx.split.z.dim(); ++i)
      CHECK(vec_is_zero(ctx.jbasis.empty()
                            ? Vec<Rational>(n, Rational(0))
                            : ctx.jbasis[0].apply(ctx.split.z.basis_row(i))));
    for (auto& jb : ctx.jbasis)
      for (int i = 0; i < ctx.split.v.dim(); ++i)
        CHECK(ctx.split.v.contains(jb.apply(ctx.split.v.basis_row(i))));
  }
}

TEST_CASE("ideal decomposition separates independent factors") {
  auto two = ideal_decomposition(Context<Rational>(catalog_entry("h1-plus-h1").algebra));
  REQUIRE(two.components.size() == 2);
  CHECK(two.abelian.dim() == 0);
  CHECK(two.components[0].v.equals(
      SubspaceBasis<Rational>::from_span(rmat({{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}}))));
  CHECK(two.components[0].z.contains(rvec({0, 0, 0, 0, 1, 0})));
  CHECK(two.components[1].v.contains(rvec({0, 0, 1, 0, 0, 0})));
  CHECK(two.components[1].z.contains(rvec({0, 0, 0, 0, 0, 1})));

  auto mixed = ideal_decomposition(Context<Rational>(catalog_entry("h1-plus-abelian2").algebra));
  REQUIRE(mixed.components.size() == 1);
  CHECK(mixed.abelian.dim() == 2);
  CHECK(mixed.components[0].v.dim() == 2);
  CHECK(mixed.components[0].z.dim() == 1);
}

TEST_CASE("ideal decomposition keeps irreducible algebras whole") {
  for (auto& name : {"heisenberg-2", "heisenberg-3", "dim6-free2step", "dim8-double"}) {
    CAPTURE(name);
    auto ctx = Context<Rational>(catalog_entry(name).algebra);
    auto dec = ideal_decomposition(ctx);
    REQUIRE(dec.components.size() == 1);
    CHECK(dec.abelian.dim() == 0);
    CHECK(dec.components[0].v.equals(ctx.split.v));
    CHECK(dec.components[0].z.equals(ctx.split.derived));
  }
}

TEST_CASE("ideal decomposition merges modules glued through a shared center") {
  // two symplectic planes mapping onto one central line: a single ideal
  auto alg = algebra_with(5, {{1, 2, 5}, {3, 4, 5}});
  auto dec = ideal_decomposition(Context<Rational>(alg));
  REQUIRE(dec.components.size() == 1);
  CHECK(dec.components[0].v.dim() == 4);
  CHECK(dec.components[0].z.dim() == 1);
}

TEST_CASE("nonsingularity: one-dimensional centers are decided exactly") {
  for (auto& name : {"heisenberg-1", "heisenberg-2", "heisenberg-3"}) {
    CAPTURE(name);
    auto rep = is_nonsingular(Context<Rational>(catalog_entry(name).algebra));
    CHECK(rep.verdict == Certainty::CertainlyTrue);
  }
}

TEST_CASE("nonsingularity: certified negative verdicts carry exact witnesses") {
  auto check_witness = [](const Context<Rational>& ctx, const NonsingularReport<Rational>& rep) {
    REQUIRE(rep.verdict == Certainty::CertainlyFalse);
    REQUIRE(!rep.witness_x.empty());
    REQUIRE(!rep.witness_z.empty());
    CHECK(!vec_is_zero(rep.witness_x));
    CHECK(!vec_is_zero(rep.witness_z));
    CHECK(ctx.split.v.contains(rep.witness_x));
    CHECK(ctx.split.z.contains(rep.witness_z));
    CHECK(vec_is_zero(ctx.jz(rep.witness_z).apply(rep.witness_x)));
  };

  // rank of the J-pencil drops along e1
  auto free3 = Context<Rational>(catalog_entry("dim6-free2step").algebra);
  auto rep = is_nonsingular(free3);
  check_witness(free3, rep);
  CHECK(rep.witness_x == rvec({1, 0, 0, 0, 0, 0}));

  // two components: a v-vector of one annihilates the other's center
  auto pair = Context<Rational>(catalog_entry("h1-plus-h1").algebra);
  auto rep2 = is_nonsingular(pair);
  check_witness(pair, rep2);
  CHECK(rep2.witness_x == rvec({1, 0, 0, 0, 0, 0}));

  // abelian factor: J vanishes on it
  auto mixed = Context<Rational>(catalog_entry("h1-plus-abelian2").algebra);
  check_witness(mixed, is_nonsingular(mixed));

  // irreducible with a singular direction found by deterministic probing
  auto dbl = Context<Rational>(catalog_entry("dim8-double").algebra);
  check_witness(dbl, is_nonsingular(dbl));
}

TEST_CASE("nonsingularity: anticommuting complex structures sample as nonsingular") {
  auto ctx = Context<Rational>(nonsingular_dim6());
  auto rep = is_nonsingular(ctx);
  CHECK(rep.verdict == Certainty::ProbablyTrue);
  CHECK(rep.samples_checked > 4);
}

TEST_CASE("j_injective reflects the absence of an abelian factor") {
  CHECK(j_injective(Context<Rational>(catalog_entry("dim6-free2step").algebra)));
  CHECK(j_injective(Context<Rational>(catalog_entry("heisenberg-2").algebra)));
  CHECK(!j_injective(Context<Rational>(catalog_entry("h1-plus-abelian2").algebra)));
}

TEST_CASE("doubling construction validates and rejects bad generators") {
  Mat<Rational> rot(2, 2);
  rot(0, 1) = -1;
  rot(1, 0) = 1;

  auto entry = make_double({rot}, "one-rotation");
  CHECK(entry.algebra.n == 5);
  CHECK(validate(entry.algebra).empty());
  auto ctx = Context<Rational>(entry.algebra);
  CHECK(ctx.split.derived.dim() == 1);
  CHECK(ctx.split.v.dim() == 4);
  REQUIRE(entry.tensors.count("S"));
  CHECK(entry.tensors.at("S")(0, 0) == 1);
  CHECK(entry.tensors.at("S")(2, 2) == 2);
  CHECK(entry.tensors.at("S")(4, 4) == 0);

  Mat<Rational> notskew(2, 2);
  notskew(0, 0) = 1;
  CHECK_THROWS_AS(make_double({notskew}), not_skew);
  CHECK_THROWS_AS(make_double({rot, rot.scaled(Rational(2))}), generators_dependent);
  CHECK_THROWS_AS(make_double({}), user_error);
}

TEST_CASE("float contexts mirror the exact splitting") {
  auto exact = catalog_entry("h1-plus-abelian2").algebra;
  LieAlgebra<double> approx;
  approx.n = exact.n;
  approx.tol = 1e-9;
  for (auto& m : exact.c) approx.c.push_back(m.cast<double>());
  Context<double> ctx(std::move(approx));
  CHECK(ctx.split.z.dim() == 3);
  CHECK(ctx.split.v.dim() == 2);
  CHECK(ctx.split.a.dim() == 2);
  auto dec = ideal_decomposition(ctx);
  CHECK(dec.components.size() == 1);
  CHECK(dec.abelian.dim() == 2);
}
