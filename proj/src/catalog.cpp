#include "nilkt/catalog.hpp"

#include "nilkt/classify.hpp"

namespace nilkt {

namespace {

LieAlgebra<Rational> empty_algebra(int n) {
  LieAlgebra<Rational> alg;
  alg.n = n;
  alg.c.assign(n, Mat<Rational>(n, n));
  return alg;
}

/// [e_i, e_j] = e_l and its antisymmetric mirror (1-indexed arguments).
void set_bracket(LieAlgebra<Rational>& alg, int i, int j, int l, const Rational& v = 1) {
  alg.c[l - 1](i - 1, j - 1) = v;
  alg.c[l - 1](j - 1, i - 1) = -v;
}

}  // namespace

LieAlgebra<Rational> heisenberg(int pairs) {
  const int n = 2 * pairs + 1;
  auto alg = empty_algebra(n);
  for (int i = 1; i <= pairs; ++i) set_bracket(alg, i, pairs + i, n);
  return alg;
}

CatalogEntry make_double(const std::vector<Mat<Rational>>& generators, const std::string& name) {
  auto [alg, s] = construct_double(generators);
  CatalogEntry e;
  e.name = name;
  e.description = "doubling of R^" + std::to_string(generators.front().rows()) + " over " +
                  std::to_string(generators.size()) + " skew generators";
  e.algebra = std::move(alg);
  e.tensors["S"] = std::move(s);
  return e;
}

std::vector<std::string> catalog_names() {
  return {"heisenberg-1",     "heisenberg-2", "heisenberg-3",          "dim6-free2step",
          "dim8-double",      "h1-plus-h1",   "h1-plus-abelian2",      "solvable-counterexample"};
}

CatalogEntry catalog_entry(const std::string& name) {
  CatalogEntry e;
  e.name = name;
  if (name.rfind("heisenberg-", 0) == 0) {
    const std::string tail = name.substr(11);
    int pairs = 0;
    if (tail.empty() || tail.size() > 3 || tail[0] == '0' ||
        tail.find_first_not_of("0123456789") != std::string::npos)
      throw unknown_example("no example named '" + name +
                            "'; heisenberg-N takes a positive pair count");
    for (char ch : tail) pairs = pairs * 10 + (ch - '0');
    e.description = "Heisenberg algebra of dimension " + std::to_string(2 * pairs + 1);
    e.algebra = heisenberg(pairs);
    return e;
  }
  if (name == "dim6-free2step") {
    e.description = "free 2-step nilpotent algebra on 3 generators";
    e.algebra = empty_algebra(6);
    set_bracket(e.algebra, 1, 2, 4);
    set_bracket(e.algebra, 1, 3, 5);
    set_bracket(e.algebra, 2, 3, 6);
    return e;
  }
  if (name == "dim8-double") {
    Mat<Rational> m1(3, 3), m2(3, 3);
    m1(1, 0) = 1;
    m1(0, 1) = -1;
    m2(2, 1) = 1;
    m2(1, 2) = -1;
    auto d = make_double({m1, m2}, name);
    d.description = "doubling of R^3 over a path of two rotations";
    return d;
  }
  if (name == "h1-plus-h1") {
    e.description = "orthogonal sum of two Heisenberg algebras of dimension 3";
    e.algebra = empty_algebra(6);
    set_bracket(e.algebra, 1, 2, 5);
    set_bracket(e.algebra, 3, 4, 6);
    return e;
  }
  if (name == "h1-plus-abelian2") {
    e.description = "Heisenberg algebra of dimension 3 plus a 2-dimensional abelian factor";
    e.algebra = empty_algebra(5);
    set_bracket(e.algebra, 1, 2, 3);
    return e;
  }
  if (name == "solvable-counterexample") {
    e.description = "solvable non-nilpotent algebra; fails the 2-step validation on purpose";
    e.algebra = empty_algebra(3);
    set_bracket(e.algebra, 2, 3, 1);
    set_bracket(e.algebra, 3, 1, 2);
    return e;
  }
  throw unknown_example("no example named '" + name + "'");
}

}  // namespace nilkt
