#pragma once

#include <map>
#include <string>
#include <vector>

#include "nilkt/liealg.hpp"

namespace nilkt {

/// A named example algebra, with any tensors that ship with it (by name).
struct CatalogEntry {
  std::string name;
  std::string description;
  LieAlgebra<Rational> algebra;
  std::map<std::string, Mat<Rational>> tensors;
};

/// Names of the built-in examples, in listing order.
std::vector<std::string> catalog_names();

/// Looks up a built-in example; throws unknown_example otherwise.
CatalogEntry catalog_entry(const std::string& name);

/// Heisenberg algebra on n generator pairs: dim 2n+1, one bracket per pair.
LieAlgebra<Rational> heisenberg(int pairs);

/// Doubling construction: two copies of R^m glued over a common p-dimensional
/// center, one central direction per generator matrix. Generators must be skew
/// and linearly independent. The companion tensor "S" scales the second copy by 2.
CatalogEntry make_double(const std::vector<Mat<Rational>>& generators,
                         const std::string& name = "double");

}  // namespace nilkt
