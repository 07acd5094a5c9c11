#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nilkt/catalog.hpp"
#include "nilkt/liealg.hpp"

namespace nilkt {

// Line-oriented UTF-8 text format for algebras and tensors.
//
//   dim N                              first directive, mandatory
//   basis n1 ... nN                    optional custom coordinate names
//   bracket ei ej = c1 ek1 + c2 ek2    rational coefficients, bare name means 1,
//                                      omitted pairs are zero
//   metric identity                    default, the only option in exact mode
//   metric gram                        followed by N rows of N numbers (float mode)
//   tensor NAME                        followed by N rows of rational entries,
//                                      symmetry checked
//   # comment                          anywhere; blank lines ignored
//
// Parse errors carry 1-based line numbers.

struct AlgebraFile {
  int n = 0;
  std::vector<std::string> basis_names;  // defaults to e1..eN
  LieAlgebra<Rational> algebra;          // structure constants as written
  bool gram_metric = false;
  Mat<double> gram;  // set when gram_metric
  std::vector<std::pair<std::string, Mat<Rational>>> tensors;  // file order

  const Mat<Rational>* tensor_named(const std::string& name) const {
    for (auto& [tname, t] : tensors)
      if (tname == name) return &t;
    return nullptr;
  }
};

AlgebraFile parse_algebra_file(std::istream& in);
AlgebraFile parse_algebra_text(const std::string& text);
AlgebraFile load_algebra_file(const std::string& path);

/// A standalone tensor file: optional `tensor NAME` header, then n rows of
/// rational entries; `#` comments and blank lines as usual.
std::pair<std::string, Mat<Rational>> load_tensor_file(const std::string& path, int n);

/// Generator file for the doubling construction: `dim M`, then one or more
/// `generator NAME` blocks of M rows of rational entries (each skew).
std::vector<std::pair<std::string, Mat<Rational>>> load_generator_file(const std::string& path);

/// Renders an entry in the text format; parsing the output reproduces the
/// algebra and tensors exactly.
std::string emit_algebra_file(const CatalogEntry& entry);

/// Structure constants in a g-orthonormal frame.  With G = L L^T the frame
/// columns are L^{-T}, and brackets transform as c~(x, y) = L^T [L^{-T}x, L^{-T}y].
/// Identity-metric files convert directly; a gram file must be positive definite.
LieAlgebra<double> orthonormalized(const AlgebraFile& file, double tol = 1e-9);

}  // namespace nilkt
