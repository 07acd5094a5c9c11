#include "nilkt/format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "nilkt/errors.hpp"

namespace nilkt {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

Rational parse_rational(const std::string& tok, int line) {
  if (tok.empty() || tok.find_first_not_of("-0123456789/") != std::string::npos)
    throw parse_error(line, "'" + tok + "' is not a rational number");
  const auto slash = tok.find('/');
  if (slash != std::string::npos) {
    const std::string den = tok.substr(slash + 1);
    if (den.empty() || den.find_first_not_of("0123456789") != std::string::npos)
      throw parse_error(line, "'" + tok + "' is not a rational number");
    if (den.find_first_not_of("0") == std::string::npos)
      throw parse_error(line, "'" + tok + "' divides by zero");
  }
  try {
    return Rational(tok);
  } catch (const std::exception&) {
    throw parse_error(line, "'" + tok + "' is not a rational number");
  }
}

double parse_number(const std::string& tok, int line) {
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(v))
      throw parse_error(line, "'" + tok + "' is not a finite number");
    return v;
  } catch (const parse_error&) {
    throw;
  } catch (const std::exception&) {
    throw parse_error(line, "'" + tok + "' is not a finite number");
  }
}

/// Pulls the next non-blank content line or reports the expectation.
std::vector<std::string> next_row(std::istream& in, int& line, const std::string& what) {
  std::string raw;
  while (std::getline(in, raw)) {
    ++line;
    auto toks = tokens_of(raw);
    if (!toks.empty()) return toks;
  }
  throw parse_error(line + 1, "expected " + what + " before the end of the file");
}

Mat<Rational> read_rational_rows(std::istream& in, int& line, int n, const std::string& what) {
  Mat<Rational> m(n, n);
  for (int i = 0; i < n; ++i) {
    auto row = next_row(in, line, what);
    if (int(row.size()) != n)
      throw parse_error(line, what + " needs " + std::to_string(n) + " entries per row");
    for (int j = 0; j < n; ++j) m(i, j) = parse_rational(row[j], line);
  }
  return m;
}

}  // namespace

AlgebraFile parse_algebra_file(std::istream& in) {
  AlgebraFile f;
  f.n = -1;
  bool metric_seen = false;
  bool named = false;
  std::set<std::pair<int, int>> pairs_seen;
  std::set<std::string> tensor_names;
  auto index_of = [&f](const std::string& name, int line) {
    for (int i = 0; i < f.n; ++i)
      if (f.basis_names[i] == name) return i;
    throw parse_error(line, "'" + name + "' is not a basis vector name");
  };

  int line = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line;
    auto toks = tokens_of(raw);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];

    if (kw == "dim") {
      if (f.n != -1) throw parse_error(line, "dim appears twice");
      if (toks.size() != 2 || toks[1].find_first_not_of("0123456789") != std::string::npos)
        throw parse_error(line, "dim takes one positive integer");
      f.n = std::stoi(toks[1]);
      if (f.n < 1 || f.n > 256) throw parse_error(line, "dim must be between 1 and 256");
      f.algebra.n = f.n;
      f.algebra.c.assign(f.n, Mat<Rational>(f.n, f.n));
      f.basis_names.resize(f.n);
      for (int i = 0; i < f.n; ++i) f.basis_names[i] = "e" + std::to_string(i + 1);
      continue;
    }
    if (f.n == -1) throw parse_error(line, "the file must start with a dim directive");

    if (kw == "basis") {
      if (named) throw parse_error(line, "basis appears twice");
      if (!pairs_seen.empty() || !f.tensors.empty())
        throw parse_error(line, "basis must come before brackets and tensors");
      if (int(toks.size()) != f.n + 1)
        throw parse_error(line, "basis needs exactly " + std::to_string(f.n) + " names");
      std::set<std::string> uniq(toks.begin() + 1, toks.end());
      if (int(uniq.size()) != f.n) throw parse_error(line, "basis names must be distinct");
      f.basis_names.assign(toks.begin() + 1, toks.end());
      named = true;
      continue;
    }

    if (kw == "bracket") {
      if (toks.size() < 5 || toks[3] != "=")
        throw parse_error(line, "bracket syntax is: bracket ei ej = c1 ek1 + c2 ek2 ...");
      const int i = index_of(toks[1], line);
      const int j = index_of(toks[2], line);
      if (i == j) throw parse_error(line, "a basis vector brackets to zero with itself");
      const auto key = std::minmax(i, j);
      if (!pairs_seen.insert(key).second)
        throw parse_error(line, "the pair (" + toks[1] + ", " + toks[2] + ") appears twice");
      // split the right-hand side on '+' tokens
      std::vector<std::vector<std::string>> terms(1);
      for (size_t q = 4; q < toks.size(); ++q) {
        if (toks[q] == "+")
          terms.emplace_back();
        else
          terms.back().push_back(toks[q]);
      }
      std::set<int> targets;
      for (const auto& term : terms) {
        Rational coeff(1);
        std::string name;
        if (term.size() == 1) {
          name = term[0];
        } else if (term.size() == 2) {
          coeff = parse_rational(term[0], line);
          name = term[1];
        } else {
          throw parse_error(line, "each bracket term is an optional rational and a name");
        }
        const int l = index_of(name, line);
        if (!targets.insert(l).second)
          throw parse_error(line, "'" + name + "' is repeated in one bracket expansion");
        f.algebra.c[l](i, j) = coeff;
        f.algebra.c[l](j, i) = -coeff;
      }
      continue;
    }

    if (kw == "metric") {
      if (metric_seen) throw parse_error(line, "metric appears twice");
      metric_seen = true;
      if (toks.size() == 2 && toks[1] == "identity") continue;
      if (toks.size() == 2 && toks[1] == "gram") {
        f.gram_metric = true;
        f.gram = Mat<double>(f.n, f.n);
        for (int i = 0; i < f.n; ++i) {
          auto row = next_row(in, line, "a gram matrix row");
          if (int(row.size()) != f.n)
            throw parse_error(line,
                              "the gram matrix needs " + std::to_string(f.n) + " entries per row");
          for (int j = 0; j < f.n; ++j) f.gram(i, j) = parse_number(row[j], line);
        }
        for (int i = 0; i < f.n; ++i)
          for (int j = 0; j < i; ++j)
            if (f.gram(i, j) != f.gram(j, i))
              throw parse_error(line, "the gram matrix must be symmetric");
        continue;
      }
      throw parse_error(line, "metric is either 'identity' or 'gram'");
    }

    if (kw == "tensor") {
      if (toks.size() != 2) throw parse_error(line, "tensor takes one name");
      if (!tensor_names.insert(toks[1]).second)
        throw parse_error(line, "tensor '" + toks[1] + "' appears twice");
      const int header_line = line;
      Mat<Rational> t = read_rational_rows(in, line, f.n, "a tensor row");
      if (!t.is_symmetric())
        throw parse_error(header_line, "tensor '" + toks[1] + "' is not symmetric");
      f.tensors.emplace_back(toks[1], std::move(t));
      continue;
    }

    throw parse_error(line, "unknown directive '" + kw + "'");
  }
  if (f.n == -1) throw parse_error(line + 1, "the file must start with a dim directive");
  return f;
}

AlgebraFile parse_algebra_text(const std::string& text) {
  std::istringstream ss(text);
  return parse_algebra_file(ss);
}

AlgebraFile load_algebra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw user_error("cannot read file '" + path + "'");
  return parse_algebra_file(in);
}

std::pair<std::string, Mat<Rational>> load_tensor_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw user_error("cannot read file '" + path + "'");
  int line = 0;
  std::string name = path;
  auto first = next_row(in, line, "a tensor row");
  Mat<Rational> t(n, n);
  int start_row = 0;
  if (first[0] == "tensor") {
    if (first.size() != 2) throw parse_error(line, "tensor takes one name");
    name = first[1];
  } else {
    if (int(first.size()) != n)
      throw parse_error(line, "a tensor row needs " + std::to_string(n) + " entries per row");
    for (int j = 0; j < n; ++j) t(0, j) = parse_rational(first[j], line);
    start_row = 1;
  }
  for (int i = start_row; i < n; ++i) {
    auto row = next_row(in, line, "a tensor row");
    if (int(row.size()) != n)
      throw parse_error(line, "a tensor row needs " + std::to_string(n) + " entries per row");
    for (int j = 0; j < n; ++j) t(i, j) = parse_rational(row[j], line);
  }
  if (!t.is_symmetric()) throw parse_error(line, "the tensor is not symmetric");
  return {name, std::move(t)};
}

std::vector<std::pair<std::string, Mat<Rational>>> load_generator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw user_error("cannot read file '" + path + "'");
  int line = 0;
  auto head = next_row(in, line, "a dim directive");
  if (head.size() != 2 || head[0] != "dim" ||
      head[1].find_first_not_of("0123456789") != std::string::npos)
    throw parse_error(line, "a generator file starts with: dim M");
  const int m = std::stoi(head[1]);
  if (m < 1 || m > 256) throw parse_error(line, "dim must be between 1 and 256");
  std::vector<std::pair<std::string, Mat<Rational>>> out;
  std::set<std::string> names;
  std::string raw;
  while (true) {
    std::vector<std::string> toks;
    while (std::getline(in, raw)) {
      ++line;
      toks = tokens_of(raw);
      if (!toks.empty()) break;
    }
    if (toks.empty()) break;
    if (toks[0] != "generator" || toks.size() != 2)
      throw parse_error(line, "expected: generator NAME");
    if (!names.insert(toks[1]).second)
      throw parse_error(line, "generator '" + toks[1] + "' appears twice");
    const int header_line = line;
    Mat<Rational> g = read_rational_rows(in, line, m, "a generator row");
    if (!(g + g.transpose()).is_zero())
      throw parse_error(header_line, "generator '" + toks[1] + "' is not skew");
    out.emplace_back(toks[1], std::move(g));
  }
  if (out.empty()) throw parse_error(line + 1, "a generator file needs at least one generator");
  return out;
}

std::string emit_algebra_file(const CatalogEntry& entry) {
  std::ostringstream out;
  out << "# " << entry.name << ": " << entry.description << "\n";
  const int n = entry.algebra.n;
  out << "dim " << n << "\n";
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::string rhs;
      for (int l = 0; l < n; ++l) {
        const Rational& v = entry.algebra.c[l](i, j);
        if (v == Rational(0)) continue;
        if (!rhs.empty()) rhs += " + ";
        if (!(v == Rational(1))) rhs += v.str() + " ";
        rhs += "e" + std::to_string(l + 1);
      }
      if (!rhs.empty())
        out << "bracket e" << i + 1 << " e" << j + 1 << " = " << rhs << "\n";
    }
  for (const auto& [name, t] : entry.tensors) {
    out << "tensor " << name << "\n";
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out << (j ? " " : "") << t(i, j).str();
      out << "\n";
    }
  }
  return out.str();
}

LieAlgebra<double> orthonormalized(const AlgebraFile& file, double tol) {
  LieAlgebra<double> ad = to_double(file.algebra, tol);
  if (!file.gram_metric) return ad;
  const int n = file.n;

  // Cholesky G = L L^T; failure means the metric is not positive definite.
  Mat<double> lo(n, n);
  for (int j = 0; j < n; ++j) {
    double d = file.gram(j, j);
    for (int k = 0; k < j; ++k) d -= lo(j, k) * lo(j, k);
    if (!(d > 0) || !std::isfinite(d))
      throw singular_metric("the gram metric is not positive definite");
    lo(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = file.gram(i, j);
      for (int k = 0; k < j; ++k) s -= lo(i, k) * lo(j, k);
      lo(i, j) = s / lo(j, j);
    }
  }

  // Frame columns b_q solve L^T b_q = e_q by back substitution.
  Mat<double> frame(n, n);
  for (int q = 0; q < n; ++q)
    for (int i = n - 1; i >= 0; --i) {
      double s = i == q ? 1.0 : 0.0;
      for (int k = i + 1; k < n; ++k) s -= lo(k, i) * frame(k, q);
      frame(i, q) = s / lo(i, i);
    }

  LieAlgebra<double> out;
  out.n = n;
  out.tol = tol;
  out.c.assign(n, Mat<double>(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec<double> u = ad.bracket(frame.col(i), frame.col(j));
      // f-frame coordinates of u are L^T u
      for (int l = 0; l < n; ++l) {
        double s = 0;
        for (int k = l; k < n; ++k) s += lo(k, l) * u[k];
        out.c[l](i, j) = s;
        out.c[l](j, i) = -s;
      }
    }
  return out;
}

}  // namespace nilkt
