#pragma once

#include <json.hpp>
#include <ostream>
#include <string>

#include "nilkt/classify.hpp"
#include "nilkt/liealg.hpp"
#include "nilkt/oracle.hpp"

// Machine-readable reports: one JSON document per command run, with stable key
// order, so identical inputs, seeds, and tool version give byte-identical
// output.  Exact scalars are rendered as canonical "p/q" strings, float
// scalars as JSON numbers.

namespace nilkt {

using Report = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

inline Report scalar_json(const Rational& v) { return v.str(); }
inline Report scalar_json(double v) { return v; }

template <typename T>
Report vec_json(const Vec<T>& v) {
  Report a = Report::array();
  for (const auto& x : v) a.push_back(scalar_json(x));
  return a;
}

template <typename T>
Report mat_json(const Mat<T>& m) {
  Report rows = Report::array();
  for (int i = 0; i < m.rows(); ++i) {
    Report row = Report::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Report report_header(const std::string& command, const std::string& input,
                     const std::string& mode);
Report diagnostics_json(const std::vector<diagnostic>& diags);
void print_report(const Report& r, std::ostream& out);

template <typename T>
Report tensor_space_json(const TensorSpace<T>& space) {
  Report out;
  out["dim"] = space.dim();
  Report basis = Report::array();
  for (int i = 0; i < space.dim(); ++i) basis.push_back(mat_json(space.basis_matrix(i)));
  out["basis"] = std::move(basis);
  return out;
}

template <typename T>
Report classification_json(const Classification<T>& c) {
  Report out;
  out["verdict"] = to_string(c.verdict);
  out["parallel"] = c.parallel;
  out["numerical"] = c.numerical;
  Report blocks = Report::array();
  for (const auto& b : c.blocks) {
    Report bj;
    bj["verdict"] = to_string(b.verdict);
    bj["eigenvalues"] = vec_json(b.spectral.values);
    if (b.shift) bj["shift"] = scalar_json(*b.shift);
    if (b.block_pair) bj["block_pair"] = Report::array({b.block_pair->first, b.block_pair->second});
    if (!b.witness.empty()) bj["witness"] = vec_json(b.witness);
    if (!b.extensions.empty()) {
      Report exts = Report::array();
      for (const auto& e : b.extensions) exts.push_back(mat_json(e));
      bj["extensions"] = std::move(exts);
    }
    if (!b.note.empty()) bj["note"] = b.note;
    blocks.push_back(std::move(bj));
  }
  out["blocks"] = std::move(blocks);
  out["trace"] = c.trace;
  return out;
}

template <typename T>
Report membership_json(const MembershipResult<T>& r) {
  Report out;
  out["member"] = r.member;
  if (r.member) {
    out["parallel_coefficients"] = vec_json(r.parallel_coeff);
    Report pairs = Report::array();
    for (const auto& [a, b, v] : r.pair_coeff) {
      Report p;
      p["field_a"] = a;
      p["field_b"] = b;
      p["coefficient"] = scalar_json(v);
      pairs.push_back(std::move(p));
    }
    out["pair_coefficients"] = std::move(pairs);
  }
  return out;
}

inline Report crosscheck_json(const CrosscheckReport& r) {
  Report out;
  out["checked"] = r.checked;
  out["decomposable"] = r.decomposable;
  out["numerical"] = r.numerical;
  Report records = Report::array();
  for (const auto& rec : r.records) {
    Report rj;
    rj["label"] = rec.label;
    rj["member"] = rec.member;
    rj["verdict"] = to_string(rec.verdict);
    rj["numerical"] = rec.numerical;
    records.push_back(std::move(rj));
  }
  out["records"] = std::move(records);
  out["agreement"] = true;  // a disagreement aborts with an internal error instead
  return out;
}

}  // namespace nilkt
