#include "nilkt/report.hpp"

namespace nilkt {

namespace {

const char* kind_string(diagnostic::kind k) {
  switch (k) {
    case diagnostic::kind::not_antisymmetric: return "not-antisymmetric";
    case diagnostic::kind::jacobi_fails: return "jacobi-fails";
    case diagnostic::kind::not_two_step: return "not-two-step";
    case diagnostic::kind::abelian: return "abelian";
  }
  return "unknown";
}

}  // namespace

Report report_header(const std::string& command, const std::string& input,
                     const std::string& mode) {
  Report r;
  r["tool"] = "nilkt";
  r["version"] = kToolVersion;
  r["command"] = command;
  r["input"] = input;
  r["mode"] = mode;
  return r;
}

Report diagnostics_json(const std::vector<diagnostic>& diags) {
  Report out = Report::array();
  for (const auto& d : diags) {
    Report dj;
    dj["kind"] = kind_string(d.k);
    dj["basis_indices"] = Report::array({d.i + 1, d.j + 1, d.l + 1});
    dj["text"] = d.text;
    out.push_back(std::move(dj));
  }
  return out;
}

void print_report(const Report& r, std::ostream& out) { out << r.dump(2) << "\n"; }

}  // namespace nilkt
