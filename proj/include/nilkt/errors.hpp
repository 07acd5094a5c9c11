#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nilkt {

/// Base of all tool errors; what() carries a user-facing message.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad input or unmet precondition. The CLI maps these to exit code 1.
struct user_error : error {
  using error::error;
};

struct dimension_mismatch : user_error {
  using user_error::user_error;
};
struct not_symmetric : user_error {
  using user_error::user_error;
};
struct not_skew : user_error {
  using user_error::user_error;
};
struct not_killing : user_error {
  using user_error::user_error;
};
struct singular_metric : user_error {
  using user_error::user_error;
};
struct generators_dependent : user_error {
  using user_error::user_error;
};
struct unknown_example : user_error {
  using user_error::user_error;
};
struct oracle_cap_exceeded : user_error {
  using user_error::user_error;
};

struct parse_error : user_error {
  parse_error(int line, const std::string& msg)
      : user_error("line " + std::to_string(line) + ": " + msg), line(line) {}
  int line;
};

/// Exact arithmetic cannot continue (e.g. an irrational spectrum); the caller
/// may rerun the computation in float mode and mark the result numerical.
struct needs_float_fallback : error {
  using error::error;
};

/// A float-only computation (numerical integration) was invoked with exact scalars.
struct non_float_mode : user_error {
  using user_error::user_error;
};

/// One violated structure-constant identity, with the witnessing basis indices (0-based).
struct diagnostic {
  enum class kind { not_antisymmetric, jacobi_fails, not_two_step, abelian };
  kind k;
  int i = -1, j = -1, l = -1;
  std::string text;
};

struct validation_error : user_error {
  validation_error(std::string msg, std::vector<diagnostic> diags)
      : user_error(std::move(msg)), diagnostics(std::move(diags)) {}
  std::vector<diagnostic> diagnostics;

  bool has(diagnostic::kind k) const {
    for (auto& d : diagnostics)
      if (d.k == k) return true;
    return false;
  }
};

/// A verified internal invariant failed. The CLI maps these to exit code 2.
struct internal_inconsistency : error {
  using error::error;
};
struct method_mismatch : internal_inconsistency {
  using internal_inconsistency::internal_inconsistency;
};
struct oracle_disagreement : internal_inconsistency {
  using internal_inconsistency::internal_inconsistency;
};

}  // namespace nilkt
