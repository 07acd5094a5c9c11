#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "nilkt/catalog.hpp"
#include "nilkt/classify.hpp"
#include "nilkt/flow.hpp"
#include "nilkt/format.hpp"
#include "nilkt/oracle.hpp"
#include "nilkt/report.hpp"

namespace {

using namespace nilkt;

struct Input {
  std::string label;
  AlgebraFile file;
};

void fill_from_entry(Input& in, const CatalogEntry& entry) {
  in.file.n = entry.algebra.n;
  in.file.algebra = entry.algebra;
  in.file.basis_names.resize(in.file.n);
  for (int i = 0; i < in.file.n; ++i) in.file.basis_names[i] = "e" + std::to_string(i + 1);
  for (const auto& [name, t] : entry.tensors) in.file.tensors.emplace_back(name, t);
}

/// Built-in example names win, then double(GENFILE), then the filesystem.
Input resolve_input(const std::string& spec) {
  Input in;
  in.label = spec;
  if (spec.rfind("double(", 0) == 0 && spec.size() > 8 && spec.back() == ')') {
    auto gens = load_generator_file(spec.substr(7, spec.size() - 8));
    std::vector<Mat<Rational>> mats;
    for (auto& [name, g] : gens) mats.push_back(g);
    fill_from_entry(in, make_double(mats, spec));
    return in;
  }
  try {
    fill_from_entry(in, catalog_entry(spec));
    return in;
  } catch (const unknown_example&) {
  }
  if (!std::filesystem::exists(spec))
    throw user_error("'" + spec + "' is neither a built-in example nor a readable file");
  in.file = load_algebra_file(spec);
  return in;
}

bool exact_mode(const Input& in) { return !in.file.gram_metric; }

std::string mode_string(const Input& in) { return exact_mode(in) ? "exact" : "float"; }

/// Named tensor specs: an embedded tensor name, else a tensor file path.
std::vector<std::pair<std::string, Mat<Rational>>> select_tensors(
    const Input& in, const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, Mat<Rational>>> out;
  for (const auto& spec : specs) {
    if (const Mat<Rational>* t = in.file.tensor_named(spec)) {
      out.emplace_back(spec, *t);
      continue;
    }
    if (!std::filesystem::exists(spec))
      throw user_error("'" + spec + "' names no embedded tensor and no readable file");
    out.push_back(load_tensor_file(spec, in.file.n));
  }
  return out;
}

template <typename T>
Report algebra_json(const Context<T>& ctx) {
  Report a;
  a["dim"] = ctx.alg.n;
  a["center_dim"] = ctx.split.z.dim();
  a["complement_dim"] = ctx.split.v.dim();
  a["derived_dim"] = ctx.split.derived.dim();
  a["abelian_factor_dim"] = ctx.split.a.dim();
  a["j_injective"] = j_injective(ctx);
  const auto nonsing = is_nonsingular(ctx);
  a["nonsingular"] = to_string(nonsing.verdict);
  a["nonsingular_samples"] = nonsing.samples_checked;
  a["skew_derivations"] = tensor_space_json(skew_derivations(ctx));
  a["killing_space"] = tensor_space_json(killing_space(ctx));
  a["parallel_space"] = tensor_space_json(parallel_space(ctx));
  a["killing_two_forms"] = tensor_space_json(killing_two_forms(ctx));
  return a;
}

/// Exact-first classification with the float fallback recorded per tensor.
Report classify_either(const Context<Rational>& ctx, const Mat<Rational>& s) {
  try {
    return classification_json(classify(ctx, s));
  } catch (const needs_float_fallback&) {
    Context<double> fctx(to_double(ctx.alg));
    return classification_json(classify(fctx, to_double(s)));
  }
}

int run_validate(const Input& in, std::ostream& out) {
  Report r = report_header("validate", in.label, mode_string(in));
  const auto diags = validate(in.file.algebra);
  bool valid = diags.empty();
  r["diagnostics"] = diagnostics_json(diags);
  if (in.file.gram_metric) {
    try {
      orthonormalized(in.file);
    } catch (const user_error& e) {
      valid = false;
      r["metric_error"] = e.what();
    }
  }
  r["valid"] = valid;
  print_report(r, out);
  return valid ? 0 : 1;
}

int run_analyze(const Input& in, std::ostream& out) {
  Report r = report_header("analyze", in.label, mode_string(in));
  if (exact_mode(in)) {
    Context<Rational> ctx(in.file.algebra);
    r["algebra"] = algebra_json(ctx);
  } else {
    Context<double> ctx(orthonormalized(in.file));
    r["algebra"] = algebra_json(ctx);
  }
  print_report(r, out);
  return 0;
}

int run_classify(const Input& in, const std::vector<std::string>& tensor_specs,
                 bool all_killing_basis, std::ostream& out) {
  if (tensor_specs.empty() && !all_killing_basis)
    throw user_error("classify needs --tensor or --all-killing-basis");
  Report r = report_header("classify", in.label, mode_string(in));
  Report items = Report::array();
  if (exact_mode(in)) {
    Context<Rational> ctx(in.file.algebra);
    for (const auto& [name, s] : select_tensors(in, tensor_specs)) {
      Report item;
      item["tensor"] = name;
      item["classification"] = classify_either(ctx, s);
      items.push_back(std::move(item));
    }
    if (all_killing_basis) {
      const auto basis = killing_space(ctx).basis_matrices();
      for (size_t i = 0; i < basis.size(); ++i) {
        Report item;
        item["tensor"] = "killing[" + std::to_string(i) + "]";
        item["classification"] = classify_either(ctx, basis[i]);
        items.push_back(std::move(item));
      }
    }
  } else {
    Context<double> ctx(orthonormalized(in.file));
    for (const auto& [name, s] : select_tensors(in, tensor_specs)) {
      Report item;
      item["tensor"] = name;
      item["classification"] = classification_json(classify(ctx, to_double(s)));
      items.push_back(std::move(item));
    }
    if (all_killing_basis) {
      const auto basis = killing_space(ctx).basis_matrices();
      for (size_t i = 0; i < basis.size(); ++i) {
        Report item;
        item["tensor"] = "killing[" + std::to_string(i) + "]";
        item["classification"] = classification_json(classify(ctx, basis[i]));
        items.push_back(std::move(item));
      }
    }
  }
  r["tensors"] = std::move(items);
  print_report(r, out);
  return 0;
}

template <typename T>
Report oracle_items(const Context<T>& ctx,
                    const std::vector<std::pair<std::string, Mat<T>>>& tensors,
                    bool all_killing_basis, int cap) {
  auto named = tensors;
  if (all_killing_basis) {
    const auto basis = killing_space(ctx).basis_matrices();
    for (size_t i = 0; i < basis.size(); ++i)
      named.emplace_back("killing[" + std::to_string(i) + "]", basis[i]);
  }
  const auto gens = generator_set(ctx);
  std::vector<Mat<T>> mats;
  for (const auto& [name, s] : named) mats.push_back(s);
  const auto results = membership_many(ctx, gens, mats, cap);
  Report items = Report::array();
  for (size_t i = 0; i < named.size(); ++i) {
    Report item;
    item["tensor"] = named[i].first;
    item["membership"] = membership_json(results[i]);
    items.push_back(std::move(item));
  }
  return items;
}

int run_oracle(const Input& in, const std::vector<std::string>& tensor_specs,
               bool all_killing_basis, int cap, std::ostream& out) {
  if (tensor_specs.empty() && !all_killing_basis)
    throw user_error("oracle needs --tensor or --all-killing-basis");
  detail::check_oracle_cap(in.file.n, cap);
  Report r = report_header("oracle", in.label, mode_string(in));
  r["oracle_cap"] = cap;
  const auto rational_tensors = select_tensors(in, tensor_specs);
  if (exact_mode(in)) {
    Context<Rational> ctx(in.file.algebra);
    r["tensors"] = oracle_items(ctx, rational_tensors, all_killing_basis, cap);
  } else {
    Context<double> ctx(orthonormalized(in.file));
    std::vector<std::pair<std::string, Mat<double>>> tensors;
    for (const auto& [name, s] : rational_tensors) tensors.emplace_back(name, to_double(s));
    r["tensors"] = oracle_items(ctx, tensors, all_killing_basis, cap);
  }
  print_report(r, out);
  return 0;
}

int run_flow(const Input& in, const std::vector<std::string>& tensor_specs, double t_max,
             int steps, unsigned seed, int states, std::ostream& out) {
  const LieAlgebra<double> alg = orthonormalized(in.file);
  if (states < 1) throw user_error("flow needs at least one state");
  std::vector<std::pair<std::string, Mat<double>>> tensors;
  for (const auto& [name, s] : select_tensors(in, tensor_specs))
    tensors.emplace_back(name, to_double(s));

  Report r = report_header("flow", in.label, "float");
  r["t_max"] = t_max;
  r["steps"] = steps;
  r["seed"] = seed;
  r["states"] = states;
  Report rows = Report::array();
  std::vector<double> worst(tensors.size(), 0.0);
  double worst_energy = 0;
  for (const auto& st : random_states(alg.n, states, seed)) {
    const auto traj = integrate(alg, st.y, st.w, t_max, steps);
    Report row;
    row["y0"] = vec_json(st.y);
    row["w0"] = vec_json(st.w);
    const double energy = drift(Mat<double>::identity(alg.n), traj);
    worst_energy = std::max(worst_energy, energy);
    row["energy_drift"] = energy;
    Report drifts;
    for (size_t q = 0; q < tensors.size(); ++q) {
      const double d = drift(tensors[q].second, traj);
      worst[q] = std::max(worst[q], d);
      drifts[tensors[q].first] = d;
    }
    row["tensor_drifts"] = std::move(drifts);
    rows.push_back(std::move(row));
  }
  r["trajectories"] = std::move(rows);
  Report summary;
  summary["energy"] = worst_energy;
  for (size_t q = 0; q < tensors.size(); ++q) summary[tensors[q].first] = worst[q];
  r["max_drift"] = std::move(summary);
  print_report(r, out);
  return 0;
}

int run_crosscheck(const Input& in, int trials, unsigned seed, int cap, std::ostream& out) {
  Report r = report_header("crosscheck", in.label, mode_string(in));
  r["trials"] = trials;
  r["seed"] = seed;
  r["oracle_cap"] = cap;
  if (exact_mode(in)) {
    Context<Rational> ctx(in.file.algebra);
    r["crosscheck"] = crosscheck_json(crosscheck(ctx, trials, seed, cap));
  } else {
    Context<double> ctx(orthonormalized(in.file));
    r["crosscheck"] = crosscheck_json(crosscheck(ctx, trials, seed, cap));
  }
  print_report(r, out);
  return 0;
}

int run_examples(bool list, const std::string& emit_name, std::ostream& out) {
  if (list) {
    Report r = report_header("examples", "builtin", "exact");
    Report items = Report::array();
    for (const auto& name : catalog_names()) {
      const auto entry = catalog_entry(name);
      Report item;
      item["name"] = entry.name;
      item["description"] = entry.description;
      item["dim"] = entry.algebra.n;
      if (!entry.tensors.empty()) {
        Report names = Report::array();
        for (const auto& [tname, t] : entry.tensors) names.push_back(tname);
        item["tensors"] = std::move(names);
      }
      items.push_back(std::move(item));
    }
    r["examples"] = std::move(items);
    r["note"] = "heisenberg-N is available for every positive pair count N";
    print_report(r, out);
    return 0;
  }
  out << emit_algebra_file(catalog_entry(emit_name));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetric Killing tensors on 2-step nilpotent metric Lie algebras"};
  app.require_subcommand(1);

  std::string input;
  std::vector<std::string> tensor_specs;
  bool all_killing_basis = false;
  int oracle_cap = kDefaultOracleCap;
  double t_max = 20.0;
  int steps = 20000;
  unsigned seed = 1;
  int states = 5;
  int trials = 5;
  std::string emit_name;

  auto* validate_cmd = app.add_subcommand("validate", "check the 2-step structure identities");
  validate_cmd->add_option("input", input, "example name or algebra file")->required();

  auto* analyze_cmd =
      app.add_subcommand("analyze", "splits, derivations, Killing and parallel spaces");
  analyze_cmd->add_option("input", input, "example name or algebra file")->required();

  auto* classify_cmd =
      app.add_subcommand("classify", "decide decomposability of symmetric Killing tensors");
  classify_cmd->add_option("input", input, "example name or algebra file")->required();
  classify_cmd->add_option("--tensor", tensor_specs, "embedded tensor name or tensor file");
  classify_cmd->add_flag("--all-killing-basis", all_killing_basis,
                         "classify every Killing-space basis element");

  auto* oracle_cmd = app.add_subcommand(
      "oracle", "independent membership test in the span of Killing-field products");
  oracle_cmd->add_option("input", input, "example name or algebra file")->required();
  oracle_cmd->add_option("--tensor", tensor_specs, "embedded tensor name or tensor file");
  oracle_cmd->add_flag("--all-killing-basis", all_killing_basis,
                       "test every Killing-space basis element");
  oracle_cmd->add_option("--oracle-cap", oracle_cap,
                         "largest algebra dimension the oracle accepts");

  auto* flow_cmd = app.add_subcommand("flow", "geodesic integration and first-integral drift");
  flow_cmd->add_option("input", input, "example name or algebra file")->required();
  flow_cmd->add_option("--tensor", tensor_specs, "embedded tensor name or tensor file");
  flow_cmd->add_option("--t-max", t_max, "integration horizon (default 20)");
  flow_cmd->add_option("--steps", steps, "step count (default 20000)");
  flow_cmd->add_option("--seed", seed, "seed for the initial states (default 1)");
  flow_cmd->add_option("--states", states, "number of seeded initial states (default 5)");

  auto* examples_cmd = app.add_subcommand("examples", "list or emit the built-in examples");
  auto* list_cmd = examples_cmd->add_subcommand("list", "list the built-in examples");
  auto* emit_cmd = examples_cmd->add_subcommand("emit", "print an example in the text format");
  emit_cmd->add_option("name", emit_name, "example name")->required();
  examples_cmd->require_subcommand(1);

  auto* crosscheck_cmd = app.add_subcommand(
      "crosscheck", "run classify against the oracle on basis elements and random combinations");
  crosscheck_cmd->add_option("input", input, "example name or algebra file")->required();
  crosscheck_cmd->add_option("--trials", trials, "random Killing combinations (default 5)");
  crosscheck_cmd->add_option("--seed", seed, "seed for the combinations (default 1)");
  crosscheck_cmd->add_option("--oracle-cap", oracle_cap,
                             "largest algebra dimension the oracle accepts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(resolve_input(input), std::cout);
    if (analyze_cmd->parsed()) return run_analyze(resolve_input(input), std::cout);
    if (classify_cmd->parsed())
      return run_classify(resolve_input(input), tensor_specs, all_killing_basis, std::cout);
    if (oracle_cmd->parsed())
      return run_oracle(resolve_input(input), tensor_specs, all_killing_basis, oracle_cap,
                        std::cout);
    if (flow_cmd->parsed())
      return run_flow(resolve_input(input), tensor_specs, t_max, steps, seed, states, std::cout);
    if (examples_cmd->parsed()) return run_examples(list_cmd->parsed(), emit_name, std::cout);
    if (crosscheck_cmd->parsed())
      return run_crosscheck(resolve_input(input), trials, seed, oracle_cap, std::cout);
    return 1;
  } catch (const user_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
