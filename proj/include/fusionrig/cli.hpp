#ifndef FUSIONRIG_CLI_HPP
#define FUSIONRIG_CLI_HPP

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fusionrig/serialization.hpp"
#include "fusionrig/solver.hpp"

namespace fusionrig::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

struct CliConfig {
  std::string command;
  std::string rules_path;
  std::string model_path;
  std::size_t samples = 50;
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
  std::string output_path;
  std::string format = "text";
  // solve
  std::string method = "closed-form";
  int restarts = 64;
  // counterexample
  std::string choice = "identity";
};

namespace detail {

inline void emit(const CliConfig& cfg, const json& doc, const std::string& text, std::ostream& out) {
  out << (cfg.format == "json" ? doc.dump(2) + "\n" : text);
  if (!cfg.output_path.empty()) {
    std::ofstream f(cfg.output_path);
    if (!f) throw ParseError(cfg.output_path + ": cannot write file");
    f << doc.dump(2) << "\n";
  }
}

inline std::string matrix_text(const DenseMatrix& m, const std::string& indent) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << indent << "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? ", " : "") << format_complex(m(r, c));
    out << "]\n";
  }
  if (m.rows() == 0) out << indent << "(empty)\n";
  return out.str();
}

inline std::string base_tables_text(const RigModel& m) {
  std::ostringstream out;
  for (const auto& [key, w] : m.alpha_base()) {
    out << "alpha(" << key[0] << "," << key[1] << "," << key[2] << "):\n";
    for (int k = 0; k < w.rank(); ++k) out << "  component " << k << " (dim " << w.mat(k).rows() << ")\n"
                                           << matrix_text(w.dense(k), "    ");
  }
  for (const auto& [key, w] : m.gamma_base()) {
    out << "gamma(" << key[0] << "," << key[1] << "):\n";
    for (int k = 0; k < w.rank(); ++k) out << "  component " << k << " (dim " << w.mat(k).rows() << ")\n"
                                           << matrix_text(w.dense(k), "    ");
  }
  return out.str();
}

inline json solution_json(const FibonacciSolution& s) {
  return {{"p", complex_json(s.p)}, {"q", complex_json(s.q)}, {"r", complex_json(s.r)}, {"s", complex_json(s.s)},
          {"t", complex_json(s.t)}, {"a", complex_json(s.a)}, {"b", complex_json(s.b)}, {"theta", s.theta}};
}

inline std::string solution_text(const FibonacciSolution& s) {
  std::ostringstream out;
  out << "p = " << format_complex(s.p) << "\n"
      << "q = " << format_complex(s.q) << "\n"
      << "r = " << format_complex(s.r) << "\n"
      << "s = " << format_complex(s.s) << "\n"
      << "t = " << format_complex(s.t) << "\n"
      << "a = " << format_complex(s.a) << "\n"
      << "b = " << format_complex(s.b) << "\n";
  return out.str();
}

inline std::string residual_text(double r) {
  std::ostringstream out;
  out << std::setprecision(12) << r;
  return out.str();
}

// ---------------------------------------------------------------------------

inline int cmd_validate(const CliConfig& cfg, std::ostream& out) {
  const FusionRules rules = load_rules(cfg.rules_path);
  const ValidationReport rep = validate_rules(rules);
  json violations = json::array();
  std::ostringstream text;
  text << cfg.rules_path << ": q = " << rules.q() << ", " << (rep.ok ? "valid" : "INVALID") << "\n";
  for (const auto& v : rep.violations) {
    violations.push_back({{"law", v.law}, {"indices", v.indices}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    text << "  " << v.to_string() << "\n";
  }
  emit(cfg, {{"file", cfg.rules_path}, {"q", rules.q()}, {"ok", rep.ok}, {"violations", violations}}, text.str(), out);
  return rep.ok ? kSuccess : kFailure;
}

inline int cmd_check(const CliConfig& cfg, std::ostream& out) {
  const RigModel model = load_model(cfg.model_path);
  const SuiteReport frame = frame_law_suite(cfg.samples, cfg.seed, cfg.tol);
  const SuiteReport nat = naturality_suite(model, cfg.samples, cfg.seed, cfg.tol);
  const SuiteReport coh = coherence_suite(model, cfg.samples, cfg.seed, cfg.tol);
  const bool pass = frame.all_pass() && nat.all_pass() && coh.all_pass();
  json doc{{"model", cfg.model_path},
           {"pass", pass},
           {"frame_laws", to_json(frame)},
           {"naturality", to_json(nat)},
           {"coherence", to_json(coh)}};
  std::string text = to_text(frame) + "\n" + to_text(nat) + "\n" + to_text(coh) + "\n" +
                     (pass ? "all checks passed\n" : "CHECK FAILED\n");
  emit(cfg, doc, text, out);
  return pass ? kSuccess : kFailure;
}

inline int cmd_solve(const CliConfig& cfg, std::ostream& out) {
  const FusionRules rules = load_rules(cfg.rules_path);
  std::optional<RigModel> model;
  json doc{{"method", cfg.method}};
  std::ostringstream text;
  bool ok = false;
  if (cfg.method == "closed-form") {
    if (rules != fibonacci_rules()) throw UnsupportedRules("closed-form solving needs the Fibonacci rules");
    model = fibonacci_closed_form();
    ok = true;
  } else {
    SolveOptions opt;
    opt.seed = cfg.seed;
    opt.restarts = cfg.restarts;
    opt.tol = cfg.tol;
    const SolveResult res = numeric_solve(rules, opt);
    model = res.model;
    ok = res.success;
    doc["restart"] = res.restart;
    doc["restarts_run"] = res.restarts_run;
    doc["objective"] = residual_json(res.objective);
    doc["seed"] = cfg.seed;
    text << "numeric search: " << (ok ? "converged" : "FAILED") << " (restart " << res.restart << " of "
         << res.restarts_run << " run, best residual " << residual_text(res.residual) << ")\n";
  }
  const SuiteReport ver = verify_model(*model, cfg.method == "closed-form" ? kDefaultTol : cfg.tol);
  ok = ok && ver.all_pass();
  doc["success"] = ok;
  doc["verify"] = to_json(ver);
  if (model->rules() == fibonacci_rules()) {
    const FibonacciSolution sol = cfg.method == "closed-form" ? solution_from_model(*model)
                                                              : gauge_fix(solution_from_model(*model));
    doc["solution"] = solution_json(sol);
    text << (cfg.method == "closed-form" ? "closed-form Fibonacci solution\n" : "gauge-fixed solution\n")
         << solution_text(sol);
    if (std::abs(sol.p - Complex(1.0, 0.0)) <= 1e-9) {
      text << "pentagon residual = " << residual_text(pentagon_residual_fib(sol)) << "\n"
           << "hexagon residual  = " << residual_text(hexagon_residual_fib(sol)) << "\n";
    }
  } else {
    text << base_tables_text(*model);
  }
  text << to_text(ver);
  doc["model"] = to_json(*model);
  CliConfig shown = cfg;
  shown.output_path.clear();
  emit(shown, doc, text.str(), out);
  if (!cfg.output_path.empty()) {
    std::ofstream f(cfg.output_path);
    if (!f) throw ParseError(cfg.output_path + ": cannot write file");
    f << to_json(*model).dump(2) << "\n";
    if (cfg.format != "json") out << "model written to " << cfg.output_path << "\n";
  }
  return ok ? kSuccess : kFailure;
}

inline int cmd_counterexample(const CliConfig& cfg, std::ostream& out) {
  const BijectionChoice choice = cfg.choice == "switch" ? BijectionChoice::Switch : BijectionChoice::Identity;
  const CounterexampleReport rep = tag_manipulation_counterexample(choice);
  json rows = json::array();
  std::ostringstream text;
  text << "tag-bijection alpha with the " << to_string(choice) << " choice on ((ab)c)d, component 1\n";
  text << std::left << std::setw(6) << "form" << std::setw(22) << "basis label" << std::setw(22) << "long path"
       << std::setw(22) << "short path" << "match\n";
  for (std::size_t n = 0; n < rep.forms.size(); ++n) {
    rows.push_back({{"form", rep.forms[n]},
                    {"long_path", rep.long_path[n]},
                    {"short_path", rep.short_path[n]},
                    {"mismatch", static_cast<bool>(rep.mismatch[n])}});
    text << std::left << std::setw(6) << n + 1 << std::setw(22) << rep.forms[n] << std::setw(22) << rep.long_path[n]
         << std::setw(22) << rep.short_path[n] << (rep.mismatch[n] ? "no" : "yes") << "\n";
  }
  text << rep.mismatch_count() << " of " << rep.forms.size() << " forms disagree; pentagon residual "
       << residual_text(rep.pentagon_residual) << "\n";
  emit(cfg,
       {{"choice", to_string(choice)},
        {"forms", rows},
        {"mismatches", rep.mismatch_count()},
        {"pentagon_residual", rep.pentagon_residual}},
       text.str(), out);
  return kSuccess;
}

inline int cmd_info(const CliConfig& cfg, std::ostream& out) {
  const RigModel model = load_model(cfg.model_path);
  const RulesPtr& rules = model.rules_ptr();
  json dims = json::object();
  std::ostringstream text;
  text << "rules: q = " << rules->q() << "\n";
  text << "products of generators (component dims):\n";
  for (int i = 1; i <= rules->q(); ++i) {
    for (int j = 1; j <= rules->q(); ++j) {
      const auto d = raw_mul(generator(rules, i), generator(rules, j)).dims();
      dims[std::to_string(i) + "," + std::to_string(j)] = d;
      text << "  x" << i << " x x" << j << ": " << ::fusionrig::detail::dims_string(d) << "\n";
    }
  }
  text << base_tables_text(model);
  emit(cfg, {{"q", rules->q()}, {"product_dims", dims}, {"model", to_json(model)}}, text.str(), out);
  return kSuccess;
}

}  // namespace detail

/// Parses the arguments (argv[0] is the program name) and runs the subcommand.
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Unitary fusion rig toolkit"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--output", cfg.output_path, "Also write the JSON report to this path");
  };
  auto add_suite = [&](CLI::App* sub) {
    sub->add_option("--samples", cfg.samples, "Random samples per check")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--tol", cfg.tol, "Tolerance")->check(CLI::PositiveNumber);
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a fusion-rules file against the fusion laws");
  validate->add_option("rules", cfg.rules_path, "Fusion-rules JSON")->required();
  add_format(validate);

  CLI::App* check = app.add_subcommand("check", "Run the frame-law, naturality and coherence suites");
  check->add_option("--model", cfg.model_path, "Rig model JSON")->required();
  add_suite(check);
  add_format(check);

  CLI::App* solve = app.add_subcommand("solve", "Produce a rig model for fusion rules");
  solve->add_option("--rules", cfg.rules_path, "Fusion-rules JSON")->required();
  solve->add_option("--method", cfg.method, "Solver")->check(CLI::IsMember({"closed-form", "numeric"}));
  solve->add_option("--seed", cfg.seed, "Random seed");
  solve->add_option("--restarts", cfg.restarts, "Random restarts")->check(CLI::Range(1, 100000));
  solve->add_option("--tol", cfg.tol, "Tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--out", cfg.output_path, "Where to write the model JSON");
  solve->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  CLI::App* counter = app.add_subcommand("counterexample", "Show the tag-bijection pentagon failure");
  counter->add_option("--choice", cfg.choice, "Case-5 bijection")->check(CLI::IsMember({"identity", "switch"}));
  add_format(counter);

  CLI::App* info = app.add_subcommand("info", "Describe a rig model");
  info->add_option("--model", cfg.model_path, "Rig model JSON")->required();
  add_format(info);

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (validate->parsed()) return detail::cmd_validate(cfg, out);
    if (check->parsed()) return detail::cmd_check(cfg, out);
    if (solve->parsed()) return detail::cmd_solve(cfg, out);
    if (counter->parsed()) return detail::cmd_counterexample(cfg, out);
    if (info->parsed()) return detail::cmd_info(cfg, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedRules& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace fusionrig::cli

#endif  // FUSIONRIG_CLI_HPP
