#ifndef FUSIONRIG_COHERENCE_HPP
#define FUSIONRIG_COHERENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fusionrig/expression.hpp"
#include "fusionrig/parallel.hpp"
#include "fusionrig/random.hpp"

namespace fusionrig {

enum class Orientation { Forward, Backward };

struct Edge {
  std::string expr;
  Orientation orientation = Orientation::Forward;
  Witness witness;
};

/// A cycle of witnesses starting and ending at `base`.
struct Diagram {
  std::string name;
  RawElement base;
  std::vector<Edge> edges;
};

struct DiagramReport {
  std::string name;
  std::string caption;
  bool pass = false;
  double residual = 0.0;
  std::size_t witness_count = 0;
  int failing_component = -1;
  std::size_t instances = 0;
  std::string worst_instance;
  std::string error;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double tol = kDefaultTol;
  std::vector<DiagramReport> reports;

  bool all_pass() const {
    return std::all_of(reports.begin(), reports.end(), [](const DiagramReport& r) { return r.pass; });
  }
  std::size_t pass_count() const {
    return static_cast<std::size_t>(
        std::count_if(reports.begin(), reports.end(), [](const DiagramReport& r) { return r.pass; }));
  }
  const DiagramReport* find(const std::string& name) const {
    for (const auto& r : reports) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }
};

/// Composes the edges around the cycle, inverting backward edges.
inline Witness eval_loop(const Diagram& d) {
  Witness acc = identity_witness(d.base);
  for (std::size_t n = 0; n < d.edges.size(); ++n) {
    const Edge& e = d.edges[n];
    const Witness w = e.orientation == Orientation::Forward ? e.witness : invert(e.witness);
    if (w.domain() != acc.codomain()) {
      throw ChainingError(d.name + ": edge " + std::to_string(n + 1) + " (" + e.expr +
                          ") does not start where the previous edge ends");
    }
    acc = compose(acc, w);
  }
  if (acc.codomain() != d.base) {
    throw ChainingError(d.name + ": edges do not return to the base vertex");
  }
  return acc;
}

inline DiagramReport check_diagram(const Diagram& d, double tol = kDefaultTol) {
  DiagramReport r;
  r.name = d.name;
  r.witness_count = d.edges.size();
  r.instances = 1;
  try {
    const Witness loop = eval_loop(d);
    r.residual = distance_from_identity(loop);
    r.failing_component = worst_component(loop, tol);
    r.pass = r.residual <= tol;
  } catch (const ChainingError& e) {
    r.pass = false;
    r.residual = std::numeric_limits<double>::infinity();
    r.error = e.what();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Diagram templates

struct LoopTemplate {
  std::string base;
  std::vector<std::pair<char, std::string>> edges;  // 'f' forward, 'b' backward
};

struct FigureTemplate {
  std::string name;
  std::string caption;
  int arity = 0;
  std::vector<LoopTemplate> loops;
  bool tag_only = false;  // uses no alpha_times, gamma_times or beta
};

/// The coherence figures as edge lists over variables A, B, C, D.
/// In witness expressions the product operator 'x' must be surrounded by spaces or
/// parentheses when followed by a witness name.
inline const std::vector<FigureTemplate>& figure_templates() {
  static const std::vector<FigureTemplate> figs = [] {
    std::vector<FigureTemplate> v;
    v.push_back({"Fig1-pentagon-plus", "Additive Pentagon Condition", 4,
                 {{"((A+B)+C)+D",
                   {{'f', "alpha_plus(A+B,C,D)"},
                    {'f', "alpha_plus(A,B,C+D)"},
                    {'b', "id(A) + alpha_plus(B,C,D)"},
                    {'b', "alpha_plus(A,B+C,D)"},
                    {'b', "alpha_plus(A,B,C) + id(D)"}}}},
                 true});
    v.push_back({"Fig2-hexagon-plus", "Additive Hexagon Condition", 3,
                 {{"(A+B)+C",
                   {{'f', "alpha_plus(A,B,C)"},
                    {'f', "gamma_plus(A,B+C)"},
                    {'f', "alpha_plus(B,C,A)"},
                    {'b', "id(B) + gamma_plus(A,C)"},
                    {'b', "alpha_plus(B,A,C)"},
                    {'b', "gamma_plus(A,B) + id(C)"}}}},
                 true});
    v.push_back({"Fig3-unit-assoc-plus", "Additive Unit Associativity", 2,
                 {{"(A+0)+B",
                   {{'f', "alpha_plus(A,0,B)"}, {'f', "id(A) + lambda_plus(B)"}, {'b', "rho_plus(A) + id(B)"}}}},
                 true});
    v.push_back({"Fig4-symmetry-plus", "Additive Symmetry", 2,
                 {{"A+B", {{'f', "gamma_plus(A,B)"}, {'f', "gamma_plus(B,A)"}}}}, true});
    v.push_back({"Fig5-pentagon-x", "Multiplicative Pentagon condition", 4,
                 {{"((AxB)xC)xD",
                   {{'f', "alpha_times(AxB,C,D)"},
                    {'f', "alpha_times(A,B,CxD)"},
                    {'b', "id(A) x alpha_times(B,C,D)"},
                    {'b', "alpha_times(A,BxC,D)"},
                    {'b', "alpha_times(A,B,C) x id(D)"}}}},
                 false});
    v.push_back({"Fig6-hexagon-front", "Multiplicative Hexagon: Moving one factor in front of two", 3,
                 {{"(AxB)xC",
                   {{'f', "alpha_times(A,B,C)"},
                    {'f', "gamma_times(A,BxC)"},
                    {'f', "alpha_times(B,C,A)"},
                    {'b', "id(B) x gamma_times(A,C)"},
                    {'b', "alpha_times(B,A,C)"},
                    {'b', "gamma_times(A,B) x id(C)"}}}},
                 false});
    v.push_back({"Fig7-hexagon-behind", "Multiplicative Hexagon: Moving one factor behind two", 3,
                 {{"(AxB)xC",
                   {{'f', "alpha_times(A,B,C)"},
                    {'b', "gamma_times(BxC,A)"},
                    {'f', "alpha_times(B,C,A)"},
                    {'f', "id(B) x gamma_times(C,A)"},
                    {'b', "alpha_times(B,A,C)"},
                    {'f', "gamma_times(B,A) x id(C)"}}}},
                 false});
    v.push_back({"Fig8-unit-assoc-x", "Multiplicative Unit Associativity", 2,
                 {{"(Ax1)xB",
                   {{'f', "alpha_times(A,1,B)"},
                    {'f', "id(A) x lambda_times(B)"},
                    {'b', "rho_times(A) x id(B)"}}}},
                 false});
    v.push_back({"Fig9-right-distributive", "Right Distributive", 3,
                 {{"Ax(B+C)",
                   {{'f', "beta(A,B+C)"},
                    {'f', "delta(A,B,C)"},
                    {'b', "beta(A,B) + beta(A,C)"},
                    {'b', "delta(A,B,C)"}}},
                  {"Ax0", {{'f', "beta(A,0)"}}}},
                 false});
    v.push_back({"Fig10-distrib-commutativity",
                 "Distribution Respects Additive Commutativity (Laplaza Cond. I)", 3,
                 {{"Ax(B+C)",
                   {{'f', "delta(A,B,C)"},
                    {'b', "gamma_plus(AxC,AxB)"},
                    {'b', "delta(A,C,B)"},
                    {'b', "id(A) x gamma_plus(B,C)"}}}},
                 true});
    v.push_back({"Fig11-distrib-associativity",
                 "Distribution Respects Additive Associativity (Laplaza Cond. V)", 4,
                 {{"Ax((B+C)+D)",
                   {{'f', "id(A) x alpha_plus(B,C,D)"},
                    {'f', "delta(A,B,C+D)"},
                    {'f', "id(AxB) + delta(A,C,D)"},
                    {'b', "alpha_plus(AxB,AxC,AxD)"},
                    {'b', "delta(A,B,C) + id(AxD)"},
                    {'b', "delta(A,B+C,D)"}}}},
                 true});
    v.push_back({"Fig12-distrib-zero", "Distribution Respects 0 as neutral (Laplaza Cond. XXI)", 2,
                 {{"Ax(B+0)",
                   {{'f', "delta(A,B,0)"},
                    {'f', "id(AxB) + epsilon(A)"},
                    {'f', "rho_plus(AxB)"},
                    {'b', "id(A) x rho_plus(B)"}}}},
                 true});
    v.push_back({"Fig13-sequential-2x2", "Sequential Distribution 2x2 (Laplaza Cond. VI)", 4,
                 {{"(AxB)x(C+D)",
                   {{'f', "alpha_times(A,B,C+D)"},
                    {'f', "id(A) x delta(B,C,D)"},
                    {'f', "delta(A,BxC,BxD)"},
                    {'b', "alpha_times(A,B,C) + alpha_times(A,B,D)"},
                    {'b', "delta(AxB,C,D)"}}}},
                 false});
    v.push_back({"Fig14-sequential-2x0", "Sequential Distribution 2x0 (Laplaza Cond. XVIII)", 2,
                 {{"(AxB)x0",
                   {{'f', "alpha_times(A,B,0)"},
                    {'f', "id(A) x epsilon(B)"},
                    {'f', "epsilon(A)"},
                    {'b', "epsilon(AxB)"}}}},
                 false});
    v.push_back({"Fig15-sequential-0x2", "Sequential Distribution 0x2 (Laplaza Cond. XXIII)", 2,
                 {{"1x(A+B)",
                   {{'f', "delta(1,A,B)"},
                    {'f', "lambda_times(A) + lambda_times(B)"},
                    {'b', "lambda_times(A+B)"}}}},
                 true});
    v.push_back({"Fig16-sequential-0x0", "Sequential Distribution 0x0 (Laplaza Cond. XIV)", 0,
                 {{"1x0", {{'f', "epsilon(1)"}, {'b', "lambda_times(0)"}}}},
                 true});
    v.push_back({"Fig17-expand-2x2", "Expand 2x2 (Laplaza Cond. IX)", 4,
                 {{"(A+B)x(C+D)",
                   {{'f', "delta(A+B,C,D)"},
                    {'f', "gamma_times(A+B,C) + gamma_times(A+B,D)"},
                    {'f', "delta(C,A,B) + delta(D,A,B)"},
                    {'b', "(gamma_times(A,C) + gamma_times(B,C)) + (gamma_times(A,D) + gamma_times(B,D))"},
                    {'b', "alpha_plus(AxC+BxC,AxD,BxD)"},
                    {'f', "alpha_plus(AxC,BxC,AxD) + id(BxD)"},
                    {'f', "(id(AxC) + gamma_plus(BxC,AxD)) + id(BxD)"},
                    {'b', "alpha_plus(AxC,AxD,BxC) + id(BxD)"},
                    {'f', "alpha_plus(AxC+AxD,BxC,BxD)"},
                    {'b', "delta(A,C,D) + delta(B,C,D)"},
                    {'f', "gamma_times(A,C+D) + gamma_times(B,C+D)"},
                    {'b', "delta(C+D,A,B)"},
                    {'b', "gamma_times(A+B,C+D)"}}},
                  {"(A+B)x(C+D)",
                   {{'f', "delta(A+B,C,D)"},
                    {'f', "delta_sharp(C,A,B) + delta_sharp(D,A,B)"},
                    {'b', "alpha_plus(AxC+BxC,AxD,BxD)"},
                    {'f', "alpha_plus(AxC,BxC,AxD) + id(BxD)"},
                    {'f', "(id(AxC) + gamma_plus(BxC,AxD)) + id(BxD)"},
                    {'b', "alpha_plus(AxC,AxD,BxC) + id(BxD)"},
                    {'f', "alpha_plus(AxC+AxD,BxC,BxD)"},
                    {'b', "delta(A,C,D) + delta(B,C,D)"},
                    {'b', "delta_sharp(C+D,A,B)"}}}},
                 false});
    v.push_back({"Fig18-expand-2x0-0x0", "Expand 2x0 and 0x0 (Laplaza Conds. XII and X)", 2,
                 {{"(A+B)x0",
                   {{'f', "gamma_times(A+B,0)"},
                    {'f', "delta(0,A,B)"},
                    {'b', "gamma_times(A,0) + gamma_times(B,0)"},
                    {'f', "epsilon(A) + epsilon(B)"},
                    {'f', "lambda_plus(0)"},
                    {'b', "epsilon(A+B)"}}},
                  {"0x0", {{'f', "gamma_times(0,0)"}}}},
                 false});
    v.push_back({"LaplazaVII", "Laplaza Cond. VII", 4,
                 {{"(BxA)x(C+D)",
                   {{'f', "delta(BxA,C,D)"},
                    {'f', "gamma_times(BxA,C) + gamma_times(BxA,D)"},
                    {'b', "alpha_times(C,B,A) + alpha_times(D,B,A)"},
                    {'b', "gamma_times(A,CxB) + gamma_times(A,DxB)"},
                    {'b', "delta(A,CxB,DxB)"},
                    {'f', "gamma_times(A,CxB+DxB)"},
                    {'b', "(gamma_times(B,C) + gamma_times(B,D)) x id(A)"},
                    {'b', "delta(B,C,D) x id(A)"},
                    {'f', "gamma_times(B,C+D) x id(A)"},
                    {'f', "alpha_times(C+D,B,A)"},
                    {'b', "gamma_times(BxA,C+D)"}}},
                  {"((C+D)xB)xA",
                   {{'f', "alpha_times(C+D,B,A)"},
                    {'f', "delta_sharp(BxA,C,D)"},
                    {'b', "alpha_times(C,B,A) + alpha_times(D,B,A)"},
                    {'b', "delta_sharp(A,CxB,DxB)"},
                    {'b', "delta_sharp(B,C,D) x id(A)"}}}},
                 false});
    v.push_back({"LaplazaVIII", "Laplaza Cond. VIII", 4,
                 {{"Ax(Bx(C+D))",
                   {{'f', "id(A) x delta(B,C,D)"},
                    {'f', "id(A) x (gamma_times(B,C) + gamma_times(B,D))"},
                    {'f', "delta(A,CxB,DxB)"},
                    {'b', "alpha_times(A,C,B) + alpha_times(A,D,B)"},
                    {'b', "gamma_times(B,AxC) + gamma_times(B,AxD)"},
                    {'b', "delta(B,AxC,AxD)"},
                    {'f', "gamma_times(B,AxC+AxD)"},
                    {'b', "delta(A,C,D) x id(B)"},
                    {'f', "alpha_times(A,C+D,B)"},
                    {'b', "id(A) x gamma_times(B,C+D)"}}},
                  {"(Ax(C+D))xB",
                   {{'f', "alpha_times(A,C+D,B)"},
                    {'f', "id(A) x delta_sharp(B,C,D)"},
                    {'f', "delta(A,CxB,DxB)"},
                    {'b', "alpha_times(A,C,B) + alpha_times(A,D,B)"},
                    {'b', "delta_sharp(B,AxC,AxD)"},
                    {'b', "delta(A,C,D) x id(B)"}}}},
                 false});
    return v;
  }();
  return figs;
}

inline const FigureTemplate& figure_template(const std::string& name) {
  for (const auto& f : figure_templates()) {
    if (f.name == name) return f;
  }
  throw std::invalid_argument("unknown diagram " + name);
}

/// Builds one loop of a figure under the given variable assignment.
inline Diagram instantiate(const FigureTemplate& fig, std::size_t loop, const Bindings& env) {
  const LoopTemplate& lt = fig.loops.at(loop);
  Diagram d;
  d.name = fig.name + (fig.loops.size() > 1 ? "/" + std::to_string(loop + 1) : "");
  d.base = eval_raw(lt.base, env);
  for (const auto& [dir, expr] : lt.edges) {
    d.edges.push_back({expr, dir == 'f' ? Orientation::Forward : Orientation::Backward, eval_witness(expr, env)});
  }
  return d;
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = seed * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull;
  h ^= a + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

inline std::string dims_string(const std::vector<std::size_t>& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

inline std::string describe_bindings(const Bindings& env) {
  std::string s;
  for (const auto& [name, raw] : env.vars) {
    if (!s.empty()) s += " ";
    s += std::string(1, name) + "=" + dims_string(raw.dims());
  }
  return s.empty() ? "-" : s;
}

inline void merge(DiagramReport& into, const DiagramReport& one, const std::string& instance) {
  into.instances += 1;
  into.witness_count += one.witness_count;
  if (!one.error.empty() && into.error.empty()) into.error = one.error;
  if (one.residual > into.residual || (std::isnan(one.residual) && !std::isnan(into.residual))) {
    into.residual = one.residual;
    into.failing_component = one.failing_component;
    into.worst_instance = instance;
  }
}

}  // namespace detail

struct SuiteOptions {
  std::size_t samples = 50;
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
  std::size_t max_dim = 3;
  /// Optional cap on the total dimension of a figure's base vertex for random instances.
  std::size_t label_budget = std::numeric_limits<std::size_t>::max();
  bool include_generator_tuples = true;
  unsigned threads = default_threads();
};

/// Draws variables for a random instance of a figure, shrinking dims until the base vertex
/// fits the label budget.
inline Bindings random_instance(const FigureTemplate& fig, const RigModel& model, const SuiteOptions& opt,
                                Rng& rng) {
  const RulesPtr& rules = model.rules_ptr();
  std::vector<std::vector<std::size_t>> dims;
  for (int v = 0; v < fig.arity; ++v) dims.push_back(random_dims(rules->rank(), opt.max_dim, rng));
  auto base_size = [&] {
    Bindings probe{rules, {}, &model};
    for (int v = 0; v < fig.arity; ++v) {
      probe.vars[static_cast<char>('A' + v)] = normal_form(rules, normal_form_sequence(dims[static_cast<std::size_t>(v)]));
    }
    std::size_t total = 0;
    for (const auto& loop : fig.loops) total = std::max(total, eval_raw(loop.base, probe).total_dim());
    return total;
  };
  while (opt.label_budget != std::numeric_limits<std::size_t>::max() && base_size() > opt.label_budget) {
    std::vector<std::pair<std::size_t, std::size_t>> positive;
    for (std::size_t v = 0; v < dims.size(); ++v) {
      for (std::size_t k = 0; k < dims[v].size(); ++k) {
        if (dims[v][k] > 0) positive.emplace_back(v, k);
      }
    }
    const auto [v, k] = positive[static_cast<std::size_t>(rng() % positive.size())];
    --dims[v][k];
  }
  Bindings env{rules, {}, &model};
  for (int v = 0; v < fig.arity; ++v) {
    env.vars[static_cast<char>('A' + v)] = random_raw_with_dims(rules, dims[static_cast<std::size_t>(v)], rng);
  }
  return env;
}

/// All assignments of generators x_0..x_q to the figure's variables.
inline std::vector<Bindings> generator_instances(const FigureTemplate& fig, const RigModel& model) {
  const RulesPtr& rules = model.rules_ptr();
  const int r = rules->rank();
  std::vector<Bindings> out;
  std::vector<int> idx(static_cast<std::size_t>(fig.arity), 0);
  while (true) {
    Bindings env{rules, {}, &model};
    for (int v = 0; v < fig.arity; ++v) env.vars[static_cast<char>('A' + v)] = generator(rules, idx[static_cast<std::size_t>(v)]);
    out.push_back(std::move(env));
    int pos = fig.arity - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == r) idx[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  return out;
}

/// Checks every loop of a figure under one assignment. Exceptions other than chaining
/// failures (for instance a missing base entry) are reported as a failure with the message.
inline DiagramReport check_figure_instance(const FigureTemplate& fig, const Bindings& env, double tol) {
  DiagramReport agg;
  agg.name = fig.name;
  agg.caption = fig.caption;
  for (std::size_t l = 0; l < fig.loops.size(); ++l) {
    DiagramReport one;
    try {
      one = check_diagram(instantiate(fig, l, env), tol);
    } catch (const std::exception& e) {
      one.name = fig.name;
      one.residual = std::numeric_limits<double>::infinity();
      one.error = e.what();
    }
    detail::merge(agg, one, detail::describe_bindings(env));
  }
  agg.instances = 1;
  agg.pass = agg.residual <= tol && agg.error.empty();
  return agg;
}

inline DiagramReport check_figure(const FigureTemplate& fig, std::size_t fig_index, const RigModel& model,
                                  const SuiteOptions& opt) {
  std::vector<Bindings> instances;
  if (opt.include_generator_tuples) instances = generator_instances(fig, model);
  const std::size_t random_count = fig.arity == 0 ? 0 : opt.samples;
  for (std::size_t s = 0; s < random_count; ++s) {
    Rng rng(detail::mix_seed(opt.seed, fig_index, s));
    instances.push_back(random_instance(fig, model, opt, rng));
  }
  DiagramReport agg;
  agg.name = fig.name;
  agg.caption = fig.caption;
  for (const auto& env : instances) {
    const DiagramReport one = check_figure_instance(fig, env, opt.tol);
    detail::merge(agg, one, one.worst_instance);
  }
  agg.pass = agg.residual <= opt.tol && agg.error.empty();
  return agg;
}

/// Every coherence figure on generator tuples and on random instances.
inline SuiteReport coherence_suite(const RigModel& model, const SuiteOptions& opt = {}) {
  SuiteReport rep{"coherence", opt.seed, opt.samples, opt.tol, {}};
  const auto& figs = figure_templates();
  rep.reports.resize(figs.size());
  parallel_for(figs.size(), opt.threads, [&](std::size_t i) { rep.reports[i] = check_figure(figs[i], i, model, opt); });
  return rep;
}

inline SuiteReport coherence_suite(const RigModel& model, std::size_t samples, std::uint64_t seed,
                                   double tol) {
  SuiteOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  opt.tol = tol;
  return coherence_suite(model, opt);
}

// ---------------------------------------------------------------------------
// Frame laws and naturality

namespace detail {

struct LawAccumulator {
  std::vector<DiagramReport> reports;

  DiagramReport& slot(const std::string& name, const std::string& caption) {
    for (auto& r : reports) {
      if (r.name == name) return r;
    }
    DiagramReport r;
    r.name = name;
    r.caption = caption;
    reports.push_back(r);
    return reports.back();
  }

  /// Records the distance between two witnesses; differing endpoints count as infinite.
  void equal(const std::string& name, const std::string& caption, const Witness& lhs, const Witness& rhs,
             const std::string& instance) {
    DiagramReport one;
    one.witness_count = 2;
    if (lhs.domain() != rhs.domain() || lhs.codomain() != rhs.codomain()) {
      one.residual = std::numeric_limits<double>::infinity();
      one.error = "endpoints differ";
    } else {
      one.residual = matrix_distance(lhs, rhs);
    }
    merge(slot(name, caption), one, instance);
  }

  void value(const std::string& name, const std::string& caption, double residual, const std::string& instance) {
    DiagramReport one;
    one.witness_count = 1;
    one.residual = residual;
    merge(slot(name, caption), one, instance);
  }

  void error(const std::string& name, const std::string& caption, const std::string& what,
             const std::string& instance) {
    DiagramReport one;
    one.residual = std::numeric_limits<double>::infinity();
    one.error = what;
    merge(slot(name, caption), one, instance);
  }

  void finish(SuiteReport& rep, double tol) {
    for (auto& r : reports) r.pass = r.residual <= tol && r.error.empty();
    rep.reports = std::move(reports);
  }
};

inline double unitarity_defect(const Witness& w) {
  double m = 0.0;
  for (const auto& mat : w.mats()) {
    Matrix p = mat.adjoint() * mat;
    m = std::max(m, max_abs_diff(p, sparse_identity(static_cast<std::size_t>(mat.cols()))));
  }
  return m;
}

inline RulesPtr frame_rules(std::size_t sample) {
  static const std::vector<RulesPtr> sets{make_rules(trivial_rules()), make_rules(fibonacci_rules()),
                                          make_rules(z2_rules()), make_rules(ising_rules())};
  return sets[sample % sets.size()];
}

}  // namespace detail

/// Frame laws, inversion, cancellation and functoriality of + and x on random witnesses.
inline SuiteReport frame_law_suite(std::size_t samples, std::uint64_t seed, double tol = kDefaultTol,
                                   std::size_t max_dim = 3) {
  SuiteReport rep{"frame-laws", seed, samples, tol, {}};
  detail::LawAccumulator acc;
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(detail::mix_seed(seed, 0xf4a3e, s));
    const RulesPtr rules = detail::frame_rules(s);
    const auto d1 = random_dims(rules->rank(), max_dim, rng);
    const auto d2 = random_dims(rules->rank(), max_dim, rng);
    std::vector<RawElement> a, b;
    for (int n = 0; n < 4; ++n) a.push_back(random_raw_with_dims(rules, d1, rng));
    for (int n = 0; n < 3; ++n) b.push_back(random_raw_with_dims(rules, d2, rng));
    const std::string inst = "rules q=" + std::to_string(rules->q()) + " dims " + detail::dims_string(d1) + " " +
                             detail::dims_string(d2);

    const Witness xi = random_witness(a[0], a[1], rng);
    const Witness eta = random_witness(a[1], a[2], rng);
    const Witness zeta = random_witness(a[2], a[3], rng);
    const Witness mu = random_witness(b[0], b[1], rng);
    const Witness nu = random_witness(b[1], b[2], rng);

    acc.equal("W4-left-identity", "1_a * xi = xi", compose(identity_witness(a[0]), xi), xi, inst);
    acc.equal("W4-right-identity", "xi * 1_b = xi", compose(xi, identity_witness(a[1])), xi, inst);
    acc.equal("W5-right-inverse", "xi * xi^-1 = 1_a", compose(xi, invert(xi)), identity_witness(a[0]), inst);
    acc.equal("W5-left-inverse", "xi^-1 * xi = 1_b", compose(invert(xi), xi), identity_witness(a[1]), inst);
    acc.equal("W6-associativity", "(xi*eta)*zeta = xi*(eta*zeta)", compose(compose(xi, eta), zeta),
              compose(xi, compose(eta, zeta)), inst);
    acc.equal("involution", "(xi^-1)^-1 = xi", invert(invert(xi)), xi, inst);
    acc.equal("inverse-of-composite", "(xi*eta)^-1 = eta^-1 * xi^-1", invert(compose(xi, eta)),
              compose(invert(eta), invert(xi)), inst);
    acc.equal("left-cancellation", "xi^-1 * (xi*eta) = eta", compose(invert(xi), compose(xi, eta)), eta, inst);
    acc.equal("right-cancellation", "(xi*eta) * eta^-1 = xi", compose(compose(xi, eta), invert(eta)), xi, inst);
    acc.equal("functorial-sum", "(xi+mu)*(eta+nu) = (xi*eta)+(mu*nu)",
              compose(witness_add(xi, mu), witness_add(eta, nu)), witness_add(compose(xi, eta), compose(mu, nu)),
              inst);
    acc.equal("functorial-product", "(xi x mu)*(eta x nu) = (xi*eta) x (mu*nu)",
              compose(witness_mul(xi, mu), witness_mul(eta, nu)), witness_mul(compose(xi, eta), compose(mu, nu)),
              inst);
    acc.equal("functorial-inverse-sum", "(xi+mu)^-1 = xi^-1 + mu^-1", invert(witness_add(xi, mu)),
              witness_add(invert(xi), invert(mu)), inst);
    acc.equal("functorial-inverse-product", "(xi x mu)^-1 = xi^-1 x mu^-1", invert(witness_mul(xi, mu)),
              witness_mul(invert(xi), invert(mu)), inst);
    acc.equal("identity-sum", "1_a + 1_b = 1_(a+b)", witness_add(identity_witness(a[0]), identity_witness(b[0])),
              identity_witness(raw_add(a[0], b[0])), inst);
    acc.equal("identity-product", "1_a x 1_b = 1_(ab)", witness_mul(identity_witness(a[0]), identity_witness(b[0])),
              identity_witness(raw_mul(a[0], b[0])), inst);
    acc.equal("identity-compound", "(1_a + 1_b) x 1_c = 1_((a+b)c)",
              witness_mul(witness_add(identity_witness(a[0]), identity_witness(b[0])), identity_witness(a[1])),
              identity_witness(raw_mul(raw_add(a[0], b[0]), a[1])), inst);
    const double defect = std::max({detail::unitarity_defect(compose(xi, eta)), detail::unitarity_defect(invert(xi)),
                                    detail::unitarity_defect(witness_add(xi, mu)),
                                    detail::unitarity_defect(witness_mul(xi, mu))});
    acc.value("unitarity", "composites, inverses, sums and products stay unitary", defect, inst);
  }
  acc.finish(rep, tol);
  return rep;
}

/// The ten naturality equations with random unitary xi: A=A', eta: B=B', zeta: C=C'.
inline SuiteReport naturality_suite(const RigModel& model, std::size_t samples, std::uint64_t seed,
                                    double tol = kDefaultTol, std::size_t max_dim = 3,
                                    std::size_t label_budget = std::numeric_limits<std::size_t>::max()) {
  SuiteReport rep{"naturality", seed, samples, tol, {}};
  detail::LawAccumulator acc;
  const RulesPtr& rules = model.rules_ptr();
  const RawElement zero = raw_zero(rules);
  const RawElement one = raw_one(rules);
  struct Eq {
    const char* name;
    const char* caption;
  };
  static const Eq eqs[] = {
      {"nat-alpha-plus", "alpha+_{A,B,C}*(xi+(eta+zeta)) = ((xi+eta)+zeta)*alpha+_{A',B',C'}"},
      {"nat-lambda-plus", "lambda+_A*xi = (1_0+xi)*lambda+_{A'}"},
      {"nat-rho-plus", "rho+_A*xi = (xi+1_0)*rho+_{A'}"},
      {"nat-gamma-plus", "gamma+_{A,B}*(eta+xi) = (xi+eta)*gamma+_{A',B'}"},
      {"nat-alpha-times", "alphax_{A,B,C}*(xi x (eta x zeta)) = ((xi x eta) x zeta)*alphax_{A',B',C'}"},
      {"nat-lambda-times", "lambdax_A*xi = (1_1 x xi)*lambdax_{A'}"},
      {"nat-rho-times", "rhox_A*xi = (xi x 1_1)*rhox_{A'}"},
      {"nat-gamma-times", "gammax_{A,B}*(eta x xi) = (xi x eta)*gammax_{A',B'}"},
      {"nat-delta", "delta_{A,B,C}*((xi x eta)+(xi x zeta)) = (xi x (eta+zeta))*delta_{A',B',C'}"},
      {"nat-epsilon", "epsilon_A = (xi x 1_0)*epsilon_{A'}"},
  };
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(detail::mix_seed(seed, 0x7a7, s));
    std::vector<std::vector<std::size_t>> dims;
    for (int v = 0; v < 3; ++v) dims.push_back(random_dims(rules->rank(), max_dim, rng));
    auto product_size = [&] {
      std::vector<std::size_t> d = fused_dims(*rules, dims[0], dims[1]);
      d = fused_dims(*rules, d, dims[2]);
      std::size_t t = 0;
      for (auto v : d) t += v;
      return t;
    };
    while (label_budget != std::numeric_limits<std::size_t>::max() && product_size() > label_budget) {
      std::vector<std::pair<std::size_t, std::size_t>> positive;
      for (std::size_t v = 0; v < 3; ++v)
        for (std::size_t k = 0; k < dims[v].size(); ++k)
          if (dims[v][k] > 0) positive.emplace_back(v, k);
      const auto [v, k] = positive[static_cast<std::size_t>(rng() % positive.size())];
      --dims[v][k];
    }
    const RawElement a = random_raw_with_dims(rules, dims[0], rng), a2 = random_raw_with_dims(rules, dims[0], rng);
    const RawElement b = random_raw_with_dims(rules, dims[1], rng), b2 = random_raw_with_dims(rules, dims[1], rng);
    const RawElement c = random_raw_with_dims(rules, dims[2], rng), c2 = random_raw_with_dims(rules, dims[2], rng);
    const Witness xi = random_witness(a, a2, rng);
    const Witness eta = random_witness(b, b2, rng);
    const Witness zeta = random_witness(c, c2, rng);
    const std::string inst = "A=" + detail::dims_string(dims[0]) + " B=" + detail::dims_string(dims[1]) +
                             " C=" + detail::dims_string(dims[2]);
    const Witness id0 = identity_witness(zero);
    const Witness id1 = identity_witness(one);

    auto run = [&](std::size_t n, auto&& lhs, auto&& rhs) {
      try {
        acc.equal(eqs[n].name, eqs[n].caption, lhs(), rhs(), inst);
      } catch (const std::exception& e) {
        acc.error(eqs[n].name, eqs[n].caption, e.what(), inst);
      }
    };
    run(0, [&] { return compose(alpha_plus(a, b, c), witness_add(xi, witness_add(eta, zeta))); },
        [&] { return compose(witness_add(witness_add(xi, eta), zeta), alpha_plus(a2, b2, c2)); });
    run(1, [&] { return compose(lambda_plus(a), xi); },
        [&] { return compose(witness_add(id0, xi), lambda_plus(a2)); });
    run(2, [&] { return compose(rho_plus(a), xi); },
        [&] { return compose(witness_add(xi, id0), rho_plus(a2)); });
    run(3, [&] { return compose(gamma_plus(a, b), witness_add(eta, xi)); },
        [&] { return compose(witness_add(xi, eta), gamma_plus(a2, b2)); });
    run(4, [&] { return compose(alpha_times(model, a, b, c), witness_mul(xi, witness_mul(eta, zeta))); },
        [&] { return compose(witness_mul(witness_mul(xi, eta), zeta), alpha_times(model, a2, b2, c2)); });
    run(5, [&] { return compose(lambda_times(a), xi); },
        [&] { return compose(witness_mul(id1, xi), lambda_times(a2)); });
    run(6, [&] { return compose(rho_times(a), xi); },
        [&] { return compose(witness_mul(xi, id1), rho_times(a2)); });
    run(7, [&] { return compose(gamma_times(model, a, b), witness_mul(eta, xi)); },
        [&] { return compose(witness_mul(xi, eta), gamma_times(model, a2, b2)); });
    run(8, [&] { return compose(delta(a, b, c), witness_add(witness_mul(xi, eta), witness_mul(xi, zeta))); },
        [&] { return compose(witness_mul(xi, witness_add(eta, zeta)), delta(a2, b2, c2)); });
    run(9, [&] { return epsilon(a); }, [&] { return compose(witness_mul(xi, id0), epsilon(a2)); });
  }
  acc.finish(rep, tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Rendering

inline nlohmann::json residual_json(double r) {
  if (std::isfinite(r)) return r;
  return nullptr;
}

inline nlohmann::json to_json(const DiagramReport& r) {
  nlohmann::json j{{"name", r.name},
                   {"caption", r.caption},
                   {"pass", r.pass},
                   {"residual", residual_json(r.residual)},
                   {"witness_count", r.witness_count},
                   {"instances", r.instances},
                   {"worst_instance", r.worst_instance}};
  j["failing_component"] = r.failing_component < 0 ? nlohmann::json(nullptr) : nlohmann::json(r.failing_component);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline nlohmann::json to_json(const SuiteReport& rep) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : rep.reports) list.push_back(to_json(r));
  return {{"suite", rep.suite},
          {"seed", rep.seed},
          {"samples", rep.samples},
          {"tol", rep.tol},
          {"pass", rep.all_pass()},
          {"passed", rep.pass_count()},
          {"total", rep.reports.size()},
          {"reports", std::move(list)}};
}

inline std::string to_text(const SuiteReport& rep) {
  std::ostringstream out;
  std::size_t width = 4;
  for (const auto& r : rep.reports) width = std::max(width, r.name.size());
  out << rep.suite << " (seed " << rep.seed << ", samples " << rep.samples << ", tol " << rep.tol << ")\n";
  out << std::left << std::setw(static_cast<int>(width)) << "name" << "  result  " << std::setw(12) << "residual"
      << "  instances\n";
  for (const auto& r : rep.reports) {
    std::ostringstream res;
    res << std::scientific << std::setprecision(3) << r.residual;
    out << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << (r.pass ? "pass  " : "FAIL  ") << "  "
        << std::setw(12) << res.str() << "  " << r.instances;
    if (!r.pass && !r.worst_instance.empty()) out << "  worst: " << r.worst_instance;
    if (!r.error.empty()) out << "  error: " << r.error;
    out << "\n";
  }
  out << rep.pass_count() << "/" << rep.reports.size() << " passed\n";
  return out.str();
}

}  // namespace fusionrig

#endif  // FUSIONRIG_COHERENCE_HPP
