// Acceptance run: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "fusionrig/solver.hpp"

using namespace fusionrig;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int n, const char* title, double budget_s, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0 && secs > budget_s) {
    v.pass = false;
    v.detail += " (over time budget)";
  }
  if (!v.pass) ++failures;
  std::printf("[%s] criterion %d: %s (%.2f s) %s\n", v.pass ? "PASS" : "FAIL", n, title, secs, v.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double fig5_on_generators(const RigModel& m) {
  const RawElement t = generator(m.rules_ptr(), 1);
  Bindings env{m.rules_ptr(), {{'A', t}, {'B', t}, {'C', t}, {'D', t}}, &m};
  return check_figure_instance(figure_template("Fig5-pentagon-x"), env, kDefaultTol).residual;
}

bool figures_5_to_7_detect(const RigModel& m) {
  const SuiteReport rep = verify_model(m, 1e-3);
  return !rep.find("Fig5-pentagon-x")->pass || !rep.find("Fig6-hexagon-front")->pass ||
         !rep.find("Fig7-hexagon-behind")->pass;
}

RigModel with_alpha_block(const DenseMatrix& g) {
  const RigModel m = fibonacci_closed_form();
  return RigModel::from_matrices(m.rules_ptr(), {{{1, 1, 1}, {m.alpha_entry({1, 1, 1}).dense(0), g}}},
                                 {{{1, 1}, {m.gamma_entry({1, 1}).dense(0), m.gamma_entry({1, 1}).dense(1)}}});
}

bool has_violation(const ValidationReport& rep, const std::string& law, const std::vector<int>& idx) {
  for (const auto& v : rep.violations)
    if (v.law == law && v.indices == idx) return true;
  return false;
}

}  // namespace

int main() {
  const double phi_inv = (std::sqrt(5.0) - 1.0) / 2.0;

  criterion(1, "Fibonacci F-matrix closed form and pentagon residual", 1.0, [&] {
    const FibonacciSolution x = fibonacci_closed_form_solution();
    const double res = pentagon_residual_fib(x);
    const bool values = std::abs(x.p - 1.0) < 1e-12 && std::abs(x.q - phi_inv) < 1e-12 &&
                        std::abs(x.t + phi_inv) < 1e-12 && std::abs(x.r - std::sqrt(phi_inv)) < 1e-12 &&
                        std::abs(x.s - std::sqrt(phi_inv)) < 1e-12;
    return Verdict{values && res <= 1e-12, "q=" + fmt("%.12f", x.q.real()) + " residual=" + fmt("%.2e", res)};
  });

  criterion(2, "Fibonacci braiding and conjugate pair", 1.0, [&] {
    const FibonacciSolution x = fibonacci_closed_form_solution();
    const Complex b = std::polar(1.0, 3.0 * std::numbers::pi / 5.0);
    const Complex a = std::polar(1.0, 6.0 * std::numbers::pi / 5.0);
    const double h = hexagon_residual_fib(x);
    const double hc = hexagon_residual_fib(conjugate_braiding(x));
    const bool ok = std::abs(x.b - b) < 1e-12 && std::abs(x.a - a) < 1e-12 && h <= 1e-12 && hc <= 1e-12;
    return Verdict{ok, "hexagon=" + fmt("%.2e", h) + " conjugate=" + fmt("%.2e", hc)};
  });

  criterion(3, "Figure 5 composition agrees with matrix pentagon residual", 0, [&] {
    std::vector<FibonacciSolution> cases{fibonacci_closed_form_solution(), fibonacci_closed_form_solution(0.7),
                                         conjugate_braiding(fibonacci_closed_form_solution())};
    for (auto c : {BijectionChoice::Identity, BijectionChoice::Switch})
      cases.push_back(solution_from_model(tag_manipulation_model(c)));
    double worst = 0.0;
    for (const auto& x : cases)
      worst = std::max(worst, std::abs(pentagon_residual_fib(x) - fig5_on_generators(model_from_solution(x))));
    return Verdict{worst <= 1e-9, "max disagreement=" + fmt("%.2e", worst)};
  });

  criterion(4, "tag-bijection counterexample", 0, [&] {
    const CounterexampleReport id = tag_manipulation_counterexample(BijectionChoice::Identity);
    const CounterexampleReport sw = tag_manipulation_counterexample(BijectionChoice::Switch);
    const std::vector<std::string> long_id{"(a,(b,(c,d)_1)_0)_1", "(a,(b,(c,d)_0)_1)_1", "(a,(b,(c,d)_1)_1)_1"};
    const std::vector<std::string> short_id{"(a,(b,(c,d)_0)_1)_1", "(a,(b,(c,d)_1)_0)_1", "(a,(b,(c,d)_1)_1)_1"};
    bool ok = id.long_path == long_id && id.short_path == short_id &&
              id.mismatch == std::vector<bool>{true, true, false} && sw.mismatch_count() == 3;
    // Switch: the short path is the long path shifted by one place, a 3-cycle.
    for (std::size_t n = 0; n < 3; ++n) ok = ok && sw.short_path[n] == sw.long_path[(n + 1) % 3];
    ok = ok && id.pentagon_residual >= 0.5 && sw.pentagon_residual >= 0.5;
    return Verdict{ok, "residuals " + fmt("%.3g", id.pentagon_residual) + ", " + fmt("%.3g", sw.pentagon_residual)};
  });

  criterion(5, "coherence suite, 20 diagrams on the closed form", 60.0, [&] {
    SuiteOptions opt;
    opt.samples = 50;
    opt.seed = 42;
    opt.tol = 1e-9;
    opt.max_dim = 3;
    const SuiteReport rep = coherence_suite(fibonacci_closed_form(), opt);
    double worst = 0.0;
    for (const auto& r : rep.reports) worst = std::max(worst, r.residual);
    return Verdict{rep.reports.size() == 20 && rep.all_pass(),
                   std::to_string(rep.pass_count()) + "/" + std::to_string(rep.reports.size()) +
                       " max residual=" + fmt("%.2e", worst)};
  });

  criterion(6, "frame-law suite", 0, [&] {
    const SuiteReport rep = frame_law_suite(50, 42, 1e-9);
    return Verdict{rep.all_pass(), std::to_string(rep.pass_count()) + "/" + std::to_string(rep.reports.size())};
  });

  criterion(7, "naturality suite, ten equations", 0, [&] {
    const SuiteReport rep = naturality_suite(fibonacci_closed_form(), 50, 42, 1e-9);
    return Verdict{rep.reports.size() == 10 && rep.all_pass(),
                   std::to_string(rep.pass_count()) + "/" + std::to_string(rep.reports.size())};
  });

  criterion(8, "dimension oracle for tau^n, n <= 10", 0, [&] {
    const RulesPtr r = make_rules(fibonacci_rules());
    const RawElement t = generator(r, 1);
    RawElement power = t;
    std::vector<std::size_t> folded{0, 1};
    bool ok = power.dims() == folded;
    for (int n = 2; n <= 10; ++n) {
      const std::vector<std::size_t> prev = power.dims();
      power = raw_mul(power, t);
      folded = fused_dims(*r, folded, std::vector<std::size_t>{0, 1});
      ok = ok && power.dims() == folded && power.dims()[1] == prev[1] + prev[0] && power.dims()[0] == prev[1];
    }
    return Verdict{ok, "tau^10 dims=(" + std::to_string(power.dims()[0]) + "," + std::to_string(power.dims()[1]) + ")"};
  });

  criterion(9, "numeric solver on Fibonacci and Z2 rules", 120.0, [&] {
    SolveOptions opt;
    opt.seed = 7;
    opt.restarts = 64;
    opt.tol = 1e-6;
    const SolveResult fib = numeric_solve(fibonacci_rules(), opt);
    if (!fib.success) return Verdict{false, "Fibonacci search failed, residual=" + fmt("%.2e", fib.residual)};
    const double vres = verify_model(*fib.model, 1e-6).all_pass() ? fib.residual : 1.0;
    const FibonacciSolution g = gauge_fix(solution_from_model(*fib.model));
    const SolveResult z2 = numeric_solve(z2_rules(), opt);
    const bool ok = vres <= 1e-6 && std::abs(std::abs(g.q) - 0.6180339887) <= 1e-4 && z2.success && z2.residual <= 1e-6;
    return Verdict{ok, "q_found=" + fmt("%.10f", std::abs(g.q)) + " residual=" + fmt("%.2e", fib.residual) +
                           " restart=" + std::to_string(fib.restart) + " z2 residual=" + fmt("%.2e", z2.residual)};
  });

  criterion(10, "negative controls", 0, [&] {
    const FibonacciSolution base = fibonacci_closed_form_solution();
    const Complex kick = std::polar(1.0, 0.1);
    std::vector<RigModel> models;
    for (int which = 0; which < 3; ++which) {
      FibonacciSolution x = base;
      (which == 0 ? x.p : which == 1 ? x.a : x.b) *= kick;
      models.push_back(model_from_solution(x));
    }
    const DenseMatrix f = fibonacci_closed_form().alpha_entry({1, 1, 1}).dense(1);
    DenseMatrix d(2, 2), c(2, 2);
    d << kick, 0, 0, std::conj(kick);
    c << 1, 0, 0, kick;
    for (const DenseMatrix& g : {DenseMatrix(kick * f), DenseMatrix(d * f), DenseMatrix(f * c)})
      models.push_back(with_alpha_block(g));
    std::size_t detected = 0;
    for (const auto& m : models) detected += figures_5_to_7_detect(m) ? 1 : 0;

    FusionRules ising = ising_rules();
    ising.at(1, 2, 1) = 0;
    const bool comm = has_violation(validate_rules(ising), "commutativity", {1, 2, 1});
    FusionRules fib = fibonacci_rules();
    fib.at(0, 1, 0) = 1;
    const bool unit = has_violation(validate_rules(fib), "unit", {0, 1, 0});
    const bool ok = detected == models.size() && comm && unit;
    return Verdict{ok, std::to_string(detected) + "/" + std::to_string(models.size()) +
                           " perturbations detected, commutativity " + (comm ? "found" : "missed") +
                           ", unit " + (unit ? "found" : "missed")};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
