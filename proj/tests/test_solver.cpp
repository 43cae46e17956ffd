#include <gtest/gtest.h>

#include <numbers>

#include "fusionrig/solver.hpp"

using namespace fusionrig;

namespace {

using Mat3 = Eigen::Matrix<Complex, 3, 3>;
using Mat2 = Eigen::Matrix<Complex, 2, 2>;

// The two pentagon displays, rows holding images. lhs is the two-edge path, rhs the
// three-edge path.
struct PentagonDisplays {
  Mat3 lhs3, rhs3;
  Mat2 lhs2, rhs2;
};

PentagonDisplays displays(const FibonacciSolution& x) {
  const Complex p = x.p, q = x.q, r = x.r, s = x.s, t = x.t;
  PentagonDisplays d;
  d.lhs3 << r * s, q, r * t, q, 0.0, r, s * t, s, t * t;
  d.rhs3 << p * p * q, p * r * s, p * r * t, p * r * s, q * q + r * s * t, q * r + r * t * t, p * s * t,
      q * s + s * t * t, r * s + t * t * t;
  d.lhs2 << 1.0, 0.0, 0.0, p * p;
  d.rhs2 << q * q + p * r * s, q * r + p * t * r, q * s + p * t * s, r * s + p * t * t;
  return d;
}

const char* kLong = "(alpha_times(A,B,C) x id(D)) * alpha_times(A,BxC,D) * (id(A) x alpha_times(B,C,D))";
const char* kShort = "alpha_times(AxB,C,D) * alpha_times(A,B,CxD)";

FibonacciSolution random_alpha(std::uint64_t seed) {
  Rng rng(seed);
  const DenseMatrix u = random_unitary(2, rng);
  FibonacciSolution x;
  x.p = random_unitary(1, rng)(0, 0);
  x.q = u(0, 0);
  x.r = u(1, 0);
  x.s = u(0, 1);
  x.t = u(1, 1);
  return x;
}

double fig5_residual(const RigModel& m) {
  const RawElement t = generator(m.rules_ptr(), 1);
  Bindings env{m.rules_ptr(), {{'A', t}, {'B', t}, {'C', t}, {'D', t}}, &m};
  return check_figure_instance(figure_template("Fig5-pentagon-x"), env, kDefaultTol).residual;
}

const SolveResult& fibonacci_search() {
  static const SolveResult res = [] {
    SolveOptions opt;
    opt.seed = 7;
    opt.restarts = 64;
    opt.tol = 1e-6;
    return numeric_solve(fibonacci_rules(), opt);
  }();
  return res;
}

}  // namespace

// The composed pentagon paths on (t,t,t,t) are the transposes of the two displays, for any
// unitary alpha, including non-solutions.
TEST(DisplayOracle, ComposedPathsAreTransposedDisplays) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const FibonacciSolution x = random_alpha(seed);
    const RigModel m = model_from_solution(x);
    const RawElement t = generator(m.rules_ptr(), 1);
    Bindings env{m.rules_ptr(), {{'A', t}, {'B', t}, {'C', t}, {'D', t}}, &m};
    const Witness lp = eval_witness(kLong, env);
    const Witness sp = eval_witness(kShort, env);
    const PentagonDisplays d = displays(x);
    EXPECT_LT((lp.dense(1) - DenseMatrix(d.rhs3.transpose())).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((sp.dense(1) - DenseMatrix(d.lhs3.transpose())).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((lp.dense(0) - DenseMatrix(d.rhs2.transpose())).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((sp.dense(0) - DenseMatrix(d.lhs2.transpose())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ClosedForm, ValuesAndAlgebra) {
  const FibonacciSolution s = fibonacci_closed_form_solution();
  EXPECT_NEAR(s.q.real(), 0.6180339887, 1e-10);
  EXPECT_NEAR(std::abs(s.q * s.q + s.q - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.t + s.q), 0.0, 1e-15);
  EXPECT_NEAR(s.r.real(), 0.7861513778, 1e-10);
  EXPECT_EQ(s.r, s.s);
  EXPECT_NEAR(std::abs(s.a - s.b * s.b), 0.0, 1e-15);
  EXPECT_NEAR(std::arg(s.b), 3.0 * std::numbers::pi / 5.0, 1e-15);
}

TEST(ClosedForm, ModelEntriesUnitaryAndSymmetric) {
  const RigModel m = fibonacci_closed_form();
  const DenseMatrix f = m.alpha_entry({1, 1, 1}).dense(1);
  EXPECT_LT((f * f.adjoint() - DenseMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((f - f.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  const FibonacciSolution back = solution_from_model(m);
  EXPECT_NEAR(std::abs(back.q - fibonacci_closed_form_solution().q), 0.0, 1e-15);
}

TEST(Residuals, ClosedFormAndThetaFamily) {
  EXPECT_LE(pentagon_residual_fib(fibonacci_closed_form_solution()), 1e-12);
  EXPECT_LE(hexagon_residual_fib(fibonacci_closed_form_solution()), 1e-12);
  for (double theta : {0.3, 1.0, 2.5, -1.7}) {
    EXPECT_LE(pentagon_residual_fib(fibonacci_closed_form_solution(theta)), 1e-12) << theta;
  }
  EXPECT_LE(hexagon_residual_fib(conjugate_braiding(fibonacci_closed_form_solution())), 1e-12);
}

TEST(Residuals, IdentityAlphaFailsPentagon) {
  FibonacciSolution x;
  x.q = 1.0;
  x.t = 1.0;
  EXPECT_GE(pentagon_residual_fib(x), 0.3);
}

TEST(Residuals, UnsquaredBraidingPhase) {
  FibonacciSolution x = fibonacci_closed_form_solution();
  x.a = x.b;
  const double expect = std::abs(x.b * x.b - x.b);
  EXPECT_NEAR(hexagon_residual_fib(x), expect, 1e-12);
  EXPECT_NEAR(expect, 2.0 * std::sin(3.0 * std::numbers::pi / 10.0), 1e-12);
}

TEST(Residuals, HexagonNeedsUnitP) {
  FibonacciSolution x = fibonacci_closed_form_solution();
  x.p = std::polar(1.0, 0.5);
  EXPECT_THROW(hexagon_residual_fib(x), std::invalid_argument);
}

TEST(Agreement, MatrixAndDiagramResidualsCoincideOnSolutionsAndPermutations) {
  std::vector<FibonacciSolution> cases;
  for (double theta : {0.0, 0.4, 2.0}) cases.push_back(fibonacci_closed_form_solution(theta));
  cases.push_back(conjugate_braiding(fibonacci_closed_form_solution()));
  for (auto c : {BijectionChoice::Identity, BijectionChoice::Switch}) {
    cases.push_back(solution_from_model(tag_manipulation_model(c)));
  }
  for (const auto& x : cases) {
    EXPECT_LE(std::abs(pentagon_residual_fib(x) - fig5_residual(model_from_solution(x))), 1e-9);
  }
}

TEST(Verify, ClosedFormAndConjugatePass) {
  const SuiteReport a = verify_model(fibonacci_closed_form());
  EXPECT_TRUE(a.all_pass()) << to_text(a);
  EXPECT_NE(a.find("pentagon-matrix-equations"), nullptr);
  EXPECT_TRUE(verify_model(model_from_solution(conjugate_braiding(fibonacci_closed_form_solution()))).all_pass());
}

TEST(Verify, WrongBraidingPhaseFailsHexagon) {
  FibonacciSolution x = fibonacci_closed_form_solution();
  x.b = std::polar(1.0, std::numbers::pi / 3.0);
  const SuiteReport rep = verify_model(model_from_solution(x));
  EXPECT_TRUE(rep.find("Fig5-pentagon-x")->pass);
  EXPECT_FALSE(rep.find("Fig6-hexagon-front")->pass);
  EXPECT_FALSE(rep.find("hexagon-matrix-equations")->pass);
  EXPECT_TRUE(rep.find("encodings-agree")->pass);
}

TEST(Verify, MissingEntriesRaise) {
  const RigModel m(make_rules(fibonacci_rules()), {}, {});
  EXPECT_THROW(verify_model(m), MissingBaseEntry);
}

TEST(Verify, NonFibonacciRulesUseCompositionOnly) {
  const SolveResult res = numeric_solve(z2_rules(), {});
  ASSERT_TRUE(res.success);
  const SuiteReport rep = verify_model(*res.model);
  EXPECT_EQ(rep.reports.size(), 3u);
  EXPECT_TRUE(rep.all_pass());
}

// Single-phase perturbations of the closed form break at least one of Figures 5-7.
TEST(NegativeControl, EveryPhasePerturbationIsDetected) {
  const FibonacciSolution base = fibonacci_closed_form_solution();
  const Complex kick = std::polar(1.0, 0.1);
  std::vector<RigModel> models;
  for (int which = 0; which < 3; ++which) {
    FibonacciSolution x = base;
    (which == 0 ? x.p : which == 1 ? x.a : x.b) *= kick;
    models.push_back(model_from_solution(x));
  }
  // 2x2 block: global phase, row phase, column phase.
  const DenseMatrix f = fibonacci_closed_form().alpha_entry({1, 1, 1}).dense(1);
  DenseMatrix d(2, 2), c(2, 2);
  d << kick, 0, 0, std::conj(kick);
  c << 1, 0, 0, kick;
  for (const DenseMatrix& g : {DenseMatrix(kick * f), DenseMatrix(d * f), DenseMatrix(f * c)}) {
    const RigModel m = fibonacci_closed_form();
    models.push_back(RigModel::from_matrices(m.rules_ptr(), {{{1, 1, 1}, {m.alpha_entry({1, 1, 1}).dense(0), g}}},
                                             {{{1, 1}, {m.gamma_entry({1, 1}).dense(0), m.gamma_entry({1, 1}).dense(1)}}}));
  }
  for (std::size_t n = 0; n < models.size(); ++n) {
    const SuiteReport rep = verify_model(models[n], 1e-3);
    const bool any_fail = !rep.find("Fig5-pentagon-x")->pass || !rep.find("Fig6-hexagon-front")->pass ||
                          !rep.find("Fig7-hexagon-behind")->pass;
    EXPECT_TRUE(any_fail) << "perturbation " << n;
  }
}

// Conjugating the 2x2 block by a diagonal phase is a gauge change and stays a solution.
TEST(NegativeControl, OffDiagonalGaugeDirectionIsNotAPerturbation) {
  const Complex kick = std::polar(1.0, 0.1);
  const RigModel m = fibonacci_closed_form();
  const DenseMatrix f = m.alpha_entry({1, 1, 1}).dense(1);
  DenseMatrix d(2, 2);
  d << kick, 0, 0, std::conj(kick);
  const RigModel g = RigModel::from_matrices(
      m.rules_ptr(), {{{1, 1, 1}, {m.alpha_entry({1, 1, 1}).dense(0), DenseMatrix(d * f * d.adjoint())}}},
      {{{1, 1}, {m.gamma_entry({1, 1}).dense(0), m.gamma_entry({1, 1}).dense(1)}}});
  EXPECT_TRUE(verify_model(g, 1e-9).all_pass());
}

TEST(Counterexample, IdentityChoiceSwapsFirstTwoForms) {
  const CounterexampleReport r = tag_manipulation_counterexample(BijectionChoice::Identity);
  EXPECT_EQ(r.forms, (std::vector<std::string>{"(((a,b)_1,c)_0,d)_1", "(((a,b)_0,c)_1,d)_1", "(((a,b)_1,c)_1,d)_1"}));
  EXPECT_EQ(r.long_path,
            (std::vector<std::string>{"(a,(b,(c,d)_1)_0)_1", "(a,(b,(c,d)_0)_1)_1", "(a,(b,(c,d)_1)_1)_1"}));
  EXPECT_EQ(r.short_path,
            (std::vector<std::string>{"(a,(b,(c,d)_0)_1)_1", "(a,(b,(c,d)_1)_0)_1", "(a,(b,(c,d)_1)_1)_1"}));
  EXPECT_EQ(r.mismatch, (std::vector<bool>{true, true, false}));
  EXPECT_GE(r.pentagon_residual, 0.5);
}

TEST(Counterexample, SwitchChoiceIsThreeCycle) {
  const CounterexampleReport r = tag_manipulation_counterexample(BijectionChoice::Switch);
  EXPECT_EQ(r.mismatch_count(), 3u);
  EXPECT_EQ(r.long_path,
            (std::vector<std::string>{"(a,(b,(c,d)_0)_1)_1", "(a,(b,(c,d)_1)_0)_1", "(a,(b,(c,d)_1)_1)_1"}));
  EXPECT_EQ(r.short_path,
            (std::vector<std::string>{"(a,(b,(c,d)_1)_0)_1", "(a,(b,(c,d)_1)_1)_1", "(a,(b,(c,d)_0)_1)_1"}));
  // short = long composed with the cycle 0 -> 1 -> 2 -> 0.
  for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(r.short_path[n], r.long_path[(n + 1) % 3]);
  EXPECT_GE(r.pentagon_residual, 0.5);
}

TEST(Search, CompiledObjectiveMatchesFullEvaluation) {
  for (const FusionRules& rules : {fibonacci_rules(), z2_rules()}) {
    const detail::SearchSpace space(make_rules(rules));
    const detail::CompiledObjective f(space);
    EXPECT_TRUE(f.compiled());
    std::vector<double> x(space.size(), 0.7);
    EXPECT_NEAR(f(x), detail::search_objective(space.model(x)), 1e-9);
  }
}

TEST(Search, FibonacciMatchesClosedFormUpToGauge) {
  const SolveResult& res = fibonacci_search();
  ASSERT_TRUE(res.success) << res.residual;
  EXPECT_LE(res.residual, 1e-6);
  EXPECT_TRUE(verify_model(*res.model, 1e-6).all_pass());
  const FibonacciSolution g = gauge_fix(solution_from_model(*res.model));
  EXPECT_NEAR(std::abs(g.q), 0.6180339887, 1e-4);
  EXPECT_NEAR(std::abs(g.r), 0.7861513778, 1e-4);
  EXPECT_NEAR(std::abs(g.r.imag()), 0.0, 1e-12);
  EXPECT_GE(g.r.real(), 0.0);
}

TEST(Search, Z2RulesSolved) {
  const SolveResult res = numeric_solve(z2_rules(), {});
  EXPECT_TRUE(res.success);
  EXPECT_LE(res.residual, 1e-6);
}

TEST(Search, DeterministicAcrossThreadCounts) {
  SolveOptions one, many;
  one.threads = 1;
  many.threads = 4;
  one.restarts = many.restarts = 6;
  const SolveResult a = numeric_solve(z2_rules(), one);
  const SolveResult b = numeric_solve(z2_rules(), many);
  EXPECT_EQ(a.restart, b.restart);
  EXPECT_EQ(a.parameters, b.parameters);
}

TEST(Search, UnsupportedRules) {
  EXPECT_THROW(numeric_solve(ising_rules(), {}), UnsupportedRules);
  FusionRules multi = unit_only_rules(1);
  multi.at(1, 1, 0) = 1;
  multi.at(1, 1, 1) = 2;
  EXPECT_THROW(numeric_solve(multi, {}), UnsupportedRules);
  FusionRules broken = fibonacci_rules();
  broken.at(1, 0, 1) = 0;
  EXPECT_THROW(numeric_solve(broken, {}), UnsupportedRules);
}
