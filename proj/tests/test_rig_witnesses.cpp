#include <gtest/gtest.h>

#include <numbers>

#include "fusionrig/random.hpp"
#include "fusionrig/rig_witnesses.hpp"

using namespace fusionrig;

namespace {

RulesPtr fib() { return make_rules(fibonacci_rules()); }

DenseMatrix scalar(Complex z) {
  DenseMatrix m(1, 1);
  m(0, 0) = z;
  return m;
}

RigModel fib_model(Rng& rng) {
  return RigModel::from_matrices(fib(), {{{1, 1, 1}, {random_unitary(1, rng), random_unitary(2, rng)}}},
                                 {{{1, 1}, {random_unitary(1, rng), random_unitary(1, rng)}}});
}

BasisLabel image(const Witness& w, int k, const BasisLabel& l) {
  const Vector y = apply(w, Vector{k, {{l, 1.0}}});
  EXPECT_EQ(y.terms.size(), 1u);
  return y.terms.front().first;
}

}  // namespace

// Generator-level oracle: on generator arguments the derived witnesses are the base entries.
TEST(DerivedOracle, AlphaAndGammaOnGeneratorsAreBaseEntries) {
  Rng rng(1);
  const RigModel m = fib_model(rng);
  const RawElement t = generator(m.rules_ptr(), 1);
  EXPECT_LT(matrix_distance(alpha_times(m, t, t, t), m.alpha_entry({1, 1, 1})), 1e-15);
  EXPECT_LT(matrix_distance(gamma_times(m, t, t), m.gamma_entry({1, 1})), 1e-15);
}

// Sum-splitting oracle: alpha_{A,B,C+D} must equal delta-conjugated alpha_{A,B,C} + alpha_{A,B,D}.
TEST(DerivedOracle, AlphaSplitsOverThirdSlotSum) {
  Rng rng(2);
  const RigModel m = fib_model(rng);
  const RawElement t = generator(m.rules_ptr(), 1);
  const RawElement s = raw_add(t, t);
  const Witness lhs = alpha_times(m, t, t, s);
  const Witness rhs = compose_all({delta(raw_mul(t, t), t, t), witness_add(alpha_times(m, t, t, t), alpha_times(m, t, t, t)),
                                   invert(delta(t, raw_mul(t, t), raw_mul(t, t))),
                                   invert(witness_mul(identity_witness(t), delta(t, t, t)))});
  EXPECT_LT(matrix_distance(lhs, rhs), 1e-12);
}

TEST(DerivedOracle, GammaSplitsOverFirstSlotSum) {
  Rng rng(3);
  const RigModel m = fib_model(rng);
  const RawElement t = generator(m.rules_ptr(), 1);
  const RawElement s = raw_add(t, t);
  const Witness lhs = gamma_times(m, s, t);
  const Witness rhs = compose_all({delta_sharp(t, t, t), witness_add(gamma_times(m, t, t), gamma_times(m, t, t)),
                                   invert(delta(t, t, t))});
  EXPECT_LT(matrix_distance(lhs, rhs), 1e-12);
}

TEST(TagWitnesses, AlphaPlusMovesBrackets) {
  const auto r = fib();
  const RawElement t = generator(r, 1);
  const Witness w = alpha_plus(t, t, t);
  EXPECT_TRUE(is_basic(w));
  const BasisLabel x = BasisLabel::leaf(1);
  EXPECT_EQ(image(w, 1, BasisLabel::sum(BasisLabel::sum(x, 1), 0)), BasisLabel::sum(BasisLabel::sum(x, 0), 1));
  EXPECT_EQ(image(w, 1, BasisLabel::sum(x, 1)), BasisLabel::sum(BasisLabel::sum(x, 1), 1));
}

TEST(TagWitnesses, GammaPlusIsInvolutive) {
  const auto r = fib();
  Rng rng(4);
  const RawElement a = random_raw_with_dims(r, {1, 2}, rng);
  const RawElement b = random_raw_with_dims(r, {2, 1}, rng);
  EXPECT_TRUE(witness_equal(compose(gamma_plus(a, b), gamma_plus(b, a)), identity_witness(raw_add(a, b))));
}

TEST(TagWitnesses, UnitsStripTags) {
  const auto r = fib();
  Rng rng(5);
  const RawElement a = random_raw_with_dims(r, {1, 2}, rng);
  for (const Witness& w : {lambda_plus(a), rho_plus(a), lambda_times(a), rho_times(a)}) {
    EXPECT_TRUE(is_basic(w));
    EXPECT_EQ(w.codomain(), a);
    EXPECT_EQ(distance_from_identity(w), 0.0);
  }
}

TEST(TagWitnesses, DistributivityEndpoints) {
  const auto r = fib();
  const RawElement t = generator(r, 1), one = raw_one(r);
  const Witness d = delta(t, one, t);
  EXPECT_EQ(d.domain(), raw_mul(t, raw_add(one, t)));
  EXPECT_EQ(d.codomain(), raw_add(raw_mul(t, one), raw_mul(t, t)));
  const Witness ds = delta_sharp(t, one, t);
  EXPECT_EQ(ds.domain(), raw_mul(raw_add(one, t), t));
  EXPECT_EQ(ds.codomain(), raw_add(raw_mul(one, t), raw_mul(t, t)));
  EXPECT_TRUE(is_basic(d));
  EXPECT_TRUE(is_basic(ds));
}

TEST(TagWitnesses, EpsilonIsEmpty) {
  const auto r = fib();
  const Witness e = epsilon(raw_add(generator(r, 1), generator(r, 0)));
  EXPECT_EQ(e.domain().total_dim(), 0u);
  EXPECT_EQ(e.codomain(), raw_zero(r));
}

TEST(RigModel, RejectsBadEntries) {
  const auto r = fib();
  Rng rng(6);
  const DenseMatrix u1 = random_unitary(1, rng), u2 = random_unitary(2, rng);
  EXPECT_THROW(RigModel::from_matrices(r, {{{1, 1, 2}, {u1, u2}}}, {}), std::logic_error);
  EXPECT_THROW(RigModel::from_matrices(r, {{{1, 1, 1}, {u1, 2.0 * u2}}}, {}), std::invalid_argument);
  EXPECT_THROW(RigModel::from_matrices(r, {{{1, 1, 1}, {u1, u1}}}, {}), std::invalid_argument);
}

TEST(RigModel, MissingEntryIsReported) {
  const auto r = fib();
  const RigModel m(r, {}, {});
  const RawElement t = generator(r, 1);
  EXPECT_THROW(alpha_times(m, t, t, t), MissingBaseEntry);
  EXPECT_THROW(gamma_times(m, t, t), MissingBaseEntry);
  // Unit arguments never consult the table.
  EXPECT_NO_THROW(alpha_times(m, raw_one(r), t, t));
  EXPECT_NO_THROW(gamma_times(m, raw_one(r), t));
}

TEST(RigModel, UnitArgumentsGiveBasicWitnesses) {
  Rng rng(7);
  const RigModel m = fib_model(rng);
  const RawElement t = generator(m.rules_ptr(), 1), one = raw_one(m.rules_ptr());
  EXPECT_TRUE(is_basic(alpha_times(m, one, t, t)));
  EXPECT_TRUE(is_basic(alpha_times(m, t, one, t)));
  EXPECT_TRUE(is_basic(alpha_times(m, t, t, one)));
  EXPECT_TRUE(is_basic(gamma_times(m, t, one)));
}

TEST(RigModel, DerivedWitnessesAreUnitaryWithCorrectEndpoints) {
  Rng rng(8);
  const RigModel m = fib_model(rng);
  for (int trial = 0; trial < 5; ++trial) {
    const RawElement a = random_raw_element(m.rules_ptr(), 2, rng);
    const RawElement b = random_raw_element(m.rules_ptr(), 2, rng);
    const RawElement c = random_raw_element(m.rules_ptr(), 2, rng);
    const Witness al = alpha_times(m, a, b, c);
    EXPECT_EQ(al.domain(), raw_mul(raw_mul(a, b), c));
    EXPECT_EQ(al.codomain(), raw_mul(a, raw_mul(b, c)));
    EXPECT_TRUE(is_unitary(al, 1e-12));
    const Witness ga = gamma_times(m, a, b);
    EXPECT_EQ(ga.codomain(), raw_mul(b, a));
    EXPECT_TRUE(is_unitary(ga, 1e-12));
  }
}

TEST(RigModel, DoubleBraidingOfTauSquaresPhases) {
  const Complex b = std::polar(1.0, 3.0 * std::numbers::pi / 5.0);
  const RigModel m = RigModel::from_matrices(fib(), {}, {{{1, 1}, {scalar(b * b), scalar(b)}}});
  const RawElement t = generator(m.rules_ptr(), 1);
  const Witness w = beta(m, t, t);
  EXPECT_NEAR(std::abs(w.dense(0)(0, 0) - b * b * b * b), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(w.dense(1)(0, 0) - b * b), 0.0, 1e-14);
}

TEST(RigModel, CacheIsReused) {
  Rng rng(9);
  const RigModel m = fib_model(rng);
  const RawElement t = generator(m.rules_ptr(), 1);
  const RawElement s = raw_add(t, raw_mul(t, t));
  const Witness first = alpha_times(m, s, t, s);
  const std::size_t size = m.cache().size();
  EXPECT_GT(size, 0u);
  const Witness second = alpha_times(m, s, t, s);
  EXPECT_EQ(m.cache().size(), size);
  EXPECT_EQ(matrix_distance(first, second), 0.0);
}

TEST(RigModel, ForeignRulesRejected) {
  Rng rng(10);
  const RigModel m = fib_model(rng);
  const RawElement t = generator(m.rules_ptr(), 1);
  const RawElement other = generator(make_rules(z2_rules()), 1);
  EXPECT_THROW(gamma_times(m, t, other), RulesMismatch);
}
