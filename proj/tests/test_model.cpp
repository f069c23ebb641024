#include <gtest/gtest.h>

#include <cmath>

#include "mtd/error.hpp"
#include "mtd/model.hpp"
#include "support.hpp"

namespace mtd {
namespace {

using testing::published_model;
using testing::random_model;

// Printed P entries carry 5e-8 of rounding. The printed matrices are rounded
// too, which adds up to 0.39*5e-9 + 2*0.3*5e-8 when they are typed back in.
constexpr double kPrinted = 5e-8 + 1e-15;
constexpr double kPrintedInputs = 8.2e-8;

TEST(PublishedModel, TransitionTableMatchesPrintout) {
  const auto table = transition_table(published_model());
  const double p0[8] = {0.5208503, 0.3974855, 0.6226020, 0.4992372,
                        0.3361516, 0.2127868, 0.4379033, 0.3145385};
  ASSERT_EQ(table.row_count(), 8u);
  for (ContextCode code = 0; code < 8; ++code) {
    EXPECT_NEAR(table.row(code)[0], p0[code], kPrintedInputs) << "row " << code;
    EXPECT_NEAR(table.row(code)[1], 1.0 - p0[code], kPrintedInputs) << "row " << code;
    // Rows 010 and 011 are the ones that exceed the output rounding alone.
    if (code != 2 && code != 3) EXPECT_NEAR(table.row(code)[0], p0[code], kPrinted) << "row " << code;
  }
  // (x-30, x-15, x-1) = (1, 1, 0).
  const std::vector<Symbol> ctx{1, 1, 0};
  EXPECT_NEAR(table.row(ctx)[0], 0.4379033, kPrinted);
}

TEST(PublishedModel, OscillationsMatchPrintout) {
  const auto osc = oscillation_exact(published_model());
  EXPECT_NEAR(osc.at(1), 0.1233648, kPrinted);
  EXPECT_NEAR(osc.at(15), 0.1017517, kPrinted);
  EXPECT_NEAR(osc.at(30), 0.1846987, kPrinted);
}

TEST(PublishedModel, WeightsStoredWithoutRenormalization) {
  const auto m = published_model();
  EXPECT_EQ(m.lambda0, 0.01);
  EXPECT_EQ(m.lambdas, (std::vector<double>{0.39, 0.30, 0.30}));
  EXPECT_EQ(m.p0, (Distribution{0.5, 0.5}));
}

TEST(BuildModel, SamplesMissingBlocksDeterministically) {
  ModelSpec spec;
  spec.alphabet = Alphabet::numbered(3);
  spec.lags = {1, 4};
  RandomSource a(9), b(9);
  const auto m1 = build_model(spec, a);
  const auto m2 = build_model(spec, b);
  EXPECT_EQ(m1.lambdas, m2.lambdas);
  EXPECT_EQ(m1.pj, m2.pj);
  EXPECT_NO_THROW(m1.validate());
}

TEST(BuildModel, NoIndependentPartForcesLambda0ToZero) {
  ModelSpec spec;
  spec.alphabet = Alphabet::numbered(2);
  spec.lags = {1, 2};
  spec.lambda0 = 0.2;
  spec.indep_part = false;
  RandomSource rng(1);
  const auto m = build_model(spec, rng);
  EXPECT_EQ(m.lambda0, 0.0);
  EXPECT_NEAR(m.lambdas[0] + m.lambdas[1], 1.0, 1e-12);
}

TEST(BuildModel, SingleMatrixIsReplicated) {
  ModelSpec spec;
  spec.alphabet = Alphabet::numbered(2);
  spec.lags = {1, 3, 5};
  spec.single_matrix = true;
  spec.pj = std::vector<StochasticMatrix>{{{0.1, 0.9}, {0.6, 0.4}}};
  RandomSource rng(2);
  const auto m = build_model(spec, rng);
  ASSERT_EQ(m.pj.size(), 3u);
  EXPECT_EQ(m.pj[0], m.pj[1]);
  EXPECT_EQ(m.pj[1], m.pj[2]);
}

TEST(BuildModel, RejectsBadInput) {
  ModelSpec spec;
  spec.alphabet = Alphabet::numbered(2);
  spec.lags = {1};
  RandomSource rng(0);
  spec.lambda0 = 0.5;
  spec.lambdas = std::vector<double>{0.6};
  EXPECT_THROW(build_model(spec, rng), Error);  // weights sum to 1.1
  spec.lambdas = std::vector<double>{0.5};
  spec.pj = std::vector<StochasticMatrix>{{{0.5, 0.5}}};
  EXPECT_THROW(build_model(spec, rng), Error);  // wrong shape
  spec.pj = std::vector<StochasticMatrix>{{{-0.1, 1.1}, {0.5, 0.5}}};
  EXPECT_THROW(build_model(spec, rng), Error);
  spec.pj = std::vector<StochasticMatrix>{{{0.5, 0.6}, {0.5, 0.5}}};
  EXPECT_THROW(build_model(spec, rng), Error);
}

TEST(BuildModel, InputWeightsWithinToleranceAreRenormalized) {
  ModelSpec spec;
  spec.alphabet = Alphabet::numbered(2);
  spec.lags = {1};
  spec.lambda0 = 0.3;
  spec.lambdas = std::vector<double>{0.7 + 5e-10};
  RandomSource rng(0);
  const auto m = build_model(spec, rng);
  EXPECT_NEAR(m.lambda0 + m.lambdas[0], 1.0, 1e-15);
}

TEST(TransitionTable, IndependentModelRowsEqualP0) {
  ModelSpec spec;
  spec.alphabet = Alphabet::numbered(3);
  spec.lags = {1, 2};
  spec.lambda0 = 1.0;
  spec.lambdas = std::vector<double>{0.0, 0.0};
  spec.p0 = Distribution{0.2, 0.3, 0.5};
  RandomSource rng(4);
  const auto table = transition_table(build_model(spec, rng));
  for (ContextCode c = 0; c < table.row_count(); ++c) {
    EXPECT_NEAR(table.row(c)[0], 0.2, 1e-15);
    EXPECT_NEAR(table.row(c)[2], 0.5, 1e-15);
  }
}

TEST(TransitionTable, RowsSumToOneForRandomModels) {
  RandomSource rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t A = 2 + rep % 3;
    const auto model = random_model(LagSet{1, 2 + rep % 4, 7}, A, rng);
    const auto table = transition_table(model);
    for (ContextCode c = 0; c < table.row_count(); ++c) {
      double total = 0.0;
      for (double p : table.row(c)) total += p;
      ASSERT_NEAR(total, 1.0, 1e-10);
    }
  }
}

TEST(TransitionTable, RowBudgetGuard) {
  RandomSource rng(1);
  const auto model = random_model(LagSet::range(12), 2, rng);
  EXPECT_THROW(transition_table(model, 1000), BudgetExceeded);
}

// Definition by brute force: the largest d_TV between rows of the table
// whose contexts differ only at lag j.
double oscillation_by_definition(const MtdModel& model, int lag) {
  const auto table = transition_table(model);
  const auto& codec = table.codec();
  // Codec digits run oldest lag first.
  const std::size_t pos = model.lags.size() - 1 - model.lags.position(lag);
  double best = 0.0;
  for (ContextCode x = 0; x < codec.count(); ++x) {
    for (ContextCode y = 0; y < codec.count(); ++y) {
      if (codec.drop_digit(x, pos) != codec.drop_digit(y, pos)) continue;
      best = std::max(best, tv_distance(table.row(x), table.row(y)));
    }
  }
  return best;
}

TEST(Oscillation, FactorizedFormEqualsDefinition) {
  RandomSource rng(23);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t A = 2 + rep % 2;
    const LagSet lags = rep % 2 ? LagSet{1, 3, 6} : LagSet{2, 5};
    const auto model = random_model(lags, A, rng);
    const auto osc = oscillation_exact(model);
    for (int j : lags) {
      EXPECT_NEAR(osc.at(j), oscillation_by_definition(model, j), 1e-10);
      EXPECT_GE(osc.at(j), 0.0);
      EXPECT_LE(osc.at(j), model.lambdas[lags.position(j)] + 1e-15);
    }
  }
}

TEST(Oscillation, IdenticalRowsGiveZero) {
  ModelSpec spec;
  spec.alphabet = Alphabet::numbered(2);
  spec.lags = {1, 2};
  spec.lambda0 = 0.2;
  spec.lambdas = std::vector<double>{0.4, 0.4};
  spec.p0 = Distribution{0.5, 0.5};
  spec.pj = std::vector<StochasticMatrix>{{{0.3, 0.7}, {0.3, 0.7}}, {{0.1, 0.9}, {0.8, 0.2}}};
  RandomSource rng(0);
  const auto osc = oscillation_exact(build_model(spec, rng));
  EXPECT_EQ(osc.at(1), 0.0);
  EXPECT_NEAR(osc.at(2), 0.4 * 0.7, 1e-15);
}

}  // namespace
}  // namespace mtd
