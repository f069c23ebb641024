#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mtd/em.hpp"
#include "mtd/error.hpp"
#include "mtd/sampler.hpp"
#include "support.hpp"

namespace mtd {
namespace {

EmParams random_params(std::size_t k, std::size_t A, RandomSource& rng, bool independent = true) {
  auto simplex = [&](std::size_t size) {
    Distribution v(size);
    for (auto& x : v) x = 0.05 + rng.uniform();
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    for (auto& x : v) x /= total;
    return v;
  };
  EmParams p;
  p.lambdas = simplex(k + 1);
  if (!independent) {
    p.lambdas[0] = 0.0;
    const double total = std::accumulate(p.lambdas.begin(), p.lambdas.end(), 0.0);
    for (auto& x : p.lambdas) x /= total;
  }
  p.p0 = simplex(A);
  for (std::size_t i = 0; i < k; ++i) {
    StochasticMatrix m;
    for (std::size_t b = 0; b < A; ++b) m.push_back(simplex(A));
    p.pj.push_back(m);
  }
  return p;
}

void expect_simplex(const EmParams& p, double tol) {
  double total = 0.0;
  for (double w : p.lambdas) {
    EXPECT_GE(w, 0.0);
    total += w;
  }
  EXPECT_NEAR(total, 1.0, tol);
  if (p.lambdas[0] > 0.0) EXPECT_NEAR(std::accumulate(p.p0.begin(), p.p0.end(), 0.0), 1.0, tol);
  for (const auto& m : p.pj) {
    for (const auto& row : m) {
      for (double v : row) EXPECT_GE(v, 0.0);
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, tol);
    }
  }
}

TEST(LogLikelihood, UniformIndependentModel) {
  const auto s = testing::binary_sample({0, 1, 2, 2, 1, 0, 1}, 3);
  EmParams p;
  p.lambdas = {1.0, 0.0};
  p.p0 = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  p.pj = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  EXPECT_NEAR(mtd_log_likelihood(s, {2}, p), -5.0 * std::log(3.0), 1e-12);
}

TEST(LogLikelihood, HandComputedOrderOne) {
  const auto s = testing::binary_sample({0, 1, 1, 0, 1, 0, 0, 0, 1, 1});
  EmParams p;
  p.lambdas = {0.2, 0.8};
  p.p0 = {0.4, 0.6};
  p.pj = {{{0.7, 0.3}, {0.25, 0.75}}};
  EXPECT_NEAR(mtd_log_likelihood(s, {1}, p), -7.16046743342263, 1e-12);
}

TEST(LogLikelihood, ZeroProbabilityIsAnError) {
  const auto s = testing::binary_sample({0, 1, 0});
  EmParams p;
  p.lambdas = {0.0, 1.0};
  p.pj = {{{1.0, 0.0}, {1.0, 0.0}}};
  EXPECT_THROW(mtd_log_likelihood(s, {1}, p), Error);
}

TEST(EmFit, AscentAndSimplexOnRandomFixtures) {
  RandomSource rng(77);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t A = 2 + rep % 2;
    const LagSet S = rep % 3 ? LagSet{1, 3} : LagSet{2};
    auto model_rng = rng.derive(static_cast<std::uint64_t>(rep));
    const auto model = testing::random_model(S, A, model_rng, 0.2);
    const auto s = perfect_sample(model, 500, model_rng);
    const auto init = random_params(S.size(), A, model_rng, rep % 4 != 0);
    EmOptions o;
    o.min_increase.reset();
    o.max_iterations = 20;
    const auto r = em_fit(s, S, init, o);
    EXPECT_EQ(r.iterations, 20);
    ASSERT_EQ(r.distlogL.size(), 20u);
    for (double inc : r.distlogL) EXPECT_GE(inc, -1e-8);
    expect_simplex(r.params, 1e-10);
    EXPECT_GE(mtd_log_likelihood(s, S, r.params), mtd_log_likelihood(s, S, init) - 1e-8);
    if (init.lambdas[0] == 0.0) EXPECT_EQ(r.params.lambdas[0], 0.0);
  }
}

TEST(EmFit, StoppingRules) {
  const auto model = testing::published_model();
  RandomSource rng(5);
  const auto s = perfect_sample(model, 3000, rng);
  auto init_rng = rng.derive("init");
  const auto init = random_params(3, 2, init_rng);

  EmOptions by_m;  // defaults: M = 0.01, nIter = 100
  const auto stopped = em_fit(s, model.lags, init, by_m);
  ASSERT_GE(stopped.iterations, 1);
  ASSERT_EQ(stopped.distlogL.size(), static_cast<std::size_t>(stopped.iterations));
  if (stopped.iterations < 100) {
    EXPECT_LT(stopped.distlogL.back(), 0.01);
    for (std::size_t i = 0; i + 1 < stopped.distlogL.size(); ++i) EXPECT_GE(stopped.distlogL[i], 0.01);
  }

  EmOptions fixed;
  fixed.min_increase.reset();
  fixed.max_iterations = stopped.iterations;
  const auto replay = em_fit(s, model.lags, init, fixed);
  EXPECT_EQ(replay.iterations, stopped.iterations);
  EXPECT_EQ(replay.params.lambdas, stopped.params.lambdas);
  EXPECT_EQ(replay.params.p0, stopped.params.p0);
  EXPECT_EQ(replay.params.pj, stopped.params.pj);
  EXPECT_EQ(replay.distlogL, stopped.distlogL);

  EmOptions capped;
  capped.min_increase = -1.0;  // never satisfied
  capped.max_iterations = 3;
  EXPECT_EQ(em_fit(s, model.lags, init, capped).iterations, 3);
}

TEST(EmFit, FixedPointStopsAfterOneUpdate) {
  const auto model = testing::published_model();
  RandomSource rng(6);
  const auto s = perfect_sample(model, 2000, rng);
  EmParams init{{model.lambda0, 0.39, 0.30, 0.30}, model.p0, model.pj};
  EmOptions converge;
  converge.min_increase = 1e-13;
  converge.max_iterations = 5000;
  const auto fixed_point = em_fit(s, model.lags, init, converge).params;
  const auto again = em_fit(s, model.lags, fixed_point, {});
  EXPECT_EQ(again.iterations, 1);
  EXPECT_LT(again.distlogL[0], 0.01);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(again.params.lambdas[i], fixed_point.lambdas[i], 1e-6);
}

TEST(EmFit, RecoversWeightsOfPublishedModel) {
  const auto model = testing::published_model();
  RandomSource rng(10);
  const auto s = perfect_sample(model, 10000, rng);
  EmParams init;
  init.lambdas = {0.1, 0.3, 0.3, 0.3};
  init.p0 = {0.5, 0.5};
  init.pj.assign(3, {{0.6, 0.4}, {0.4, 0.6}});
  // Symmetric matrices are a saddle; nudge them apart.
  init.pj[0] = {{0.55, 0.45}, {0.3, 0.7}};
  init.pj[1] = {{0.45, 0.55}, {0.7, 0.3}};
  init.pj[2] = {{0.7, 0.3}, {0.35, 0.65}};
  EmOptions o;
  o.min_increase = 1e-4;
  o.max_iterations = 2000;
  o.want_oscillations = true;
  const auto r = em_fit(s, model.lags, init, o);
  const std::vector<double> truth{0.01, 0.39, 0.30, 0.30};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.params.lambdas[i], truth[i], 0.1);
  ASSERT_TRUE(r.oscillations.has_value());
  EXPECT_EQ(r.oscillations->size(), 3u);
}

TEST(EmFit, FloorRescuesZeroLikelihoodInit) {
  const auto s = testing::binary_sample({0, 1, 0, 1, 1, 0, 0, 1});
  EmParams init;
  init.lambdas = {0.0, 1.0};
  init.pj = {{{1.0, 0.0}, {1.0, 0.0}}};
  EXPECT_THROW(em_fit(s, {1}, init, {}), Error);
  EmOptions o;
  o.probability_floor = 1e-10;
  const auto r = em_fit(s, {1}, init, o);
  expect_simplex(r.params, 1e-10);
}

TEST(EmFit, RejectsInvalidInit) {
  const auto s = testing::binary_sample({0, 1, 0, 1, 1});
  EmParams init;
  init.lambdas = {0.5, 0.6};
  init.p0 = {0.5, 0.5};
  init.pj = {{{0.5, 0.5}, {0.5, 0.5}}};
  EXPECT_THROW(em_fit(s, {1}, init, {}), Error);
  init.lambdas = {0.5, 0.5};
  EXPECT_THROW(em_fit(s, {1, 2}, init, {}), Error);
}

}  // namespace
}  // namespace mtd
