#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mtd/alphabet.hpp"
#include "mtd/context.hpp"
#include "mtd/random.hpp"

namespace mtd {

using Distribution = std::vector<double>;
/// Row-stochastic matrix, matrix[b][a] = p(a | b).
using StochasticMatrix = std::vector<Distribution>;

/// Mixture transition distribution over a finite alphabet:
///   P(a | x) = lambda0 p0(a) + sum_i lambdas[i] pj[i](a | x_{lags[i]}).
/// `lambdas` and `pj` follow `lags` in ascending order (most recent lag first).
struct MtdModel {
  Alphabet alphabet;
  LagSet lags;
  double lambda0 = 0.0;
  std::vector<double> lambdas;
  Distribution p0;
  std::vector<StochasticMatrix> pj;

  /// Throws Error if any invariant is violated.
  void validate() const;
  int order() const { return lags.max(); }
};

/// Inputs to build_model. Absent blocks are sampled uniformly and normalized.
struct ModelSpec {
  Alphabet alphabet;
  LagSet lags;
  std::optional<double> lambda0;
  std::optional<std::vector<double>> lambdas;
  std::optional<Distribution> p0;
  /// One matrix per lag, or a single matrix when `single_matrix` is set.
  std::optional<std::vector<StochasticMatrix>> pj;
  bool single_matrix = false;
  bool indep_part = true;
};

inline constexpr double kInputSumTolerance = 1e-9;
/// Matrix rows are often typed at 7-8 printed digits.
inline constexpr double kInputRowTolerance = 1e-6;
inline constexpr double kStoredSumTolerance = 1e-12;

MtdModel build_model(const ModelSpec& spec, RandomSource& rng);

/// Full transition law over the model's lag set, one row per context.
class TransitionTable {
 public:
  TransitionTable(LagSet lags, std::size_t alphabet_size, std::vector<double> flat_rows);

  const LagSet& lag_set() const { return lags_; }
  const ContextCodec& codec() const { return codec_; }
  std::size_t alphabet_size() const { return codec_.alphabet_size(); }
  std::uint64_t row_count() const { return codec_.count(); }

  std::span<const double> row(ContextCode code) const;
  /// Row for a context given oldest lag first.
  std::span<const double> row(std::span<const Symbol> context) const {
    return row(codec_.encode(context));
  }

 private:
  LagSet lags_;
  ContextCodec codec_;
  std::vector<double> rows_;
};

inline constexpr std::uint64_t kDefaultRowBudget = std::uint64_t{1} << 22;

TransitionTable transition_table(const MtdModel& model,
                                 std::uint64_t row_budget = kDefaultRowBudget);

/// delta_j = lambda_j * max_{b,c} d_TV(p_j(.|b), p_j(.|c)), keyed by lag.
std::map<int, double> oscillation_exact(const MtdModel& model);

}  // namespace mtd
