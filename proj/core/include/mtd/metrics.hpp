#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mtd/empirics.hpp"
#include "mtd/random.hpp"

namespace mtd {

/// Binary confusion counts for one positive symbol and the derived rates.
/// Rates with a zero denominator are reported as 0.
struct ConfusionMetrics {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;    // PPV
  double sensitivity = 0.0;  // recall
  double specificity = 0.0;
  double f1 = 0.0;
};

ConfusionMetrics confusion_metrics(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn);

ConfusionMetrics classification_metrics(std::span<const Symbol> predicted, std::span<const Symbol> actual,
                                        Symbol positive);
ConfusionMetrics classification_metrics(const Sample& predicted, const Sample& actual, Symbol positive);

enum class PredictionRule {
  kArgmax,  // most probable symbol, smallest index on ties
  kSample,  // draw from the estimated conditional
};

/// One-step-ahead predictions for positions [begin, n) of `series` using the
/// conditionals of `table` at the table's lags. Requires begin >= max(S).
std::vector<Symbol> predict_next(const FreqTable& table, const Sample& series, std::size_t begin,
                                 PredictionRule rule, RandomSource* rng = nullptr);

/// Classical full Markov chain order chosen by BIC over orders 0..max_order,
/// all fitted on positions max_order+1..n. Penalty: |A|^k (|A|-1)/2 log(n).
int markov_order_bic(const Sample& sample, int max_order);

}  // namespace mtd
