#include "mtd/metrics.hpp"

#include <cmath>
#include <string>

#include "mtd/error.hpp"

namespace mtd {
namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ConfusionMetrics confusion_metrics(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
  ConfusionMetrics m{tp, tn, fp, fn};
  const auto TP = static_cast<double>(tp);
  const auto TN = static_cast<double>(tn);
  const auto FP = static_cast<double>(fp);
  const auto FN = static_cast<double>(fn);
  m.accuracy = ratio(TP + TN, TP + TN + FP + FN);
  m.precision = ratio(TP, TP + FP);
  m.sensitivity = ratio(TP, TP + FN);
  m.specificity = ratio(TN, TN + FP);
  // 2 PPV Recall / (PPV + Recall) reduced to counts, so the division rounds once.
  m.f1 = ratio(2.0 * TP, 2.0 * TP + FP + FN);
  return m;
}

ConfusionMetrics classification_metrics(std::span<const Symbol> predicted, std::span<const Symbol> actual,
                                        Symbol positive) {
  if (predicted.size() != actual.size()) {
    throw Error("predicted and actual lengths differ (" + std::to_string(predicted.size()) + " vs " +
                std::to_string(actual.size()) + ")");
  }
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == positive;
    const bool a = actual[i] == positive;
    if (p && a) ++tp;
    else if (!p && !a) ++tn;
    else if (p) ++fp;
    else ++fn;
  }
  return confusion_metrics(tp, tn, fp, fn);
}

ConfusionMetrics classification_metrics(const Sample& predicted, const Sample& actual, Symbol positive) {
  return classification_metrics(std::span<const Symbol>(predicted.values),
                                std::span<const Symbol>(actual.values), positive);
}

std::vector<Symbol> predict_next(const FreqTable& table, const Sample& series, std::size_t begin,
                                 PredictionRule rule, RandomSource* rng) {
  const auto& lags = table.lag_set();
  if (begin < static_cast<std::size_t>(lags.max())) {
    throw Error("prediction start must leave max(S) symbols of history");
  }
  if (rule == PredictionRule::kSample && rng == nullptr) throw Error("sampling rule needs a random source");
  const std::size_t k = lags.size();
  std::vector<Symbol> digits(k);
  std::vector<Symbol> out;
  for (std::size_t t = begin; t < series.size(); ++t) {
    for (std::size_t pos = 0; pos < k; ++pos) {
      digits[pos] = series[t - static_cast<std::size_t>(lags[k - 1 - pos])];
    }
    const auto row = table.conditional(table.codec().encode(digits));
    if (rule == PredictionRule::kArgmax) {
      Symbol best = 0;
      for (Symbol a = 1; a < row.size(); ++a) {
        if (row[a] > row[best]) best = a;
      }
      out.push_back(best);
    } else {
      out.push_back(static_cast<Symbol>(rng->categorical(row)));
    }
  }
  return out;
}

int markov_order_bic(const Sample& sample, int max_order) {
  if (max_order < 0) throw Error("max_order must be non-negative");
  if (static_cast<std::size_t>(max_order) + 1 >= sample.size()) throw Error("sample too short for max_order");
  const double A = static_cast<double>(sample.alphabet.size());
  const double log_n = std::log(static_cast<double>(sample.size()));
  int best = 0;
  double best_value = 0.0;
  std::optional<CountsTable> counts;
  if (max_order >= 1) counts.emplace(sample, max_order);
  for (int k = 0; k <= max_order; ++k) {
    double neg_log_lik = 0.0;
    if (k == 0) {
      std::vector<std::uint64_t> n_a(sample.alphabet.size(), 0);
      for (std::size_t t = static_cast<std::size_t>(max_order); t < sample.size(); ++t) ++n_a[sample[t]];
      const double total = static_cast<double>(sample.size() - static_cast<std::size_t>(max_order));
      for (auto n : n_a) {
        if (n > 0) neg_log_lik -= static_cast<double>(n) * std::log(static_cast<double>(n) / total);
      }
    } else {
      const auto table = freq_table(*counts, LagSet::range(k));
      for (ContextCode code : table.contexts()) {
        const double n_x = static_cast<double>(table.context_count(code));
        for (Symbol a = 0; a < sample.alphabet.size(); ++a) {
          const auto n = table.count(code, a);
          if (n > 0) neg_log_lik -= static_cast<double>(n) * std::log(static_cast<double>(n) / n_x);
        }
      }
    }
    const double value = neg_log_lik + 0.5 * std::pow(A, k) * (A - 1.0) * log_n;
    if (k == 0 || value < best_value) {
      best = k;
      best_value = value;
    }
  }
  return best;
}

}  // namespace mtd
