#include "mtd/sampler.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mtd/error.hpp"

namespace mtd {
namespace {

constexpr std::int32_t kUnresolved = -1;
constexpr std::int32_t kUndrawn = -1;

// Memo of resolved symbols and lag choices indexed by absolute time; grows
// backward on demand.
class History {
 public:
  explicit History(std::int64_t first, std::int64_t last) : offset_(first) {
    const auto n = static_cast<std::size_t>(last - first + 1);
    symbol_.assign(n, kUnresolved);
    choice_.assign(n, kUndrawn);
  }

  void reach(std::int64_t t) {
    if (t >= offset_) return;
    const auto missing = static_cast<std::size_t>(offset_ - t);
    const std::size_t grow = std::max(missing, symbol_.size());
    symbol_.insert(symbol_.begin(), grow, kUnresolved);
    choice_.insert(choice_.begin(), grow, kUndrawn);
    offset_ -= static_cast<std::int64_t>(grow);
  }

  std::int32_t& symbol(std::int64_t t) { return symbol_[static_cast<std::size_t>(t - offset_)]; }
  std::int32_t& choice(std::int64_t t) { return choice_[static_cast<std::size_t>(t - offset_)]; }

 private:
  std::int64_t offset_;
  std::vector<std::int32_t> symbol_;
  std::vector<std::int32_t> choice_;  // 0 = independent part, i+1 = lags[i]
};

}  // namespace

Sample perfect_sample(const MtdModel& model, std::size_t n, RandomSource& rng,
                      const PerfectSampleOptions& options, PerfectSampleStats* stats) {
  model.validate();
  if (!(model.lambda0 > 0.0)) throw Error("perfect sampling requires λ₀ > 0");
  if (n == 0) throw Error("sample length must be at least 1");

  std::vector<double> weights;
  weights.push_back(model.lambda0);
  weights.insert(weights.end(), model.lambdas.begin(), model.lambdas.end());

  const auto N = static_cast<std::int64_t>(n);
  History history(-N, -1);
  std::vector<std::int64_t> pending;
  std::uint64_t steps = 0;
  std::int64_t earliest = -N;

  for (std::int64_t target = -N; target <= -1; ++target) {
    if (history.symbol(target) != kUnresolved) continue;
    pending.push_back(target);
    while (!pending.empty()) {
      const std::int64_t s = pending.back();
      auto& choice = history.choice(s);
      if (choice == kUndrawn) {
        if (++steps > options.step_cap) {
          throw BudgetExceeded("perfect sampling exceeded the step cap of " +
                               std::to_string(options.step_cap) + " resolution steps");
        }
        choice = static_cast<std::int32_t>(rng.categorical(weights));
      }
      if (choice == 0) {
        history.symbol(s) = static_cast<std::int32_t>(rng.categorical(model.p0));
        pending.pop_back();
        continue;
      }
      const auto i = static_cast<std::size_t>(choice - 1);
      const std::int64_t parent = s - model.lags[i];
      history.reach(parent);
      const std::int32_t anchor = history.symbol(parent);
      if (anchor == kUnresolved) {
        earliest = std::min(earliest, parent);
        pending.push_back(parent);
        continue;
      }
      history.symbol(s) = static_cast<std::int32_t>(
          rng.categorical(model.pj[i][static_cast<std::size_t>(anchor)]));
      pending.pop_back();
    }
  }

  std::vector<Symbol> values(n);
  for (std::int64_t t = -N; t <= -1; ++t) {
    values[static_cast<std::size_t>(t + N)] = static_cast<Symbol>(history.symbol(t));
  }
  if (stats) {
    stats->steps = steps;
    stats->reach_before = static_cast<std::uint64_t>(-N - earliest);
  }
  return Sample(model.alphabet, std::move(values));
}

Sample forward_sample(const MtdModel& model, std::size_t n, std::span<const Symbol> initial_past,
                      RandomSource& rng) {
  model.validate();
  if (n == 0) throw Error("sample length must be at least 1");
  const auto d = static_cast<std::size_t>(model.order());
  if (initial_past.size() < d) {
    throw Error("initial past has " + std::to_string(initial_past.size()) + " symbols, need " +
                std::to_string(d));
  }
  const std::size_t A = model.alphabet.size();
  for (Symbol s : initial_past) {
    if (s >= A) throw Error("initial past holds a symbol outside the alphabet");
  }
  std::vector<Symbol> chain(initial_past.begin(), initial_past.end());
  chain.reserve(chain.size() + n);
  Distribution row(A);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t t = chain.size();
    for (std::size_t a = 0; a < A; ++a) row[a] = model.lambda0 * model.p0[a];
    for (std::size_t i = 0; i < model.lags.size(); ++i) {
      const auto& dist = model.pj[i][chain[t - static_cast<std::size_t>(model.lags[i])]];
      for (std::size_t a = 0; a < A; ++a) row[a] += model.lambdas[i] * dist[a];
    }
    chain.push_back(static_cast<Symbol>(rng.categorical(row)));
  }
  return Sample(model.alphabet,
                std::vector<Symbol>(chain.end() - static_cast<std::ptrdiff_t>(n), chain.end()));
}

}  // namespace mtd
