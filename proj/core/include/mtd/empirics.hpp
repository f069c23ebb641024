#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mtd/alphabet.hpp"
#include "mtd/context.hpp"
#include "mtd/model.hpp"

namespace mtd {

/// Chronologically ordered symbol sequence (oldest first).
struct Sample {
  Alphabet alphabet;
  std::vector<Symbol> values;

  Sample() = default;
  /// Throws if the sequence is empty or holds an index outside the alphabet.
  Sample(Alphabet alphabet, std::vector<Symbol> values);

  std::size_t size() const { return values.size(); }
  Symbol operator[](std::size_t i) const { return values[i]; }
  /// Observations [begin, end).
  Sample slice(std::size_t begin, std::size_t end) const;
};

/// Occurrence counts of every length-(d+1) window (X_{t-d}, ..., X_t),
/// t = d+1..n. Only observed windows are stored, in lexicographic order.
class CountsTable {
 public:
  /// Requires 1 <= d < n.
  CountsTable(const Sample& sample, int d);

  int order() const { return d_; }
  std::size_t sample_size() const { return n_; }
  /// Number of windows, n - d.
  std::uint64_t total() const { return n_ - static_cast<std::size_t>(d_); }
  std::size_t alphabet_size() const { return alphabet_size_; }

  std::size_t distinct_windows() const { return counts_.size(); }
  /// Window i, oldest symbol first; its last entry is the current symbol.
  std::span<const Symbol> window(std::size_t i) const;
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  /// Symbol at lag j (0 = current) inside window i.
  Symbol at_lag(std::size_t i, int lag) const { return windows_[i * (d_ + 1) + (d_ - lag)]; }

 private:
  int d_;
  std::size_t n_;
  std::size_t alphabet_size_;
  std::vector<Symbol> windows_;
  std::vector<std::uint64_t> counts_;
};

CountsTable counts_table(const Sample& sample, int d);

/// Counts N(x_S, a), context counts and empirical conditionals over a lag set.
/// Contexts are keyed oldest lag first. Unseen contexts read as the uniform row.
class FreqTable {
 public:
  /// Requires max(S) <= d of the counts.
  FreqTable(const CountsTable& counts, LagSet lags);

  const LagSet& lag_set() const { return lags_; }
  const ContextCodec& codec() const { return codec_; }
  std::size_t alphabet_size() const { return codec_.alphabet_size(); }
  /// Divisor of the joint frequencies, n - d.
  std::uint64_t total() const { return total_; }

  /// Observed contexts (N > 0), ascending by code.
  std::span<const ContextCode> contexts() const { return codes_; }
  bool observed(ContextCode code) const { return find(code).has_value(); }

  std::uint64_t count(ContextCode code, Symbol a) const;
  std::uint64_t context_count(ContextCode code) const;
  /// P_hat(. | x_S), uniform if the context was never observed.
  Distribution conditional(ContextCode code) const;
  double pi(ContextCode code, Symbol a) const {
    return static_cast<double>(count(code, a)) / static_cast<double>(total_);
  }
  double pi(ContextCode code) const {
    return static_cast<double>(context_count(code)) / static_cast<double>(total_);
  }

 private:
  std::optional<std::size_t> find(ContextCode code) const;

  LagSet lags_;
  ContextCodec codec_;
  std::uint64_t total_;
  std::vector<ContextCode> codes_;
  std::vector<std::uint64_t> counts_;  // codes_.size() x |A|
  std::vector<std::uint64_t> context_totals_;
};

FreqTable freq_table(const CountsTable& counts, const LagSet& lags);

/// Joint counts N_j(x_S, b, a) with an extra coordinate b at lag j outside S.
class PairwiseFreq {
 public:
  PairwiseFreq(const CountsTable& counts, LagSet lags, int j);

  const LagSet& lag_set() const { return lags_; }
  int lag() const { return j_; }
  const ContextCodec& codec() const { return codec_; }
  std::size_t alphabet_size() const { return codec_.alphabet_size(); }
  std::uint64_t total() const { return total_; }

  /// Observed x_S contexts, ascending.
  std::span<const ContextCode> contexts() const { return codes_; }

  std::uint64_t count(ContextCode x, Symbol b, Symbol a) const;
  /// N_j(x_S, b) summed over a.
  std::uint64_t count(ContextCode x, Symbol b) const;
  /// N(x_S) summed over b and a.
  std::uint64_t context_count(ContextCode x) const;
  double pi(ContextCode x, Symbol b, Symbol a) const {
    return static_cast<double>(count(x, b, a)) / static_cast<double>(total_);
  }
  double pi(ContextCode x, Symbol b) const {
    return static_cast<double>(count(x, b)) / static_cast<double>(total_);
  }
  double pi(ContextCode x) const {
    return static_cast<double>(context_count(x)) / static_cast<double>(total_);
  }
  /// P_hat_j(. | x_S, b), uniform when (x_S, b) was never observed.
  Distribution conditional(ContextCode x, Symbol b) const;

 private:
  std::optional<std::size_t> find(ContextCode x) const;

  LagSet lags_;
  int j_;
  ContextCodec codec_;
  std::uint64_t total_;
  std::vector<ContextCode> codes_;
  std::vector<std::uint64_t> counts_;  // codes_.size() x |A| (b) x |A| (a)
};

PairwiseFreq pairwise_freq(const CountsTable& counts, const LagSet& lags, int j);

/// Empirical oscillation of every lag in S (d = max S): the largest d_TV
/// between conditionals of observed (S \ {j})-compatible contexts.
std::map<int, double> oscillation_empirical(const Sample& sample, const LagSet& lags);

}  // namespace mtd
