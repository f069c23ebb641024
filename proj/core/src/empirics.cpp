#include "mtd/empirics.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "mtd/error.hpp"

namespace mtd {
namespace {

// Digit order of a context over `lags`: oldest (largest) lag first.
std::vector<int> digit_lags(const LagSet& lags) {
  return std::vector<int>(lags.values().rbegin(), lags.values().rend());
}

struct Projection {
  std::vector<ContextCode> codes;
  std::vector<std::uint64_t> cells;  // codes.size() x width
};

// Groups the counts table by the context over `digits` and accumulates a row
// of `width` cells per context; `cell` picks the column inside the row.
template <typename CellFn>
Projection project(const CountsTable& counts, const ContextCodec& codec,
                   const std::vector<int>& digits, std::size_t width, CellFn cell) {
  std::unordered_map<ContextCode, std::size_t> slot;
  std::vector<ContextCode> codes;
  std::vector<std::uint64_t> cells;
  for (std::size_t w = 0; w < counts.distinct_windows(); ++w) {
    ContextCode code = 0;
    for (int lag : digits) code = code * codec.alphabet_size() + counts.at_lag(w, lag);
    auto [it, inserted] = slot.emplace(code, codes.size());
    if (inserted) {
      codes.push_back(code);
      cells.resize(cells.size() + width, 0);
    }
    cells[it->second * width + cell(w)] += counts.count(w);
  }
  std::vector<std::size_t> order(codes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return codes[a] < codes[b]; });
  Projection out;
  out.codes.reserve(codes.size());
  out.cells.reserve(cells.size());
  for (std::size_t i : order) {
    out.codes.push_back(codes[i]);
    out.cells.insert(out.cells.end(), cells.begin() + i * width, cells.begin() + (i + 1) * width);
  }
  return out;
}

Distribution uniform(std::size_t A) { return Distribution(A, 1.0 / static_cast<double>(A)); }

}  // namespace

Sample::Sample(Alphabet alphabet_in, std::vector<Symbol> values_in)
    : alphabet(std::move(alphabet_in)), values(std::move(values_in)) {
  if (values.empty()) throw Error("sample is empty");
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (values[t] >= alphabet.size()) {
      throw Error("sample value at position " + std::to_string(t) + " is outside the alphabet");
    }
  }
}

Sample Sample::slice(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > values.size()) throw Error("invalid sample slice");
  return Sample(alphabet, std::vector<Symbol>(values.begin() + begin, values.begin() + end));
}

CountsTable::CountsTable(const Sample& sample, int d)
    : d_(d), n_(sample.size()), alphabet_size_(sample.alphabet.size()) {
  if (d < 1) throw Error("order d must be at least 1");
  if (static_cast<std::size_t>(d) >= n_) {
    throw Error("order d = " + std::to_string(d) + " must be smaller than the sample size " +
                std::to_string(n_));
  }
  const std::size_t width = static_cast<std::size_t>(d) + 1;
  const Symbol* data = sample.values.data();
  std::vector<std::size_t> starts(n_ - d);
  std::iota(starts.begin(), starts.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(data + a, data + a + width, data + b, data + b + width);
  };
  std::sort(starts.begin(), starts.end(), less);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::size_t s = starts[i];
    if (i > 0 && std::equal(data + s, data + s + width, data + starts[i - 1])) {
      ++counts_.back();
      continue;
    }
    windows_.insert(windows_.end(), data + s, data + s + width);
    counts_.push_back(1);
  }
}

std::span<const Symbol> CountsTable::window(std::size_t i) const {
  const std::size_t width = static_cast<std::size_t>(d_) + 1;
  return std::span<const Symbol>(windows_).subspan(i * width, width);
}

CountsTable counts_table(const Sample& sample, int d) { return CountsTable(sample, d); }

FreqTable::FreqTable(const CountsTable& counts, LagSet lags)
    : lags_(std::move(lags)), codec_(counts.alphabet_size(), lags_.size()), total_(counts.total()) {
  if (lags_.max() > counts.order()) {
    throw Error("lag " + std::to_string(lags_.max()) + " exceeds the counts order d = " +
                std::to_string(counts.order()));
  }
  const std::size_t A = codec_.alphabet_size();
  auto p = project(counts, codec_, digit_lags(lags_), A,
                   [&](std::size_t w) { return counts.at_lag(w, 0); });
  codes_ = std::move(p.codes);
  counts_ = std::move(p.cells);
  context_totals_.resize(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    context_totals_[i] = std::accumulate(counts_.begin() + i * A, counts_.begin() + (i + 1) * A,
                                         std::uint64_t{0});
  }
}

std::optional<std::size_t> FreqTable::find(ContextCode code) const {
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::uint64_t FreqTable::count(ContextCode code, Symbol a) const {
  auto i = find(code);
  return i ? counts_[*i * alphabet_size() + a] : 0;
}

std::uint64_t FreqTable::context_count(ContextCode code) const {
  auto i = find(code);
  return i ? context_totals_[*i] : 0;
}

Distribution FreqTable::conditional(ContextCode code) const {
  const std::size_t A = alphabet_size();
  auto i = find(code);
  if (!i) return uniform(A);
  Distribution row(A);
  const double denom = static_cast<double>(context_totals_[*i]);
  for (std::size_t a = 0; a < A; ++a) row[a] = static_cast<double>(counts_[*i * A + a]) / denom;
  return row;
}

FreqTable freq_table(const CountsTable& counts, const LagSet& lags) { return FreqTable(counts, lags); }

PairwiseFreq::PairwiseFreq(const CountsTable& counts, LagSet lags, int j)
    : lags_(std::move(lags)), j_(j), codec_(counts.alphabet_size(), lags_.size()), total_(counts.total()) {
  if (j < 1 || j > counts.order()) {
    throw Error("lag " + std::to_string(j) + " outside 1..d = " + std::to_string(counts.order()));
  }
  if (lags_.contains(j)) throw Error("lag " + std::to_string(j) + " already in S");
  if (lags_.max() > counts.order()) throw Error("S exceeds the counts order");
  const std::size_t A = codec_.alphabet_size();
  auto p = project(counts, codec_, digit_lags(lags_), A * A,
                   [&](std::size_t w) { return counts.at_lag(w, j) * A + counts.at_lag(w, 0); });
  codes_ = std::move(p.codes);
  counts_ = std::move(p.cells);
}

std::optional<std::size_t> PairwiseFreq::find(ContextCode x) const {
  auto it = std::lower_bound(codes_.begin(), codes_.end(), x);
  if (it == codes_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::uint64_t PairwiseFreq::count(ContextCode x, Symbol b, Symbol a) const {
  const std::size_t A = alphabet_size();
  auto i = find(x);
  return i ? counts_[(*i * A + b) * A + a] : 0;
}

std::uint64_t PairwiseFreq::count(ContextCode x, Symbol b) const {
  const std::size_t A = alphabet_size();
  auto i = find(x);
  if (!i) return 0;
  auto first = counts_.begin() + (*i * A + b) * A;
  return std::accumulate(first, first + A, std::uint64_t{0});
}

std::uint64_t PairwiseFreq::context_count(ContextCode x) const {
  const std::size_t A = alphabet_size();
  auto i = find(x);
  if (!i) return 0;
  auto first = counts_.begin() + *i * A * A;
  return std::accumulate(first, first + A * A, std::uint64_t{0});
}

Distribution PairwiseFreq::conditional(ContextCode x, Symbol b) const {
  const std::size_t A = alphabet_size();
  const std::uint64_t denom = count(x, b);
  if (denom == 0) return uniform(A);
  const std::size_t i = *find(x);
  Distribution row(A);
  for (std::size_t a = 0; a < A; ++a) {
    row[a] = static_cast<double>(counts_[(i * A + b) * A + a]) / static_cast<double>(denom);
  }
  return row;
}

PairwiseFreq pairwise_freq(const CountsTable& counts, const LagSet& lags, int j) {
  return PairwiseFreq(counts, lags, j);
}

std::map<int, double> oscillation_empirical(const Sample& sample, const LagSet& lags) {
  if (lags.empty()) throw Error("oscillation estimate needs a non-empty lag set");
  const auto counts = counts_table(sample, lags.max());
  const auto table = freq_table(counts, lags);
  const auto& codec = table.codec();
  const std::size_t k = lags.size();

  std::vector<Distribution> rows;
  rows.reserve(table.contexts().size());
  for (ContextCode code : table.contexts()) rows.push_back(table.conditional(code));

  std::map<int, double> out;
  for (std::size_t pos = 0; pos < k; ++pos) {
    const int lag = lags[k - 1 - pos];
    std::map<ContextCode, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      groups[codec.drop_digit(table.contexts()[i], pos)].push_back(i);
    }
    double widest = 0.0;
    for (const auto& [key, members] : groups) {
      for (std::size_t u = 0; u < members.size(); ++u) {
        for (std::size_t v = u + 1; v < members.size(); ++v) {
          widest = std::max(widest, tv_distance(rows[members[u]], rows[members[v]]));
        }
      }
    }
    out[lag] = widest;
  }
  return out;
}

}  // namespace mtd
