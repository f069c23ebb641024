#include "mtd/alphabet.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "mtd/error.hpp"

namespace mtd {
namespace {

bool parse_number(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !s.empty();
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) throw Error("alphabet needs at least two symbols");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, inserted] = index_.emplace(labels_[i], static_cast<Symbol>(i));
    if (!inserted) throw Error("duplicate alphabet symbol '" + labels_[i] + "'");
  }
}

Alphabet Alphabet::numbered(std::size_t size, int first) {
  std::vector<std::string> labels;
  labels.reserve(size);
  for (std::size_t i = 0; i < size; ++i) labels.push_back(std::to_string(first + static_cast<int>(i)));
  return Alphabet(std::move(labels));
}

Alphabet Alphabet::infer(const std::vector<std::string>& observed) {
  std::set<std::string> distinct(observed.begin(), observed.end());
  std::vector<std::string> labels(distinct.begin(), distinct.end());
  std::vector<std::pair<double, std::string>> numeric;
  numeric.reserve(labels.size());
  bool all_numeric = true;
  for (const auto& label : labels) {
    double v = 0.0;
    if (!parse_number(label, v)) {
      all_numeric = false;
      break;
    }
    numeric.emplace_back(v, label);
  }
  if (all_numeric) {
    std::stable_sort(numeric.begin(), numeric.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    labels.clear();
    for (auto& [v, label] : numeric) labels.push_back(std::move(label));
  }
  if (labels.size() < 2) {
    throw Error("series contains a single distinct symbol; need at least two");
  }
  return Alphabet(std::move(labels));
}

bool Alphabet::contains(std::string_view label) const {
  return index_.find(std::string(label)) != index_.end();
}

Symbol Alphabet::index(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) throw Error("unknown symbol '" + std::string(label) + "'");
  return it->second;
}

LagSet::LagSet(std::vector<int> lags) : lags_(std::move(lags)) {
  std::sort(lags_.begin(), lags_.end());
  for (std::size_t i = 0; i < lags_.size(); ++i) {
    if (lags_[i] < 1) throw Error("lags must be positive integers");
    if (i > 0 && lags_[i] == lags_[i - 1]) {
      throw Error("duplicate lag " + std::to_string(lags_[i]));
    }
  }
}

LagSet LagSet::range(int d) {
  std::vector<int> lags;
  for (int j = 1; j <= d; ++j) lags.push_back(j);
  return LagSet(std::move(lags));
}

int LagSet::max() const { return lags_.empty() ? 0 : lags_.back(); }

bool LagSet::contains(int lag) const {
  return std::binary_search(lags_.begin(), lags_.end(), lag);
}

std::size_t LagSet::position(int lag) const {
  auto it = std::lower_bound(lags_.begin(), lags_.end(), lag);
  if (it == lags_.end() || *it != lag) throw Error("lag " + std::to_string(lag) + " not in set");
  return static_cast<std::size_t>(it - lags_.begin());
}

LagSet LagSet::with(int lag) const {
  auto v = lags_;
  v.push_back(lag);
  return LagSet(std::move(v));
}

LagSet LagSet::without(int lag) const {
  auto v = lags_;
  v.erase(std::remove(v.begin(), v.end(), lag), v.end());
  return LagSet(std::move(v));
}

std::string to_string(const LagSet& lags) {
  std::string out;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(lags[i]);
  }
  return out;
}

}  // namespace mtd
