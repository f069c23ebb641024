#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mtd {

/// Index of a symbol inside its alphabet.
using Symbol = std::uint32_t;

/// Ordered finite set of opaque symbol labels with a stable index map.
class Alphabet {
 public:
  Alphabet() = default;
  /// Keeps the given order. Throws on duplicates or fewer than two labels.
  explicit Alphabet(std::vector<std::string> labels);
  Alphabet(std::initializer_list<std::string> labels)
      : Alphabet(std::vector<std::string>(labels)) {}

  /// Alphabet {"0", "1", ..., "size-1"}.
  static Alphabet numbered(std::size_t size, int first = 0);
  /// Sorted distinct labels. Numeric sort when every label parses as a
  /// number, lexicographic otherwise.
  static Alphabet infer(const std::vector<std::string>& observed);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Symbol s) const { return labels_.at(s); }
  bool contains(std::string_view label) const;
  /// Throws if the label is unknown.
  Symbol index(std::string_view label) const;

  bool operator==(const Alphabet& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Symbol> index_;
};

/// Strictly increasing set of positive lags. Lag j refers to the symbol
/// j steps in the past. May be empty (the empty conditioning set).
class LagSet {
 public:
  LagSet() = default;
  /// Sorts the input; throws on non-positive or duplicate entries.
  explicit LagSet(std::vector<int> lags);
  LagSet(std::initializer_list<int> lags) : LagSet(std::vector<int>(lags)) {}

  /// {1, 2, ..., d}.
  static LagSet range(int d);

  std::size_t size() const { return lags_.size(); }
  bool empty() const { return lags_.empty(); }
  int max() const;
  bool contains(int lag) const;
  /// Position of `lag` in ascending order; throws if absent.
  std::size_t position(int lag) const;
  const std::vector<int>& values() const { return lags_; }
  auto begin() const { return lags_.begin(); }
  auto end() const { return lags_.end(); }
  int operator[](std::size_t i) const { return lags_[i]; }

  LagSet with(int lag) const;
  LagSet without(int lag) const;

  bool operator==(const LagSet&) const = default;

 private:
  std::vector<int> lags_;
};

std::string to_string(const LagSet& lags);

}  // namespace mtd
