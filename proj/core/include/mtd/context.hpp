#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtd/alphabet.hpp"

namespace mtd {

/// Dense code of a context over a lag set: base-|A| integer whose most
/// significant digit is the oldest (largest) lag.
using ContextCode = std::uint64_t;

/// Encodes/decodes contexts of a fixed length over an alphabet of fixed size.
/// Digits are ordered oldest lag first.
class ContextCodec {
 public:
  /// Throws BudgetExceeded if |A|^length does not fit in 64 bits.
  ContextCodec(std::size_t alphabet_size, std::size_t length);

  std::size_t alphabet_size() const { return base_; }
  std::size_t length() const { return length_; }
  /// Number of distinct contexts, |A|^length.
  std::uint64_t count() const { return count_; }

  ContextCode encode(std::span<const Symbol> digits) const;
  std::vector<Symbol> decode(ContextCode code) const;
  /// Digit at `position` (0 = oldest).
  Symbol digit(ContextCode code, std::size_t position) const;
  /// Code with the digit at `position` removed (the projection used to group
  /// compatible contexts).
  ContextCode drop_digit(ContextCode code, std::size_t position) const;

 private:
  std::size_t base_;
  std::size_t length_;
  std::uint64_t count_;
  std::vector<std::uint64_t> weights_;  // base^(length-1-position)
};

/// Total variation distance, half the L1 distance.
double tv_distance(std::span<const double> p, std::span<const double> q);

/// Printable context label: labels concatenated ("110") when every label is a
/// single character, comma-joined otherwise.
std::string context_label(const Alphabet& alphabet, std::span<const Symbol> digits);

}  // namespace mtd
