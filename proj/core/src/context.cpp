#include "mtd/context.hpp"

#include <cmath>
#include <limits>

#include "mtd/error.hpp"

namespace mtd {

ContextCodec::ContextCodec(std::size_t alphabet_size, std::size_t length)
    : base_(alphabet_size), length_(length), count_(1), weights_(length, 1) {
  if (alphabet_size < 1) throw Error("empty alphabet");
  for (std::size_t i = 0; i < length; ++i) {
    if (count_ > std::numeric_limits<std::uint64_t>::max() / base_) {
      throw BudgetExceeded("context space |A|^" + std::to_string(length) +
                           " does not fit in a 64-bit code");
    }
    count_ *= base_;
  }
  for (std::size_t i = length; i-- > 0;) {
    weights_[i] = (i + 1 == length) ? 1 : weights_[i + 1] * base_;
  }
}

ContextCode ContextCodec::encode(std::span<const Symbol> digits) const {
  ContextCode code = 0;
  for (Symbol s : digits) code = code * base_ + s;
  return code;
}

std::vector<Symbol> ContextCodec::decode(ContextCode code) const {
  std::vector<Symbol> digits(length_);
  for (std::size_t i = length_; i-- > 0;) {
    digits[i] = static_cast<Symbol>(code % base_);
    code /= base_;
  }
  return digits;
}

Symbol ContextCodec::digit(ContextCode code, std::size_t position) const {
  return static_cast<Symbol>((code / weights_[position]) % base_);
}

ContextCode ContextCodec::drop_digit(ContextCode code, std::size_t position) const {
  const std::uint64_t w = weights_[position];
  const ContextCode low = code % w;
  const ContextCode high = code / (w * base_);
  return high * w + low;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) sum += std::abs(p[a] - q[a]);
  return 0.5 * sum;
}

std::string context_label(const Alphabet& alphabet, std::span<const Symbol> digits) {
  bool single_char = true;
  for (const auto& l : alphabet.labels()) single_char = single_char && l.size() == 1;
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (!single_char && i) out += ',';
    out += alphabet.label(digits[i]);
  }
  return out;
}

}  // namespace mtd
