#include "tickcep/decimal.hpp"

#include <array>
#include <limits>

namespace tickcep {
namespace {

constexpr std::array<double, Decimal::kMaxScale + 1> kPow10 = {
    1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9,
    1e10, 1e11, 1e12, 1e13, 1e14, 1e15, 1e16, 1e17, 1e18};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (text.empty() || !is_digit(text.front())) return std::nullopt;

  constexpr auto kLimit = std::numeric_limits<std::int64_t>::max();
  std::int64_t mantissa = 0;
  int scale = 0;
  bool seen_point = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      if (seen_point || i + 1 == text.size()) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (!is_digit(c)) return std::nullopt;
    const int digit = c - '0';
    if (mantissa > (kLimit - digit) / 10) return std::nullopt;
    mantissa = mantissa * 10 + digit;
    if (seen_point && ++scale > kMaxScale) return std::nullopt;
  }
  return Decimal(negative ? -mantissa : mantissa, scale);
}

double Decimal::to_double() const noexcept {
  return static_cast<double>(mantissa_) / kPow10[static_cast<std::size_t>(scale_)];
}

std::string Decimal::to_string() const {
  std::string digits = std::to_string(mantissa_ < 0 ? -mantissa_ : mantissa_);
  if (scale_ > 0) {
    if (digits.size() <= static_cast<std::size_t>(scale_)) {
      digits.insert(0, static_cast<std::size_t>(scale_) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(scale_), 1, '.');
  }
  if (mantissa_ < 0) digits.insert(0, 1, '-');
  return digits;
}

}  // namespace tickcep
