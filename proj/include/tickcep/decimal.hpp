#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tickcep {

/// Fixed-point decimal: value = mantissa * 10^-scale.
///
/// The textual form is preserved exactly ("12.50" keeps its trailing zero),
/// so prices survive a CSV round-trip bit for bit. Arithmetic is not offered;
/// indicator math runs on `to_double()`.
class Decimal {
 public:
  static constexpr int kMaxScale = 18;

  constexpr Decimal() = default;
  constexpr Decimal(std::int64_t mantissa, int scale) : mantissa_(mantissa), scale_(scale) {}

  /// Accepts `[-]digits[.digits]`. No exponent, no leading '+', no blanks.
  static std::optional<Decimal> parse(std::string_view text);

  std::int64_t mantissa() const noexcept { return mantissa_; }
  int scale() const noexcept { return scale_; }

  bool is_positive() const noexcept { return mantissa_ > 0; }

  /// Correctly rounded: both operands are exact doubles for |mantissa| < 2^53.
  double to_double() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Decimal&, const Decimal&) = default;

 private:
  std::int64_t mantissa_ = 0;
  int scale_ = 0;
};

}  // namespace tickcep
