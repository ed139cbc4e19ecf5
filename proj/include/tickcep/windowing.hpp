#pragma once

#include <chrono>
#include <compare>
#include <cstdint>

#include "tickcep/marketdata.hpp"

namespace tickcep {

/// Tumbling windows anchored at local midnight. The length must divide a day.
struct WindowSpec {
  std::chrono::minutes length{5};

  /// Throws Error(BadConfig) if the length is not a positive divisor of 1440 min.
  void validate() const;
  std::int64_t length_ns() const noexcept { return length.count() * 60 * kNanosPerSecond; }
  std::int32_t windows_per_day() const noexcept {
    return static_cast<std::int32_t>(1440 / length.count());
  }
};

/// Ordered lexicographically by (day, slot).
struct WindowId {
  std::int64_t day = 0;   // days since 1970-01-01
  std::int32_t slot = 0;  // [0, windows_per_day)

  friend bool operator==(const WindowId&, const WindowId&) = default;
  friend auto operator<=>(const WindowId&, const WindowId&) = default;
};

/// The window whose half-open interval [start, start + length) holds `ts`.
WindowId window_of(const TickTimestamp& ts, const WindowSpec& spec);

WindowId successor(const WindowId& window, const WindowSpec& spec);
bool is_successor(const WindowId& earlier, const WindowId& later, const WindowSpec& spec);

TickTimestamp window_start(const WindowId& window, const WindowSpec& spec);
/// Start of the following window; this is when `window` gets evaluated.
TickTimestamp window_close_instant(const WindowId& window, const WindowSpec& spec);

}  // namespace tickcep
