#include "tickcep/windowing.hpp"

#include <fmt/format.h>

#include "tickcep/error.hpp"

namespace tickcep {

void WindowSpec::validate() const {
  const auto minutes = length.count();
  if (minutes <= 0 || 1440 % minutes != 0) {
    throw Error(Errc::BadConfig, fmt::format("window length {} min does not divide a day", minutes));
  }
}

WindowId window_of(const TickTimestamp& ts, const WindowSpec& spec) {
  return WindowId{ts.date.time_since_epoch().count(),
                  static_cast<std::int32_t>(ts.time_of_day_ns / spec.length_ns())};
}

WindowId successor(const WindowId& window, const WindowSpec& spec) {
  if (window.slot + 1 >= spec.windows_per_day()) return WindowId{window.day + 1, 0};
  return WindowId{window.day, window.slot + 1};
}

bool is_successor(const WindowId& earlier, const WindowId& later, const WindowSpec& spec) {
  return successor(earlier, spec) == later;
}

TickTimestamp window_start(const WindowId& window, const WindowSpec& spec) {
  return TickTimestamp{std::chrono::sys_days(std::chrono::days(window.day)),
                       window.slot * spec.length_ns()};
}

TickTimestamp window_close_instant(const WindowId& window, const WindowSpec& spec) {
  return window_start(successor(window, spec), spec);
}

}  // namespace tickcep
