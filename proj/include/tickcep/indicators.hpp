#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "tickcep/marketdata.hpp"
#include "tickcep/windowing.hpp"

namespace tickcep {

inline constexpr int kShortSmoothing = 38;
inline constexpr int kLongSmoothing = 100;

/// Short- and long-interval EMA of one symbol after some evaluated window.
/// (0, 0) is the state before any window has been evaluated.
struct EmaPair {
  double ema38 = 0.0;
  double ema100 = 0.0;

  friend bool operator==(const EmaPair&, const EmaPair&) = default;
};

/// One step of the EMA recurrence for smoothing factor `j`:
/// close * (2 / (1 + j)) + prev * (1 - 2 / (1 + j)), in that order.
inline double ema_update(double prev, double close, int j) noexcept {
  const double alpha = 2.0 / (1.0 + j);
  return close * alpha + prev * (1.0 - alpha);
}

inline EmaPair ema_step(const EmaPair& prev, double close) noexcept {
  return EmaPair{ema_update(prev.ema38, close, kShortSmoothing),
                 ema_update(prev.ema100, close, kLongSmoothing)};
}

enum class Advice : std::uint8_t { Buy, Sell };

std::string_view to_string(Advice advice) noexcept;

/// Buy when the short EMA strictly overtakes the long one between two
/// consecutive evaluated windows (prev <=, curr >); Sell mirrors it.
inline std::optional<Advice> detect_crossover(const EmaPair& prev, const EmaPair& curr) noexcept {
  if (curr.ema38 > curr.ema100 && prev.ema38 <= prev.ema100) return Advice::Buy;
  if (curr.ema38 < curr.ema100 && prev.ema38 >= prev.ema100) return Advice::Sell;
  return std::nullopt;
}

struct CrossoverAdvisory {
  Symbol symbol;
  Advice kind = Advice::Buy;
  WindowId window;
  EmaPair ema;

  friend bool operator==(const CrossoverAdvisory&, const CrossoverAdvisory&) = default;
};

}  // namespace tickcep
