#include "tickcep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

namespace tickcep::oracle {
namespace {

struct Tick {
  std::int64_t window_index;  // global window number since the epoch
  double price;
};

constexpr std::int64_t kNsPerMinute = 60'000'000'000;

double weighted(double close, double previous, double j) {
  const double weight = 2.0 / (1.0 + j);
  return close * weight + previous * (1.0 - weight);
}

bool close_enough(double expected, double actual) {
  if (expected == actual) return true;
  const double scale = std::max(std::fabs(expected), std::fabs(actual));
  return std::fabs(expected - actual) <= kEmaRelativeTolerance * scale;
}

}  // namespace

SeriesTable run(std::span<const TickEvent> dataset, const OracleOptions& options) {
  const std::int64_t window_ns = options.window_minutes * kNsPerMinute;
  const std::int64_t per_day = 1440 / options.window_minutes;

  // Pass 1: per-symbol tick lists in arrival order, late ticks removed.
  std::map<std::string, std::vector<Tick>> by_symbol;
  for (const auto& event : dataset) {
    const std::int64_t ns = event.trading_ts.epoch_ns();
    const std::int64_t index = ns >= 0 ? ns / window_ns : -((-ns + window_ns - 1) / window_ns);
    auto& ticks = by_symbol[event.symbol.str()];
    if (!ticks.empty() && index < ticks.back().window_index) continue;
    ticks.push_back(Tick{index, event.price()});
  }

  // Pass 2: closes per window, then the recurrence.
  SeriesTable table;
  for (const auto& [symbol, ticks] : by_symbol) {
    std::vector<Tick> closes;
    for (const auto& tick : ticks) {
      if (!closes.empty() && closes.back().window_index == tick.window_index) {
        closes.back().price = tick.price;
      } else {
        closes.push_back(tick);
      }
    }
    if (!closes.empty()) closes.pop_back();  // still open at stream end
    if (closes.empty()) continue;

    auto& rows = table[symbol];
    double short_prev = 0.0;
    double long_prev = 0.0;
    for (const auto& close : closes) {
      const double short_now = weighted(close.price, short_prev, 38.0);
      const double long_now = weighted(close.price, long_prev, 100.0);
      SeriesRecord row;
      row.window = WindowId{close.window_index / per_day, static_cast<std::int32_t>(close.window_index % per_day)};
      row.close = close.price;
      row.ema = EmaPair{short_now, long_now};
      const bool bullish = short_now > long_now && !(short_prev > long_prev);
      const bool bearish = short_now < long_now && !(short_prev < long_prev);
      if (bullish) row.advice = Advice::Buy;
      if (bearish) row.advice = Advice::Sell;
      if (rows.empty() && options.suppress_first_window_advice) row.advice.reset();
      rows.push_back(row);
      short_prev = short_now;
      long_prev = long_now;
    }
  }
  return table;
}

std::vector<Discrepancy> diff(const SeriesTable& expected, const SeriesTable& actual) {
  std::vector<Discrepancy> out;
  std::set<std::string> symbols;
  for (const auto& [symbol, rows] : expected) symbols.insert(symbol);
  for (const auto& [symbol, rows] : actual) symbols.insert(symbol);

  static const std::vector<SeriesRecord> kEmpty;
  for (const auto& symbol : symbols) {
    const auto e = expected.find(symbol);
    const auto a = actual.find(symbol);
    const auto& lhs = e == expected.end() ? kEmpty : e->second;
    const auto& rhs = a == actual.end() ? kEmpty : a->second;
    if (lhs.size() != rhs.size()) {
      out.push_back({symbol, std::min(lhs.size(), rhs.size()), "length",
                     fmt::format("expected {} windows, got {}", lhs.size(), rhs.size())});
    }
    const std::size_t n = std::min(lhs.size(), rhs.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = lhs[i];
      const auto& y = rhs[i];
      if (x.window != y.window) {
        out.push_back({symbol, i, "window",
                       fmt::format("expected ({},{}), got ({},{})", x.window.day, x.window.slot, y.window.day, y.window.slot)});
        continue;
      }
      if (!close_enough(x.close, y.close)) {
        out.push_back({symbol, i, "close", fmt::format("expected {:.17g}, got {:.17g}", x.close, y.close)});
      }
      if (!close_enough(x.ema.ema38, y.ema.ema38)) {
        out.push_back({symbol, i, "ema38", fmt::format("expected {:.17g}, got {:.17g}", x.ema.ema38, y.ema.ema38)});
      }
      if (!close_enough(x.ema.ema100, y.ema.ema100)) {
        out.push_back({symbol, i, "ema100", fmt::format("expected {:.17g}, got {:.17g}", x.ema.ema100, y.ema.ema100)});
      }
      if (x.advice != y.advice) {
        const auto name = [](const std::optional<Advice>& a) {
          return a ? std::string(to_string(*a)) : std::string("-");
        };
        out.push_back({symbol, i, "advice", fmt::format("expected {}, got {}", name(x.advice), name(y.advice))});
      }
    }
  }
  return out;
}

std::string to_string(const Discrepancy& d) {
  return fmt::format("{}[{}].{}: {}", d.symbol, d.index, d.field, d.detail);
}

}  // namespace tickcep::oracle
