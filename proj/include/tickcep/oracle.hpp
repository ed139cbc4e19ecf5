#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tickcep/marketdata.hpp"
#include "tickcep/series.hpp"

namespace tickcep::oracle {

struct OracleOptions {
  std::int64_t window_minutes = 5;
  bool suppress_first_window_advice = false;
};

/// Reference Q1/Q2 over a whole in-memory dataset: group by symbol, drop
/// events from windows earlier than one already seen, take the last price
/// per window, then fold the EMA recurrence over the evaluated windows. The
/// final open window of each symbol is never evaluated.
///
/// Single-threaded and deliberately naive. It shares types with the engine
/// but none of its window, EMA or crossover code.
SeriesTable run(std::span<const TickEvent> dataset, const OracleOptions& options = {});

struct Discrepancy {
  std::string symbol;
  std::size_t index = 0;  // row within the symbol's series
  std::string field;
  std::string detail;
};

inline constexpr double kEmaRelativeTolerance = 1e-9;

/// Field-wise comparison: windows and advisories exact, close and EMA values
/// within `kEmaRelativeTolerance` relative error.
std::vector<Discrepancy> diff(const SeriesTable& expected, const SeriesTable& actual);

std::string to_string(const Discrepancy& d);

}  // namespace tickcep::oracle
