#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tickcep/indicators.hpp"
#include "tickcep/windowing.hpp"

namespace tickcep {

/// One evaluated window of one symbol.
struct SeriesRecord {
  WindowId window;
  double close = 0.0;
  EmaPair ema;
  std::optional<Advice> advice;

  friend bool operator==(const SeriesRecord&, const SeriesRecord&) = default;
};

/// Per-symbol chronological series keyed by canonical symbol text. Only
/// symbols with at least one evaluated window appear.
using SeriesTable = std::map<std::string, std::vector<SeriesRecord>>;

/// Text dump, one record per line:
///   <symbol>,<day>,<slot>,<close>,<ema38>,<ema100>,<BUY|SELL|->
/// Floats use 17 significant digits so they read back bit-exact.
void write_series_table(std::ostream& out, const SeriesTable& table);
/// Throws Error(Unreadable) on a malformed line.
SeriesTable read_series_table(std::istream& in);

}  // namespace tickcep
