#include "tickcep/series.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "tickcep/error.hpp"

namespace tickcep {
namespace {

constexpr std::string_view kDumpHeader = "# tickcep series v1";

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error(Errc::Unreadable, fmt::format("line {}: bad number '{}'", line_no, field));
  }
  return value;
}

}  // namespace

void write_series_table(std::ostream& out, const SeriesTable& table) {
  out << kDumpHeader << '\n';
  for (const auto& [symbol, rows] : table) {
    for (const auto& row : rows) {
      out << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{}\n", symbol, row.window.day, row.window.slot,
                         row.close, row.ema.ema38, row.ema.ema100,
                         row.advice ? to_string(*row.advice) : std::string_view("-"));
    }
  }
}

SeriesTable read_series_table(std::istream& in) {
  SeriesTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 7) {
      throw Error(Errc::Unreadable, fmt::format("line {}: expected 7 fields", line_no));
    }
    SeriesRecord row;
    row.window.day = parse_number<std::int64_t>(fields[1], line_no);
    row.window.slot = parse_number<std::int32_t>(fields[2], line_no);
    row.close = parse_number<double>(fields[3], line_no);
    row.ema.ema38 = parse_number<double>(fields[4], line_no);
    row.ema.ema100 = parse_number<double>(fields[5], line_no);
    if (fields[6] == "BUY") {
      row.advice = Advice::Buy;
    } else if (fields[6] == "SELL") {
      row.advice = Advice::Sell;
    } else if (fields[6] != "-") {
      throw Error(Errc::Unreadable, fmt::format("line {}: bad advice '{}'", line_no, fields[6]));
    }
    table[std::string(fields[0])].push_back(row);
  }
  return table;
}

}  // namespace tickcep
