#include "tickcep/marketdata.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "tickcep/error.hpp"

namespace tickcep {
namespace {

constexpr std::array<std::string_view, kColumnCount> kHeaderTitles = {
    "ID.[Exchange]", "SecType", "Date", "Time", "Ask", "Ask volume", "Bid", "Bid volume",
    "Ask time", "Day's high ask", "Close", "Currency", "Day's high ask time", "Day's high",
    "ISIN", "Auction price", "Day's low ask", "Day's low", "Day's low ask time", "Open",
    "Nominal value", "Last", "Last volume", "Trading time", "Total volume", "Mid price",
    "Trading date", "Profit", "Current price", "Related indices", "Day high bid time",
    "Day low bid time", "Open time", "Last price time", "Close time", "Day high time",
    "Day low time", "Bid time", "Auction time"};

// Parses exactly `width` decimal digits.
std::optional<int> fixed_digits(std::string_view text, std::size_t pos, std::size_t width) {
  if (pos + width > text.size()) return std::nullopt;
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

[[noreturn]] void malformed(int column, std::string_view value) {
  throw Error(Errc::MalformedField, fmt::format("column {} value '{}'", column, value));
}

}  // namespace

std::string_view to_string(Exchange exchange) noexcept {
  switch (exchange) {
    case Exchange::FR: return "FR";
    case Exchange::NL: return "NL";
    case Exchange::ETR: return "ETR";
  }
  return "?";
}

std::optional<Exchange> parse_exchange(std::string_view text) noexcept {
  if (text == "FR") return Exchange::FR;
  if (text == "NL") return Exchange::NL;
  if (text == "ETR") return Exchange::ETR;
  return std::nullopt;
}

Symbol Symbol::parse(std::string_view text) {
  const auto dot = text.rfind('.');
  if (dot == std::string_view::npos || dot == 0) {
    throw Error(Errc::MalformedField, fmt::format("symbol '{}'", text));
  }
  const auto base = text.substr(0, dot);
  const auto exchange = parse_exchange(text.substr(dot + 1));
  const bool bad_base = std::any_of(base.begin(), base.end(), [](char c) {
    return c == '.' || c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ',';
  });
  if (!exchange || bad_base) {
    throw Error(Errc::MalformedField, fmt::format("symbol '{}'", text));
  }
  return Symbol{std::string(base), *exchange};
}

std::string Symbol::str() const { return base + "." + std::string(to_string(exchange)); }

char to_char(SecurityType type) noexcept { return type == SecurityType::Index ? 'I' : 'E'; }

std::optional<SecurityType> parse_security_type(std::string_view text) noexcept {
  if (text == "E") return SecurityType::Equity;
  if (text == "I") return SecurityType::Index;
  return std::nullopt;
}

TickTimestamp TickTimestamp::from_epoch_ns(std::int64_t epoch_ns) {
  std::int64_t day = epoch_ns / kNanosPerDay;
  std::int64_t rem = epoch_ns % kNanosPerDay;
  if (rem < 0) {
    rem += kNanosPerDay;
    --day;
  }
  return TickTimestamp{std::chrono::sys_days(std::chrono::days(day)), rem};
}

std::optional<std::chrono::sys_days> parse_csv_date(std::string_view text) {
  if (text.size() != 10 || text[2] != '-' || text[5] != '-') return std::nullopt;
  const auto dd = fixed_digits(text, 0, 2);
  const auto mm = fixed_digits(text, 3, 2);
  const auto yyyy = fixed_digits(text, 6, 4);
  if (!dd || !mm || !yyyy) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year(*yyyy),
                                        std::chrono::month(static_cast<unsigned>(*mm)),
                                        std::chrono::day(static_cast<unsigned>(*dd))};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days(ymd);
}

std::string format_csv_date(std::chrono::sys_days date) {
  const std::chrono::year_month_day ymd{date};
  return fmt::format("{:02}-{:02}-{:04}", static_cast<unsigned>(ymd.day()),
                     static_cast<unsigned>(ymd.month()), static_cast<int>(ymd.year()));
}

std::optional<std::int64_t> parse_csv_time(std::string_view text) {
  if (text.size() != 13 || text[2] != ':' || text[5] != ':' || text[8] != '.') return std::nullopt;
  const auto hh = fixed_digits(text, 0, 2);
  const auto mm = fixed_digits(text, 3, 2);
  const auto ss = fixed_digits(text, 6, 2);
  const auto frac = fixed_digits(text, 9, 4);
  if (!hh || !mm || !ss || !frac || *hh > 23 || *mm > 59 || *ss > 59) return std::nullopt;
  return ((*hh * 3600LL + *mm * 60LL + *ss) * kNanosPerSecond) + *frac * kCsvTimeResolutionNs;
}

std::string format_csv_time(std::int64_t time_of_day_ns) {
  const std::int64_t seconds = time_of_day_ns / kNanosPerSecond;
  const std::int64_t frac = (time_of_day_ns % kNanosPerSecond) / kCsvTimeResolutionNs;
  return fmt::format("{:02}:{:02}:{:02}.{:04}", seconds / 3600, (seconds / 60) % 60, seconds % 60,
                     frac);
}

RawRecord parse_csv_line(std::string_view line) {
  RawRecord record;
  int column = 1;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    const auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    if (column > kColumnCount) break;
    record.at(column).assign(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
    ++column;
  }
  if (column != kColumnCount) {
    const auto fields = std::count(line.begin(), line.end(), ',') + 1;
    throw Error(Errc::FieldCountMismatch, fmt::format("expected {} fields, got {}", kColumnCount, fields));
  }
  return record;
}

std::string format_csv_line(const RawRecord& record) {
  std::string line;
  for (int column = 1; column <= kColumnCount; ++column) {
    if (column > 1) line.push_back(',');
    line += record.at(column);
  }
  return line;
}

std::optional<TickEvent> classify(const RawRecord& record) {
  if (record.is_null(col::kLast) || record.is_null(col::kTradingTime) ||
      record.is_null(col::kTradingDate)) {
    return std::nullopt;
  }
  const auto price = Decimal::parse(record.at(col::kLast));
  if (!price) malformed(col::kLast, record.at(col::kLast));
  const auto time = parse_csv_time(record.at(col::kTradingTime));
  if (!time) malformed(col::kTradingTime, record.at(col::kTradingTime));
  const auto date = parse_csv_date(record.at(col::kTradingDate));
  if (!date) malformed(col::kTradingDate, record.at(col::kTradingDate));
  if (!price->is_positive()) return std::nullopt;

  const auto sec_type = parse_security_type(record.at(col::kSecType));
  if (!sec_type) malformed(col::kSecType, record.at(col::kSecType));
  return TickEvent{Symbol::parse(record.at(col::kId)), *sec_type, *price, TickTimestamp{*date, *time}};
}

std::string csv_header_line() {
  std::string line;
  for (std::size_t i = 0; i < kHeaderTitles.size(); ++i) {
    if (i > 0) line.push_back(',');
    line += kHeaderTitles[i];
  }
  return line;
}

namespace {

std::vector<std::filesystem::path> csv_files(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
  }
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(Errc::Unreadable, fmt::format("no such file or directory: {}", path.string()));
  }
  return {path};
}

template <typename Fn>
void for_each_line(const std::filesystem::path& path, CsvReadOptions options, Fn&& fn) {
  bool any = false;
  for (const auto& file : csv_files(path)) {
    std::ifstream in(file);
    if (!in) throw Error(Errc::Unreadable, fmt::format("cannot open {}", file.string()));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first && options.header && line.rfind("ID.", 0) == 0) {
        first = false;
        continue;
      }
      first = false;
      any = true;
      fn(line);
    }
  }
  if (!any) throw Error(Errc::Unreadable, fmt::format("no records in {}", path.string()));
}

}  // namespace

std::vector<RawRecord> read_records(const std::filesystem::path& path, CsvReadOptions options) {
  std::vector<RawRecord> records;
  for_each_line(path, options, [&](const std::string& line) { records.push_back(parse_csv_line(line)); });
  return records;
}

std::vector<TickEvent> load_price_events(const std::filesystem::path& path, CsvReadOptions options) {
  std::vector<TickEvent> events;
  for_each_line(path, options, [&](const std::string& line) {
    if (auto event = classify(parse_csv_line(line))) events.push_back(std::move(*event));
  });
  return events;
}

}  // namespace tickcep
