#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tickcep/decimal.hpp"

namespace tickcep {

enum class Exchange : std::uint8_t { FR, NL, ETR };

std::string_view to_string(Exchange exchange) noexcept;
std::optional<Exchange> parse_exchange(std::string_view text) noexcept;

/// An instrument listed on one exchange, written "<base>.<exchange>".
struct Symbol {
  std::string base;
  Exchange exchange = Exchange::ETR;

  /// Throws Error(MalformedField) on anything but "<base>.<FR|NL|ETR>".
  static Symbol parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct SymbolHash {
  std::size_t operator()(const Symbol& s) const noexcept {
    return std::hash<std::string>{}(s.base) * 31u + static_cast<std::size_t>(s.exchange);
  }
};

enum class SecurityType : std::uint8_t { Equity, Index };

char to_char(SecurityType type) noexcept;
std::optional<SecurityType> parse_security_type(std::string_view text) noexcept;

inline constexpr std::int64_t kNanosPerSecond = 1'000'000'000;
inline constexpr std::int64_t kNanosPerDay = 86'400 * kNanosPerSecond;
/// CSV times carry four fractional digits.
inline constexpr std::int64_t kCsvTimeResolutionNs = 100'000;

/// Naive local timestamp: calendar date plus nanoseconds since midnight.
struct TickTimestamp {
  std::chrono::sys_days date{};
  std::int64_t time_of_day_ns = 0;

  static TickTimestamp from_epoch_ns(std::int64_t epoch_ns);
  std::int64_t epoch_ns() const noexcept {
    return static_cast<std::int64_t>(date.time_since_epoch().count()) * kNanosPerDay +
           time_of_day_ns;
  }

  friend bool operator==(const TickTimestamp&, const TickTimestamp&) = default;
  friend auto operator<=>(const TickTimestamp&, const TickTimestamp&) = default;
};

// CSV text forms. Parsers return nullopt on malformed input.
std::optional<std::chrono::sys_days> parse_csv_date(std::string_view text);  // DD-MM-YYYY
std::string format_csv_date(std::chrono::sys_days date);
std::optional<std::int64_t> parse_csv_time(std::string_view text);  // HH:MM:SS.ssss
std::string format_csv_time(std::int64_t time_of_day_ns);

/// One price event.
struct TickEvent {
  Symbol symbol;
  SecurityType sec_type = SecurityType::Equity;
  Decimal last_price;
  TickTimestamp trading_ts;

  double price() const noexcept { return last_price.to_double(); }

  friend bool operator==(const TickEvent&, const TickEvent&) = default;
};

// 1-based column ids of the Trading Data layout.
namespace col {
inline constexpr int kId = 1;
inline constexpr int kSecType = 2;
inline constexpr int kDate = 3;
inline constexpr int kTime = 4;
inline constexpr int kAsk = 5;
inline constexpr int kBid = 7;
inline constexpr int kLast = 22;
inline constexpr int kTradingTime = 24;
inline constexpr int kTradingDate = 27;
}  // namespace col

inline constexpr int kColumnCount = 39;

/// One CSV row, positional. An empty string is NULL; "NULL" is a literal.
class RawRecord {
 public:
  RawRecord() = default;

  const std::string& at(int column) const { return columns_.at(static_cast<std::size_t>(column - 1)); }
  std::string& at(int column) { return columns_.at(static_cast<std::size_t>(column - 1)); }
  bool is_null(int column) const { return at(column).empty(); }

  const std::array<std::string, kColumnCount>& columns() const noexcept { return columns_; }

  friend bool operator==(const RawRecord&, const RawRecord&) = default;

 private:
  std::array<std::string, kColumnCount> columns_;
};

/// Throws Error(FieldCountMismatch) unless the line has exactly 39 fields.
RawRecord parse_csv_line(std::string_view line);
std::string format_csv_line(const RawRecord& record);

/// TickEvent iff Last, Trading time and Trading date are non-NULL and Last is
/// a positive decimal; nullopt for any other (non-price) event. Throws
/// Error(MalformedField) when a populated field of a price row fails to parse.
std::optional<TickEvent> classify(const RawRecord& record);

/// The header line written when header output is enabled.
std::string csv_header_line();

struct CsvReadOptions {
  /// Skip a first line starting with "ID." when set.
  bool header = false;
};

/// Reads one CSV file or every *.csv in a directory (lexicographic order).
/// Throws Error(Unreadable) if the path is missing or holds no rows.
std::vector<RawRecord> read_records(const std::filesystem::path& path, CsvReadOptions options = {});

/// Price events of `path` in file order; non-price rows are skipped.
std::vector<TickEvent> load_price_events(const std::filesystem::path& path, CsvReadOptions options = {});

}  // namespace tickcep
