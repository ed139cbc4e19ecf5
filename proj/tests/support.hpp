#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tickcep/decimal.hpp"
#include "tickcep/marketdata.hpp"

namespace tickcep::testing {

inline constexpr std::int64_t kMinute = 60 * kNanosPerSecond;

/// Epoch ns of 2021-11-08 (a Monday) plus `day` days, at hh:mm:ss.
inline std::int64_t at(int day, int hh, int mm, int ss = 0) {
  const auto date = std::chrono::sys_days(std::chrono::year(2021) / std::chrono::November / 8) + std::chrono::days(day);
  return static_cast<std::int64_t>(date.time_since_epoch().count()) * kNanosPerDay +
         ((hh * 60 + mm) * 60 + ss) * kNanosPerSecond;
}

inline TickEvent tick(std::string_view symbol, std::int64_t epoch_ns, std::string_view price) {
  return TickEvent{Symbol::parse(symbol), SecurityType::Equity, *Decimal::parse(price),
                   TickTimestamp::from_epoch_ns(epoch_ns)};
}

inline TickEvent tick(std::string_view symbol, std::int64_t epoch_ns, double price) {
  const auto mantissa = static_cast<std::int64_t>(std::llround(price * 10000.0));
  return TickEvent{Symbol::parse(symbol), SecurityType::Equity, Decimal(mantissa, 4),
                   TickTimestamp::from_epoch_ns(epoch_ns)};
}

/// Random stream over `symbols` symbols spanning about `minutes` minutes:
/// mostly increasing timestamps with a sprinkle of late events.
inline std::vector<TickEvent> random_stream(std::uint64_t seed, std::size_t n, int symbols, int minutes,
                                            double late_share = 0.01) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  const char* exchanges[] = {"FR", "NL", "ETR"};
  for (int i = 0; i < symbols; ++i) names.push_back("S" + std::to_string(i) + "." + exchanges[i % 3]);
  std::vector<double> prices(static_cast<std::size_t>(symbols), 100.0);
  std::uniform_int_distribution<int> pick(0, symbols - 1);
  std::normal_distribution<double> step(0.0, 0.004);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::int64_t start = at(0, 8, 0);
  const std::int64_t span = static_cast<std::int64_t>(minutes) * kMinute;
  std::vector<TickEvent> events;
  events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = static_cast<std::size_t>(pick(rng));
    prices[s] *= std::exp(step(rng));
    std::int64_t ts = start + static_cast<std::int64_t>(static_cast<double>(span) * static_cast<double>(i) / static_cast<double>(n));
    ts -= ts % kCsvTimeResolutionNs;
    if (unit(rng) < late_share) ts -= 12 * kMinute;
    events.push_back(tick(names[s], ts, prices[s]));
  }
  return events;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / (std::string("tickcep-") + std::string(tag) + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace tickcep::testing
