#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "tickcep/marketdata.hpp"

namespace tickcep::datagen {

/// Event-share targets per exchange.
struct ExchangeMix {
  double etr = 0.54;
  double fr = 0.36;
  double nl = 0.10;
};

/// Per-symbol geometric random walk: log-uniform start price, per-event
/// log-return volatility drawn once per symbol.
struct PriceModel {
  double start_min = 5.0;
  double start_max = 500.0;
  double volatility_min = 0.0005;
  double volatility_max = 0.003;
};

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t n_symbols = 5504;
  int days = 7;
  std::chrono::sys_days start_date =
      std::chrono::sys_days(std::chrono::year(2021) / std::chrono::November / 8);  // a Monday
  std::uint64_t total_events = 1'000'000;
  ExchangeMix exchange_mix;
  double index_share = 0.82;
  /// Pinned calibration constant for the rank-frequency law.
  double zipf_exponent = 1.2;
  PriceModel price;
  /// Share of weekday events outside trading hours.
  double off_hours_share = 0.005;
  /// Also emit non-price (bid/ask) rows, each following a price row with
  /// probability `non_price_probability`.
  bool full = false;
  double non_price_probability = 0.5;
  bool header = false;

  /// Throws Error(BadConfig).
  void validate() const;
};

void to_json(nlohmann::json& j, const GenConfig& c);

/// Per-minute activity weights for one day of the week. Weekdays follow the
/// trading session (spike at the 09:00 open, midday lull, spike into the
/// 17:30 close, thin trickle outside hours); weekends are zero.
class IntensityCurve {
 public:
  static constexpr int kMinutesPerDay = 1440;
  static constexpr int kOpenMinute = 9 * 60;
  static constexpr int kCloseMinute = 17 * 60 + 35;  // end of the closing auction

  explicit IntensityCurve(double off_hours_share = 0.005);

  /// Weight of `minute` on a day with the given weekday (0 = Sunday).
  double weight(unsigned weekday, int minute) const noexcept;
  /// Normalized weekday profile (sums to 1).
  const std::array<double, kMinutesPerDay>& weekday_profile() const noexcept { return weekday_; }

 private:
  std::array<double, kMinutesPerDay> weekday_{};
};

struct UniverseEntry {
  Symbol symbol;
  SecurityType type = SecurityType::Equity;
  double probability = 0.0;  // event share under the Zipf law
  double start_price = 0.0;
  double volatility = 0.0;
};

/// Symbols with Zipf probabilities (rank order is shuffled against names).
/// Exchange and type are assigned in rank order to whichever category is
/// furthest below its event-share target.
std::vector<UniverseEntry> make_universe(const GenConfig& config);

/// Streams the generated rows in global timestamp order. Deterministic in the
/// config. `day_index` is the 0-based day of the row.
void generate(const GenConfig& config, const std::function<void(int day_index, const RawRecord&)>& sink);

/// Price events only, in timestamp order.
std::vector<TickEvent> generate_events(const GenConfig& config);

/// Writes YYYY-MM-DD.csv per day plus manifest.json (config echo, per-file
/// SHA-256 and row counts) and returns the manifest.
nlohmann::json write_dataset(const GenConfig& config, const std::filesystem::path& out_dir);

struct DistributionTargets {
  ExchangeMix exchange_mix;
  double index_share = 0.82;
  double zipf_exponent = 1.2;
  double share_tolerance = 0.02;   // absolute
  double slope_tolerance = 0.15;
  double min_top1pct_share = 0.30;
};

struct DistributionReport {
  std::uint64_t events = 0;
  std::size_t symbols = 0;
  ExchangeMix exchange_share;
  double index_share = 0.0;
  double rank_frequency_slope = 0.0;
  std::size_t slope_fit_ranks = 0;
  double top1pct_share = 0.0;
  double diurnal_correlation = 0.0;

  bool exchange_ok = false;
  bool type_ok = false;
  bool slope_ok = false;
  bool long_tail_ok = false;

  bool ok() const noexcept { return exchange_ok && type_ok && slope_ok && long_tail_ok; }
};

void to_json(nlohmann::json& j, const DistributionReport& r);

/// Only ranks whose count reaches this enter the log-log fit; sparser ranks
/// are dominated by sampling noise.
inline constexpr std::uint64_t kMinCountForSlopeFit = 30;

DistributionReport validate_distribution(std::span<const TickEvent> events, const DistributionTargets& targets = {});
/// Throws Error(Unreadable) for a missing or empty file.
DistributionReport validate_distribution(const std::filesystem::path& path, const DistributionTargets& targets = {},
                                         CsvReadOptions options = {});

}  // namespace tickcep::datagen
