#include "tickcep/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include <fmt/format.h>

#include "tickcep/digest.hpp"
#include "tickcep/error.hpp"

namespace tickcep::datagen {
namespace {

enum Stream : std::uint32_t { kUniverse = 1, kTimes = 2, kSymbols = 3, kPrices = 4, kFull = 5 };

std::mt19937_64 stream_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string base_name(std::size_t index) {
  // Bijective base-26 with at least three letters: AAA, AAB, ...
  std::size_t n = index + 26 * 26 + 26 + 1;
  std::string name;
  while (n > 0) {
    --n;
    name.insert(name.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return name;
}

/// Index of the category whose assigned mass is furthest below its target.
std::size_t largest_deficit(std::span<const double> target, std::span<const double> assigned) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < target.size(); ++i) {
    if (target[i] - assigned[i] > target[best] - assigned[best]) best = i;
  }
  return best;
}

struct Tick {
  std::int64_t epoch_ns;
  std::uint32_t symbol;
};

unsigned weekday_of(std::chrono::sys_days day) {
  return std::chrono::weekday(day).c_encoding();
}

Decimal to_price(double value) {
  return Decimal(std::max<std::int64_t>(1, std::llround(value * 1e4)), 4);
}

}  // namespace

void GenConfig::validate() const {
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  const double mix = exchange_mix.etr + exchange_mix.fr + exchange_mix.nl;
  if (n_symbols == 0) throw Error(Errc::BadConfig, "n_symbols must be positive");
  if (days <= 0) throw Error(Errc::BadConfig, "days must be positive");
  if (std::fabs(mix - 1.0) > 1e-9) throw Error(Errc::BadConfig, fmt::format("exchange mix sums to {}", mix));
  if (!in_unit(exchange_mix.etr) || !in_unit(exchange_mix.fr) || !in_unit(exchange_mix.nl) ||
      !in_unit(index_share) || !in_unit(off_hours_share) || !in_unit(non_price_probability)) {
    throw Error(Errc::BadConfig, "shares must lie in [0, 1]");
  }
  if (!(zipf_exponent >= 0.0)) throw Error(Errc::BadConfig, "zipf exponent must be non-negative");
  if (!(price.start_min > 0.0) || price.start_max < price.start_min || price.volatility_min < 0.0 ||
      price.volatility_max < price.volatility_min) {
    throw Error(Errc::BadConfig, "bad price model");
  }
}

void to_json(nlohmann::json& j, const GenConfig& c) {
  j = nlohmann::json{{"seed", c.seed},
                     {"n_symbols", c.n_symbols},
                     {"days", c.days},
                     {"start_date", format_csv_date(c.start_date)},
                     {"total_events", c.total_events},
                     {"exchange_mix", {{"ETR", c.exchange_mix.etr}, {"FR", c.exchange_mix.fr}, {"NL", c.exchange_mix.nl}}},
                     {"index_share", c.index_share},
                     {"zipf_exponent", c.zipf_exponent},
                     {"price_model",
                      {{"start_min", c.price.start_min},
                       {"start_max", c.price.start_max},
                       {"volatility_min", c.price.volatility_min},
                       {"volatility_max", c.price.volatility_max}}},
                     {"off_hours_share", c.off_hours_share},
                     {"full", c.full},
                     {"non_price_probability", c.non_price_probability},
                     {"header", c.header}};
}

IntensityCurve::IntensityCurve(double off_hours_share) {
  // Calibration constants: relative activity during the session, before
  // normalization.
  std::array<double, kMinutesPerDay> session{};
  for (int m = kOpenMinute; m < kCloseMinute; ++m) {
    double w = 1.0;
    if (m < kOpenMinute + 30) {
      w = 4.0 - 2.8 * (m - kOpenMinute) / 30.0;  // opening spike decays to ~1.2
    } else if (m >= 11 * 60 + 30 && m < 14 * 60) {
      w = 0.6;  // midday lull
    } else if (m >= 15 * 60 + 30 && m < 16 * 60) {
      w = 1.3;
    } else if (m >= 16 * 60 && m < 17 * 60 + 25) {
      w = 1.0 + (m - 16 * 60) / 85.0;  // build-up into the close
    } else if (m >= 17 * 60 + 25) {
      w = 5.0;  // closing auction
    }
    session[static_cast<std::size_t>(m)] = w;
  }
  const double session_total = std::accumulate(session.begin(), session.end(), 0.0);
  const int off_minutes = kMinutesPerDay - (kCloseMinute - kOpenMinute);
  for (int m = 0; m < kMinutesPerDay; ++m) {
    const bool in_session = m >= kOpenMinute && m < kCloseMinute;
    weekday_[static_cast<std::size_t>(m)] =
        in_session ? (1.0 - off_hours_share) * session[static_cast<std::size_t>(m)] / session_total
                   : off_hours_share / off_minutes;
  }
}

double IntensityCurve::weight(unsigned weekday, int minute) const noexcept {
  if (weekday == 0 || weekday == 6) return 0.0;
  return weekday_[static_cast<std::size_t>(minute)];
}

std::vector<UniverseEntry> make_universe(const GenConfig& config) {
  config.validate();
  auto rng = stream_rng(config.seed, kUniverse);
  const std::size_t n = config.n_symbols;

  std::vector<double> weights(n);
  for (std::size_t r = 0; r < n; ++r) weights[r] = std::pow(static_cast<double>(r + 1), -config.zipf_exponent);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  std::vector<std::size_t> name_of_rank(n);
  std::iota(name_of_rank.begin(), name_of_rank.end(), 0);
  std::shuffle(name_of_rank.begin(), name_of_rank.end(), rng);

  const std::array<double, 3> exchange_target{config.exchange_mix.etr, config.exchange_mix.fr, config.exchange_mix.nl};
  constexpr std::array<Exchange, 3> kExchanges{Exchange::ETR, Exchange::FR, Exchange::NL};
  const std::array<double, 2> type_target{config.index_share, 1.0 - config.index_share};
  constexpr std::array<SecurityType, 2> kTypes{SecurityType::Index, SecurityType::Equity};
  std::array<double, 3> exchange_mass{};
  std::array<double, 2> type_mass{};

  const double log_min = std::log(config.price.start_min);
  const double log_max = std::log(config.price.start_max);

  std::vector<UniverseEntry> universe(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto& entry = universe[r];
    entry.probability = weights[r] / total;
    const auto e = largest_deficit(exchange_target, exchange_mass);
    const auto t = largest_deficit(type_target, type_mass);
    exchange_mass[e] += entry.probability;
    type_mass[t] += entry.probability;
    entry.symbol = Symbol{base_name(name_of_rank[r]), kExchanges[e]};
    entry.type = kTypes[t];
    entry.start_price = std::exp(log_min + (log_max - log_min) * uniform01(rng));
    entry.volatility = config.price.volatility_min +
                       (config.price.volatility_max - config.price.volatility_min) * uniform01(rng);
  }
  return universe;
}

void generate(const GenConfig& config, const std::function<void(int, const RawRecord&)>& sink) {
  const auto universe = make_universe(config);
  const IntensityCurve curve(config.off_hours_share);

  // Cumulative (day, minute) activity over the whole period.
  std::vector<double> cumulative;
  cumulative.reserve(static_cast<std::size_t>(config.days) * IntensityCurve::kMinutesPerDay);
  double acc = 0.0;
  for (int d = 0; d < config.days; ++d) {
    const unsigned wd = weekday_of(config.start_date + std::chrono::days(d));
    for (int m = 0; m < IntensityCurve::kMinutesPerDay; ++m) {
      acc += curve.weight(wd, m);
      cumulative.push_back(acc);
    }
  }
  if (config.total_events > 0 && !(acc > 0.0)) {
    throw Error(Errc::BadConfig, "no trading day in the configured period");
  }

  std::vector<double> symbol_cdf(universe.size());
  double p = 0.0;
  for (std::size_t i = 0; i < universe.size(); ++i) symbol_cdf[i] = (p += universe[i].probability);

  auto time_rng = stream_rng(config.seed, kTimes);
  auto symbol_rng = stream_rng(config.seed, kSymbols);
  constexpr std::int64_t kSlotsPerMinute = 60 * kNanosPerSecond / kCsvTimeResolutionNs;
  const std::int64_t origin_ns = static_cast<std::int64_t>(config.start_date.time_since_epoch().count()) * kNanosPerDay;

  std::vector<Tick> ticks(config.total_events);
  for (auto& tick : ticks) {
    const double u = uniform01(time_rng) * acc;
    const auto bucket = static_cast<std::int64_t>(
        std::min<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin(),
                              cumulative.size() - 1));
    const auto slot = static_cast<std::int64_t>(time_rng() % static_cast<std::uint64_t>(kSlotsPerMinute));
    tick.epoch_ns = origin_ns + bucket * 60 * kNanosPerSecond + slot * kCsvTimeResolutionNs;
    const double v = uniform01(symbol_rng) * p;
    tick.symbol = static_cast<std::uint32_t>(
        std::min<std::size_t>(std::upper_bound(symbol_cdf.begin(), symbol_cdf.end(), v) - symbol_cdf.begin(),
                              symbol_cdf.size() - 1));
  }
  std::stable_sort(ticks.begin(), ticks.end(), [](const Tick& a, const Tick& b) { return a.epoch_ns < b.epoch_ns; });

  auto price_rng = stream_rng(config.seed, kPrices);
  auto full_rng = stream_rng(config.seed, kFull);
  std::normal_distribution<double> shock(0.0, 1.0);
  std::vector<double> price(universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i) price[i] = universe[i].start_price;

  RawRecord record;
  for (const auto& tick : ticks) {
    const auto& entry = universe[tick.symbol];
    double& current = price[tick.symbol];
    current *= std::exp(entry.volatility * shock(price_rng));

    const auto ts = TickTimestamp::from_epoch_ns(tick.epoch_ns);
    const auto date = format_csv_date(ts.date);
    const auto time = format_csv_time(ts.time_of_day_ns);
    const int day_index = static_cast<int>((tick.epoch_ns - origin_ns) / kNanosPerDay);

    record = RawRecord{};
    record.at(col::kId) = entry.symbol.str();
    record.at(col::kSecType) = std::string(1, to_char(entry.type));
    record.at(col::kDate) = date;
    record.at(col::kTime) = time;
    record.at(col::kLast) = to_price(current).to_string();
    record.at(col::kTradingTime) = time;
    record.at(col::kTradingDate) = date;
    sink(day_index, record);

    if (config.full && uniform01(full_rng) < config.non_price_probability) {
      RawRecord quote;
      quote.at(col::kId) = entry.symbol.str();
      quote.at(col::kSecType) = std::string(1, to_char(entry.type));
      quote.at(col::kDate) = date;
      quote.at(col::kTime) = time;
      quote.at(col::kAsk) = to_price(current * 1.0005).to_string();
      quote.at(col::kBid) = to_price(current * 0.9995).to_string();
      quote.at(col::kTradingTime) = time;
      sink(day_index, quote);
    }
  }
}

std::vector<TickEvent> generate_events(const GenConfig& config) {
  std::vector<TickEvent> events;
  events.reserve(config.total_events);
  generate(config, [&](int, const RawRecord& record) {
    if (auto event = classify(record)) events.push_back(std::move(*event));
  });
  return events;
}

nlohmann::json write_dataset(const GenConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  std::filesystem::create_directories(out_dir);

  struct DayFile {
    std::string name;
    std::ofstream out;
    Sha256 digest;
    std::uint64_t rows = 0;
    std::uint64_t price_events = 0;
  };
  std::vector<DayFile> files(static_cast<std::size_t>(config.days));
  for (int d = 0; d < config.days; ++d) {
    auto& file = files[static_cast<std::size_t>(d)];
    const std::chrono::year_month_day ymd{config.start_date + std::chrono::days(d)};
    file.name = fmt::format("{:04}-{:02}-{:02}.csv", static_cast<int>(ymd.year()),
                            static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    file.out.open(out_dir / file.name, std::ios::binary | std::ios::trunc);
    if (!file.out) throw Error(Errc::Unreadable, fmt::format("cannot write {}", (out_dir / file.name).string()));
    if (config.header) {
      const auto line = csv_header_line() + "\n";
      file.out << line;
      file.digest.update(line);
    }
  }

  std::string line;
  generate(config, [&](int day, const RawRecord& record) {
    auto& file = files.at(static_cast<std::size_t>(day));
    line = format_csv_line(record);
    line.push_back('\n');
    file.out << line;
    file.digest.update(line);
    ++file.rows;
    if (!record.is_null(col::kLast)) ++file.price_events;
  });

  nlohmann::json manifest;
  manifest["config"] = config;
  manifest["files"] = nlohmann::json::array();
  std::uint64_t total = 0;
  for (auto& file : files) {
    file.out.close();
    manifest["files"].push_back({{"name", file.name},
                                 {"sha256", file.digest.hex()},
                                 {"rows", file.rows},
                                 {"price_events", file.price_events}});
    total += file.price_events;
  }
  manifest["price_events"] = total;
  std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';
  return manifest;
}

void to_json(nlohmann::json& j, const DistributionReport& r) {
  j = nlohmann::json{{"events", r.events},
                     {"symbols", r.symbols},
                     {"exchange_share", {{"ETR", r.exchange_share.etr}, {"FR", r.exchange_share.fr}, {"NL", r.exchange_share.nl}}},
                     {"index_share", r.index_share},
                     {"rank_frequency_slope", r.rank_frequency_slope},
                     {"slope_fit_ranks", r.slope_fit_ranks},
                     {"top1pct_share", r.top1pct_share},
                     {"diurnal_correlation", r.diurnal_correlation},
                     {"checks",
                      {{"exchange", r.exchange_ok}, {"type", r.type_ok}, {"slope", r.slope_ok}, {"long_tail", r.long_tail_ok}}},
                     {"ok", r.ok()}};
}

DistributionReport validate_distribution(std::span<const TickEvent> events, const DistributionTargets& targets) {
  DistributionReport report;
  report.events = events.size();
  if (events.empty()) return report;

  std::unordered_map<Symbol, std::uint64_t, SymbolHash> per_symbol;
  std::array<std::uint64_t, 3> per_exchange{};
  std::uint64_t indices = 0;
  std::array<double, IntensityCurve::kMinutesPerDay> minutes{};
  for (const auto& e : events) {
    ++per_symbol[e.symbol];
    ++per_exchange[static_cast<std::size_t>(e.symbol.exchange)];
    if (e.sec_type == SecurityType::Index) ++indices;
    const unsigned wd = weekday_of(e.trading_ts.date);
    if (wd != 0 && wd != 6) minutes[static_cast<std::size_t>(e.trading_ts.time_of_day_ns / (60 * kNanosPerSecond))] += 1.0;
  }
  const auto n = static_cast<double>(events.size());
  report.symbols = per_symbol.size();
  report.exchange_share = ExchangeMix{per_exchange[static_cast<std::size_t>(Exchange::ETR)] / n,
                                      per_exchange[static_cast<std::size_t>(Exchange::FR)] / n,
                                      per_exchange[static_cast<std::size_t>(Exchange::NL)] / n};
  report.index_share = static_cast<double>(indices) / n;

  std::vector<std::uint64_t> counts;
  counts.reserve(per_symbol.size());
  for (const auto& [symbol, count] : per_symbol) counts.push_back(count);
  std::sort(counts.begin(), counts.end(), std::greater<>());

  const std::size_t top = std::max<std::size_t>(1, (counts.size() + 99) / 100);
  report.top1pct_share = static_cast<double>(std::accumulate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(top), std::uint64_t{0})) / n;

  // Least-squares slope of log(count) against log(rank).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (; m < counts.size() && counts[m] >= kMinCountForSlopeFit; ++m) {
    const double x = std::log(static_cast<double>(m + 1));
    const double y = std::log(static_cast<double>(counts[m]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.slope_fit_ranks = m;
  if (m >= 2) {
    const double denom = m * sxx - sx * sx;
    report.rank_frequency_slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  }

  // Pearson correlation of the weekday minute histogram with the model curve.
  const IntensityCurve curve;
  const auto& model = curve.weekday_profile();
  const double mean_h = std::accumulate(minutes.begin(), minutes.end(), 0.0) / minutes.size();
  const double mean_m = std::accumulate(model.begin(), model.end(), 0.0) / model.size();
  double cov = 0, var_h = 0, var_m = 0;
  for (std::size_t i = 0; i < minutes.size(); ++i) {
    cov += (minutes[i] - mean_h) * (model[i] - mean_m);
    var_h += (minutes[i] - mean_h) * (minutes[i] - mean_h);
    var_m += (model[i] - mean_m) * (model[i] - mean_m);
  }
  report.diurnal_correlation = var_h > 0 && var_m > 0 ? cov / std::sqrt(var_h * var_m) : 0.0;

  const auto within = [&](double actual, double target) { return std::fabs(actual - target) <= targets.share_tolerance; };
  report.exchange_ok = within(report.exchange_share.etr, targets.exchange_mix.etr) &&
                       within(report.exchange_share.fr, targets.exchange_mix.fr) &&
                       within(report.exchange_share.nl, targets.exchange_mix.nl);
  report.type_ok = within(report.index_share, targets.index_share);
  report.slope_ok = m >= 2 && std::fabs(report.rank_frequency_slope + targets.zipf_exponent) <= targets.slope_tolerance;
  report.long_tail_ok = report.top1pct_share >= targets.min_top1pct_share;
  return report;
}

DistributionReport validate_distribution(const std::filesystem::path& path, const DistributionTargets& targets,
                                         CsvReadOptions options) {
  const auto events = load_price_events(path, options);
  if (events.empty()) throw Error(Errc::Unreadable, fmt::format("no price events in {}", path.string()));
  return validate_distribution(events, targets);
}

}  // namespace tickcep::datagen
