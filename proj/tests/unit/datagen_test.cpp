#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tickcep/datagen.hpp"
#include "tickcep/digest.hpp"
#include "tickcep/error.hpp"

namespace tickcep {
namespace {

using datagen::GenConfig;

GenConfig small(std::uint64_t events = 50'000, std::size_t symbols = 800) {
  GenConfig c;
  c.total_events = events;
  c.n_symbols = symbols;
  c.days = 1;
  return c;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Datagen, SingleSymbolTinyRun) {
  auto cfg = small(10, 1);
  const auto events = datagen::generate_events(cfg);
  ASSERT_EQ(events.size(), 10u);
  for (std::size_t i = 1; i < events.size(); ++i) {
    EXPECT_EQ(events[i].symbol, events[0].symbol);
    EXPECT_LE(events[i - 1].trading_ts, events[i].trading_ts);
  }
}

TEST(Datagen, EventsAreOrderedAndInRange) {
  auto cfg = small();
  cfg.days = 3;
  const auto events = datagen::generate_events(cfg);
  EXPECT_EQ(events.size(), cfg.total_events);
  std::set<Symbol> symbols;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0) ASSERT_LE(events[i - 1].trading_ts, events[i].trading_ts);
    ASSERT_TRUE(events[i].last_price.is_positive());
    ASSERT_EQ(events[i].last_price.scale(), 4);
    ASSERT_EQ(events[i].trading_ts.time_of_day_ns % kCsvTimeResolutionNs, 0);
    ASSERT_GE(events[i].trading_ts.date, cfg.start_date);
    ASSERT_LT(events[i].trading_ts.date, cfg.start_date + std::chrono::days(cfg.days));
    symbols.insert(events[i].symbol);
  }
  EXPECT_LE(symbols.size(), cfg.n_symbols);
}

TEST(Datagen, WeekendsAreEmpty) {
  auto cfg = small(20'000, 100);
  cfg.days = 7;
  for (const auto& e : datagen::generate_events(cfg)) {
    const std::chrono::weekday wd{e.trading_ts.date};
    ASSERT_NE(wd, std::chrono::Saturday);
    ASSERT_NE(wd, std::chrono::Sunday);
  }
}

TEST(Datagen, SameSeedSameBytes) {
  testing::TempDir a("gen-a"), b("gen-b"), c("gen-c");
  auto cfg = small(20'000, 300);
  cfg.full = true;
  cfg.days = 2;
  const auto ma = datagen::write_dataset(cfg, a.path());
  const auto mb = datagen::write_dataset(cfg, b.path());
  EXPECT_EQ(ma, mb);
  for (const auto& file : ma["files"]) {
    const auto name = file["name"].get<std::string>();
    const auto bytes = slurp(a.path() / name);
    EXPECT_EQ(bytes, slurp(b.path() / name));
    Sha256 digest;
    digest.update(bytes);
    EXPECT_EQ(digest.hex(), file["sha256"].get<std::string>());
  }
  cfg.seed = 2;
  EXPECT_NE(datagen::write_dataset(cfg, c.path())["files"], ma["files"]);
}

TEST(Datagen, FilesRoundTripThroughReader) {
  testing::TempDir dir("gen-rt");
  auto cfg = small(5'000, 50);
  cfg.full = true;
  cfg.header = true;
  const auto manifest = datagen::write_dataset(cfg, dir.path());
  const auto records = read_records(dir.path(), CsvReadOptions{true});
  std::size_t price = 0;
  for (const auto& r : records) price += classify(r).has_value();
  EXPECT_EQ(price, 5'000u);
  EXPECT_GT(records.size(), price);
  EXPECT_EQ(manifest["price_events"].get<std::uint64_t>(), 5'000u);
  EXPECT_EQ(load_price_events(dir.path(), CsvReadOptions{true}), datagen::generate_events(cfg));
}

TEST(Datagen, ZipfProfileHasLongTail) {
  const auto events = datagen::generate_events(small(200'000, 2000));
  const auto report = datagen::validate_distribution(events);
  EXPECT_GE(report.top1pct_share, 0.30);
  EXPECT_TRUE(report.slope_ok) << report.rank_frequency_slope;
  EXPECT_TRUE(report.exchange_ok);
  EXPECT_TRUE(report.type_ok);
}

TEST(Datagen, UniformControlFailsTailChecks) {
  auto cfg = small(200'000, 2000);
  cfg.zipf_exponent = 0.0;
  const auto report = datagen::validate_distribution(datagen::generate_events(cfg));
  EXPECT_FALSE(report.slope_ok);
  EXPECT_FALSE(report.long_tail_ok);
  EXPECT_FALSE(report.ok());
}

TEST(Datagen, IntensityCurveShape) {
  const datagen::IntensityCurve curve;
  const auto& p = curve.weekday_profile();
  double total = 0.0, off = 0.0;
  for (int m = 0; m < datagen::IntensityCurve::kMinutesPerDay; ++m) {
    total += p[static_cast<std::size_t>(m)];
    if (m < datagen::IntensityCurve::kOpenMinute || m >= datagen::IntensityCurve::kCloseMinute) {
      off += p[static_cast<std::size_t>(m)];
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_NEAR(off, 0.005, 1e-9);
  EXPECT_GT(p[9 * 60 + 1], p[13 * 60]);
  EXPECT_GT(p[17 * 60 + 25], p[13 * 60]);
  EXPECT_EQ(curve.weight(0, 600), 0.0);
  EXPECT_EQ(curve.weight(6, 600), 0.0);
  EXPECT_GT(curve.weight(3, 600), 0.0);
}

TEST(Datagen, BadConfigAndUnreadable) {
  auto cfg = small();
  cfg.n_symbols = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small();
  cfg.exchange_mix.nl = 0.5;
  EXPECT_THROW(cfg.validate(), Error);
  testing::TempDir dir("gen-empty");
  std::ofstream(dir.path() / "empty.csv").flush();
  try {
    datagen::validate_distribution(dir.path() / "empty.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Unreadable);
  }
}

}  // namespace
}  // namespace tickcep
