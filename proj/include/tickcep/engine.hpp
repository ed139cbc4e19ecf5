#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "tickcep/indicators.hpp"
#include "tickcep/marketdata.hpp"
#include "tickcep/series.hpp"
#include "tickcep/windowing.hpp"

namespace tickcep {

namespace detail {
class WorkerPool;
}

enum class Retention : std::uint8_t { Off, Full };

struct EngineConfig {
  WindowSpec window;
  bool suppress_first_window_advice = false;
  Retention retention = Retention::Off;
  unsigned shards = default_shards();

  static unsigned default_shards() noexcept;

  /// `key = value` lines; '#' starts a comment. Keys: window_minutes,
  /// suppress_first_window_advice, retention (off|full), shards.
  /// Throws Error(BadConfig) on unknown keys or bad values.
  static EngineConfig parse(std::string_view text);
  static EngineConfig load(const std::filesystem::path& path);
};

/// The most recent three advisories of a symbol, oldest first.
class AdvisoryRing {
 public:
  static constexpr std::size_t kCapacity = 3;

  void push(CrossoverAdvisory advisory);
  std::size_t size() const noexcept { return size_; }
  std::vector<CrossoverAdvisory> to_vector() const;

  friend bool operator==(const AdvisoryRing& a, const AdvisoryRing& b) {
    return a.to_vector() == b.to_vector();
  }

 private:
  std::array<CrossoverAdvisory, kCapacity> slots_{};
  std::size_t next_ = 0;
  std::size_t size_ = 0;
};

struct SymbolState {
  std::optional<WindowId> last_window;  // the open window
  std::optional<double> pending_close;  // last price seen in the open window
  EmaPair prev_pair;                    // window before the last evaluated one
  EmaPair curr_pair;                    // last evaluated window
  std::uint64_t evaluated_windows = 0;
  AdvisoryRing advisories;

  friend bool operator==(const SymbolState&, const SymbolState&) = default;
};

struct IngestOutcome {
  enum class Kind : std::uint8_t { Opened, Updated, Closed, Late };
  Kind kind = Kind::Opened;
  /// Set when the event closed the previously open window.
  std::optional<SeriesRecord> closed;
  std::optional<CrossoverAdvisory> advisory;
};

/// Applies one price event to a symbol's state. A later window evaluates the
/// open one (EMA step plus crossover check) before opening the new one; an
/// event from an earlier window is dropped.
IngestOutcome ingest_event(SymbolState& state, const TickEvent& event, const EngineConfig& config);

struct Batch {
  std::uint64_t seq_id = 0;
  std::vector<TickEvent> events;
  std::vector<Symbol> lookup_symbols;
  bool last = false;
};

struct BatchResult {
  std::vector<std::pair<Symbol, EmaPair>> q1;
  std::vector<std::pair<Symbol, std::vector<CrossoverAdvisory>>> q2;
};

/// Streaming Q1/Q2 engine. Every symbol is tracked whether or not it is
/// subscribed; results are reported for the current subscription only.
///
/// State is sharded by symbol hash. Within a batch, events of one symbol are
/// applied in arrival order, and `process_batch` returns only after the whole
/// batch has been applied. An Engine itself is not safe for concurrent calls.
class Engine {
 public:
  explicit Engine(EngineConfig config);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  const EngineConfig& config() const noexcept { return config_; }

  /// Replaces the subscription with the batch's lookup symbols, applies its
  /// events, then answers both queries for the new subscription.
  BatchResult process_batch(const Batch& batch);

  /// Throws Error(RetentionDisabled) unless retention is full. Unseen
  /// symbols give an empty series.
  std::vector<SeriesRecord> snapshot_series(const Symbol& symbol) const;
  /// Every symbol's series; same retention requirement.
  SeriesTable series_table() const;

  const SymbolState* state(const Symbol& symbol) const;
  /// All tracked symbols, sorted.
  std::vector<std::pair<Symbol, SymbolState>> states() const;

  std::uint64_t late_events() const noexcept;
  std::uint64_t events_processed() const noexcept { return events_processed_; }

 private:
  struct Shard;

  std::size_t shard_of(const Symbol& symbol) const noexcept;
  void apply(Shard& shard, const TickEvent& event);

  EngineConfig config_;
  std::vector<Shard> shards_;
  std::unique_ptr<detail::WorkerPool> pool_;
  std::vector<Symbol> subscription_;
  std::uint64_t events_processed_ = 0;
};

}  // namespace tickcep
