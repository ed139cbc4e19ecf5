#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tickcep/marketdata.hpp"
#include "tickcep/scoring.hpp"
#include "tickcep/subscriptions.hpp"
#include "tickcep/wire.hpp"

namespace tickcep {

/// Immutable replay source shared by all sessions.
struct Dataset {
  std::vector<TickEvent> events;
  std::vector<Symbol> universe;  // distinct symbols, sorted

  static std::shared_ptr<const Dataset> from_events(std::vector<TickEvent> events);
};

struct HarnessConfig {
  std::size_t max_sessions = 64;  // live (not yet ended) sessions
  SubscriptionConfig subscriptions;
  std::chrono::nanoseconds session_timeout = std::chrono::minutes(10);
  /// 0 serves batches as fast as they are requested; s > 0 spaces batches by
  /// their event-time gap divided by s.
  double pace_speedup = 0.0;
  /// When set, override what clients ask for in create_benchmark.
  std::optional<std::uint64_t> pinned_seed;
  std::optional<std::uint32_t> pinned_batch_size;
};

/// Returns monotonic nanoseconds.
using MonotonicClock = std::function<std::uint64_t()>;
std::uint64_t steady_now_ns();

/// Checksums that pin down what a session was served.
struct ReplayManifest {
  std::uint64_t benchmark_id = 0;
  std::string name;
  std::uint64_t dataset_seed = 0;
  std::uint32_t batch_size = 0;
  std::uint64_t batches = 0;
  std::uint64_t events = 0;
  std::string batch_stream_sha256;
  std::string subscription_sha256;

  friend bool operator==(const ReplayManifest&, const ReplayManifest&) = default;
};

void to_json(nlohmann::json& j, const ReplayManifest& m);
void to_json(nlohmann::json& j, const SessionSummary& s);
void from_json(const nlohmann::json& j, SessionSummary& s);

enum class SessionState : std::uint8_t { Created, Running, Ended };

/// Benchmark server core: session lifecycle, batch replay, latency ledger.
///
/// Sessions walk Created -> Running -> Ended. A session holds at most one
/// delivered batch without both results; the next batch is refused until
/// both arrive. Calls for different sessions may run concurrently; calls for
/// one session are serialized.
class Harness {
 public:
  using SummarySink = std::function<void(const SessionSummary&, const ReplayManifest&)>;

  explicit Harness(std::shared_ptr<const Dataset> dataset, HarnessConfig config = {},
                   MonotonicClock clock = steady_now_ns);
  ~Harness();

  wire::BenchmarkHandle create_benchmark(const wire::BenchmarkConfig& config);
  void start_benchmark(const wire::BenchmarkHandle& handle);
  wire::WireBatch next_batch(const wire::BenchmarkHandle& handle);
  void result_q1(std::string_view token, const wire::WireResultQ1& result);
  void result_q2(std::string_view token, const wire::WireResultQ2& result);
  SessionSummary end_benchmark(const wire::BenchmarkHandle& handle);

  /// Decodes one request frame body and returns the encoded response body.
  /// Failures are returned as an Error reply; this never throws.
  std::vector<std::uint8_t> handle(std::span<const std::uint8_t> request) noexcept;

  ReplayManifest replay_manifest(std::uint64_t benchmark_id) const;
  SessionState state(std::uint64_t benchmark_id) const;
  SessionLedger ledger(std::uint64_t benchmark_id) const;
  std::size_t live_sessions() const;

  /// Called once per session from `end_benchmark`.
  void set_summary_sink(SummarySink sink);

  const Dataset& dataset() const noexcept { return *dataset_; }
  std::uint64_t batch_count(std::uint32_t batch_size) const noexcept;

 private:
  struct Session;

  std::shared_ptr<Session> find(std::uint64_t id) const;
  Session& authorize(const std::shared_ptr<Session>& session, std::string_view token) const;
  void touch(Session& session);

  std::shared_ptr<const Dataset> dataset_;
  HarnessConfig config_;
  MonotonicClock clock_;
  mutable std::mutex mutex_;
  std::map<std::uint64_t, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
  std::uint64_t token_counter_ = 0;
  SummarySink sink_;
};

}  // namespace tickcep
