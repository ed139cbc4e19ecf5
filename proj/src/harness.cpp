#include "tickcep/harness.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "tickcep/digest.hpp"
#include "tickcep/error.hpp"

namespace tickcep {

std::shared_ptr<const Dataset> Dataset::from_events(std::vector<TickEvent> events) {
  auto dataset = std::make_shared<Dataset>();
  std::set<Symbol> symbols;
  for (const auto& e : events) symbols.insert(e.symbol);
  dataset->universe.assign(symbols.begin(), symbols.end());
  dataset->events = std::move(events);
  return dataset;
}

std::uint64_t steady_now_ns() {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                        std::chrono::steady_clock::now().time_since_epoch())
                                        .count());
}

void to_json(nlohmann::json& j, const ReplayManifest& m) {
  j = nlohmann::json{{"benchmark_id", m.benchmark_id},
                     {"name", m.name},
                     {"dataset_seed", m.dataset_seed},
                     {"batch_size", m.batch_size},
                     {"batches", m.batches},
                     {"events", m.events},
                     {"batch_stream_sha256", m.batch_stream_sha256},
                     {"subscription_sha256", m.subscription_sha256}};
}

void to_json(nlohmann::json& j, const SessionSummary& s) {
  j = nlohmann::json{{"benchmark_id", s.benchmark_id},
                     {"name", s.name},
                     {"batches", s.batches},
                     {"answered", s.answered},
                     {"duration_ns", s.duration_ns},
                     {"throughput_batches_per_s", s.throughput_batches_per_s},
                     {"q1_latency", {{"mean_ns", s.q1.mean_ns}, {"p90_ns", s.q1.p90_ns}}},
                     {"q2_latency", {{"mean_ns", s.q2.mean_ns}, {"p90_ns", s.q2.p90_ns}}},
                     {"late_results", s.late_results},
                     {"complete", s.complete}};
}

void from_json(const nlohmann::json& j, SessionSummary& s) {
  j.at("benchmark_id").get_to(s.benchmark_id);
  j.at("name").get_to(s.name);
  j.at("batches").get_to(s.batches);
  j.at("answered").get_to(s.answered);
  j.at("duration_ns").get_to(s.duration_ns);
  j.at("throughput_batches_per_s").get_to(s.throughput_batches_per_s);
  j.at("q1_latency").at("mean_ns").get_to(s.q1.mean_ns);
  j.at("q1_latency").at("p90_ns").get_to(s.q1.p90_ns);
  j.at("q2_latency").at("mean_ns").get_to(s.q2.mean_ns);
  j.at("q2_latency").at("p90_ns").get_to(s.q2.p90_ns);
  j.at("late_results").get_to(s.late_results);
  j.at("complete").get_to(s.complete);
}

struct Harness::Session {
  Session(wire::BenchmarkHandle h, wire::BenchmarkConfig c, std::vector<Symbol> universe,
          SubscriptionConfig subs, std::uint64_t total, std::uint64_t now)
      : handle(std::move(h)),
        config(std::move(c)),
        subscriptions(config.dataset_seed, std::move(universe), subs),
        total_batches(total),
        last_activity(now) {}

  std::mutex mutex;
  wire::BenchmarkHandle handle;
  wire::BenchmarkConfig config;
  SubscriptionSchedule subscriptions;
  std::uint64_t total_batches;
  std::uint64_t last_activity;

  std::atomic<bool> live{true};
  SessionState state = SessionState::Created;
  bool timed_out = false;
  std::uint64_t cursor = 0;
  std::uint64_t events_served = 0;
  SessionLedger ledger;
  Sha256 batch_digest;
  Sha256 subscription_digest;
  std::optional<SessionSummary> summary;
};

Harness::Harness(std::shared_ptr<const Dataset> dataset, HarnessConfig config, MonotonicClock clock)
    : dataset_(std::move(dataset)), config_(config), clock_(std::move(clock)) {
  if (!dataset_) throw Error(Errc::BadConfig, "harness needs a dataset");
}

Harness::~Harness() = default;

std::uint64_t Harness::batch_count(std::uint32_t batch_size) const noexcept {
  const std::uint64_t n = dataset_->events.size();
  return std::max<std::uint64_t>(1, (n + batch_size - 1) / batch_size);
}

void Harness::set_summary_sink(SummarySink sink) {
  std::lock_guard lock(mutex_);
  sink_ = std::move(sink);
}

std::shared_ptr<Harness::Session> Harness::find(std::uint64_t id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(Errc::UnknownBenchmark, fmt::format("no benchmark {}", id));
  return it->second;
}

Harness::Session& Harness::authorize(const std::shared_ptr<Session>& session, std::string_view token) const {
  if (session->handle.token != token) throw Error(Errc::Unauthorized, "token mismatch");
  return *session;
}

// Caller holds the session mutex.
void Harness::touch(Session& s) {
  if (s.timed_out) throw Error(Errc::SessionTimeout, "session timed out");
  const std::uint64_t now = clock_();
  if (s.state != SessionState::Ended &&
      now - s.last_activity > static_cast<std::uint64_t>(config_.session_timeout.count())) {
    s.timed_out = true;
    s.live = false;
    throw Error(Errc::SessionTimeout, "session timed out");
  }
  s.last_activity = now;
}

wire::BenchmarkHandle Harness::create_benchmark(const wire::BenchmarkConfig& requested) {
  wire::BenchmarkConfig config = requested;
  if (config_.pinned_seed) config.dataset_seed = *config_.pinned_seed;
  if (config_.pinned_batch_size) config.batch_size = *config_.pinned_batch_size;
  if (config.batch_size == 0) throw Error(Errc::BadConfig, "batch_size must be positive");
  std::lock_guard lock(mutex_);
  const auto live = std::count_if(sessions_.begin(), sessions_.end(),
                                  [](const auto& kv) { return kv.second->live.load(); });
  if (static_cast<std::size_t>(live) >= config_.max_sessions) {
    throw Error(Errc::CapacityExhausted, fmt::format("{} live sessions", live));
  }
  static thread_local std::mt19937_64 token_rng{std::random_device{}()};
  wire::BenchmarkHandle handle{next_id_++, fmt::format("{:016x}{:04x}", token_rng(), ++token_counter_ & 0xffff)};
  sessions_.emplace(handle.id, std::make_shared<Session>(handle, config, dataset_->universe,
                                                         config_.subscriptions,
                                                         batch_count(config.batch_size), clock_()));
  spdlog::info("benchmark {} '{}' created: seed {}, batch size {}", handle.id, config.name,
               config.dataset_seed, config.batch_size);
  return handle;
}

void Harness::start_benchmark(const wire::BenchmarkHandle& handle) {
  auto session = find(handle.id);
  auto& s = authorize(session, handle.token);
  std::lock_guard lock(s.mutex);
  touch(s);
  if (s.state != SessionState::Created) throw Error(Errc::OutOfOrderCall, "benchmark already started");
  s.state = SessionState::Running;
  s.ledger.t_start = clock_();
}

wire::WireBatch Harness::next_batch(const wire::BenchmarkHandle& handle) {
  auto session = find(handle.id);
  auto& s = authorize(session, handle.token);
  std::lock_guard lock(s.mutex);
  touch(s);
  if (s.state != SessionState::Running) throw Error(Errc::OutOfOrderCall, "next_batch outside a running session");
  if (s.ledger.delivered_last) throw Error(Errc::OutOfOrderCall, "last batch already delivered");
  if (!s.ledger.batches.empty()) {
    const auto& outstanding = s.ledger.batches.back();
    if (!outstanding.t_q1 || !outstanding.t_q2) {
      throw Error(Errc::OutOfOrderCall, "previous batch still awaits results");
    }
  }

  const auto& events = dataset_->events;
  const std::uint64_t begin = s.cursor * s.config.batch_size;
  const std::uint64_t end = std::min<std::uint64_t>(events.size(), begin + s.config.batch_size);

  wire::WireBatch batch;
  batch.seq_id = s.cursor;
  batch.last = s.cursor + 1 == s.total_batches;
  batch.events.reserve(end - begin);
  for (std::uint64_t i = begin; i < end; ++i) batch.events.push_back(wire::to_wire(events[i]));
  for (const auto& symbol : s.subscriptions.next()) {
    batch.lookup_symbols.push_back(symbol.str());
    s.subscription_digest.update(batch.lookup_symbols.back());
    s.subscription_digest.update(std::string_view(","));
  }
  s.subscription_digest.update(std::string_view("\n"));
  s.batch_digest.update(wire::encode_batch(batch));

  if (config_.pace_speedup > 0 && begin < end && s.cursor > 0) {
    const std::int64_t event_gap = events[begin].trading_ts.epoch_ns() - events[0].trading_ts.epoch_ns();
    const auto target = s.ledger.t_start + static_cast<std::uint64_t>(
                                               std::max<double>(0.0, static_cast<double>(event_gap) / config_.pace_speedup));
    const std::uint64_t now = clock_();
    if (target > now) std::this_thread::sleep_for(std::chrono::nanoseconds(target - now));
  }

  s.cursor += 1;
  s.events_served += end - begin;
  s.ledger.delivered_last = batch.last;
  s.ledger.batches.push_back(LedgerEntry{clock_(), std::nullopt, std::nullopt});
  return batch;
}

void Harness::result_q1(std::string_view token, const wire::WireResultQ1& result) {
  const std::uint64_t received = clock_();
  auto session = find(result.benchmark_id);
  auto& s = authorize(session, token);
  std::lock_guard lock(s.mutex);
  touch(s);
  if (s.state != SessionState::Running) throw Error(Errc::OutOfOrderCall, "result outside a running session");
  if (result.batch_seq_id >= s.ledger.batches.size()) {
    throw Error(Errc::UnknownSeqId, fmt::format("batch {} was not delivered", result.batch_seq_id));
  }
  auto& entry = s.ledger.batches[result.batch_seq_id];
  if (entry.t_q1) throw Error(Errc::DuplicateResult, fmt::format("Q1 for batch {} already received", result.batch_seq_id));
  entry.t_q1 = std::max(received, entry.t_sent);
}

void Harness::result_q2(std::string_view token, const wire::WireResultQ2& result) {
  const std::uint64_t received = clock_();
  auto session = find(result.benchmark_id);
  auto& s = authorize(session, token);
  std::lock_guard lock(s.mutex);
  touch(s);
  if (s.state != SessionState::Running) throw Error(Errc::OutOfOrderCall, "result outside a running session");
  if (result.batch_seq_id >= s.ledger.batches.size()) {
    throw Error(Errc::UnknownSeqId, fmt::format("batch {} was not delivered", result.batch_seq_id));
  }
  auto& entry = s.ledger.batches[result.batch_seq_id];
  if (entry.t_q2) throw Error(Errc::DuplicateResult, fmt::format("Q2 for batch {} already received", result.batch_seq_id));
  entry.t_q2 = std::max(received, entry.t_sent);
}

SessionSummary Harness::end_benchmark(const wire::BenchmarkHandle& handle) {
  auto session = find(handle.id);
  auto& s = authorize(session, handle.token);
  SessionSummary summary;
  ReplayManifest manifest;
  {
    std::lock_guard lock(s.mutex);
    touch(s);
    if (s.state != SessionState::Running) throw Error(Errc::OutOfOrderCall, "end_benchmark outside a running session");
    s.ledger.t_end = clock_();
    s.state = SessionState::Ended;
    s.live = false;
    summary = score_session(s.ledger, s.handle.id, s.config.name);
    s.summary = summary;
  }
  manifest = replay_manifest(handle.id);
  if (!summary.complete) {
    spdlog::warn("benchmark {} ended incomplete: {} of {} batches answered", handle.id, summary.answered,
                 s.total_batches);
  }
  SummarySink sink;
  {
    std::lock_guard lock(mutex_);
    sink = sink_;
  }
  if (sink) sink(summary, manifest);
  return summary;
}

std::vector<std::uint8_t> Harness::handle(std::span<const std::uint8_t> request) noexcept {
  try {
    const auto decoded = wire::decode_request(request);
    const wire::Response response = std::visit(
        [this](const auto& m) -> wire::Response {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, wire::CreateBenchmarkRequest>) {
            return create_benchmark(m.config);
          } else if constexpr (std::is_same_v<T, wire::StartBenchmarkRequest>) {
            start_benchmark(m.handle);
            return wire::Ack{};
          } else if constexpr (std::is_same_v<T, wire::NextBatchRequest>) {
            return next_batch(m.handle);
          } else if constexpr (std::is_same_v<T, wire::ResultQ1Request>) {
            result_q1(m.token, m.result);
            return wire::Ack{};
          } else if constexpr (std::is_same_v<T, wire::ResultQ2Request>) {
            result_q2(m.token, m.result);
            return wire::Ack{};
          } else {
            return end_benchmark(m.handle);
          }
        },
        decoded);
    return wire::encode(response);
  } catch (const Error& e) {
    return wire::encode(wire::Response{wire::ErrorReply{e.code(), e.what()}});
  } catch (const std::exception& e) {
    return wire::encode(wire::Response{wire::ErrorReply{Errc::ProtocolViolation, e.what()}});
  }
}

ReplayManifest Harness::replay_manifest(std::uint64_t benchmark_id) const {
  auto session = find(benchmark_id);
  std::lock_guard lock(session->mutex);
  const auto& s = *session;
  return ReplayManifest{s.handle.id,
                        s.config.name,
                        s.config.dataset_seed,
                        s.config.batch_size,
                        s.ledger.batches.size(),
                        s.events_served,
                        s.batch_digest.hex(),
                        s.subscription_digest.hex()};
}

SessionState Harness::state(std::uint64_t benchmark_id) const {
  auto session = find(benchmark_id);
  std::lock_guard lock(session->mutex);
  return session->state;
}

SessionLedger Harness::ledger(std::uint64_t benchmark_id) const {
  auto session = find(benchmark_id);
  std::lock_guard lock(session->mutex);
  return session->ledger;
}

std::size_t Harness::live_sessions() const {
  std::lock_guard lock(mutex_);
  return static_cast<std::size_t>(std::count_if(sessions_.begin(), sessions_.end(),
                                                [](const auto& kv) { return kv.second->live.load(); }));
}

}  // namespace tickcep
