// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit 1 if any fail.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "support.hpp"
#include "tickcep/datagen.hpp"
#include "tickcep/digest.hpp"
#include "tickcep/engine.hpp"
#include "tickcep/error.hpp"
#include "tickcep/harness.hpp"
#include "tickcep/oracle.hpp"
#include "tickcep/scoring.hpp"
#include "tickcep/solver.hpp"
#include "tickcep/transport.hpp"

namespace {

using namespace tickcep;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }

double relative(double a, double b) {
  if (a == b) return 0.0;
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

bool same_bits(const EmaPair& a, const EmaPair& b) {
  return std::bit_cast<std::uint64_t>(a.ema38) == std::bit_cast<std::uint64_t>(b.ema38) &&
         std::bit_cast<std::uint64_t>(a.ema100) == std::bit_cast<std::uint64_t>(b.ema100);
}

void feed(Engine& engine, const std::vector<TickEvent>& events, std::size_t batch_size) {
  for (std::size_t i = 0; i < events.size(); i += batch_size) {
    Batch batch;
    batch.seq_id = i / batch_size;
    batch.events.assign(events.begin() + static_cast<std::ptrdiff_t>(i),
                        events.begin() + static_cast<std::ptrdiff_t>(std::min(events.size(), i + batch_size)));
    engine.process_batch(batch);
  }
}

// 1
Outcome oracle_equivalence() {
  datagen::GenConfig cfg;
  cfg.seed = 1;
  cfg.total_events = 1'000'000;
  cfg.n_symbols = 5000;
  cfg.days = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto events = datagen::generate_events(cfg);

  EngineConfig engine_cfg;
  engine_cfg.retention = Retention::Full;
  Engine engine(engine_cfg);
  feed(engine, events, 1000);
  const auto actual = engine.series_table();
  const auto expected = oracle::run(events);
  const auto discrepancies = oracle::diff(expected, actual);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::size_t windows = 0, advisories = 0;
  for (const auto& [symbol, rows] : expected) {
    windows += rows.size();
    for (const auto& row : rows) advisories += row.advice.has_value();
  }
  const std::string detail = fmt::format("{} events, {} symbols, {} windows, {} advisories, {} discrepancies, {:.1f} s",
                                         events.size(), expected.size(), windows, advisories, discrepancies.size(),
                                         seconds);
  if (!discrepancies.empty()) return fail(detail + "; first: " + oracle::to_string(discrepancies.front()));
  if (windows == 0 || advisories == 0) return fail(detail + "; degenerate dataset");
  return {seconds < 60.0, detail};
}

// 2
Outcome batch_boundary_independence() {
  datagen::GenConfig cfg;
  cfg.seed = 2;
  cfg.total_events = 100'000;
  cfg.n_symbols = 1000;
  cfg.days = 1;
  auto events = datagen::generate_events(cfg);
  // Push a slice of events into earlier windows so the late path is exercised.
  std::mt19937_64 rng(2);
  for (auto& e : events) {
    if (rng() % 100 == 0) e.trading_ts = TickTimestamp::from_epoch_ns(e.trading_ts.epoch_ns() - 10 * testing::kMinute);
  }

  EngineConfig one_shard;
  one_shard.shards = 1;
  Engine mega(one_shard);
  feed(mega, events, events.size());
  const auto expected = mega.states();

  for (int trial = 0; trial < 20; ++trial) {
    EngineConfig c;
    c.shards = 1 + static_cast<unsigned>(trial % 4);
    Engine engine(c);
    std::uniform_int_distribution<std::size_t> size(1, 10'000);
    std::size_t batches = 0;
    for (std::size_t i = 0; i < events.size(); ++batches) {
      const std::size_t n = std::min(events.size() - i, size(rng));
      Batch batch;
      batch.seq_id = batches;
      batch.events.assign(events.begin() + static_cast<std::ptrdiff_t>(i),
                          events.begin() + static_cast<std::ptrdiff_t>(i + n));
      engine.process_batch(batch);
      i += n;
    }
    const auto actual = engine.states();
    if (actual.size() != expected.size()) return fail(fmt::format("trial {}: symbol count differs", trial));
    for (std::size_t i = 0; i < actual.size(); ++i) {
      const auto& [sym, a] = actual[i];
      const auto& [esym, e] = expected[i];
      if (sym != esym || !(a == e) || !same_bits(a.curr_pair, e.curr_pair) || !same_bits(a.prev_pair, e.prev_pair)) {
        return fail(fmt::format("trial {} ({} batches): state of {} differs", trial, batches, sym.str()));
      }
    }
    if (engine.late_events() != mega.late_events()) return fail(fmt::format("trial {}: late count differs", trial));
  }
  return {true, fmt::format("20 re-batchings of {} events, {} symbols, {} late events", events.size(),
                            expected.size(), mega.late_events())};
}

// 3
Outcome crossover_truth_table() {
  const EmaPair below{1.0, 2.0}, equal{2.0, 2.0}, above{3.0, 2.0};
  const EmaPair relations[] = {below, equal, above};
  const char* names[] = {"<", "=", ">"};
  // Counts over the four strict quadrants plus the two edges where the
  // current pair is equal; the remaining three cases have prev equal.
  int buys = 0, sells = 0, none = 0;
  for (int p = 0; p < 3; ++p) {
    for (int c = 0; c < 3; ++c) {
      std::optional<Advice> want;
      if (c == 2 && p != 2) want = Advice::Buy;
      if (c == 0 && p != 0) want = Advice::Sell;
      const auto got = detect_crossover(relations[p], relations[c]);
      if (got != want) return fail(fmt::format("prev {} curr {}: wrong advice", names[p], names[c]));
      if (p == 1) continue;
      if (!got) {
        ++none;
      } else if (*got == Advice::Buy) {
        ++buys;
      } else {
        ++sells;
      }
    }
  }
  const bool ok = buys == 1 && sells == 1 && none == 4;
  return {ok, fmt::format("all 9 cases match; quadrants and curr-equal edges give {} buy, {} sell, {} none; "
                          "prev-equal gives buy, sell, none",
                          buys, sells, none)};
}

// 4
Outcome ema_recurrence() {
  for (double c : {1.0, 1e3, 1e-3}) {
    EmaPair pair{c, c};
    for (int i = 0; i < 1000; ++i) pair = ema_step(pair, c);
    if (pair.ema38 != c || pair.ema100 != c) return fail(fmt::format("fixed point broken at c = {}", c));
  }

  double worst_first = 0.0;
  for (double c : {1.0, 1e3, 1e-3, 12.3456}) {
    EngineConfig cfg;
    cfg.shards = 1;
    Engine engine(cfg);
    Batch batch;
    batch.events = {testing::tick("A.FR", testing::at(0, 9, 0), c), testing::tick("A.FR", testing::at(0, 9, 5), c)};
    engine.process_batch(batch);
    const auto& pair = engine.state(Symbol::parse("A.FR"))->curr_pair;
    const double price = batch.events[0].price();
    worst_first = std::max({worst_first, relative(pair.ema38, price * 2.0 / 39.0),
                            relative(pair.ema100, price * 2.0 / 101.0)});
  }
  if (worst_first > 1e-15) return fail(fmt::format("first window off by {:.3g}", worst_first));

  std::mt19937_64 rng(4);
  std::normal_distribution<double> step(0.0, 0.01);
  std::uniform_real_distribution<double> scale(-6.0, 6.0);
  double worst_scale = 0.0;
  for (int walk = 0; walk < 100; ++walk) {
    const double k = std::pow(10.0, scale(rng));
    EmaPair a, b;
    double price = 100.0;
    for (int w = 0; w < 1000; ++w) {
      price *= std::exp(step(rng));
      a = ema_step(a, price);
      b = ema_step(b, k * price);
      worst_scale = std::max({worst_scale, relative(b.ema38, k * a.ema38), relative(b.ema100, k * a.ema100)});
    }
  }
  const std::string detail =
      fmt::format("fixed point exact; first window {:.2g}; scale equivariance {:.2g} over 100 walks", worst_first,
                  worst_scale);
  return {worst_scale <= 1e-12, detail};
}

// 5
Outcome windowing_partition() {
  const WindowSpec spec;
  const std::int64_t midnight = testing::at(0, 0, 0);
  const std::int64_t day = midnight / kNanosPerDay;
  const std::int64_t step = kCsvTimeResolutionNs;
  const std::int64_t window_ns = spec.length_ns();

  std::vector<std::uint64_t> hits(static_cast<std::size_t>(spec.windows_per_day()), 0);
  for (std::int64_t offset = 0; offset < kNanosPerDay; offset += step) {
    const WindowId w = window_of(TickTimestamp{std::chrono::sys_days(std::chrono::days(day)), offset}, spec);
    if (w.day != day || w.slot != offset / window_ns) {
      return fail(fmt::format("offset {} ns maps to ({}, {})", offset, w.day, w.slot));
    }
    ++hits[static_cast<std::size_t>(w.slot)];
  }
  const std::uint64_t per_window = static_cast<std::uint64_t>(window_ns / step);
  for (std::size_t s = 0; s < hits.size(); ++s) {
    if (hits[s] != per_window) return fail(fmt::format("window {} holds {} instants", s, hits[s]));
  }

  for (std::int32_t s = 0; s < spec.windows_per_day(); ++s) {
    const WindowId w{day, s};
    const std::int64_t start = window_start(w, spec).epoch_ns();
    const std::int64_t end = window_close_instant(w, spec).epoch_ns();
    if (start != midnight + s * window_ns || end != start + window_ns) return fail(fmt::format("bounds of slot {}", s));
    const WindowId at_end = window_of(TickTimestamp::from_epoch_ns(end), spec);
    if (!is_successor(w, at_end, spec)) return fail(fmt::format("boundary after slot {} not in successor", s));
  }
  const WindowId last{day, spec.windows_per_day() - 1};
  const WindowId after = window_of(TickTimestamp::from_epoch_ns(midnight + kNanosPerDay), spec);
  if (after != WindowId{day + 1, 0} || successor(last, spec) != after || !(last < after)) {
    return fail("midnight rollover");
  }
  return {true, fmt::format("{} instants at 100 us, {} windows of {} each, rollover ok",
                            static_cast<std::uint64_t>(kNanosPerDay / step), hits.size(), per_window)};
}

struct RunRecord {
  std::vector<std::uint8_t> batch_stream;
  std::vector<std::vector<std::string>> subscriptions;
  ReplayManifest manifest;
};

RunRecord record_run(std::uint64_t data_seed, std::uint64_t subscription_seed, std::uint32_t batch_size) {
  datagen::GenConfig cfg;
  cfg.seed = data_seed;
  cfg.total_events = 200'000;
  cfg.n_symbols = 2000;
  cfg.days = 2;
  Harness harness(Dataset::from_events(datagen::generate_events(cfg)));
  const auto handle = harness.create_benchmark(wire::BenchmarkConfig{"determinism", subscription_seed, batch_size});
  harness.start_benchmark(handle);
  RunRecord record;
  wire::WireBatch batch;
  do {
    batch = harness.next_batch(handle);
    const auto bytes = wire::encode_batch(batch);
    record.batch_stream.insert(record.batch_stream.end(), bytes.begin(), bytes.end());
    record.subscriptions.push_back(batch.lookup_symbols);
    harness.result_q1(handle.token, {handle.id, batch.seq_id, {}});
    harness.result_q2(handle.token, {handle.id, batch.seq_id, {}});
  } while (!batch.last);
  harness.end_benchmark(handle);
  record.manifest = harness.replay_manifest(handle.id);
  return record;
}

// 6
Outcome determinism() {
  const auto a = record_run(6, 42, 1000);
  const auto b = record_run(6, 42, 1000);
  if (a.batch_stream != b.batch_stream) return fail("batch streams differ");
  if (a.subscriptions != b.subscriptions) return fail("subscription schedules differ");
  if (!(a.manifest == b.manifest)) return fail("replay manifests differ");
  const auto c = record_run(6, 43, 1000);
  if (c.manifest.subscription_sha256 == a.manifest.subscription_sha256) return fail("seed does not reach schedule");
  std::set<std::vector<std::string>> distinct(a.subscriptions.begin(), a.subscriptions.end());
  return {true, fmt::format("{} batches, {} bytes, {} distinct subscriptions, stream sha256 {}",
                            a.manifest.batches, a.batch_stream.size(), distinct.size(),
                            a.manifest.batch_stream_sha256.substr(0, 16))};
}

// 7
Outcome distribution() {
  datagen::GenConfig cfg;  // full week, 5504 symbols, 1e6 events
  const auto events = datagen::generate_events(cfg);
  const auto r = datagen::validate_distribution(events);
  const std::string detail = fmt::format(
      "ETR {:.4f} FR {:.4f} NL {:.4f}, index {:.4f}, slope {:.4f} over {} ranks, top-1% share {:.3f}",
      r.exchange_share.etr, r.exchange_share.fr, r.exchange_share.nl, r.index_share, r.rank_frequency_slope,
      r.slope_fit_ranks, r.top1pct_share);
  const bool ok = std::fabs(r.exchange_share.etr - 0.54) <= 0.02 && std::fabs(r.exchange_share.fr - 0.36) <= 0.02 &&
                  std::fabs(r.exchange_share.nl - 0.10) <= 0.02 && std::fabs(r.index_share - 0.82) <= 0.02 &&
                  std::fabs(r.rank_frequency_slope + 1.2) <= 0.15 && r.events == 1'000'000;
  return {ok && r.ok(), detail};
}

// Reference model of the session protocol, kept apart from the harness.
class ProtocolModel {
 public:
  ProtocolModel(std::size_t events, std::size_t max_sessions) : events_(events), max_sessions_(max_sessions) {}

  struct Session {
    std::string token;
    int state = 0;  // 0 created, 1 running, 2 ended
    std::uint64_t total = 0;
    std::uint64_t delivered = 0;
    std::vector<std::pair<bool, bool>> answered;
  };

  std::optional<Errc> create(std::uint32_t batch_size) {
    if (batch_size == 0) return Errc::BadConfig;
    const auto live = std::count_if(sessions_.begin(), sessions_.end(), [](auto& kv) { return kv.second.state != 2; });
    if (static_cast<std::size_t>(live) >= max_sessions_) return Errc::CapacityExhausted;
    Session s;
    s.total = std::max<std::uint64_t>(1, (events_ + batch_size - 1) / batch_size);
    sessions_[next_id_++] = s;
    return std::nullopt;
  }

  std::optional<Errc> access(std::uint64_t id, const std::string& token, Session*& out) {
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return Errc::UnknownBenchmark;
    if (it->second.token != token) return Errc::Unauthorized;
    out = &it->second;
    return std::nullopt;
  }

  std::optional<Errc> start(Session& s) {
    if (s.state != 0) return Errc::OutOfOrderCall;
    s.state = 1;
    return std::nullopt;
  }

  std::optional<Errc> next(Session& s) {
    if (s.state != 1 || s.delivered == s.total) return Errc::OutOfOrderCall;
    if (!s.answered.empty() && !(s.answered.back().first && s.answered.back().second)) return Errc::OutOfOrderCall;
    ++s.delivered;
    s.answered.emplace_back(false, false);
    return std::nullopt;
  }

  std::optional<Errc> result(Session& s, std::uint64_t seq, bool q1) {
    if (s.state != 1) return Errc::OutOfOrderCall;
    if (seq >= s.delivered) return Errc::UnknownSeqId;
    bool& flag = q1 ? s.answered[seq].first : s.answered[seq].second;
    if (flag) return Errc::DuplicateResult;
    flag = true;
    return std::nullopt;
  }

  std::optional<Errc> end(Session& s) {
    if (s.state != 1) return Errc::OutOfOrderCall;
    s.state = 2;
    return std::nullopt;
  }

  std::map<std::uint64_t, Session>& sessions() { return sessions_; }
  std::uint64_t next_id() const { return next_id_; }

 private:
  std::size_t events_;
  std::size_t max_sessions_;
  std::uint64_t next_id_ = 1;
  std::map<std::uint64_t, Session> sessions_;
};

std::optional<Errc> reply_error(const wire::Response& r) {
  if (const auto* e = std::get_if<wire::ErrorReply>(&r)) return e->code;
  return std::nullopt;
}

// Runs one random call sequence; returns an empty string or what went wrong.
std::string fuzz_sequence(std::mt19937_64& rng, const std::shared_ptr<const Dataset>& dataset,
                          std::uint64_t& illegal, std::uint64_t& legal) {
  HarnessConfig cfg;
  cfg.max_sessions = 2;
  Harness harness(dataset, cfg);
  ProtocolModel model(dataset->events.size(), cfg.max_sessions);

  const int length = 5 + static_cast<int>(rng() % 40);
  for (int step = 0; step < length; ++step) {
    const int op = static_cast<int>(rng() % 8);
    wire::Request request;
    std::optional<Errc> want;
    std::uint64_t id = 1 + rng() % (model.next_id() + 1);
    auto& sessions = model.sessions();
    const auto it = sessions.find(id);
    std::string token = it != sessions.end() && rng() % 10 != 0 ? it->second.token : "bogus";
    ProtocolModel::Session* s = nullptr;

    if (op == 0 || op == 7) {
      const auto batch_size = static_cast<std::uint32_t>(rng() % 4);
      request = wire::CreateBenchmarkRequest{{"fuzz", rng() % 3, batch_size}};
      want = model.create(batch_size);
    } else if (op == 6 && rng() % 4 == 0) {
      std::vector<std::uint8_t> junk(rng() % 12);
      for (auto& b : junk) b = static_cast<std::uint8_t>(rng());
      const auto reply = wire::decode_response(harness.handle(junk));
      if (!reply_error(reply)) return "junk frame accepted";
      ++illegal;
      continue;
    } else {
      want = model.access(id, token, s);
      const wire::BenchmarkHandle handle{id, token};
      const std::uint64_t seq = s != nullptr ? rng() % (s->delivered + 2) : rng() % 3;
      switch (op) {
        case 1: request = wire::StartBenchmarkRequest{handle}; if (!want) want = model.start(*s); break;
        case 2:
        case 6: request = wire::NextBatchRequest{handle}; if (!want) want = model.next(*s); break;
        case 3: request = wire::ResultQ1Request{token, {id, seq, {}}}; if (!want) want = model.result(*s, seq, true); break;
        case 4: request = wire::ResultQ2Request{token, {id, seq, {}}}; if (!want) want = model.result(*s, seq, false); break;
        default: request = wire::EndBenchmarkRequest{handle}; if (!want) want = model.end(*s); break;
      }
    }

    const auto response = wire::decode_response(harness.handle(wire::encode(request)));
    const auto got = reply_error(response);
    if (got != want) {
      return fmt::format("op {} on session {}: harness said {}, model said {}", op, id,
                         got ? to_string(*got) : "ok", want ? to_string(*want) : "ok");
    }
    if (want) {
      ++illegal;
      continue;
    }
    ++legal;
    if (const auto* created = std::get_if<wire::BenchmarkHandle>(&response)) {
      auto& entry = sessions.at(created->id);
      if (!entry.token.empty() || created->id + 1 != model.next_id()) return "unexpected benchmark id";
      entry.token = created->token;
    } else if (const auto* batch = std::get_if<wire::WireBatch>(&response)) {
      if (batch->seq_id + 1 != s->delivered || batch->last != (s->delivered == s->total)) return "batch mismatch";
    }
  }
  return {};
}

Outcome happy_path() {
  datagen::GenConfig cfg;
  cfg.seed = 8;
  cfg.total_events = 1'000'000;
  cfg.n_symbols = 5504;
  cfg.days = 5;
  Harness harness(Dataset::from_events(datagen::generate_events(cfg)));
  TcpServer server(harness, Endpoint{"127.0.0.1", 0});
  std::thread serving([&] { server.run(); });

  SolveStats stats;
  std::string error;
  try {
    auto channel = TcpChannel::connect(Endpoint{"127.0.0.1", server.port()});
    Engine engine{EngineConfig{}};
    stats = solve(channel, wire::BenchmarkConfig{"acceptance", 8, 1000}, engine);
  } catch (const std::exception& e) {
    error = e.what();
  }
  server.stop();
  serving.join();
  if (!error.empty()) return fail(error);

  const auto ledger = harness.ledger(stats.summary.benchmark_id);
  for (std::size_t i = 0; i < ledger.batches.size(); ++i) {
    const auto& e = ledger.batches[i];
    if (!e.t_q1 || !e.t_q2 || *e.t_q1 < e.t_sent || *e.t_q2 < e.t_sent) {
      return fail(fmt::format("batch {} has inconsistent instants", i));
    }
  }
  const auto& s = stats.summary;
  const std::string detail =
      fmt::format("{} events in {} batches over TCP, p90 Q1 {} ns Q2 {} ns, {:.0f} batches/s", stats.events,
                  s.batches, s.q1.p90_ns, s.q2.p90_ns, s.throughput_batches_per_s);
  const bool ok = s.complete && stats.events == 1'000'000 && s.batches == 1000 && s.q1.p90_ns > 0 && s.q2.p90_ns > 0 &&
                  ledger.batches.size() == 1000;
  return {ok, detail};
}

// 8
Outcome protocol_conformance() {
  const auto dataset = Dataset::from_events(testing::random_stream(8, 7, 3, 30, 0.0));
  std::mt19937_64 rng(8);
  std::uint64_t illegal = 0, legal = 0;
  for (int sequence = 0; sequence < 10'000; ++sequence) {
    const auto problem = fuzz_sequence(rng, dataset, illegal, legal);
    if (!problem.empty()) return fail(fmt::format("sequence {}: {}", sequence, problem));
  }
  const auto happy = happy_path();
  return {happy.pass, fmt::format("10000 sequences, {} legal calls served, {} illegal rejected; {}", legal, illegal,
                                   happy.detail)};
}

// 9
Outcome percentile_and_rank() {
  std::vector<std::uint64_t> hundred(100), ten(10);
  std::iota(hundred.begin(), hundred.end(), 1);
  std::iota(ten.begin(), ten.end(), 1);
  std::mt19937_64 rng(9);
  std::shuffle(hundred.begin(), hundred.end(), rng);
  if (percentile_p90(hundred) != 90) return fail("p90 of 1..100");
  if (percentile_p90(ten) != 9) return fail("p90 of 1..10");
  if (percentile_p90(std::vector<std::uint64_t>{123}) != 123) return fail("p90 of a singleton");

  // Competition ranks per query, then mean rank, throughput and name.
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<SessionSummary> summaries(2 + rng() % 10);
    for (std::size_t i = 0; i < summaries.size(); ++i) {
      auto& s = summaries[i];
      s.name = fmt::format("team{:02}", rng() % 50);
      s.q1.p90_ns = rng() % 4;
      s.q2.p90_ns = rng() % 4;
      s.throughput_batches_per_s = static_cast<double>(rng() % 3);
    }
    const auto board = rank(summaries);
    const auto key = [](const LeaderboardEntry& e) {
      return std::make_tuple(e.mean_rank, -e.summary.throughput_batches_per_s, e.summary.name);
    };
    for (const auto& e : board) {
      std::size_t better1 = 0, better2 = 0;
      for (const auto& s : summaries) {
        better1 += s.q1.p90_ns < e.summary.q1.p90_ns;
        better2 += s.q2.p90_ns < e.summary.q2.p90_ns;
      }
      if (e.rank_q1 != better1 + 1 || e.rank_q2 != better2 + 1) return fail("competition ranks");
      if (e.mean_rank != (static_cast<double>(e.rank_q1) + static_cast<double>(e.rank_q2)) / 2.0) return fail("mean rank");
    }
    for (std::size_t i = 0; i < board.size(); ++i) {
      if (board[i].position != i + 1) return fail("positions");
      for (std::size_t j = i + 1; j < board.size(); ++j) {
        if (key(board[j]) < key(board[i])) return fail(fmt::format("trial {}: order not transitive", trial));
      }
    }
  }
  return {true, "nearest-rank cases hold; 500 random leaderboards totally ordered"};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 oracle equivalence", oracle_equivalence},
      {"2 batch-boundary independence", batch_boundary_independence},
      {"3 crossover truth table", crossover_truth_table},
      {"4 EMA recurrence", ema_recurrence},
      {"5 windowing partition", windowing_partition},
      {"6 determinism", determinism},
      {"7 distributional reproduction", distribution},
      {"8 protocol conformance", protocol_conformance},
      {"9 percentile/rank math", percentile_and_rank},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    failures += !outcome.pass;
    std::printf("[%s] %s: %s\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
