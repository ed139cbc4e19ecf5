// tickcep: generate, serve, solve, verify, report and export-series.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "tickcep/datagen.hpp"
#include "tickcep/engine.hpp"
#include "tickcep/error.hpp"
#include "tickcep/harness.hpp"
#include "tickcep/oracle.hpp"
#include "tickcep/scoring.hpp"
#include "tickcep/series.hpp"
#include "tickcep/solver.hpp"
#include "tickcep/transport.hpp"

namespace {

using namespace tickcep;

struct EngineFlags {
  std::string config_path;
  unsigned shards = 0;
  bool header = false;

  EngineConfig load() const {
    EngineConfig config = config_path.empty() ? EngineConfig{} : EngineConfig::load(config_path);
    if (shards > 0) config.shards = shards;
    return config;
  }
};

void add_engine_flags(CLI::App& app, EngineFlags& flags) {
  app.add_option("--config", flags.config_path, "Engine config file (key = value)")
      ->envname("TICKCEP_CONFIG")
      ->check(CLI::ExistingFile);
  app.add_option("--shards", flags.shards, "Override the engine's shard count")->envname("TICKCEP_SHARDS");
}

void add_header_flag(CLI::App& app, bool& header) {
  app.add_flag("--header", header, "CSV files start with a header row")->envname("TICKCEP_HEADER");
}

std::string format_summary(const SessionSummary& s) {
  return fmt::format(
      "benchmark {} '{}': {} batches ({} answered, {} late), {:.3f} s, {:.1f} batches/s\n"
      "  Q1 latency: mean {:.1f} us, p90 {:.1f} us\n"
      "  Q2 latency: mean {:.1f} us, p90 {:.1f} us\n"
      "  complete: {}",
      s.benchmark_id, s.name, s.batches, s.answered, s.late_results, s.duration_ns / 1e9,
      s.throughput_batches_per_s, s.q1.mean_ns / 1e3, s.q1.p90_ns / 1e3, s.q2.mean_ns / 1e3,
      s.q2.p90_ns / 1e3, s.complete ? "yes" : "no");
}

int run_generate(const datagen::GenConfig& config, const std::string& out) {
  const auto manifest = datagen::write_dataset(config, out);
  spdlog::info("wrote {} price events to {}", manifest["price_events"].get<std::uint64_t>(), out);
  return 0;
}

struct ServeFlags {
  std::string data;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> batch_size;
  std::string addr = "0.0.0.0:5023";
  std::string out;
  std::string port_file;
  std::size_t max_sessions = 64;
  std::size_t exit_after = 0;
  double p_change = 0.1;
  std::size_t k = 100;
  std::string pace = "none";
  double speedup = 1.0;
  bool header = false;
};

int run_serve(const ServeFlags& flags) {
  spdlog::info("loading {}", flags.data);
  auto dataset = Dataset::from_events(load_price_events(flags.data, CsvReadOptions{flags.header}));
  spdlog::info("{} price events, {} symbols", dataset->events.size(), dataset->universe.size());

  HarnessConfig config;
  config.max_sessions = flags.max_sessions;
  config.subscriptions = SubscriptionConfig{flags.p_change, flags.k};
  config.pinned_seed = flags.seed;
  config.pinned_batch_size = flags.batch_size;
  if (flags.pace == "realtime") {
    config.pace_speedup = flags.speedup;
  } else if (flags.pace != "none") {
    throw Error(Errc::BadConfig, fmt::format("--pace must be none or realtime, got '{}'", flags.pace));
  }
  Harness harness(dataset, config);

  // Block termination signals in every thread; a dedicated thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  TcpServer server(harness, Endpoint::parse(flags.addr));
  spdlog::info("listening on port {}", server.port());
  if (!flags.port_file.empty()) std::ofstream(flags.port_file) << server.port() << '\n';

  std::mutex sink_mutex;
  std::size_t ended = 0;
  if (!flags.out.empty()) std::filesystem::create_directories(flags.out);
  harness.set_summary_sink([&](const SessionSummary& summary, const ReplayManifest& manifest) {
    std::lock_guard lock(sink_mutex);
    if (!flags.out.empty()) {
      nlohmann::json line = summary;
      line["manifest"] = manifest;
      std::ofstream(std::filesystem::path(flags.out) / fmt::format("session-{}.jsonl", summary.benchmark_id))
          << line.dump() << '\n';
    }
    spdlog::info("{}", format_summary(summary));
    if (flags.exit_after > 0 && ++ended >= flags.exit_after) server.stop(/*drain=*/true);
  });

  std::jthread signal_waiter([&](std::stop_token stop) {
    timespec poll{0, 200'000'000};
    while (!stop.stop_requested()) {
      if (sigtimedwait(&signals, nullptr, &poll) > 0) {
        spdlog::info("shutting down");
        server.stop();
        return;
      }
    }
  });
  server.run();
  return 0;
}

struct SolveFlags {
  std::string addr = "127.0.0.1:5023";
  std::string name = "tickcep";
  std::uint64_t seed = 1;
  std::uint32_t batch_size = 1000;
  std::string dump;
  EngineFlags engine;
};

int run_solve(const SolveFlags& flags) {
  EngineConfig config = flags.engine.load();
  if (!flags.dump.empty()) config.retention = Retention::Full;
  Engine engine(config);
  auto channel = TcpChannel::connect(Endpoint::parse(flags.addr));
  const auto stats = solve(channel, wire::BenchmarkConfig{flags.name, flags.seed, flags.batch_size}, engine);
  if (!flags.dump.empty()) {
    std::ofstream out(flags.dump);
    write_series_table(out, engine.series_table());
    if (!out) throw Error(Errc::Unreadable, fmt::format("cannot write {}", flags.dump));
  }
  std::cout << format_summary(stats.summary) << '\n';
  if (engine.late_events() > 0) spdlog::warn("{} late events dropped", engine.late_events());
  return 0;
}

int run_verify(const std::string& data, const std::string& dump_path, const EngineFlags& flags) {
  const EngineConfig config = flags.load();
  const auto events = load_price_events(data, CsvReadOptions{flags.header});
  const auto expected = oracle::run(
      events, oracle::OracleOptions{config.window.length.count(), config.suppress_first_window_advice});
  std::ifstream in(dump_path);
  if (!in) throw Error(Errc::Unreadable, fmt::format("cannot read {}", dump_path));
  const auto actual = read_series_table(in);
  const auto discrepancies = oracle::diff(expected, actual);
  for (std::size_t i = 0; i < discrepancies.size() && i < 50; ++i) {
    std::cout << oracle::to_string(discrepancies[i]) << '\n';
  }
  std::size_t windows = 0;
  for (const auto& [symbol, rows] : expected) windows += rows.size();
  std::cout << fmt::format("{} symbols, {} evaluated windows, {} discrepancies\n", expected.size(), windows,
                           discrepancies.size());
  return discrepancies.empty() ? 0 : 1;
}

std::vector<SessionSummary> read_summaries(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<SessionSummary> summaries;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw Error(Errc::Unreadable, fmt::format("cannot read {}", file.string()));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) summaries.push_back(nlohmann::json::parse(line).get<SessionSummary>());
    }
  }
  if (summaries.empty()) throw Error(Errc::Unreadable, fmt::format("no summaries in {}", path.string()));
  return summaries;
}

int run_report(const std::string& summaries_path, const std::string& data, bool header) {
  if (!data.empty()) {
    const auto report = datagen::validate_distribution(data, {}, CsvReadOptions{header});
    std::cout << nlohmann::json(report).dump(2) << '\n';
    if (summaries_path.empty()) return report.ok() ? 0 : 1;
  }
  if (summaries_path.empty()) throw Error(Errc::BadConfig, "report needs --summaries and/or --data");
  const auto board = rank(read_summaries(summaries_path));
  std::cout << fmt::format("{:>4}  {:<24} {:>6} {:>6} {:>9} {:>14} {:>14} {:>12}\n", "pos", "name", "rankQ1",
                           "rankQ2", "meanRank", "Q1 p90 (us)", "Q2 p90 (us)", "batches/s");
  for (const auto& e : board) {
    std::cout << fmt::format("{:>4}  {:<24} {:>6} {:>6} {:>9.1f} {:>14.1f} {:>14.1f} {:>12.1f}\n", e.position,
                             e.summary.name, e.rank_q1, e.rank_q2, e.mean_rank, e.summary.q1.p90_ns / 1e3,
                             e.summary.q2.p90_ns / 1e3, e.summary.throughput_batches_per_s);
  }
  return 0;
}

int run_export_series(const std::string& data, const std::string& symbol_text, const std::string& out_path,
                      const EngineFlags& flags) {
  const EngineConfig config = flags.load();
  if (config.retention != Retention::Full) {
    throw Error(Errc::RetentionDisabled, "export-series needs retention = full in the engine config");
  }
  const Symbol symbol = Symbol::parse(symbol_text);
  Engine engine(config);
  Batch batch;
  batch.events = load_price_events(data, CsvReadOptions{flags.header});
  batch.last = true;
  engine.process_batch(batch);
  if (engine.state(symbol) == nullptr) throw Error(Errc::UnknownSymbol, symbol_text);

  std::ofstream file;
  if (!out_path.empty() && out_path != "-") file.open(out_path);
  std::ostream& out = out_path.empty() || out_path == "-" ? std::cout : file;
  out << "window_start,close,ema38,ema100,advisory\n";
  for (const auto& row : engine.snapshot_series(symbol)) {
    const auto start = window_start(row.window, config.window);
    out << fmt::format("{} {},{:.17g},{:.17g},{:.17g},{}\n", format_csv_date(start.date),
                       format_csv_time(start.time_of_day_ns), row.close, row.ema.ema38, row.ema.ema100,
                       row.advice ? to_string(*row.advice) : std::string_view());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("tickcep"));
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e %^%l%$ %v");

  CLI::App app{"Tick-data EMA crossover engine, benchmark harness and tooling"};
  app.require_subcommand(1);

  datagen::GenConfig gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic price-event dataset");
  generate->add_option("--seed", gen.seed, "Generator seed")->envname("TICKCEP_SEED");
  generate->add_option("--symbols", gen.n_symbols, "Number of symbols")->envname("TICKCEP_SYMBOLS");
  generate->add_option("--events", gen.total_events, "Number of price events")->envname("TICKCEP_EVENTS");
  generate->add_option("--days", gen.days, "Days to cover, starting Monday 2021-11-08")->envname("TICKCEP_DAYS");
  generate->add_option("--zipf", gen.zipf_exponent, "Rank-frequency exponent")->envname("TICKCEP_ZIPF");
  generate->add_option("--off-hours", gen.off_hours_share, "Share of weekday events outside trading hours")
      ->envname("TICKCEP_OFF_HOURS");
  generate->add_flag("--full", gen.full, "Also emit non-price rows")->envname("TICKCEP_FULL");
  generate->add_flag("--header", gen.header, "Write a header row per file")->envname("TICKCEP_HEADER");
  generate->add_option("--out", gen_out, "Output directory")->envname("TICKCEP_OUT")->required();

  ServeFlags serve_flags;
  auto* serve = app.add_subcommand("serve", "Run the benchmark harness over TCP");
  serve->add_option("--data", serve_flags.data, "Dataset file or directory")->envname("TICKCEP_DATA")->required();
  serve->add_option("--seed", serve_flags.seed, "Pin every session's subscription seed")->envname("TICKCEP_SEED");
  serve->add_option("--batch-size", serve_flags.batch_size, "Pin every session's batch size")
      ->envname("TICKCEP_BATCH_SIZE")
      ->check(CLI::PositiveNumber);
  std::uint16_t serve_port = wire::kDefaultPort;
  std::string bind_host = "0.0.0.0";
  serve->add_option("--port", serve_port, "TCP port (0 picks a free one)")->envname("TICKCEP_PORT");
  serve->add_option("--bind", bind_host, "IPv4 address to bind")->envname("TICKCEP_BIND");
  serve->add_option("--out", serve_flags.out, "Directory for per-session JSON-lines summaries")->envname("TICKCEP_OUT");
  serve->add_option("--port-file", serve_flags.port_file, "Write the bound port here");
  serve->add_option("--max-sessions", serve_flags.max_sessions, "Concurrent live sessions")
      ->envname("TICKCEP_MAX_SESSIONS");
  serve->add_option("--exit-after", serve_flags.exit_after, "Stop after this many sessions ended (0 = never)");
  serve->add_option("--p-change", serve_flags.p_change, "Per-batch subscription change probability")
      ->envname("TICKCEP_P_CHANGE")
      ->check(CLI::Range(0.0, 1.0));
  serve->add_option("--subscription-size", serve_flags.k, "Symbols per subscription")
      ->envname("TICKCEP_SUBSCRIPTION_SIZE");
  serve->add_option("--pace", serve_flags.pace, "none | realtime")->envname("TICKCEP_PACE");
  serve->add_option("--speedup", serve_flags.speedup, "Event-time speedup for --pace realtime")
      ->envname("TICKCEP_SPEEDUP")
      ->check(CLI::PositiveNumber);
  add_header_flag(*serve, serve_flags.header);

  SolveFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Run the engine against a harness");
  solve_cmd->add_option("--addr", solve_flags.addr, "Harness host:port")->envname("TICKCEP_ADDR");
  solve_cmd->add_option("--name", solve_flags.name, "Benchmark name")->envname("TICKCEP_NAME");
  solve_cmd->add_option("--seed", solve_flags.seed, "Subscription seed to request")->envname("TICKCEP_SEED");
  solve_cmd->add_option("--batch-size", solve_flags.batch_size, "Batch size to request")
      ->envname("TICKCEP_BATCH_SIZE")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--dump", solve_flags.dump, "Write the engine's series dump for verify")
      ->envname("TICKCEP_DUMP");
  add_engine_flags(*solve_cmd, solve_flags.engine);

  std::string verify_data;
  std::string verify_dump;
  EngineFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "Compare an engine dump with the reference oracle");
  verify->add_option("--data", verify_data, "Dataset file or directory")->envname("TICKCEP_DATA")->required();
  verify->add_option("--engine-dump", verify_dump, "Dump written by solve --dump")->required();
  add_engine_flags(*verify, verify_flags);
  add_header_flag(*verify, verify_flags.header);

  std::string report_summaries;
  std::string report_data;
  bool report_header = false;
  auto* report = app.add_subcommand("report", "Leaderboard from session summaries and/or a dataset report");
  report->add_option("--summaries", report_summaries, "JSON-lines file or directory of them");
  report->add_option("--data", report_data, "Dataset to check against the generator's distribution targets");
  add_header_flag(*report, report_header);

  std::string export_data;
  std::string export_symbol;
  std::string export_out = "-";
  EngineFlags export_flags;
  auto* export_series = app.add_subcommand("export-series", "Plot-ready per-window CSV for one symbol");
  export_series->add_option("--data", export_data, "Dataset file or directory")->envname("TICKCEP_DATA")->required();
  export_series->add_option("--symbol", export_symbol, "Symbol, e.g. RDSA.NL")->required();
  export_series->add_option("--out", export_out, "Output CSV ('-' for stdout)");
  add_engine_flags(*export_series, export_flags);
  add_header_flag(*export_series, export_flags.header);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return run_generate(gen, gen_out);
    if (*serve) {
      serve_flags.addr = fmt::format("{}:{}", bind_host, serve_port);
      return run_serve(serve_flags);
    }
    if (*solve_cmd) return run_solve(solve_flags);
    if (*verify) return run_verify(verify_data, verify_dump, verify_flags);
    if (*report) return run_report(report_summaries, report_data, report_header);
    if (*export_series) return run_export_series(export_data, export_symbol, export_out, export_flags);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
