#include "tickcep/engine.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "tickcep/error.hpp"
#include "worker_pool.hpp"

namespace tickcep {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long parse_positive(std::string_view key, std::string_view value) {
  long n = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc{} || ptr != value.data() + value.size() || n <= 0) {
    throw Error(Errc::BadConfig, fmt::format("{}: expected a positive integer, got '{}'", key, value));
  }
  return n;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(Errc::BadConfig, fmt::format("{}: expected true|false, got '{}'", key, value));
}

}  // namespace

unsigned EngineConfig::default_shards() noexcept {
  return std::max(1u, std::thread::hardware_concurrency());
}

EngineConfig EngineConfig::parse(std::string_view text) {
  EngineConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::BadConfig, fmt::format("line {}: expected key = value", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "window_minutes") {
      config.window.length = std::chrono::minutes(parse_positive(key, value));
    } else if (key == "suppress_first_window_advice") {
      config.suppress_first_window_advice = parse_bool(key, value);
    } else if (key == "retention") {
      if (value == "off") {
        config.retention = Retention::Off;
      } else if (value == "full") {
        config.retention = Retention::Full;
      } else {
        throw Error(Errc::BadConfig, fmt::format("retention: expected off|full, got '{}'", value));
      }
    } else if (key == "shards") {
      config.shards = static_cast<unsigned>(parse_positive(key, value));
    } else {
      throw Error(Errc::BadConfig, fmt::format("line {}: unknown key '{}'", line_no, key));
    }
  }
  config.window.validate();
  return config;
}

EngineConfig EngineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadConfig, fmt::format("cannot read config {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void AdvisoryRing::push(CrossoverAdvisory advisory) {
  slots_[next_] = std::move(advisory);
  next_ = (next_ + 1) % kCapacity;
  size_ = std::min(size_ + 1, kCapacity);
}

std::vector<CrossoverAdvisory> AdvisoryRing::to_vector() const {
  std::vector<CrossoverAdvisory> out;
  out.reserve(size_);
  const std::size_t oldest = (next_ + kCapacity - size_) % kCapacity;
  for (std::size_t i = 0; i < size_; ++i) out.push_back(slots_[(oldest + i) % kCapacity]);
  return out;
}

IngestOutcome ingest_event(SymbolState& state, const TickEvent& event, const EngineConfig& config) {
  const WindowId window = window_of(event.trading_ts, config.window);
  IngestOutcome outcome;
  if (!state.last_window) {
    state.last_window = window;
    state.pending_close = event.price();
    outcome.kind = IngestOutcome::Kind::Opened;
    return outcome;
  }
  if (window < *state.last_window) {
    outcome.kind = IngestOutcome::Kind::Late;
    return outcome;
  }
  if (window == *state.last_window) {
    state.pending_close = event.price();
    outcome.kind = IngestOutcome::Kind::Updated;
    return outcome;
  }

  const double close = *state.pending_close;
  const EmaPair next = ema_step(state.curr_pair, close);
  std::optional<Advice> advice = detect_crossover(state.curr_pair, next);
  if (state.evaluated_windows == 0 && config.suppress_first_window_advice) advice.reset();

  state.prev_pair = state.curr_pair;
  state.curr_pair = next;
  ++state.evaluated_windows;
  if (advice) {
    CrossoverAdvisory advisory{event.symbol, *advice, *state.last_window, next};
    state.advisories.push(advisory);
    outcome.advisory = std::move(advisory);
  }
  outcome.kind = IngestOutcome::Kind::Closed;
  outcome.closed = SeriesRecord{*state.last_window, close, next, advice};

  state.last_window = window;
  state.pending_close = event.price();
  return outcome;
}

struct Engine::Shard {
  struct Tracked {
    SymbolState state;
    std::vector<SeriesRecord> history;
  };
  std::unordered_map<Symbol, Tracked, SymbolHash> symbols;
  std::uint64_t late = 0;
  std::vector<const TickEvent*> inbox;
};

Engine::Engine(EngineConfig config) : config_(std::move(config)) {
  config_.window.validate();
  if (config_.shards == 0) throw Error(Errc::BadConfig, "shards must be positive");
  shards_.resize(config_.shards);
  if (config_.shards > 1) pool_ = std::make_unique<detail::WorkerPool>(config_.shards);
}

Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

std::size_t Engine::shard_of(const Symbol& symbol) const noexcept {
  return SymbolHash{}(symbol) % shards_.size();
}

void Engine::apply(Shard& shard, const TickEvent& event) {
  auto& tracked = shard.symbols[event.symbol];
  auto outcome = ingest_event(tracked.state, event, config_);
  if (outcome.kind == IngestOutcome::Kind::Late) {
    ++shard.late;
  } else if (outcome.closed && config_.retention == Retention::Full) {
    tracked.history.push_back(*outcome.closed);
  }
}

BatchResult Engine::process_batch(const Batch& batch) {
  subscription_.clear();
  std::unordered_set<Symbol, SymbolHash> seen;
  for (const auto& symbol : batch.lookup_symbols) {
    if (seen.insert(symbol).second) subscription_.push_back(symbol);
  }

  if (shards_.size() == 1) {
    for (const auto& event : batch.events) apply(shards_.front(), event);
  } else {
    for (const auto& event : batch.events) shards_[shard_of(event.symbol)].inbox.push_back(&event);
    pool_->run(shards_.size(), [this](std::size_t index) {
      auto& shard = shards_[index];
      for (const auto* event : shard.inbox) apply(shard, *event);
      shard.inbox.clear();
    });
  }
  events_processed_ += batch.events.size();

  BatchResult result;
  for (const auto& symbol : subscription_) {
    const SymbolState* s = state(symbol);
    if (s != nullptr && s->evaluated_windows > 0) result.q1.emplace_back(symbol, s->curr_pair);
    result.q2.emplace_back(symbol, s != nullptr ? s->advisories.to_vector() : std::vector<CrossoverAdvisory>{});
  }
  return result;
}

std::vector<SeriesRecord> Engine::snapshot_series(const Symbol& symbol) const {
  if (config_.retention != Retention::Full) {
    throw Error(Errc::RetentionDisabled, "series history requires retention = full");
  }
  const auto& shard = shards_[shard_of(symbol)];
  const auto it = shard.symbols.find(symbol);
  return it == shard.symbols.end() ? std::vector<SeriesRecord>{} : it->second.history;
}

SeriesTable Engine::series_table() const {
  if (config_.retention != Retention::Full) {
    throw Error(Errc::RetentionDisabled, "series history requires retention = full");
  }
  SeriesTable table;
  for (const auto& shard : shards_) {
    for (const auto& [symbol, tracked] : shard.symbols) {
      if (!tracked.history.empty()) table.emplace(symbol.str(), tracked.history);
    }
  }
  return table;
}

const SymbolState* Engine::state(const Symbol& symbol) const {
  const auto& shard = shards_[shard_of(symbol)];
  const auto it = shard.symbols.find(symbol);
  return it == shard.symbols.end() ? nullptr : &it->second.state;
}

std::vector<std::pair<Symbol, SymbolState>> Engine::states() const {
  std::vector<std::pair<Symbol, SymbolState>> out;
  for (const auto& shard : shards_) {
    for (const auto& [symbol, tracked] : shard.symbols) out.emplace_back(symbol, tracked.state);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::uint64_t Engine::late_events() const noexcept {
  std::uint64_t total = 0;
  for (const auto& shard : shards_) total += shard.late;
  return total;
}

}  // namespace tickcep
