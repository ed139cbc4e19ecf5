#include "tickcep/wire.hpp"

#include <bit>
#include <type_traits>

#include <fmt/format.h>

namespace tickcep::wire {
namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void boolean(bool v) { u8(v ? 1 : 0); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void type(MsgType t) { u16(static_cast<std::uint16_t>(t)); }

  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  void put(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  bool boolean() {
    const auto v = u8();
    if (v > 1) fail("bool out of range");
    return v == 1;
  }
  std::string str() {
    const std::size_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  /// Element count of a list; each element takes at least `min_size` bytes.
  std::size_t count(std::size_t min_size) {
    const std::size_t n = u32();
    if (n > (data_.size() - pos_) / min_size) fail("list longer than frame");
    return n;
  }
  void finish() const {
    if (pos_ != data_.size()) fail(fmt::format("{} trailing bytes", data_.size() - pos_));
  }

  [[noreturn]] static void fail(const std::string& what) { throw Error(Errc::ProtocolViolation, what); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) fail("truncated frame");
  }
  std::uint64_t get(int bytes) {
    need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

void put_handle(Writer& w, const BenchmarkHandle& h) {
  w.u64(h.id);
  w.str(h.token);
}

BenchmarkHandle get_handle(Reader& r) {
  BenchmarkHandle h;
  h.id = r.u64();
  h.token = r.str();
  return h;
}

void put_batch(Writer& w, const WireBatch& b) {
  w.u64(b.seq_id);
  w.boolean(b.last);
  w.u32(static_cast<std::uint32_t>(b.events.size()));
  for (const auto& e : b.events) {
    w.str(e.symbol);
    w.u8(static_cast<std::uint8_t>(e.sec_type));
    w.str(e.last_price);
    w.u64(e.trading_ts);
  }
  w.u32(static_cast<std::uint32_t>(b.lookup_symbols.size()));
  for (const auto& s : b.lookup_symbols) w.str(s);
}

WireBatch get_batch(Reader& r) {
  WireBatch b;
  b.seq_id = r.u64();
  b.last = r.boolean();
  b.events.resize(r.count(17));
  for (auto& e : b.events) {
    e.symbol = r.str();
    e.sec_type = static_cast<char>(r.u8());
    e.last_price = r.str();
    e.trading_ts = r.u64();
  }
  b.lookup_symbols.resize(r.count(4));
  for (auto& s : b.lookup_symbols) s = r.str();
  return b;
}

void put_q1(Writer& w, const WireResultQ1& q) {
  w.u64(q.benchmark_id);
  w.u64(q.batch_seq_id);
  w.u32(static_cast<std::uint32_t>(q.indicators.size()));
  for (const auto& i : q.indicators) {
    w.str(i.symbol);
    w.f64(i.ema_38);
    w.f64(i.ema_100);
  }
}

WireResultQ1 get_q1(Reader& r) {
  WireResultQ1 q;
  q.benchmark_id = r.u64();
  q.batch_seq_id = r.u64();
  q.indicators.resize(r.count(20));
  for (auto& i : q.indicators) {
    i.symbol = r.str();
    i.ema_38 = r.f64();
    i.ema_100 = r.f64();
  }
  return q;
}

void put_q2(Writer& w, const WireResultQ2& q) {
  w.u64(q.benchmark_id);
  w.u64(q.batch_seq_id);
  w.u32(static_cast<std::uint32_t>(q.crossover_events.size()));
  for (const auto& e : q.crossover_events) {
    w.str(e.symbol);
    w.u8(e.kind == Advice::Buy ? 0 : 1);
    w.u64(e.ts);
  }
}

WireResultQ2 get_q2(Reader& r) {
  WireResultQ2 q;
  q.benchmark_id = r.u64();
  q.batch_seq_id = r.u64();
  q.crossover_events.resize(r.count(13));
  for (auto& e : q.crossover_events) {
    e.symbol = r.str();
    const auto kind = r.u8();
    if (kind > 1) Reader::fail("crossover kind out of range");
    e.kind = kind == 0 ? Advice::Buy : Advice::Sell;
    e.ts = r.u64();
  }
  return q;
}

void put_summary(Writer& w, const SessionSummary& s) {
  w.u64(s.benchmark_id);
  w.str(s.name);
  w.u64(s.batches);
  w.u64(s.answered);
  w.u64(s.duration_ns);
  w.f64(s.throughput_batches_per_s);
  w.f64(s.q1.mean_ns);
  w.u64(s.q1.p90_ns);
  w.f64(s.q2.mean_ns);
  w.u64(s.q2.p90_ns);
  w.u64(s.late_results);
  w.boolean(s.complete);
}

SessionSummary get_summary(Reader& r) {
  SessionSummary s;
  s.benchmark_id = r.u64();
  s.name = r.str();
  s.batches = r.u64();
  s.answered = r.u64();
  s.duration_ns = r.u64();
  s.throughput_batches_per_s = r.f64();
  s.q1.mean_ns = r.f64();
  s.q1.p90_ns = r.u64();
  s.q2.mean_ns = r.f64();
  s.q2.p90_ns = r.u64();
  s.late_results = r.u64();
  s.complete = r.boolean();
  return s;
}

template <class>
inline constexpr bool kAlwaysFalse = false;

}  // namespace

std::vector<std::uint8_t> encode(const Request& request) {
  Writer w;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CreateBenchmarkRequest>) {
          w.type(MsgType::CreateBenchmark);
          w.str(m.config.name);
          w.u64(m.config.dataset_seed);
          w.u32(m.config.batch_size);
        } else if constexpr (std::is_same_v<T, StartBenchmarkRequest>) {
          w.type(MsgType::StartBenchmark);
          put_handle(w, m.handle);
        } else if constexpr (std::is_same_v<T, NextBatchRequest>) {
          w.type(MsgType::NextBatch);
          put_handle(w, m.handle);
        } else if constexpr (std::is_same_v<T, ResultQ1Request>) {
          w.type(MsgType::ResultQ1);
          w.str(m.token);
          put_q1(w, m.result);
        } else if constexpr (std::is_same_v<T, ResultQ2Request>) {
          w.type(MsgType::ResultQ2);
          w.str(m.token);
          put_q2(w, m.result);
        } else if constexpr (std::is_same_v<T, EndBenchmarkRequest>) {
          w.type(MsgType::EndBenchmark);
          put_handle(w, m.handle);
        } else {
          static_assert(kAlwaysFalse<T>);
        }
      },
      request);
  return w.take();
}

std::vector<std::uint8_t> encode(const Response& response) {
  Writer w;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BenchmarkHandle>) {
          w.type(MsgType::BenchmarkCreated);
          put_handle(w, m);
        } else if constexpr (std::is_same_v<T, Ack>) {
          w.type(MsgType::Ack);
        } else if constexpr (std::is_same_v<T, WireBatch>) {
          w.type(MsgType::Batch);
          put_batch(w, m);
        } else if constexpr (std::is_same_v<T, SessionSummary>) {
          w.type(MsgType::Summary);
          put_summary(w, m);
        } else if constexpr (std::is_same_v<T, ErrorReply>) {
          w.type(MsgType::Error);
          w.u16(static_cast<std::uint16_t>(m.code));
          w.str(m.message);
        } else {
          static_assert(kAlwaysFalse<T>);
        }
      },
      response);
  return w.take();
}

std::vector<std::uint8_t> encode_batch(const WireBatch& batch) { return encode(Response{batch}); }

Request decode_request(std::span<const std::uint8_t> body) {
  Reader r(body);
  Request out;
  switch (static_cast<MsgType>(r.u16())) {
    case MsgType::CreateBenchmark: {
      CreateBenchmarkRequest m;
      m.config.name = r.str();
      m.config.dataset_seed = r.u64();
      m.config.batch_size = r.u32();
      out = std::move(m);
      break;
    }
    case MsgType::StartBenchmark: out = StartBenchmarkRequest{get_handle(r)}; break;
    case MsgType::NextBatch: out = NextBatchRequest{get_handle(r)}; break;
    case MsgType::ResultQ1: {
      ResultQ1Request m;
      m.token = r.str();
      m.result = get_q1(r);
      out = std::move(m);
      break;
    }
    case MsgType::ResultQ2: {
      ResultQ2Request m;
      m.token = r.str();
      m.result = get_q2(r);
      out = std::move(m);
      break;
    }
    case MsgType::EndBenchmark: out = EndBenchmarkRequest{get_handle(r)}; break;
    default: Reader::fail("unknown request type");
  }
  r.finish();
  return out;
}

Response decode_response(std::span<const std::uint8_t> body) {
  Reader r(body);
  Response out;
  switch (static_cast<MsgType>(r.u16())) {
    case MsgType::BenchmarkCreated: out = get_handle(r); break;
    case MsgType::Ack: out = Ack{}; break;
    case MsgType::Batch: out = get_batch(r); break;
    case MsgType::Summary: out = get_summary(r); break;
    case MsgType::Error: {
      const auto code = r.u16();
      if (code > static_cast<std::uint16_t>(Errc::ProtocolViolation)) Reader::fail("unknown error code");
      out = ErrorReply{static_cast<Errc>(code), r.str()};
      break;
    }
    default: Reader::fail("unknown response type");
  }
  r.finish();
  return out;
}

WireEvent to_wire(const TickEvent& event) {
  return WireEvent{event.symbol.str(), to_char(event.sec_type), event.last_price.to_string(),
                   static_cast<std::uint64_t>(event.trading_ts.epoch_ns())};
}

TickEvent from_wire(const WireEvent& event) {
  TickEvent tick;
  try {
    tick.symbol = Symbol::parse(event.symbol);
  } catch (const Error& e) {
    throw Error(Errc::ProtocolViolation, e.what());
  }
  const auto type = parse_security_type(std::string_view(&event.sec_type, 1));
  const auto price = Decimal::parse(event.last_price);
  if (!type || !price || !price->is_positive()) {
    throw Error(Errc::ProtocolViolation, fmt::format("invalid event for {}", event.symbol));
  }
  tick.sec_type = *type;
  tick.last_price = *price;
  tick.trading_ts = TickTimestamp::from_epoch_ns(static_cast<std::int64_t>(event.trading_ts));
  return tick;
}

Batch from_wire(const WireBatch& batch) {
  Batch out;
  out.seq_id = batch.seq_id;
  out.last = batch.last;
  out.events.reserve(batch.events.size());
  for (const auto& e : batch.events) out.events.push_back(from_wire(e));
  out.lookup_symbols.reserve(batch.lookup_symbols.size());
  for (const auto& s : batch.lookup_symbols) {
    try {
      out.lookup_symbols.push_back(Symbol::parse(s));
    } catch (const Error& e) {
      throw Error(Errc::ProtocolViolation, e.what());
    }
  }
  return out;
}

WireResultQ1 q1_result(std::uint64_t benchmark_id, std::uint64_t seq_id, const BatchResult& result) {
  WireResultQ1 q{benchmark_id, seq_id, {}};
  q.indicators.reserve(result.q1.size());
  for (const auto& [symbol, pair] : result.q1) q.indicators.push_back({symbol.str(), pair.ema38, pair.ema100});
  return q;
}

WireResultQ2 q2_result(std::uint64_t benchmark_id, std::uint64_t seq_id, const BatchResult& result,
                       const WindowSpec& window) {
  WireResultQ2 q{benchmark_id, seq_id, {}};
  for (const auto& [symbol, advisories] : result.q2) {
    for (const auto& a : advisories) {
      const auto ts = window_close_instant(a.window, window).epoch_ns();
      q.crossover_events.push_back({symbol.str(), a.kind, static_cast<std::uint64_t>(ts)});
    }
  }
  return q;
}

}  // namespace tickcep::wire
