#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tickcep/engine.hpp"
#include "tickcep/error.hpp"
#include "tickcep/indicators.hpp"
#include "tickcep/marketdata.hpp"
#include "tickcep/scoring.hpp"

// Message schema shared by the benchmark harness and solutions. The byte
// layout is documented in docs/wire.md; every integer is little-endian.
namespace tickcep::wire {

inline constexpr std::uint16_t kDefaultPort = 5023;
inline constexpr std::uint32_t kMaxFrameBytes = 64u << 20;

enum class MsgType : std::uint16_t {
  CreateBenchmark = 1,
  BenchmarkCreated = 2,
  StartBenchmark = 3,
  Ack = 4,
  NextBatch = 5,
  Batch = 6,
  ResultQ1 = 7,
  ResultQ2 = 8,
  EndBenchmark = 9,
  Summary = 10,
  Error = 255,
};

struct BenchmarkHandle {
  std::uint64_t id = 0;
  std::string token;

  friend bool operator==(const BenchmarkHandle&, const BenchmarkHandle&) = default;
};

struct BenchmarkConfig {
  std::string name;
  std::uint64_t dataset_seed = 0;  // seeds the session's subscription schedule
  std::uint32_t batch_size = 1000;

  friend bool operator==(const BenchmarkConfig&, const BenchmarkConfig&) = default;
};

struct WireEvent {
  std::string symbol;  // "base.EX"
  char sec_type = 'E';
  std::string last_price;  // decimal text
  std::uint64_t trading_ts = 0;  // epoch ns of the naive local clock

  friend bool operator==(const WireEvent&, const WireEvent&) = default;
};

struct WireBatch {
  std::uint64_t seq_id = 0;
  bool last = false;
  std::vector<WireEvent> events;
  std::vector<std::string> lookup_symbols;

  friend bool operator==(const WireBatch&, const WireBatch&) = default;
};

struct Indicator {
  std::string symbol;
  double ema_38 = 0.0;
  double ema_100 = 0.0;

  friend bool operator==(const Indicator&, const Indicator&) = default;
};

struct WireResultQ1 {
  std::uint64_t benchmark_id = 0;
  std::uint64_t batch_seq_id = 0;
  std::vector<Indicator> indicators;

  friend bool operator==(const WireResultQ1&, const WireResultQ1&) = default;
};

struct CrossoverEvent {
  std::string symbol;
  Advice kind = Advice::Buy;
  std::uint64_t ts = 0;  // close instant of the evaluated window, epoch ns

  friend bool operator==(const CrossoverEvent&, const CrossoverEvent&) = default;
};

struct WireResultQ2 {
  std::uint64_t benchmark_id = 0;
  std::uint64_t batch_seq_id = 0;
  std::vector<CrossoverEvent> crossover_events;

  friend bool operator==(const WireResultQ2&, const WireResultQ2&) = default;
};

// Requests.
struct CreateBenchmarkRequest { BenchmarkConfig config; };
struct StartBenchmarkRequest { BenchmarkHandle handle; };
struct NextBatchRequest { BenchmarkHandle handle; };
struct ResultQ1Request { std::string token; WireResultQ1 result; };
struct ResultQ2Request { std::string token; WireResultQ2 result; };
struct EndBenchmarkRequest { BenchmarkHandle handle; };

using Request = std::variant<CreateBenchmarkRequest, StartBenchmarkRequest, NextBatchRequest,
                             ResultQ1Request, ResultQ2Request, EndBenchmarkRequest>;

// Responses.
struct Ack {};
struct ErrorReply {
  Errc code = Errc::ProtocolViolation;
  std::string message;
};

using Response = std::variant<BenchmarkHandle, Ack, WireBatch, SessionSummary, ErrorReply>;

/// Frame body: u16 message type followed by the payload. Decoders throw
/// Error(ProtocolViolation) on unknown types, truncation or trailing bytes.
std::vector<std::uint8_t> encode(const Request& request);
std::vector<std::uint8_t> encode(const Response& response);
Request decode_request(std::span<const std::uint8_t> body);
Response decode_response(std::span<const std::uint8_t> body);

std::vector<std::uint8_t> encode_batch(const WireBatch& batch);

WireEvent to_wire(const TickEvent& event);
/// Throws Error(ProtocolViolation) if the event does not denote a valid tick.
TickEvent from_wire(const WireEvent& event);
Batch from_wire(const WireBatch& batch);

/// Q1/Q2 answers for one batch in wire form; advisory timestamps are window
/// close instants under `window`.
WireResultQ1 q1_result(std::uint64_t benchmark_id, std::uint64_t seq_id, const BatchResult& result);
WireResultQ2 q2_result(std::uint64_t benchmark_id, std::uint64_t seq_id, const BatchResult& result,
                       const WindowSpec& window);

}  // namespace tickcep::wire
