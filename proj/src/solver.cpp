#include "tickcep/solver.hpp"

#include <fmt/format.h>

namespace tickcep {
namespace {

template <typename T>
T expect(wire::Response response, std::string_view call) {
  if (auto* error = std::get_if<wire::ErrorReply>(&response)) throw Error(error->code, error->message);
  if (auto* value = std::get_if<T>(&response)) return std::move(*value);
  throw Error(Errc::ProtocolViolation, fmt::format("unexpected reply to {}", call));
}

}  // namespace

wire::Response HarnessClient::exchange(const wire::Request& request) {
  const auto body = wire::encode(request);
  return wire::decode_response(channel_.call(body));
}

wire::BenchmarkHandle HarnessClient::create_benchmark(const wire::BenchmarkConfig& config) {
  return expect<wire::BenchmarkHandle>(exchange(wire::CreateBenchmarkRequest{config}), "create_benchmark");
}

void HarnessClient::start_benchmark(const wire::BenchmarkHandle& handle) {
  expect<wire::Ack>(exchange(wire::StartBenchmarkRequest{handle}), "start_benchmark");
}

wire::WireBatch HarnessClient::next_batch(const wire::BenchmarkHandle& handle) {
  return expect<wire::WireBatch>(exchange(wire::NextBatchRequest{handle}), "next_batch");
}

void HarnessClient::result_q1(const wire::BenchmarkHandle& handle, const wire::WireResultQ1& result) {
  expect<wire::Ack>(exchange(wire::ResultQ1Request{handle.token, result}), "result_q1");
}

void HarnessClient::result_q2(const wire::BenchmarkHandle& handle, const wire::WireResultQ2& result) {
  expect<wire::Ack>(exchange(wire::ResultQ2Request{handle.token, result}), "result_q2");
}

SessionSummary HarnessClient::end_benchmark(const wire::BenchmarkHandle& handle) {
  return expect<SessionSummary>(exchange(wire::EndBenchmarkRequest{handle}), "end_benchmark");
}

SolveStats solve(Channel& channel, const wire::BenchmarkConfig& config, Engine& engine,
                 const std::function<void(const wire::WireBatch&)>& on_batch) {
  HarnessClient client(channel);
  const auto handle = client.create_benchmark(config);
  client.start_benchmark(handle);

  SolveStats stats;
  for (;;) {
    const auto wire_batch = client.next_batch(handle);
    if (wire_batch.seq_id != stats.batches) {
      throw Error(Errc::ProtocolViolation,
                  fmt::format("expected batch {}, got {}", stats.batches, wire_batch.seq_id));
    }
    if (on_batch) on_batch(wire_batch);
    const auto result = engine.process_batch(wire::from_wire(wire_batch));
    client.result_q1(handle, wire::q1_result(handle.id, wire_batch.seq_id, result));
    client.result_q2(handle, wire::q2_result(handle.id, wire_batch.seq_id, result, engine.config().window));
    ++stats.batches;
    stats.events += wire_batch.events.size();
    if (wire_batch.last) break;
  }
  stats.summary = client.end_benchmark(handle);
  return stats;
}

}  // namespace tickcep
