#pragma once

#include <functional>

#include "tickcep/engine.hpp"
#include "tickcep/transport.hpp"
#include "tickcep/wire.hpp"

namespace tickcep {

/// Typed client over a Channel. Error replies are rethrown as Error with the
/// harness's code; malformed replies raise Error(ProtocolViolation).
class HarnessClient {
 public:
  explicit HarnessClient(Channel& channel) : channel_(channel) {}

  wire::BenchmarkHandle create_benchmark(const wire::BenchmarkConfig& config);
  void start_benchmark(const wire::BenchmarkHandle& handle);
  wire::WireBatch next_batch(const wire::BenchmarkHandle& handle);
  void result_q1(const wire::BenchmarkHandle& handle, const wire::WireResultQ1& result);
  void result_q2(const wire::BenchmarkHandle& handle, const wire::WireResultQ2& result);
  SessionSummary end_benchmark(const wire::BenchmarkHandle& handle);

 private:
  wire::Response exchange(const wire::Request& request);

  Channel& channel_;
};

struct SolveStats {
  SessionSummary summary;
  std::uint64_t batches = 0;
  std::uint64_t events = 0;
};

/// Runs one full session (create, start, pull and answer every batch, end)
/// with `engine` computing the answers.
SolveStats solve(Channel& channel, const wire::BenchmarkConfig& config, Engine& engine,
                 const std::function<void(const wire::WireBatch&)>& on_batch = {});

}  // namespace tickcep
