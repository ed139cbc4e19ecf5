#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tickcep {

/// Nearest-rank 90th percentile: the element at index ceil(0.9 n) - 1 of the
/// ascending samples. Throws Error(EmptySamples) for n == 0.
std::uint64_t percentile_p90(std::span<const std::uint64_t> samples);

struct LatencyStats {
  double mean_ns = 0.0;
  std::uint64_t p90_ns = 0;

  friend bool operator==(const LatencyStats&, const LatencyStats&) = default;
};

struct SessionSummary {
  std::uint64_t benchmark_id = 0;
  std::string name;
  std::uint64_t batches = 0;   // delivered
  std::uint64_t answered = 0;  // delivered with both results
  std::uint64_t duration_ns = 0;
  double throughput_batches_per_s = 0.0;
  LatencyStats q1;
  LatencyStats q2;
  std::uint64_t late_results = 0;  // delivered batches missing a result
  bool complete = false;

  friend bool operator==(const SessionSummary&, const SessionSummary&) = default;
};

/// Monotonic-clock instants (ns) recorded by the harness for one batch.
struct LedgerEntry {
  std::uint64_t t_sent = 0;
  std::optional<std::uint64_t> t_q1;
  std::optional<std::uint64_t> t_q2;
};

struct SessionLedger {
  std::uint64_t t_start = 0;
  std::optional<std::uint64_t> t_end;  // set once the session has ended
  bool delivered_last = false;
  std::vector<LedgerEntry> batches;
};

/// Per-query latency is t_q - t_sent over batches that got that result;
/// throughput is answered batches over (t_end - t_start).
/// Throws Error(SessionNotEnded) if the ledger has no end instant.
SessionSummary score_session(const SessionLedger& ledger, std::uint64_t benchmark_id = 0,
                             std::string name = {});

struct LeaderboardEntry {
  SessionSummary summary;
  std::size_t rank_q1 = 0;  // 1 = lowest p90
  std::size_t rank_q2 = 0;
  double mean_rank = 0.0;
  std::size_t position = 0;  // 1-based final place
};

/// Ranks each query by ascending p90 (equal p90s share a rank), orders by the
/// mean of both ranks, then by higher throughput, then by name.
std::vector<LeaderboardEntry> rank(std::span<const SessionSummary> summaries);

}  // namespace tickcep
