#include "tickcep/scoring.hpp"

#include <algorithm>
#include <numeric>

#include "tickcep/error.hpp"

namespace tickcep {
namespace {

LatencyStats latency_stats(std::vector<std::uint64_t> samples) {
  if (samples.empty()) return {};
  const long double total = std::accumulate(samples.begin(), samples.end(), 0.0L);
  return LatencyStats{static_cast<double>(total / samples.size()), percentile_p90(samples)};
}

// Competition ranking (1, 2, 2, 4) by ascending key.
template <typename Key>
std::vector<std::size_t> competition_ranks(std::size_t n, Key key) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  std::vector<std::size_t> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool tied = i > 0 && key(order[i]) == key(order[i - 1]);
    ranks[order[i]] = tied ? ranks[order[i - 1]] : i + 1;
  }
  return ranks;
}

}  // namespace

std::uint64_t percentile_p90(std::span<const std::uint64_t> samples) {
  if (samples.empty()) throw Error(Errc::EmptySamples, "p90 of no samples");
  std::vector<std::uint64_t> sorted(samples.begin(), samples.end());
  // ceil(0.9 n) in integers.
  const std::size_t rank = (9 * sorted.size() + 9) / 10;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
  return sorted[rank - 1];
}

SessionSummary score_session(const SessionLedger& ledger, std::uint64_t benchmark_id, std::string name) {
  if (!ledger.t_end) throw Error(Errc::SessionNotEnded, "score requires an ended session");

  SessionSummary summary;
  summary.benchmark_id = benchmark_id;
  summary.name = std::move(name);
  summary.batches = ledger.batches.size();
  summary.duration_ns = *ledger.t_end - ledger.t_start;

  std::vector<std::uint64_t> q1;
  std::vector<std::uint64_t> q2;
  for (const auto& entry : ledger.batches) {
    if (entry.t_q1) q1.push_back(*entry.t_q1 - entry.t_sent);
    if (entry.t_q2) q2.push_back(*entry.t_q2 - entry.t_sent);
    if (entry.t_q1 && entry.t_q2) {
      ++summary.answered;
    } else {
      ++summary.late_results;
    }
  }
  summary.q1 = latency_stats(std::move(q1));
  summary.q2 = latency_stats(std::move(q2));
  if (summary.duration_ns > 0) {
    summary.throughput_batches_per_s = static_cast<double>(summary.answered) * 1e9 /
                                       static_cast<double>(summary.duration_ns);
  }
  summary.complete = ledger.delivered_last && summary.late_results == 0;
  return summary;
}

std::vector<LeaderboardEntry> rank(std::span<const SessionSummary> summaries) {
  const std::size_t n = summaries.size();
  const auto q1 = competition_ranks(n, [&](std::size_t i) { return summaries[i].q1.p90_ns; });
  const auto q2 = competition_ranks(n, [&](std::size_t i) { return summaries[i].q2.p90_ns; });

  std::vector<LeaderboardEntry> board;
  board.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    board.push_back(LeaderboardEntry{summaries[i], q1[i], q2[i],
                                     static_cast<double>(q1[i] + q2[i]) / 2.0, 0});
  }
  std::sort(board.begin(), board.end(), [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
    if (a.mean_rank != b.mean_rank) return a.mean_rank < b.mean_rank;
    if (a.summary.throughput_batches_per_s != b.summary.throughput_batches_per_s) {
      return a.summary.throughput_batches_per_s > b.summary.throughput_batches_per_s;
    }
    return a.summary.name < b.summary.name;
  });
  for (std::size_t i = 0; i < n; ++i) board[i].position = i + 1;
  return board;
}

}  // namespace tickcep
