#include "tickcep/subscriptions.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>

#include <spdlog/spdlog.h>

namespace tickcep {
namespace {

enum Stream : std::uint32_t { kChangeStream = 1, kDrawStream = 2 };

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t seq_id, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(seq_id), static_cast<std::uint32_t>(seq_id >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

bool changes_at(std::uint64_t seed, std::uint64_t seq_id, double p_change) {
  if (seq_id == 0) return true;
  auto rng = derived_rng(seed, seq_id, kChangeStream);
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u < p_change;
}

std::vector<Symbol> draw(std::uint64_t seed, std::uint64_t seq_id, std::span<const Symbol> universe,
                         std::size_t k) {
  if (k >= universe.size()) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
      spdlog::warn("subscription size {} covers the whole universe of {} symbols", k, universe.size());
    }
    std::vector<Symbol> all(universe.begin(), universe.end());
    std::sort(all.begin(), all.end());
    return all;
  }
  auto rng = derived_rng(seed, seq_id, kDrawStream);
  std::vector<std::size_t> index(universe.size());
  std::iota(index.begin(), index.end(), 0);
  // Partial Fisher-Yates: the first k slots become a uniform sample.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, index.size() - 1);
    std::swap(index[i], index[pick(rng)]);
  }
  std::vector<Symbol> subset;
  subset.reserve(k);
  for (std::size_t i = 0; i < k; ++i) subset.push_back(universe[index[i]]);
  std::sort(subset.begin(), subset.end());
  return subset;
}

}  // namespace

std::vector<Symbol> subscriptions_for(std::uint64_t seed, std::uint64_t seq_id,
                                      std::span<const Symbol> universe, const SubscriptionConfig& config) {
  if (universe.empty()) return {};
  std::uint64_t change = seq_id;
  while (!changes_at(seed, change, config.p_change)) --change;
  return draw(seed, change, universe, config.k);
}

SubscriptionSchedule::SubscriptionSchedule(std::uint64_t seed, std::vector<Symbol> universe,
                                           SubscriptionConfig config)
    : seed_(seed), universe_(std::move(universe)), config_(config) {}

const std::vector<Symbol>& SubscriptionSchedule::next() {
  const std::uint64_t seq = seq_++;
  if (!universe_.empty() && changes_at(seed_, seq, config_.p_change)) {
    current_ = draw(seed_, seq, universe_, config_.k);
  }
  return current_;
}

}  // namespace tickcep
