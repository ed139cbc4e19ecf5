#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tickcep/marketdata.hpp"

namespace tickcep {

struct SubscriptionConfig {
  double p_change = 0.1;  // chance that a batch brings a fresh subset
  std::size_t k = 100;    // subset size, capped at the universe size
};

/// Lookup symbols for batch `seq_id`. Batch 0 always draws; every later batch
/// draws a fresh subset with probability p_change and otherwise repeats the
/// previous one. A pure function of (seed, seq_id, universe, config).
/// Result is sorted.
std::vector<Symbol> subscriptions_for(std::uint64_t seed, std::uint64_t seq_id,
                                      std::span<const Symbol> universe,
                                      const SubscriptionConfig& config = {});

/// Sequential form of `subscriptions_for` for consecutive seq ids; avoids
/// re-deriving the last change point on every batch.
class SubscriptionSchedule {
 public:
  SubscriptionSchedule(std::uint64_t seed, std::vector<Symbol> universe, SubscriptionConfig config = {});

  /// Subscription for the next seq id (0, 1, 2, ...).
  const std::vector<Symbol>& next();
  std::uint64_t next_seq_id() const noexcept { return seq_; }

 private:
  std::uint64_t seed_;
  std::vector<Symbol> universe_;
  SubscriptionConfig config_;
  std::uint64_t seq_ = 0;
  std::vector<Symbol> current_;
};

}  // namespace tickcep
