#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "tickcep/subscriptions.hpp"

namespace tickcep {
namespace {

std::vector<Symbol> universe(int n) {
  std::vector<Symbol> u;
  for (int i = 0; i < n; ++i) u.push_back(Symbol{"S" + std::to_string(1000 + i), Exchange::ETR});
  return u;
}

TEST(Subscriptions, PureInSeedAndSeq) {
  const auto u = universe(500);
  for (std::uint64_t seq : {0u, 1u, 7u, 250u}) {
    const auto a = subscriptions_for(9, seq, u);
    EXPECT_EQ(a, subscriptions_for(9, seq, u));
    EXPECT_EQ(a.size(), 100u);
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    EXPECT_EQ(std::set<Symbol>(a.begin(), a.end()).size(), a.size());
  }
  EXPECT_NE(subscriptions_for(1, 0, u), subscriptions_for(2, 0, u));
}

TEST(Subscriptions, ScheduleMatchesPureFunction) {
  const auto u = universe(300);
  const SubscriptionConfig cfg{0.3, 20};
  SubscriptionSchedule schedule(5, u, cfg);
  for (std::uint64_t seq = 0; seq < 400; ++seq) {
    ASSERT_EQ(schedule.next_seq_id(), seq);
    ASSERT_EQ(schedule.next(), subscriptions_for(5, seq, u, cfg)) << seq;
  }
}

TEST(Subscriptions, ChangeRateFollowsProbability) {
  const auto u = universe(1000);
  SubscriptionSchedule schedule(17, u, SubscriptionConfig{0.1, 50});
  auto previous = schedule.next();
  int changes = 0;
  for (int i = 1; i < 5000; ++i) {
    const auto& current = schedule.next();
    changes += current != previous;
    previous = current;
  }
  EXPECT_NEAR(changes / 5000.0, 0.1, 0.02);
}

TEST(Subscriptions, EdgeSizes) {
  const auto small = universe(10);
  EXPECT_EQ(subscriptions_for(1, 0, small, SubscriptionConfig{0.1, 50}), small);
  EXPECT_EQ(subscriptions_for(1, 0, small, SubscriptionConfig{0.1, 10}), small);
  EXPECT_TRUE(subscriptions_for(1, 0, {}, SubscriptionConfig{}).empty());
  EXPECT_TRUE(subscriptions_for(1, 3, small, SubscriptionConfig{0.5, 0}).empty());
  const SubscriptionConfig never{0.0, 3};
  for (std::uint64_t seq = 1; seq < 20; ++seq) {
    EXPECT_EQ(subscriptions_for(2, seq, small, never), subscriptions_for(2, 0, small, never));
  }
}

}  // namespace
}  // namespace tickcep
