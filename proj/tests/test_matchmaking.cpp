#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dave/matchmaking.hpp"

using namespace dave;

namespace {

std::vector<claim_record> claims_with_counts(const std::vector<std::uint64_t>& per_k) {
  std::vector<claim_record> out;
  claim_id id = 0;
  for (std::uint32_t k = 0; k < per_k.size(); ++k) {
    for (std::uint64_t i = 0; i < per_k[k]; ++i) {
      claim_record c;
      c.id = id++;
      c.demotions = k;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

TEST(Matchmaking, BorrowExample) {
  auto p = matchmake(claims_with_counts({33, 33, 33, 3, 3, 3}), 10);
  EXPECT_EQ(p.borrow_first, (std::vector<std::uint64_t>{0, 3, 6, 9, 2, 5}));
  EXPECT_EQ(p.borrow_last, (std::vector<std::uint64_t>{7, 4, 1, 6, 3, 0}));
  EXPECT_EQ(p.groups.size(), 11u);
  EXPECT_EQ(p.groups.back().size(), 8u);
}

TEST(Matchmaking, FourEqualClaims) {
  auto p = matchmake(claims_with_counts({4}), 2);
  ASSERT_EQ(p.groups.size(), 2u);
  EXPECT_EQ(p.borrow_first, (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(p.borrow_last, (std::vector<std::uint64_t>{0}));
}

TEST(Matchmaking, SingleClaim) {
  auto p = matchmake(claims_with_counts({1}), 4);
  ASSERT_EQ(p.groups.size(), 1u);
  EXPECT_TRUE(p.auto_wins(0));
  EXPECT_TRUE(p.last_is_singleton);
}

TEST(Matchmaking, SkipsEliminatedAndSortsStably) {
  auto cs = claims_with_counts({2, 2});
  cs[0].demotions = 1;
  cs[3].eliminated = true;
  auto p = matchmake(cs, 2);
  ASSERT_EQ(p.groups.size(), 2u);
  EXPECT_EQ(p.groups[0], (std::vector<claim_id>{1, 0}));
  EXPECT_EQ(p.groups[1], (std::vector<claim_id>{2}));
}

// Borrow counts against a position-by-position walk of the groups.
TEST(Matchmaking, BorrowsMatchWalkOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::uint32_t G = 2 + rng() % 6;
    std::vector<std::uint64_t> per(1 + rng() % 6);
    std::uint64_t total = 0;
    for (auto& c : per) total += (c = rng() % 12);
    if (total == 0) continue;
    auto p = matchmake(claims_with_counts(per), G);

    std::vector<std::uint32_t> key;
    for (std::uint32_t k = 0; k < per.size(); ++k) key.insert(key.end(), per[k], k);
    std::set<claim_id> seen;
    std::size_t pos = 0;
    for (std::size_t g = 0; g < p.groups.size(); ++g) {
      EXPECT_TRUE(p.groups[g].size() == G || g + 1 == p.groups.size());
      for (auto id : p.groups[g]) EXPECT_TRUE(seen.insert(id).second);
      pos += p.groups[g].size();
    }
    EXPECT_EQ(pos, total);
    for (std::uint32_t k = 0; k < per.size(); ++k) {
      if (per[k] == 0) continue;
      std::size_t first = std::find(key.begin(), key.end(), k) - key.begin();
      std::size_t last = first + per[k] - 1;
      std::size_t g0 = first / G, g1 = last / G;
      std::uint64_t lower = 0, higher = 0;
      for (std::size_t i = g0 * G; i < first; ++i) lower += key[i] < k;
      for (std::size_t i = last + 1; i < std::min<std::size_t>((g1 + 1) * G, total); ++i) higher += key[i] > k;
      EXPECT_EQ(p.borrow_first[k], lower);
      EXPECT_EQ(p.borrow_last[k], higher);
    }
  }
}

TEST(Matchmaking, ContinuousSortsByCensoredTime) {
  auto cs = claims_with_counts({3});
  cs[0].censored = 500;
  cs[1].censored = 100;
  auto p = matchmake(cs, 2, dispute_mode::continuous);
  EXPECT_EQ(p.groups[0], (std::vector<claim_id>{2, 1}));
  EXPECT_TRUE(p.borrow_first.empty());
}
