#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dave/adversary.hpp"
#include "dave/analysis.hpp"

using namespace dave;

namespace {

// Every outcome reachable by letting any member of each group win, computed
// on an explicit list of claims.
std::set<distribution> brute_force_successors(const distribution& d, std::uint32_t G) {
  std::vector<std::uint32_t> claims;
  for (std::uint32_t k = 0; k < d.size(); ++k) claims.insert(claims.end(), d[k], k);
  std::vector<std::vector<std::uint32_t>> groups;
  for (std::size_t i = 0; i < claims.size(); i += G) {
    groups.emplace_back(claims.begin() + i, claims.begin() + std::min(claims.size(), i + G));
  }
  std::set<distribution> out;
  std::vector<std::size_t> pick(groups.size(), 0);
  while (true) {
    distribution next(d.size() + 1, 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t m = 0; m < groups[g].size(); ++m) {
        auto k = groups[g][m];
        ++next[(m == pick[g] || groups[g].size() == 1) ? k : k + 1];
      }
    }
    next.pop_back();
    out.insert(next);
    std::size_t g = 0;
    while (g < pick.size() && ++pick[g] == groups[g].size()) pick[g++] = 0;
    if (g == pick.size()) break;
  }
  return out;
}

}  // namespace

TEST(Adversary, SuccessorExample) {
  auto s = successors(distribution{2, 1}, 2);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].next, (distribution{1, 2}));
}

TEST(Adversary, AllPureGroups) {
  for (std::uint64_t n : {2ull, 8ull, 30ull}) {
    auto s = successors(initial_distribution(5, n), 2);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].next, (distribution{n / 2, n / 2, 0, 0, 0}));
  }
}

TEST(Adversary, SuccessorsMatchBruteForce) {
  for (std::uint32_t G : {2u, 3u, 4u}) {
    for (const distribution& d : {distribution{3, 2, 1, 1}, distribution{1, 1, 1, 1, 1}, distribution{5, 0, 2, 3},
                                  distribution{0, 4, 1, 2}, distribution{2, 2, 2}}) {
      std::set<distribution> ours;
      for (const auto& s : successors(d, G, abstract_model::sybil_only)) ours.insert(s.next);
      EXPECT_EQ(ours, brute_force_successors(d, G)) << "G=" << G;
    }
  }
}

TEST(Adversary, SuccessorConservationAndBranching) {
  const std::uint32_t K = 6;
  for (std::uint32_t G : {2u, 3u}) {
    for (const distribution& d : {distribution{1, 1, 1, 1, 1, 1}, distribution{3, 1, 0, 2, 1, 1},
                                  distribution{7, 3, 3, 1, 0, 1}}) {
      auto L = layout_round(d, G, abstract_model::sybil_only);
      auto s = successors(d, G, abstract_model::sybil_only);
      std::size_t combos = 1;
      for (std::size_t g = 0; g < L.mixed.size(); ++g) combos *= choice_options(L, g).size();
      EXPECT_LE(s.size(), combos);
      EXPECT_LE(L.mixed.size(), std::size_t{K - 1});
      if (G == 2) {
        EXPECT_LE(s.size(), std::size_t{1} << (K - 1));
      }
      for (const auto& x : s) {
        auto full = resolve_round(L, winners_of(x.choices));
        EXPECT_EQ(total_claims(full), total_claims(d));
        EXPECT_GT(demotion_mass(x.next, total_claims(d)), demotion_mass(d, total_claims(d)));
      }
    }
  }
}

TEST(Adversary, MaxDelayPrefersLeastDemoted) {
  // Sorted claims [0,3 | 3,3]: one mixed group {0,3} and a pure group at 3.
  distribution d{1, 0, 0, 3, 0, 0, 0};
  auto L = layout_round(d, 2, abstract_model::sybil_only);
  ASSERT_EQ(L.mixed.size(), 1u);
  auto c = max_delay_choice(L);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].winner, 0u);
}

TEST(Adversary, MaxDelayTwistAtTheEnd) {
  const std::uint32_t K = 5;
  distribution d{1, 0, 0, 0, 1};
  auto L = layout_round(d, 2, abstract_model::sybil_only);
  auto c = max_delay_choice(L);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].winner, K - 1);
  EXPECT_EQ(max_delay_step(d, 2, abstract_model::sybil_only), (distribution{0, 1, 0, 0, 1}));
}

TEST(Adversary, NoMixedGroupsNoChoices) {
  auto L = layout_round(distribution{4, 0, 2}, 2);
  EXPECT_TRUE(max_delay_choice(L).empty());
}

TEST(Adversary, HeroGroupIsPinned) {
  // Hero plus one claim at K-1: the only group is mixed and the hero wins it.
  auto L = layout_round(distribution{1, 0, 0, 1}, 2, abstract_model::hero_pinned);
  ASSERT_EQ(L.forced.size(), 1u);
  EXPECT_EQ(L.forced[0], 0u);
  EXPECT_EQ(successors(distribution{1, 0, 0, 1}, 2).size(), 1u);
  EXPECT_THROW(layout_round(distribution{0, 2}, 2, abstract_model::hero_pinned), error);
}

TEST(Adversary, ExhaustiveSmallCases) {
  for (std::uint32_t K = 1; K <= 6; ++K) {
    for (std::uint32_t G : {2u, 3u}) {
      EXPECT_EQ(exhaustive_max_delay(K, G, 2).rounds, K);
      EXPECT_EQ(exhaustive_max_delay(K, G, 1).rounds, 0u);
    }
  }
  EXPECT_EQ(exhaustive_max_delay(3, 2, 4).rounds, max_delay_rounds(3, 2, 4));
}

TEST(Adversary, ExhaustiveWitnessIsAValidPath) {
  for (auto [K, G, N] : {std::tuple{4u, 2u, 13ull}, std::tuple{5u, 3u, 20ull}}) {
    auto r = exhaustive_max_delay(K, G, N);
    ASSERT_EQ(r.witness.size(), r.rounds + 1);
    EXPECT_EQ(r.witness.front().state, initial_distribution(K, N));
    EXPECT_LE(total_claims(r.witness.back().state), 1u);
    for (std::size_t i = 0; i + 1 < r.witness.size(); ++i) {
      auto L = layout_round(r.witness[i].state, G);
      auto next = resolve_round(L, winners_of(r.witness[i].choices));
      next.pop_back();
      EXPECT_EQ(next, r.witness[i + 1].state);
    }
  }
}

TEST(Adversary, SybilOnlyExhaustiveMatchesTwistedGreedy) {
  for (std::uint32_t K = 3; K <= 5; ++K) {
    for (std::uint32_t G : {2u, 3u}) {
      for (std::uint64_t N = 2; N <= 20; ++N) {
        EXPECT_EQ(exhaustive_max_delay(K, G, N, abstract_model::sybil_only).rounds,
                  max_delay_rounds(K, G, N, abstract_model::sybil_only))
            << K << " " << G << " " << N;
      }
    }
  }
}

TEST(Adversary, SearchSpaceLimits) {
  EXPECT_THROW(exhaustive_max_delay(8, 2, 10), error);
  EXPECT_THROW(exhaustive_max_delay(4, 4, 10), error);
  EXPECT_THROW(exhaustive_max_delay(4, 2, 65), error);
}

TEST(Adversary, CensorshipPolicies) {
  auto P = make_params(604800, 7200, 28800, 2, 4);
  censorship_scheduler none(censorship_policy::none, P, dispute_mode::discrete, 0, 1);
  for (std::uint64_t r = 0; r < 40; ++r) EXPECT_TRUE(none.plan_round(r, r * P.round_duration()).empty());

  censorship_scheduler bursts(censorship_policy::bursts, P, dispute_mode::discrete, 0, 1);
  std::size_t n = 0;
  for (std::uint64_t r = 0; r < 40; ++r) {
    auto spans = bursts.plan_round(r, r * P.round_duration());
    for (const auto& s : spans) {
      EXPECT_EQ(s.duration, P.grace_period + 1);
      EXPECT_EQ(s.start, r * P.round_duration() + P.action_duration(0));
    }
    n += spans.size();
  }
  EXPECT_LE(n, P.max_demotions);
  EXPECT_EQ(n, P.max_demotions - 1);
  EXPECT_LE(bursts.budget().spent(), P.censorship_budget);

  censorship_scheduler once(censorship_policy::all_at_once, P, dispute_mode::discrete, 0, 3);
  for (std::uint64_t r = 0; r < 5; ++r) once.plan_round(r, r * P.round_duration());
  ASSERT_EQ(once.spans().size(), 1u);
  EXPECT_EQ(once.spans()[0].duration, P.censorship_budget);

  censorship_scheduler rnd(censorship_policy::random_spans, P, dispute_mode::discrete, 0, 11, 0.5);
  for (std::uint64_t r = 0; r < 200; ++r) rnd.plan_round(r, r * P.round_duration());
  EXPECT_LE(rnd.budget().spent(), P.censorship_budget);
  EXPECT_EQ(parse_censorship_policy("bursts"), censorship_policy::bursts);
  EXPECT_THROW(parse_censorship_policy("loud"), error);
}
