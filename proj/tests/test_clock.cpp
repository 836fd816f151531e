#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "dave/clock.hpp"

using namespace dave;

namespace {

errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  return errc::precondition_violated;
}

}  // namespace

TEST(Clock, MakeParamsK21) {
  auto p = make_params(604800, 7200, 28800, 4);
  EXPECT_EQ(p.max_demotions, 21u);
  EXPECT_EQ(p.round_duration(), 7200u + 2 * 28800u);
  EXPECT_EQ(p.round_duration(dispute_mode::continuous), 7200u + 28800u);
}

TEST(Clock, MakeParamsTable1Row) {
  auto p = make_params(604800, 7200, 37800, 2);
  EXPECT_EQ(p.max_demotions, 16u);
  EXPECT_EQ(p.round_duration(), 82800u);
  EXPECT_EQ(p.round_duration(), 23u * 3600u);
}

TEST(Clock, MakeParamsDegenerate) { EXPECT_EQ(make_params(604800, 7200, 604800, 2).max_demotions, 1u); }

TEST(Clock, MakeParamsErrors) {
  EXPECT_EQ(code_of([] { make_params(604800, 7200, 50000, 2); }), errc::non_divisible_grace);
  EXPECT_EQ(code_of([] { make_params(604800, 1, 28800, 2); }), errc::invalid_param);
  EXPECT_EQ(code_of([] { make_params(604800, 7201, 28800, 2); }), errc::invalid_param);
  EXPECT_EQ(code_of([] { make_params(604800, 7200, 28800, 1); }), errc::invalid_param);
}

TEST(Clock, ScheduleSumsToMatchDuration) {
  for (unsigned b : {1u, 4u, 7u, 13u}) {
    auto p = make_params(604800, 7202, 28800, 2, b);
    ASSERT_EQ(p.action_schedule.size(), b + 1);
    EXPECT_EQ(2 * std::accumulate(p.action_schedule.begin(), p.action_schedule.end(), seconds{0}), 7202u);
    EXPECT_EQ(p.interactions(), 2 * (b + 1));
    auto [lo, hi] = std::minmax_element(p.action_schedule.begin(), p.action_schedule.end());
    EXPECT_LE(*hi - *lo, 1u);
  }
}

TEST(Clock, InitialClock) {
  auto p = make_params(604800, 7200, 28800, 4);
  EXPECT_EQ(p.initial_clock(), 3600u + 28800u);
}

TEST(Clock, Tick) {
  chess_clock c{10, true};
  auto r = tick_clock(c, 3);
  ASSERT_TRUE(std::holds_alternative<chess_clock>(r));
  EXPECT_EQ(std::get<chess_clock>(r).remaining, 7u);

  auto r2 = tick_clock(c, 10);
  ASSERT_TRUE(std::holds_alternative<timeout_event>(r2));
  EXPECT_EQ(std::get<timeout_event>(r2).at, 10u);

  auto r3 = tick_clock(c, 15);
  ASSERT_TRUE(std::holds_alternative<timeout_event>(r3));
  EXPECT_EQ(std::get<timeout_event>(r3).at, 10u);

  EXPECT_EQ(code_of([] { tick_clock(chess_clock{10, false}, 1); }), errc::clock_not_running);
}

TEST(Clock, CensorshipBudget) {
  const seconds tc = 604800, tg = 28800;
  censorship_budget b(tc);
  auto all = spend_censorship(b, 0, tc, 0);
  EXPECT_EQ(all.remaining, 0u);
  EXPECT_EQ(all.spent_log.size(), 1u);

  censorship_budget small(tg);
  EXPECT_EQ(code_of([&] { spend_censorship(small, 0, tg + 1, 0); }), errc::budget_exhausted);

  auto two = spend_censorship(spend_censorship(b, 0, tg, 0), 100, tg, 0);
  EXPECT_EQ(two.remaining, tc - 2 * tg);
  EXPECT_EQ(two.spent(), 2 * tg);
}

TEST(Clock, ReleaseTimeAndOverlap) {
  std::vector<censorship_span> spans{{10, 5, 1}, {15, 5, 1}, {40, 10, 2}};
  EXPECT_EQ(release_time(spans, 9, 1), 9u);
  EXPECT_EQ(release_time(spans, 10, 1), 20u);  // chained spans
  EXPECT_EQ(release_time(spans, 19, 1), 20u);
  EXPECT_EQ(release_time(spans, 20, 1), 20u);
  EXPECT_EQ(release_time(spans, 45, 1), 45u);
  EXPECT_EQ(release_time(spans, 45, 2), 50u);
  EXPECT_EQ(censorship_overlap(spans, 0, 100, 1), 10u);
  EXPECT_EQ(censorship_overlap(spans, 12, 17, 1), 5u);
  EXPECT_EQ(censorship_overlap(spans, 0, 100, 3), 0u);
}

TEST(Clock, LoadFromKeyValues) {
  std::istringstream in("# params\nt_c_seconds = 604800\nt_m_seconds=7200\nt_g_seconds = 28800\ngroup_size = 4\ntree_height = 6\n");
  auto p = load_time_params(in);
  EXPECT_EQ(p.max_demotions, 21u);
  EXPECT_EQ(p.group_size, 4u);
  EXPECT_EQ(p.tree_height, 6u);
}

TEST(Clock, LoadRejectsUnknownAndMissing) {
  std::istringstream unknown("t_c_seconds=1\nt_m_seconds=2\nt_g_seconds=1\ngroup_size=2\nbogus=1\n");
  EXPECT_EQ(code_of([&] { load_time_params(unknown); }), errc::config_error);
  std::istringstream missing("t_c_seconds=1\n");
  EXPECT_EQ(code_of([&] { load_time_params(missing); }), errc::config_error);
}
