#include <gtest/gtest.h>

#include "dave/report.hpp"

using namespace dave;

TEST(Report, FixedUnits) {
  EXPECT_EQ(fixed_units(3354, 2), "33.54");
  EXPECT_EQ(fixed_units(105, 1), "10.5");
  EXPECT_EQ(fixed_units(7, 2), "0.07");
  EXPECT_EQ(fixed_units(42, 0), "42");
  EXPECT_EQ(fixed(3.14159, 3), "3.142");
}

TEST(Report, ScheduleCsv) {
  auto r = optimize_grace(2, 16, 604800, 7200);
  EXPECT_EQ(schedule_opt_csv(r), "2,16,10.5,33.54,16,35,47.92");
  auto f = fixed_schedule(4, 21, 16, 604800, 7200, dispute_mode::continuous);
  EXPECT_EQ(schedule_fixed_csv(f), "continuous,4,21,16,8.0,12.08,29,20.42");
}

TEST(Report, EconomicsCsv) {
  auto line = economics_csv(economics(4, 21, 2, 0.05));
  EXPECT_EQ(line.substr(0, 9), "4,21,2,21");
  EXPECT_NE(line.find(",3,nearest,"), std::string::npos);
  std::size_t commas = std::count(line.begin(), line.end(), ',');
  std::string header = economics_header;
  EXPECT_EQ(commas, static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')));
}

TEST(Report, JsonShapes) {
  auto s = exhaustive_max_delay(3, 2, 4);
  auto j = to_json(s);
  EXPECT_EQ(j["rounds"], s.rounds);
  EXPECT_EQ(j["witness"].size(), s.witness.size());
  auto m = metadata();
  EXPECT_EQ(m["hash"], "sha256");
}
