#include <gtest/gtest.h>

#include <random>

#include "dave/vm.hpp"

using namespace dave;

namespace {

seed_bytes zero_seed() { return seed_bytes{}; }

}  // namespace

TEST(Vm, InitialStateIsDeterministic) {
  auto a = initial_state(zero_seed());
  auto b = initial_state(zero_seed());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.step_index, 0u);
}

TEST(Vm, DistinctSeedsGiveDistinctStates) {
  EXPECT_NE(initial_state(seed_from_u64(1)).value, initial_state(seed_from_u64(2)).value);
}

TEST(Vm, StepIncrementsAndComposes) {
  auto s0 = initial_state(zero_seed());
  auto s1 = step(s0, 3);
  EXPECT_EQ(s1.step_index, 1u);
  EXPECT_EQ(step(step(s0, 3), 3), state_at(zero_seed(), 2, 3));
}

TEST(Vm, StepPastEndThrows) {
  auto s = initial_state(seed_from_u64(9));
  for (int i = 0; i < 8; ++i) s = step(s, 3);
  try {
    step(s, 3);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::step_past_end);
  }
}

TEST(Vm, RunHonestMatchesLoopOracle) {
  auto seed = seed_from_u64(42);
  auto h = run_honest(seed, 3);
  ASSERT_EQ(h.size(), 8u);
  EXPECT_FALSE(h.divergence_index);
  machine_state s = initial_state(seed);
  for (std::uint64_t t = 1; t <= 8; ++t) {
    s = step(s, 3);
    EXPECT_EQ(h.state_hashes[t - 1], hash_state(s)) << "t=" << t;
  }
}

TEST(Vm, RunHonestHeightOne) {
  auto seed = seed_from_u64(5);
  auto h = run_honest(seed, 1);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h.state_hashes[1], hash_state(step(step(initial_state(seed), 1), 1)));
}

TEST(Vm, HeightOutOfRange) {
  EXPECT_THROW(run_honest(zero_seed(), 0), error);
  EXPECT_THROW(run_honest(zero_seed(), 31), error);
}

TEST(Vm, RunHonestIsDeterministic) {
  for (unsigned b = 1; b <= 12; b += 3) {
    EXPECT_EQ(run_honest(seed_from_u64(b), b).state_hashes, run_honest(seed_from_u64(b), b).state_hashes);
  }
}

TEST(Vm, CorruptAtZeroDiffersEverywhere) {
  auto h = run_honest(seed_from_u64(1), 4);
  auto c = corrupt_history(h, 0, 7);
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NE(h.state_hashes[i], c.state_hashes[i]);
  EXPECT_EQ(c.divergence_index, 0u);
}

TEST(Vm, CorruptLastLeafOnly) {
  auto h = run_honest(seed_from_u64(1), 4);
  auto c = corrupt_history(h, 15, 7);
  for (std::size_t i = 0; i < 15; ++i) EXPECT_EQ(h.state_hashes[i], c.state_hashes[i]);
  EXPECT_NE(h.state_hashes[15], c.state_hashes[15]);
}

TEST(Vm, CorruptOutOfRange) {
  auto h = run_honest(seed_from_u64(1), 3);
  EXPECT_THROW(corrupt_history(h, 8, 1), error);
  auto c = corrupt_history(h, 4, 1);
  EXPECT_THROW(corrupt_history(c, 4, 2), error);
  EXPECT_NO_THROW(corrupt_history(c, 3, 2));
}

TEST(Vm, PrefixPropertyByScan) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    unsigned b = 1 + rng() % 8;
    auto h = run_honest(seed_from_u64(rng()), b);
    std::uint64_t k = rng() % h.size();
    auto c = corrupt_history(h, k, rng());
    std::uint64_t first = h.size();
    for (std::uint64_t i = 0; i < h.size(); ++i) {
      if (h.state_hashes[i] != c.state_hashes[i]) {
        first = i;
        break;
      }
    }
    EXPECT_EQ(first, k);
    for (std::uint64_t i = k; i < h.size(); ++i) EXPECT_NE(h.state_hashes[i], c.state_hashes[i]);
  }
}

TEST(Vm, DistinctRngSeedsGiveDistinctClaims) {
  auto h = run_honest(seed_from_u64(3), 4);
  EXPECT_NE(corrupt_history(h, 5, 1).state_hashes, corrupt_history(h, 5, 2).state_hashes);
}

TEST(Vm, StepWitnessAcrossHistory) {
  auto seed = seed_from_u64(77);
  const unsigned b = 5;
  auto h = run_honest(seed, b);
  std::uint64_t k = 11;
  auto c = corrupt_history(h, k, 3);
  machine_state s = initial_state(seed);
  for (std::uint64_t t = 0; t < h.size(); ++t) {
    EXPECT_TRUE(verify_step_witness(s, h.state_hashes[t], b));
    EXPECT_TRUE(verify_step_witness(s, hash_state(step(s, b)), b));
    if (t >= k) {
      EXPECT_FALSE(verify_step_witness(s, c.state_hashes[t], b)) << t;
    }
    s = step(s, b);
  }
  EXPECT_FALSE(verify_step_witness(s, h.state_hashes.back(), b));
}
