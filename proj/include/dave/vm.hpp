#pragma once

// Toy deterministic state machine whose computation histories are disputed.
//
// A state is a 32-byte digest plus the number of transitions applied. One
// transition hashes the digest with the current step index. Honest players
// commit to the state hash after every transition; dishonest ones diverge at
// some leaf and commit to pseudo-random garbage from there on.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dave/error.hpp"
#include "dave/hash.hpp"

namespace dave {

using seed_bytes = digest;
using state_hash = digest;

inline constexpr unsigned max_tree_height = 30;

struct machine_state {
  digest value{};
  std::uint64_t step_index = 0;

  friend bool operator==(const machine_state&, const machine_state&) = default;
};

struct history {
  std::vector<state_hash> state_hashes;  // hash of sigma_1 .. sigma_{2^B}
  seed_bytes seed{};
  unsigned height = 0;
  std::optional<std::uint64_t> divergence_index;  // simulation-only metadata

  std::uint64_t size() const { return state_hashes.size(); }
};

inline std::uint64_t leaf_count(unsigned height) { return std::uint64_t{1} << height; }

inline void check_height(unsigned height) {
  if (height < 1 || height > max_tree_height) {
    throw error(errc::height_out_of_range,
                "tree height " + std::to_string(height) + " outside [1, 30]");
  }
}

inline state_hash hash_state(const machine_state& s) {
  return sha256(preimage{}.put(tag_state).put(s.value).put_u64(s.step_index));
}

inline machine_state initial_state(const seed_bytes& seed) {
  return {sha256(preimage{}.put(tag_seed).put(seed)), 0};
}

inline machine_state step(const machine_state& s, unsigned height) {
  if (s.step_index >= leaf_count(height)) {
    throw error(errc::step_past_end, "state already at step " + std::to_string(s.step_index));
  }
  return {sha256(preimage{}.put(tag_transition).put(s.value).put_u64(s.step_index)),
          s.step_index + 1};
}

// sigma_t, recomputed from the seed. O(t).
inline machine_state state_at(const seed_bytes& seed, std::uint64_t t, unsigned height) {
  if (t > leaf_count(height)) throw error(errc::index_out_of_range, "step " + std::to_string(t));
  machine_state s = initial_state(seed);
  while (s.step_index < t) s = step(s, height);
  return s;
}

inline history run_honest(const seed_bytes& seed, unsigned height) {
  check_height(height);
  history h;
  h.seed = seed;
  h.height = height;
  h.state_hashes.reserve(leaf_count(height));
  machine_state s = initial_state(seed);
  for (std::uint64_t t = 0; t < leaf_count(height); ++t) {
    s = step(s, height);
    h.state_hashes.push_back(hash_state(s));
  }
  return h;
}

// Replaces leaf `at` and everything after it with garbage derived from
// rng_seed. Distinct rng seeds give pairwise-distinct claims.
inline history corrupt_history(const history& h, std::uint64_t at, std::uint64_t rng_seed) {
  if (at >= h.size()) {
    throw error(errc::index_out_of_range,
                "corruption index " + std::to_string(at) + " >= " + std::to_string(h.size()));
  }
  if (h.divergence_index && *h.divergence_index <= at) {
    throw error(errc::index_out_of_range, "history already diverges at or before leaf " +
                                              std::to_string(at));
  }
  history out = h;
  out.divergence_index = at;
  for (std::uint64_t i = at; i < out.size(); ++i) {
    digest g = sha256(preimage{}.put(tag_garbage).put_u64(rng_seed).put_u64(i).put(h.state_hashes[i]));
    // Garbage equal to the original would not be a divergence; rehash until distinct.
    while (g == h.state_hashes[i]) g = sha256(preimage{}.put(tag_garbage).put(g));
    out.state_hashes[i] = g;
  }
  return out;
}

// Re-executes one transition. Stands in for validity-proof verification.
inline bool verify_step_witness(const machine_state& agreed, const state_hash& claimed_next,
                                unsigned height) {
  if (agreed.step_index >= leaf_count(height)) return false;
  return hash_state(step(agreed, height)) == claimed_next;
}

inline seed_bytes seed_from_u64(std::uint64_t v) {
  return sha256(preimage{}.put(tag_seed).put_u64(v));
}

}  // namespace dave
