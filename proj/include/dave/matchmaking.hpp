#pragma once

// Claim bookkeeping and group formation. Surviving claims are sorted by
// demotion count (or censored time in continuous mode) and cut into
// contiguous groups of G; only the last group may be short.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "dave/error.hpp"
#include "dave/hash.hpp"
#include "dave/types.hpp"

namespace dave {

struct claim_record {
  claim_id id = 0;
  digest root{};
  std::uint32_t demotions = 0;  // k
  seconds censored = 0;         // T_d, continuous mode
  bool eliminated = false;
  bool honest = false;  // simulation metadata; the referee never reads it
};

struct group_partition {
  std::vector<std::vector<claim_id>> groups;
  // Indexed by the sort key value (demotion count); zero for absent keys.
  std::vector<std::uint64_t> borrow_first;
  std::vector<std::uint64_t> borrow_last;
  bool last_is_singleton = false;

  bool auto_wins(std::size_t g) const { return groups[g].size() == 1; }
};

// borrow_first[k]: claims the first group touching count k takes from lower
// counts. borrow_last[k]: claims the last group touching k takes from higher
// counts.
inline void compute_borrows(const std::vector<std::uint64_t>& per_count, std::uint32_t group_size,
                            std::vector<std::uint64_t>& first, std::vector<std::uint64_t>& last) {
  std::uint64_t total = 0;
  for (auto c : per_count) total += c;
  first.assign(per_count.size(), 0);
  last.assign(per_count.size(), 0);
  std::uint64_t start = 0;
  for (std::size_t k = 0; k < per_count.size(); ++k) {
    if (per_count[k] == 0) continue;
    std::uint64_t end = start + per_count[k] - 1;
    first[k] = start % group_size;
    last[k] = std::min((end / group_size + 1) * group_size, total) - 1 - end;
    start = end + 1;
  }
}

inline std::uint64_t sort_key(const claim_record& c, dispute_mode mode) {
  return mode == dispute_mode::discrete ? c.demotions : c.censored;
}

// Ties are broken by claim id.
inline group_partition matchmake(const std::vector<claim_record>& claims, std::uint32_t group_size,
                                 dispute_mode mode = dispute_mode::discrete) {
  if (group_size < 2) throw error(errc::invalid_param, "group size must be >= 2");
  std::vector<const claim_record*> alive;
  for (const auto& c : claims) {
    if (!c.eliminated) alive.push_back(&c);
  }
  if (alive.empty()) throw error(errc::precondition_violated, "no surviving claims");
  std::stable_sort(alive.begin(), alive.end(), [&](const claim_record* x, const claim_record* y) {
    auto kx = sort_key(*x, mode), ky = sort_key(*y, mode);
    return kx != ky ? kx < ky : x->id < y->id;
  });

  group_partition p;
  for (std::size_t i = 0; i < alive.size(); i += group_size) {
    std::vector<claim_id> g;
    for (std::size_t j = i; j < std::min(alive.size(), i + group_size); ++j) g.push_back(alive[j]->id);
    p.groups.push_back(std::move(g));
  }
  p.last_is_singleton = p.groups.back().size() == 1;

  if (mode == dispute_mode::discrete) {
    std::vector<std::uint64_t> per_count(sort_key(*alive.back(), mode) + 1, 0);
    for (const auto* c : alive) ++per_count[c->demotions];
    compute_borrows(per_count, group_size, p.borrow_first, p.borrow_last);
  }
  return p;
}

}  // namespace dave
