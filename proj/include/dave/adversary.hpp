#pragma once

// Adversary side of the dispute.
//
// The abstract round model works on demotion distributions d[0..K-1]. Claims
// are sorted by count and cut into groups of G. A pure group keeps one claim
// and demotes the rest; in a mixed group the adversary picks which count
// survives. With `hero_pinned` one claim at count 0 is honest and always wins
// its group (it is first in sort order, so it sits in group 0).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "dave/clock.hpp"
#include "dave/error.hpp"
#include "dave/match.hpp"
#include "dave/matchmaking.hpp"
#include "dave/types.hpp"

namespace dave {

using distribution = std::vector<std::uint64_t>;

enum class abstract_model { hero_pinned, sybil_only };

struct group_slice {
  std::uint32_t k = 0;
  std::uint64_t count = 0;
};

struct mixed_group_choice {
  std::size_t group = 0;  // index among the round's mixed groups
  std::uint32_t winner = 0;
  friend bool operator==(const mixed_group_choice&, const mixed_group_choice&) = default;
};

// One round of the abstract model before the adversary decides. `settled`
// holds the outcome of every group without a choice (index K counts claims
// eliminated this round).
struct round_layout {
  std::uint32_t K = 0;
  distribution settled;
  std::vector<std::vector<group_slice>> mixed;
  std::vector<std::optional<std::uint32_t>> forced;  // pinned winner per mixed group
};

inline std::uint64_t total_claims(std::span<const std::uint64_t> d) {
  return std::accumulate(d.begin(), d.end(), std::uint64_t{0});
}

// Claims still below K. `next` has K+1 entries.
inline std::uint64_t survivors(std::span<const std::uint64_t> next) {
  return total_claims(next.first(next.size() - 1));
}

inline round_layout layout_round(std::span<const std::uint64_t> d, std::uint32_t group_size,
                                 abstract_model model = abstract_model::hero_pinned) {
  if (group_size < 2) throw error(errc::invalid_param, "group size must be >= 2");
  if (d.empty()) throw error(errc::invalid_param, "empty distribution");
  if (model == abstract_model::hero_pinned && d[0] == 0) {
    throw error(errc::precondition_violated, "hero-pinned model needs a claim at count 0");
  }
  const auto K = static_cast<std::uint32_t>(d.size());
  round_layout L;
  L.K = K;
  L.settled.assign(K + 1, 0);
  std::vector<group_slice> partial;
  std::uint64_t fill = 0;

  auto close_partial = [&] {
    if (partial.size() == 1) {
      const auto& s = partial.front();
      L.settled[s.k] += 1;
      L.settled[s.k + 1] += s.count - 1;
    } else {
      L.mixed.push_back(partial);
      L.forced.emplace_back();
    }
    partial.clear();
    fill = 0;
  };

  for (std::uint32_t k = 0; k < K; ++k) {
    std::uint64_t c = d[k];
    if (c == 0) continue;
    if (fill > 0) {
      std::uint64_t take = std::min<std::uint64_t>(c, group_size - fill);
      partial.push_back({k, take});
      fill += take;
      c -= take;
      if (fill == group_size) close_partial();
    }
    std::uint64_t full = c / group_size;
    L.settled[k] += full;
    L.settled[k + 1] += full * (group_size - 1);
    if (c % group_size) {
      partial = {{k, c % group_size}};
      fill = c % group_size;
    }
  }
  if (fill > 0) close_partial();  // a singleton closes as "keeps its count"

  if (model == abstract_model::hero_pinned && d[0] < group_size && !L.mixed.empty() && L.mixed[0][0].k == 0) {
    L.forced[0] = 0;
  }
  return L;
}

inline distribution resolve_round(const round_layout& L, std::span<const std::uint32_t> winners) {
  if (winners.size() != L.mixed.size()) throw error(errc::invalid_param, "one winner per mixed group");
  distribution next = L.settled;
  for (std::size_t g = 0; g < L.mixed.size(); ++g) {
    bool found = false;
    for (const auto& s : L.mixed[g]) {
      if (s.k == winners[g]) {
        next[s.k] += 1;
        next[s.k + 1] += s.count - 1;
        found = true;
      } else {
        next[s.k + 1] += s.count;
      }
    }
    if (!found) throw error(errc::invalid_param, "winner count not present in group");
  }
  return next;
}

inline std::vector<std::uint32_t> choice_options(const round_layout& L, std::size_t g) {
  if (L.forced[g]) return {*L.forced[g]};
  std::vector<std::uint32_t> ks;
  for (const auto& s : L.mixed[g]) ks.push_back(s.k);
  return ks;  // slices are in increasing k and distinct
}

// Keep the least-demoted claim of every mixed group, unless that ends the
// dispute while some other choice would not. One flipped group always
// suffices, so groups and alternatives are tried in order.
inline std::vector<mixed_group_choice> max_delay_choice(const round_layout& L) {
  std::vector<std::uint32_t> w(L.mixed.size());
  for (std::size_t g = 0; g < L.mixed.size(); ++g) w[g] = L.forced[g] ? *L.forced[g] : L.mixed[g].front().k;
  if (survivors(resolve_round(L, w)) <= 1) {
    bool flipped = false;
    for (std::size_t g = 0; g < L.mixed.size() && !flipped; ++g) {
      for (auto alt : choice_options(L, g)) {
        if (alt == w[g]) continue;
        auto trial = w;
        trial[g] = alt;
        if (survivors(resolve_round(L, trial)) >= 2) {
          w = trial;
          flipped = true;
          break;
        }
      }
    }
  }
  std::vector<mixed_group_choice> out;
  for (std::size_t g = 0; g < w.size(); ++g) out.push_back({g, w[g]});
  return out;
}

inline std::vector<std::uint32_t> winners_of(const std::vector<mixed_group_choice>& choices) {
  std::vector<std::uint32_t> w;
  for (const auto& c : choices) w.push_back(c.winner);
  return w;
}

// Next distribution (K entries) under the maximum-delay strategy.
inline distribution max_delay_step(std::span<const std::uint64_t> d, std::uint32_t group_size,
                                   abstract_model model = abstract_model::hero_pinned) {
  auto L = layout_round(d, group_size, model);
  auto next = resolve_round(L, winners_of(max_delay_choice(L)));
  next.pop_back();
  return next;
}

struct successor {
  distribution next;  // K entries
  std::vector<mixed_group_choice> choices;
};

// Every distinct distribution the adversary can reach in one round.
inline std::vector<successor> successors(std::span<const std::uint64_t> d, std::uint32_t group_size,
                                         abstract_model model = abstract_model::hero_pinned) {
  if (total_claims(d) < 2) throw error(errc::precondition_violated, "successors need >= 2 claims");
  auto L = layout_round(d, group_size, model);
  std::vector<std::vector<std::uint32_t>> opts;
  for (std::size_t g = 0; g < L.mixed.size(); ++g) opts.push_back(choice_options(L, g));

  std::map<distribution, std::vector<mixed_group_choice>> seen;
  std::vector<std::size_t> pos(opts.size(), 0);
  while (true) {
    std::vector<std::uint32_t> w(opts.size());
    for (std::size_t g = 0; g < opts.size(); ++g) w[g] = opts[g][pos[g]];
    auto next = resolve_round(L, w);
    next.pop_back();
    if (!seen.count(next)) {
      std::vector<mixed_group_choice> ch;
      for (std::size_t g = 0; g < w.size(); ++g) ch.push_back({g, w[g]});
      seen.emplace(std::move(next), std::move(ch));
    }
    std::size_t g = 0;
    while (g < pos.size() && ++pos[g] == opts[g].size()) pos[g++] = 0;
    if (g == pos.size()) break;
  }
  std::vector<successor> out;
  for (auto& [n, ch] : seen) out.push_back({n, ch});
  return out;
}

inline distribution initial_distribution(std::uint32_t K, std::uint64_t N) {
  if (K < 1) throw error(errc::invalid_param, "K must be >= 1");
  distribution d(K, 0);
  d[0] = N;
  return d;
}

// Demotion mass counts eliminated claims at K. Every round with two or more
// claims strictly increases it, so it orders the search.
inline std::uint64_t demotion_mass(std::span<const std::uint64_t> d, std::uint64_t N) {
  std::uint64_t m = 0;
  for (std::size_t k = 0; k < d.size(); ++k) m += k * d[k];
  return m + d.size() * (N - total_claims(d));
}

struct search_step {
  distribution state;
  std::vector<mixed_group_choice> choices;  // choices leading out of `state`; empty on the last
};

struct search_result {
  std::uint64_t rounds = 0;
  std::vector<search_step> witness;
  std::size_t distributions_visited = 0;
};

struct search_limits {
  std::uint32_t max_k = 7;
  std::uint64_t max_n = 64;
  std::uint32_t max_g = 3;
};

// Longest path from [N,0,...] to a single survivor over all adversary
// choices. Nodes are expanded in increasing demotion mass, so a node's best
// length is final before it is expanded.
inline search_result exhaustive_max_delay(std::uint32_t K, std::uint32_t group_size, std::uint64_t N,
                                          abstract_model model = abstract_model::hero_pinned,
                                          search_limits limits = {}) {
  if (K > limits.max_k || N > limits.max_n || group_size > limits.max_g) {
    throw error(errc::search_space_too_large, "search limited to K<=" + std::to_string(limits.max_k) +
                                                  ", N<=" + std::to_string(limits.max_n) +
                                                  ", G<=" + std::to_string(limits.max_g));
  }
  if (group_size < 2) throw error(errc::invalid_param, "group size must be >= 2");
  auto root = initial_distribution(K, N);
  search_result res;
  res.witness.push_back({root, {}});
  if (N <= 1) {
    res.distributions_visited = 1;
    return res;
  }

  struct node {
    std::uint64_t length = 0;
    std::optional<distribution> parent;
    std::vector<mixed_group_choice> via;
  };
  std::map<distribution, node> nodes;
  std::vector<std::vector<distribution>> buckets(static_cast<std::size_t>(K) * N + 1);
  nodes[root] = {};
  buckets[0].push_back(root);

  const distribution* best_leaf = nullptr;
  for (std::size_t mass = 0; mass < buckets.size(); ++mass) {
    for (const auto& d : buckets[mass]) {
      const auto& here = nodes.at(d);
      if (total_claims(d) <= 1) {
        if (!best_leaf || here.length > nodes.at(*best_leaf).length) best_leaf = &nodes.find(d)->first;
        continue;
      }
      std::uint64_t len = here.length;
      for (auto& s : successors(d, group_size, model)) {
        auto m = demotion_mass(s.next, N);
        if (m <= mass) throw error(errc::precondition_violated, "round did not increase demotion mass");
        auto it = nodes.find(s.next);
        if (it == nodes.end()) {
          nodes.emplace(s.next, node{len + 1, d, std::move(s.choices)});
          buckets[m].push_back(s.next);
        } else if (it->second.length < len + 1) {
          it->second = node{len + 1, d, std::move(s.choices)};
        }
      }
    }
  }
  res.distributions_visited = nodes.size();
  res.rounds = nodes.at(*best_leaf).length;

  std::vector<search_step> path;
  distribution cur = *best_leaf;
  std::vector<mixed_group_choice> out_choices;
  while (true) {
    const auto& n = nodes.at(cur);
    path.push_back({cur, out_choices});
    if (!n.parent) break;
    out_choices = n.via;
    cur = *n.parent;
  }
  std::reverse(path.begin(), path.end());
  res.witness = std::move(path);
  return res;
}

// ---------------------------------------------------------------------------
// Censorship in full simulations.

enum class censorship_policy { none, all_at_once, bursts, random_spans };

constexpr std::string_view to_string(censorship_policy p) {
  switch (p) {
    case censorship_policy::none: return "none";
    case censorship_policy::all_at_once: return "all_at_once";
    case censorship_policy::bursts: return "bursts";
    case censorship_policy::random_spans: return "random_spans";
  }
  return "?";
}

inline censorship_policy parse_censorship_policy(std::string_view s) {
  for (auto p : {censorship_policy::none, censorship_policy::all_at_once, censorship_policy::bursts,
                 censorship_policy::random_spans}) {
    if (s == to_string(p)) return p;
  }
  throw error(errc::config_error, "unknown censorship policy '" + std::string(s) + "'");
}

// Spends the budget against one claim, round by round. A burst lasts T_g + 1
// seconds from the target's first action deadline, which is the least that
// forces a properly defended claim to time out.
class censorship_scheduler {
 public:
  censorship_scheduler(censorship_policy policy, const time_params& params, dispute_mode mode, claim_id target,
                       std::uint64_t seed, double round_probability = 1.0)
      : policy_(policy),
        params_(params),
        mode_(mode),
        target_(target),
        rng_(seed),
        probability_(round_probability),
        budget_(params.censorship_budget) {
    if (policy_ == censorship_policy::all_at_once) {
      start_round_ = std::uniform_int_distribution<std::uint64_t>(0, 2)(rng_);
      start_offset_ = std::uniform_int_distribution<seconds>(0, params_.round_duration(mode_) - 1)(rng_);
    }
  }

  // Spans starting in the round that begins at `round_start`.
  std::vector<censorship_span> plan_round(std::uint64_t round, virtual_time round_start) {
    std::vector<censorship_span> out;
    auto spend = [&](virtual_time at, seconds dur) {
      budget_ = spend_censorship(std::move(budget_), at, dur, target_);
      out.push_back(budget_.spent_log.back());
    };
    const seconds burst = params_.grace_period + 1;
    const seconds round_len = params_.round_duration(mode_);
    switch (policy_) {
      case censorship_policy::none:
        break;
      case censorship_policy::all_at_once:
        if (round == start_round_ && budget_.remaining > 0) spend(round_start + start_offset_, budget_.remaining);
        break;
      case censorship_policy::bursts:
        if (budget_.remaining >= burst && coin()) spend(round_start + params_.action_duration(0), burst);
        break;
      case censorship_policy::random_spans:
        if (budget_.remaining > 0 && coin()) {
          seconds dur = std::uniform_int_distribution<seconds>(1, std::min(budget_.remaining, round_len))(rng_);
          seconds off = std::uniform_int_distribution<seconds>(0, round_len - 1)(rng_);
          spend(round_start + off, dur);
        }
        break;
    }
    return out;
  }

  const censorship_budget& budget() const { return budget_; }
  const std::vector<censorship_span>& spans() const { return budget_.spent_log; }
  claim_id target() const { return target_; }

 private:
  bool coin() {
    if (probability_ >= 1.0) return true;
    return std::bernoulli_distribution(probability_)(rng_);
  }

  censorship_policy policy_;
  time_params params_;
  dispute_mode mode_;
  claim_id target_;
  std::mt19937_64 rng_;
  double probability_;
  censorship_budget budget_;
  std::uint64_t start_round_ = 0;
  seconds start_offset_ = 0;
};

// ---------------------------------------------------------------------------
// Group choices and match behaviors in full simulations.

// Per group: the Sybil the adversary wants to survive (if any).
using group_winners = std::vector<std::optional<claim_id>>;

class simulated_adversary {
 public:
  simulated_adversary(dispute_mode mode, std::uint32_t max_demotions, seconds grace_period,
                      std::optional<std::uint64_t> random_behavior_seed = std::nullopt)
      : mode_(mode), K_(max_demotions), grace_(grace_period) {
    if (random_behavior_seed) rng_.emplace(*random_behavior_seed);
  }

  // Mirrors the abstract strategy: the honest claim's group is pinned to it,
  // every other mixed group keeps its least-demoted Sybil.
  group_winners choose_winners(const group_partition& part, const std::vector<claim_record>& claims) const {
    std::map<claim_id, const claim_record*> by_id;
    for (const auto& c : claims) by_id[c.id] = &c;
    const std::uint32_t levels = mode_ == dispute_mode::discrete ? K_ : K_ + 1;

    round_layout L;
    L.K = levels;
    L.settled.assign(levels + 1, 0);
    std::vector<std::size_t> mixed_group_of;
    for (std::size_t g = 0; g < part.groups.size(); ++g) {
      std::map<std::uint32_t, std::uint64_t> per;
      std::optional<std::uint32_t> hero_level;
      for (auto id : part.groups[g]) {
        auto lv = level(*by_id.at(id), levels);
        ++per[lv];
        if (by_id.at(id)->honest) hero_level = lv;
      }
      if (per.size() == 1) {
        auto [k, n] = *per.begin();
        L.settled[k] += 1;
        L.settled[k + 1] += n - 1;
        continue;
      }
      std::vector<group_slice> slices;
      for (auto [k, n] : per) slices.push_back({k, n});
      L.mixed.push_back(std::move(slices));
      L.forced.push_back(hero_level);
      mixed_group_of.push_back(g);
    }
    auto choice = max_delay_choice(L);

    group_winners out(part.groups.size());
    for (std::size_t g = 0; g < part.groups.size(); ++g) {
      std::optional<std::uint32_t> want;
      for (std::size_t m = 0; m < mixed_group_of.size(); ++m) {
        if (mixed_group_of[m] == g && !L.forced[m]) want = choice[m].winner;
      }
      for (auto id : part.groups[g]) {
        const auto& c = *by_id.at(id);
        if (c.honest) continue;
        if (!want || level(c, levels) == *want) {
          out[g] = id;
          break;
        }
      }
    }
    return out;
  }

  // Against the honest claim a Sybil plays on (discrete) so censorship can
  // bite, or stalls (continuous) since a step loss there is fatal. Among
  // Sybils the chosen winner plays on and the rest stall.
  behavior behavior_for(claim_id self, const claim_record& opponent, const std::optional<claim_id>& chosen) {
    if (rng_) {
      static constexpr behavior pool[] = {behavior::active, behavior::stall, behavior::invalid_reveal,
                                          behavior::wrong_witness};
      return pool[std::uniform_int_distribution<int>(0, 3)(*rng_)];
    }
    if (opponent.honest) return mode_ == dispute_mode::discrete ? behavior::active : behavior::stall;
    return chosen && *chosen == self ? behavior::active : behavior::stall;
  }

 private:
  std::uint32_t level(const claim_record& c, std::uint32_t levels) const {
    if (mode_ == dispute_mode::discrete) return std::min(c.demotions, levels - 1);
    return static_cast<std::uint32_t>(std::min<seconds>(c.censored / grace_, levels - 1));
  }

  dispute_mode mode_;
  std::uint32_t K_;
  seconds grace_;
  std::optional<std::mt19937_64> rng_;
};

}  // namespace dave
