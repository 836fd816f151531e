#pragma once

// Full dispute orchestration: rounds of matchmaking, concurrent matches over
// shared virtual time, and demotion or censored-time bookkeeping.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dave/adversary.hpp"
#include "dave/clock.hpp"
#include "dave/commitment.hpp"
#include "dave/match.hpp"
#include "dave/matchmaking.hpp"
#include "dave/vm.hpp"

namespace dave {

struct match_outcome {
  std::uint64_t match_id = 0;
  std::array<claim_id, 2> claims{};
  std::array<behavior, 2> plays{};
  match_status status = match_status::running;
  std::optional<claim_id> winner;
  virtual_time ended_at = 0;
  std::array<seconds, 2> charged{};
  std::uint64_t index = 0;
  unsigned height = 0;
};

struct round_report {
  std::uint64_t round = 0;
  virtual_time start = 0;
  virtual_time end = 0;
  group_partition partition;
  std::vector<match_outcome> matches;
  std::vector<std::optional<claim_id>> group_winners;
  std::map<claim_id, std::uint32_t> demotion_delta;
  std::map<claim_id, seconds> censored_delta;
  std::vector<claim_id> eliminated;
  std::vector<censorship_span> censorship;
  distribution before;  // demotion counts of survivors at round start (discrete)
  distribution after;
};

// Claims and their commitment trees. Claim 0 is honest; the rest diverge
// from it at pseudo-random leaves.
struct claim_set {
  seed_bytes seed{};
  unsigned tree_height = 0;
  std::vector<claim_record> records;
  std::vector<std::shared_ptr<const commitment_tree>> trees;

  const commitment_tree& tree(claim_id id) const { return *trees.at(id); }
};

inline claim_set make_claim_set(std::uint64_t n_claims, unsigned tree_height, std::uint64_t seed) {
  if (n_claims < 1) throw error(errc::invalid_param, "need at least one claim");
  claim_set cs;
  cs.seed = seed_from_u64(seed);
  cs.tree_height = tree_height;
  auto honest = run_honest(cs.seed, tree_height);
  std::mt19937_64 rng(seed ^ 0x5eedc1a1u);
  std::uniform_int_distribution<std::uint64_t> leaf(0, leaf_count(tree_height) - 1);
  for (std::uint64_t i = 0; i < n_claims; ++i) {
    auto h = i == 0 ? honest : corrupt_history(honest, leaf(rng), rng());
    auto t = std::make_shared<const commitment_tree>(h);
    cs.records.push_back({static_cast<claim_id>(i), t->root(), 0, 0, false, i == 0});
    cs.trees.push_back(std::move(t));
  }
  return cs;
}

inline distribution demotion_counts(const std::vector<claim_record>& claims, std::uint32_t K) {
  distribution d(K, 0);
  for (const auto& c : claims) {
    if (!c.eliminated) ++d[std::min(c.demotions, K - 1)];
  }
  return d;
}

inline round_report play_round(const claim_set& cs, const std::vector<claim_record>& claims,
                               const group_partition& part, simulated_adversary& adversary,
                               const time_params& params, dispute_mode mode,
                               const std::vector<censorship_span>& censorship, std::uint64_t round,
                               virtual_time start, const transcript_sink& sink = {}) {
  round_report rep;
  rep.round = round;
  rep.start = start;
  rep.end = start + params.round_duration(mode);
  rep.partition = part;
  std::map<claim_id, const claim_record*> by_id;
  for (const auto& c : claims) by_id[c.id] = &c;

  auto chosen = adversary.choose_winners(part, claims);
  std::uint64_t match_id = 0;
  for (std::size_t g = 0; g < part.groups.size(); ++g) {
    const auto& members = part.groups[g];
    std::map<claim_id, bool> won_all;
    for (auto id : members) won_all[id] = true;
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const auto& ca = *by_id.at(members[x]);
        const auto& cb = *by_id.at(members[y]);
        std::array<participant, 2> who{
            participant{ca.id, &cs.tree(ca.id),
                        ca.honest ? behavior::honest : adversary.behavior_for(ca.id, cb, chosen[g])},
            participant{cb.id, &cs.tree(cb.id),
                        cb.honest ? behavior::honest : adversary.behavior_for(cb.id, ca, chosen[g])}};
        auto m = open_match(ca.id, ca.root, cb.id, cb.root, cs.seed, params, start);
        m = play_match(std::move(m), who, params, censorship, rep.end, match_id, sink);
        match_outcome o;
        o.match_id = match_id++;
        o.claims = {ca.id, cb.id};
        o.plays = {who[0].play, who[1].play};
        o.status = m.status;
        if (m.winner) o.winner = m.claims[idx(*m.winner)];
        o.ended_at = m.status == match_status::running ? rep.end : m.ended_at;
        o.charged = m.charged;
        o.index = m.index;
        o.height = m.height;
        for (auto id : {ca.id, cb.id}) {
          if (o.winner != id) won_all[id] = false;
        }
        rep.matches.push_back(o);
      }
    }
    std::optional<claim_id> winner;
    for (auto id : members) {
      if (won_all[id]) winner = id;
    }
    rep.group_winners.push_back(winner);
  }
  return rep;
}

// Discrete: every claim that did not win its group is demoted; K demotions
// eliminate. Continuous: the worst per-match turn time beyond T_m/2 is added
// to T_d; T_d > T_c or a lost step eliminates.
inline std::vector<claim_record> apply_outcomes(std::vector<claim_record> claims, round_report& rep,
                                                const time_params& params, dispute_mode mode) {
  std::map<claim_id, claim_record*> by_id;
  for (auto& c : claims) by_id[c.id] = &c;

  if (mode == dispute_mode::discrete) {
    for (std::size_t g = 0; g < rep.partition.groups.size(); ++g) {
      for (auto id : rep.partition.groups[g]) {
        auto& c = *by_id.at(id);
        bool keeps = rep.group_winners[g] == id;
        rep.demotion_delta[id] = keeps ? 0 : 1;
        if (!keeps && ++c.demotions >= params.max_demotions) {
          c.eliminated = true;
          rep.eliminated.push_back(id);
        }
      }
    }
    return claims;
  }

  std::map<claim_id, seconds> turn_time;
  std::map<claim_id, bool> lost_step;
  for (const auto& group : rep.partition.groups) {
    for (auto id : group) turn_time[id] = 0;
  }
  for (const auto& o : rep.matches) {
    for (std::size_t s = 0; s < 2; ++s) turn_time[o.claims[s]] = std::max(turn_time[o.claims[s]], o.charged[s]);
    if (o.status == match_status::won_by_step) {
      lost_step[o.claims[0] == *o.winner ? o.claims[1] : o.claims[0]] = true;
    }
  }
  const seconds half = params.match_duration / 2;
  for (auto [id, ta] : turn_time) {
    auto& c = *by_id.at(id);
    seconds add = ta > half ? ta - half : 0;
    rep.censored_delta[id] = add;
    c.censored += add;
    if (c.censored > params.censorship_budget || lost_step[id]) {
      c.eliminated = true;
      rep.eliminated.push_back(id);
    }
  }
  return claims;
}

struct dispute_config {
  time_params params;
  dispute_mode mode = dispute_mode::discrete;
  censorship_policy censorship = censorship_policy::none;
  std::uint64_t censorship_seed = 0;
  double censorship_probability = 1.0;
  std::optional<std::uint64_t> random_behavior_seed;
  std::uint64_t max_rounds = 100000;
};

struct dispute_result {
  std::optional<claim_id> winner;
  bool honest_won = false;
  std::uint64_t rounds = 0;
  seconds elapsed = 0;
  std::vector<round_report> reports;
  std::vector<censorship_span> censorship;
  std::uint32_t honest_demotions = 0;
  seconds honest_censored = 0;
  std::vector<std::string> violations;  // threat-model invariants that failed
};

inline dispute_result run_dispute(const claim_set& cs, const dispute_config& cfg, const transcript_sink& sink = {}) {
  const auto& P = cfg.params;
  if (cs.tree_height != P.tree_height) throw error(errc::invalid_param, "claim trees and params disagree on B");
  std::vector<claim_record> claims = cs.records;
  claim_id hero = 0;
  for (const auto& c : claims) {
    if (c.honest) hero = c.id;
  }
  simulated_adversary adv(cfg.mode, P.max_demotions, P.grace_period, cfg.random_behavior_seed);
  censorship_scheduler censor(cfg.censorship, P, cfg.mode, hero, cfg.censorship_seed, cfg.censorship_probability);

  dispute_result res;
  auto alive = [&] {
    return std::count_if(claims.begin(), claims.end(), [](const claim_record& c) { return !c.eliminated; });
  };
  const seconds round_len = P.round_duration(cfg.mode);
  while (alive() > 1) {
    if (res.rounds >= cfg.max_rounds) throw error(errc::precondition_violated, "round limit reached");
    virtual_time start = res.rounds * round_len;
    auto planned = censor.plan_round(res.rounds, start);
    auto part = matchmake(claims, P.group_size, cfg.mode);
    auto rep = play_round(cs, claims, part, adv, P, cfg.mode, censor.spans(), res.rounds, start, sink);
    rep.censorship = planned;
    if (cfg.mode == dispute_mode::discrete) rep.before = demotion_counts(claims, P.max_demotions);
    std::uint64_t alive_before = alive();
    claims = apply_outcomes(std::move(claims), rep, P, cfg.mode);
    if (cfg.mode == dispute_mode::discrete) rep.after = demotion_counts(claims, P.max_demotions);

    const auto& h = *std::find_if(claims.begin(), claims.end(), [&](const auto& c) { return c.id == hero; });
    std::string tag = "round " + std::to_string(res.rounds) + ": ";
    if (cfg.mode == dispute_mode::discrete && rep.demotion_delta[hero] == 1 &&
        censorship_overlap(censor.spans(), rep.start, rep.end, hero) < P.grace_period) {
      res.violations.push_back(tag + "honest claim demoted with less than T_g of censorship");
    }
    if (cfg.mode == dispute_mode::continuous &&
        rep.censored_delta[hero] > censorship_overlap(censor.spans(), rep.start, rep.end, hero)) {
      res.violations.push_back(tag + "honest T_d grew beyond the censorship it suffered");
    }
    if (h.eliminated) res.violations.push_back(tag + "honest claim eliminated");
    if (static_cast<std::uint64_t>(alive()) + rep.eliminated.size() != alive_before) {
      res.violations.push_back(tag + "claim count not conserved");
    }
    res.reports.push_back(std::move(rep));
    ++res.rounds;
  }
  for (const auto& c : claims) {
    if (!c.eliminated) res.winner = c.id;
    if (c.id == hero) {
      res.honest_demotions = c.demotions;
      res.honest_censored = c.censored;
    }
  }
  res.honest_won = res.winner == hero;
  if (!res.honest_won) res.violations.push_back("honest claim did not win");
  if (res.honest_demotions >= P.max_demotions && cfg.mode == dispute_mode::discrete) {
    res.violations.push_back("honest demotions reached K");
  }
  res.elapsed = std::max<seconds>(res.rounds * round_len, P.censorship_budget);
  res.censorship = censor.spans();
  return res;
}

}  // namespace dave
