#pragma once

// JSON and CSV renderings of results. Keys keep insertion order.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dave/adversary.hpp"
#include "dave/analysis.hpp"
#include "dave/hash.hpp"
#include "dave/match.hpp"
#include "dave/tournament.hpp"

namespace dave {

using json = nlohmann::ordered_json;

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Integer count of 10^-decimals units, printed as a decimal.
inline std::string fixed_units(std::uint64_t units, int decimals) {
  if (decimals <= 0) return std::to_string(units);
  std::uint64_t div = 1;
  for (int i = 0; i < decimals; ++i) div *= 10;
  std::string frac = std::to_string(units % div);
  frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
  return std::to_string(units / div) + "." + frac;
}

inline json to_json(const std::vector<std::uint64_t>& v) { return json(v); }

inline json to_json(const censorship_span& s) {
  return {{"start", s.start}, {"duration", s.duration}, {"target", s.target}};
}

inline json to_json(const transcript_entry& e) {
  return {{"time", e.time}, {"match", e.match_id}, {"claim", e.claim}, {"side", e.by == side::a ? "a" : "b"},
          {"action", e.kind}, {"index", e.index}, {"height", e.height}};
}

inline json to_json(const match_outcome& o) {
  json j{{"match", o.match_id},
         {"claims", {o.claims[0], o.claims[1]}},
         {"behaviors", {to_string(o.plays[0]), to_string(o.plays[1])}},
         {"status", to_string(o.status)},
         {"winner", o.winner ? json(*o.winner) : json(nullptr)},
         {"ended_at", o.ended_at},
         {"charged", {o.charged[0], o.charged[1]}},
         {"position", {o.index, o.height}}};
  return j;
}

inline json to_json(const round_report& r) {
  json groups = json::array(), winners = json::array(), spans = json::array(), matches = json::array();
  for (const auto& g : r.partition.groups) groups.push_back(g);
  for (const auto& w : r.group_winners) winners.push_back(w ? json(*w) : json(nullptr));
  for (const auto& s : r.censorship) spans.push_back(to_json(s));
  for (const auto& m : r.matches) matches.push_back(to_json(m));
  json delta = json::object();
  for (auto [id, d] : r.demotion_delta) delta[std::to_string(id)] = d;
  for (auto [id, d] : r.censored_delta) delta[std::to_string(id)] = d;
  return {{"round", r.round},
          {"start", r.start},
          {"end", r.end},
          {"groups", groups},
          {"borrow_first", r.partition.borrow_first},
          {"borrow_last", r.partition.borrow_last},
          {"group_winners", winners},
          {"delta", delta},
          {"eliminated", r.eliminated},
          {"censorship", spans},
          {"distribution_before", r.before},
          {"distribution_after", r.after},
          {"matches", matches}};
}

inline json to_json(const dispute_result& r, bool with_rounds = true) {
  json spans = json::array();
  for (const auto& s : r.censorship) spans.push_back(to_json(s));
  json j{{"winner", r.winner ? json(*r.winner) : json(nullptr)},
         {"honest_won", r.honest_won},
         {"rounds", r.rounds},
         {"elapsed_seconds", r.elapsed},
         {"honest_demotions", r.honest_demotions},
         {"honest_censored_seconds", r.honest_censored},
         {"censorship", spans},
         {"violations", r.violations}};
  if (with_rounds) {
    json rounds = json::array();
    for (const auto& rep : r.reports) rounds.push_back(to_json(rep));
    j["round_reports"] = rounds;
  }
  return j;
}

inline json to_json(const search_result& s) {
  json path = json::array();
  for (const auto& st : s.witness) {
    json ch = json::array();
    for (const auto& c : st.choices) ch.push_back({{"group", c.group}, {"winner", c.winner}});
    path.push_back({{"distribution", st.state}, {"choices", ch}});
  }
  return {{"rounds", s.rounds}, {"distributions_visited", s.distributions_visited}, {"witness", path}};
}

inline json to_json(const fit_result& f) {
  return {{"alpha", f.alpha}, {"beta", f.beta},   {"gamma", f.gamma},
          {"rms", f.rms},     {"max_abs_err", f.max_abs_err}, {"samples", f.samples}};
}

inline const char* schedule_opt_header = "G,N,T_g_h,dT_days,K,R,dTp_days";
inline const char* schedule_fixed_header = "mode,G,K,N,T_g_h,dT_days,R,dTp_days";
inline const char* economics_header = "G,K,N,R,C_m_ether,bond_target_ether,bond_ether,bond_policy,hero_expenses_ether,adversary_loss_ether,delay_days";

inline std::string schedule_opt_csv(const schedule_row& r) {
  return std::to_string(r.G) + "," + std::to_string(r.N) + "," + fixed_units(r.t_g_tenths_hour(), 1) + "," +
         fixed_units(r.delta_t_hundredths(), 2) + "," + std::to_string(r.K) + "," + std::to_string(r.R) + "," +
         fixed_units(r.delta_t_prime_hundredths(), 2);
}

inline std::string schedule_fixed_csv(const schedule_row& r) {
  return std::string(to_string(r.mode)) + "," + std::to_string(r.G) + "," + std::to_string(r.K) + "," +
         std::to_string(r.N) + "," + fixed_units(r.t_g_tenths_hour(), 1) + "," +
         fixed_units(r.delta_t_hundredths(), 2) + "," + std::to_string(r.R) + "," +
         fixed_units(r.delta_t_prime_hundredths(), 2);
}

inline std::string economics_csv(const economics_row& e) {
  return std::to_string(e.G) + "," + std::to_string(e.K) + "," + std::to_string(e.N) + "," + std::to_string(e.R) +
         "," + fixed(e.c_m, 4) + "," + fixed(e.bond_target, 4) + "," + fixed(e.bond, 0) + "," +
         std::string(to_string(e.policy)) + "," + fixed(e.hero_expenses, 4) + "," + fixed(e.adversary_loss, 0) +
         "," + fixed(e.delay / 86400.0, 2);
}

inline json metadata() { return {{"hash", hash_algorithm}, {"leaf_tag", tag_state}, {"internal_tag", tag_internal}}; }

}  // namespace dave
