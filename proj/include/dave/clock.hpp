#pragma once

// Timing parameters, chess clocks with a grace period, and the adversary's
// global censorship budget.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "dave/config.hpp"
#include "dave/error.hpp"
#include "dave/types.hpp"
#include "dave/vm.hpp"

namespace dave {

inline constexpr unsigned default_tree_height = 4;

struct time_params {
  seconds censorship_budget = 0;  // T_c
  seconds match_duration = 0;     // T_m
  seconds grace_period = 0;       // T_g
  std::uint32_t max_demotions = 0;  // K = T_c / T_g
  std::uint32_t group_size = 0;     // G
  unsigned tree_height = default_tree_height;
  // Per side: B bisections then one step. Sums to T_m / 2, so both sides
  // together account for exactly T_m.
  std::vector<seconds> action_schedule;

  // Discrete: T_m + 2 T_g. Continuous: T_m + T_g.
  seconds round_duration(dispute_mode mode = dispute_mode::discrete) const {
    return match_duration + (mode == dispute_mode::discrete ? 2 : 1) * grace_period;
  }

  seconds initial_clock() const { return match_duration / 2 + grace_period; }

  // Actions are numbered 0..B-1 for bisections from the root down, B for the step.
  seconds action_duration(unsigned action) const { return action_schedule.at(action); }

  unsigned interactions() const { return 2 * (tree_height + 1); }
};

inline std::vector<seconds> uniform_schedule(seconds per_side_total, unsigned actions) {
  std::vector<seconds> out(actions, per_side_total / actions);
  for (seconds i = 0; i < per_side_total % actions; ++i) ++out[i];
  return out;
}

inline time_params make_params(seconds t_c, seconds t_m, seconds t_g, std::uint32_t group_size,
                               unsigned tree_height = default_tree_height) {
  if (t_g == 0 || t_c == 0) throw error(errc::invalid_param, "T_c and T_g must be positive");
  if (t_c % t_g != 0) {
    throw error(errc::non_divisible_grace,
                "T_g=" + std::to_string(t_g) + " does not divide T_c=" + std::to_string(t_c));
  }
  if (t_m < 2 || t_m % 2 != 0) throw error(errc::invalid_param, "T_m must be even and >= 2");
  if (group_size < 2) throw error(errc::invalid_param, "group size must be >= 2");
  check_height(tree_height);
  if (t_m / 2 < tree_height + 1) {
    throw error(errc::invalid_param, "T_m too short for one second per action");
  }
  time_params p;
  p.censorship_budget = t_c;
  p.match_duration = t_m;
  p.grace_period = t_g;
  p.max_demotions = static_cast<std::uint32_t>(t_c / t_g);
  p.group_size = group_size;
  p.tree_height = tree_height;
  p.action_schedule = uniform_schedule(t_m / 2, tree_height + 1);
  return p;
}

inline const std::set<std::string>& time_param_keys() {
  static const std::set<std::string> keys{"t_c_seconds", "t_m_seconds", "t_g_seconds",
                                          "group_size", "tree_height"};
  return keys;
}

inline time_params load_time_params(std::istream& in) {
  auto kv = parse_key_values(in);
  reject_unknown_keys(kv, time_param_keys());
  for (const auto& k : time_param_keys()) {
    if (k != "tree_height" && !kv.count(k)) throw error(errc::config_error, "missing key '" + k + "'");
  }
  unsigned height = kv.count("tree_height")
                        ? static_cast<unsigned>(parse_u64(kv["tree_height"], "tree_height"))
                        : default_tree_height;
  return make_params(parse_u64(kv["t_c_seconds"], "t_c_seconds"), parse_u64(kv["t_m_seconds"], "t_m_seconds"),
                     parse_u64(kv["t_g_seconds"], "t_g_seconds"),
                     static_cast<std::uint32_t>(parse_u64(kv["group_size"], "group_size")), height);
}

struct chess_clock {
  seconds remaining = 0;
  bool running = false;

  friend bool operator==(const chess_clock&, const chess_clock&) = default;
};

struct timeout_event {
  seconds at = 0;  // offset from the start of the tick at which the clock hit zero
};

// Reaching zero is a timeout; the event carries the exact crossing offset.
inline std::variant<chess_clock, timeout_event> tick_clock(chess_clock c, seconds dt) {
  if (!c.running) throw error(errc::clock_not_running, "tick on a stopped clock");
  if (dt >= c.remaining) return timeout_event{c.remaining};
  c.remaining -= dt;
  return c;
}

struct censorship_span {
  virtual_time start = 0;
  seconds duration = 0;
  claim_id target = 0;

  virtual_time end() const { return start + duration; }
};

struct censorship_budget {
  seconds total = 0;
  seconds remaining = 0;
  std::vector<censorship_span> spent_log;

  explicit censorship_budget(seconds t_c = 0) : total(t_c), remaining(t_c) {}

  seconds spent() const { return total - remaining; }
};

inline censorship_budget spend_censorship(censorship_budget b, virtual_time start, seconds duration,
                                          claim_id target) {
  if (duration > b.remaining) {
    throw error(errc::budget_exhausted, "requested " + std::to_string(duration) + "s with " +
                                            std::to_string(b.remaining) + "s left");
  }
  b.remaining -= duration;
  b.spent_log.push_back({start, duration, target});
  return b;
}

// Earliest instant >= ready at which a transaction from `target` is not
// being censored.
inline virtual_time release_time(const std::vector<censorship_span>& spans, virtual_time ready,
                                 claim_id target) {
  bool moved = true;
  while (moved) {
    moved = false;
    for (const auto& s : spans) {
      if (s.target == target && s.duration > 0 && ready >= s.start && ready < s.end()) {
        ready = s.end();
        moved = true;
      }
    }
  }
  return ready;
}

// Seconds of censorship against `target` that fall inside [from, to).
inline seconds censorship_overlap(const std::vector<censorship_span>& spans, virtual_time from,
                                  virtual_time to, claim_id target) {
  seconds total = 0;
  for (const auto& s : spans) {
    if (s.target != target) continue;
    virtual_time lo = std::max(from, s.start), hi = std::min(to, s.end());
    if (hi > lo) total += hi - lo;
  }
  return total;
}

}  // namespace dave
