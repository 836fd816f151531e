#pragma once

// Pairwise match: both sides reveal children at every node from the root
// down, the referee descends towards the first disagreeing leaf, then either
// side may prove one transition. Chess clocks tick for whichever side owes.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dave/clock.hpp"
#include "dave/commitment.hpp"
#include "dave/error.hpp"
#include "dave/types.hpp"
#include "dave/vm.hpp"

namespace dave {

enum class side : std::uint8_t { a = 0, b = 1 };

constexpr side other(side s) { return s == side::a ? side::b : side::a; }
constexpr std::size_t idx(side s) { return static_cast<std::size_t>(s); }

enum class match_status { running, won_by_step, won_by_timeout, double_timeout };

constexpr std::string_view to_string(match_status s) {
  switch (s) {
    case match_status::running: return "Running";
    case match_status::won_by_step: return "WonByStep";
    case match_status::won_by_timeout: return "WonByTimeout";
    case match_status::double_timeout: return "DoubleTimeout";
  }
  return "?";
}

struct step_witness {
  machine_state agreed_state;
  state_hash claimed_next{};
  // Inclusion of hash(agreed_state) as leaf index-1 in the submitter's tree.
  // Ignored at leaf 0, where the agreed state is the initial state.
  inclusion_proof agreed_proof;
};

struct match_state {
  std::array<claim_id, 2> claims{};
  std::array<digest, 2> roots{};
  seed_bytes seed{};
  unsigned tree_height = 0;

  std::uint64_t index = 0;
  unsigned height = 0;
  std::array<digest, 2> node_digest{};  // each side's committed digest at (index, height)
  std::array<std::optional<children_reveal>, 2> pending;
  std::array<chess_clock, 2> clocks{};
  std::array<seconds, 2> charged{};
  virtual_time opened_at = 0;  // when the current node started
  virtual_time last_update = 0;

  match_status status = match_status::running;
  std::optional<side> winner;
  virtual_time ended_at = 0;

  bool owes(side s) const { return status == match_status::running && clocks[idx(s)].running; }
  bool at_leaf() const { return height == 0; }
};

inline match_state open_match(claim_id a, const digest& root_a, claim_id b, const digest& root_b,
                              const seed_bytes& seed, const time_params& params, virtual_time now) {
  if (root_a == root_b) throw error(errc::identical_claims, "claims " + std::to_string(a) + " and " +
                                                               std::to_string(b) + " share a root");
  match_state m;
  m.claims = {a, b};
  m.roots = {root_a, root_b};
  m.seed = seed;
  m.tree_height = params.tree_height;
  m.height = params.tree_height;
  m.node_digest = m.roots;
  m.clocks[0] = m.clocks[1] = chess_clock{params.initial_clock(), true};
  m.opened_at = m.last_update = now;
  return m;
}

namespace detail {

// Instant at which side s runs out if it keeps owing.
inline std::optional<virtual_time> exhaustion(const match_state& m, side s) {
  if (!m.owes(s)) return std::nullopt;
  return m.last_update + m.clocks[idx(s)].remaining;
}

inline void charge(match_state& m, virtual_time now) {
  if (now < m.last_update) throw error(errc::precondition_violated, "time went backwards");
  seconds dt = now - m.last_update;
  for (side s : {side::a, side::b}) {
    if (!m.owes(s) || dt == 0) continue;
    auto r = tick_clock(m.clocks[idx(s)], dt);
    if (auto* c = std::get_if<chess_clock>(&r)) {
      m.clocks[idx(s)] = *c;
      m.charged[idx(s)] += dt;
    } else {
      // Only reachable when the caller lands exactly on the crossing.
      seconds at = std::get<timeout_event>(r).at;
      m.charged[idx(s)] += at;
      m.clocks[idx(s)].remaining = 0;
    }
  }
  m.last_update = now;
}

inline void finish(match_state& m, match_status st, std::optional<side> winner, virtual_time at) {
  m.status = st;
  m.winner = winner;
  m.ended_at = at;
  m.clocks[0].running = m.clocks[1].running = false;
}

// Resolves timeouts strictly before `now`, or at or before it when `inclusive`.
inline void settle(match_state& m, virtual_time now, bool inclusive) {
  if (m.status != match_status::running) return;
  auto ea = exhaustion(m, side::a), eb = exhaustion(m, side::b);
  std::optional<virtual_time> first;
  for (auto e : {ea, eb}) {
    if (e && (!first || *e < *first)) first = e;
  }
  bool hit = first && (inclusive ? *first <= now : *first < now);
  if (!hit) {
    charge(m, now);
    return;
  }
  charge(m, *first);
  bool a_out = ea && *ea == *first, b_out = eb && *eb == *first;
  if (a_out && b_out) {
    finish(m, match_status::double_timeout, std::nullopt, *first);
  } else {
    finish(m, match_status::won_by_timeout, a_out ? side::b : side::a, *first);
  }
}

inline void require_running(const match_state& m) {
  if (m.status != match_status::running) {
    throw error(errc::not_running, "match already " + std::string(to_string(m.status)));
  }
}

}  // namespace detail

// Charges the clocks of whoever owes an action up to `now`, ending the match
// on exhaustion. A clock that reaches zero at exactly `now` is a timeout.
inline match_state advance_time(match_state m, virtual_time now) {
  detail::settle(m, now, true);
  return m;
}

// Actions landing at the exact instant a clock reaches zero are accepted.
inline match_state submit_bisect(match_state m, side s, const children_reveal& reveal, virtual_time now) {
  detail::require_running(m);
  detail::settle(m, now, false);
  detail::require_running(m);
  if (m.at_leaf() || reveal.parent_height != m.height || reveal.parent_index != m.index) {
    throw error(errc::wrong_height, "reveal for (" + std::to_string(reveal.parent_index) + ", " +
                                        std::to_string(reveal.parent_height) + ") at (" +
                                        std::to_string(m.index) + ", " + std::to_string(m.height) + ")");
  }
  if (m.pending[idx(s)]) throw error(errc::precondition_violated, "side already revealed at this node");
  if (!verify_children(m.node_digest[idx(s)], reveal)) {
    throw error(errc::invalid_reveal, "children do not hash to the committed node");
  }
  m.pending[idx(s)] = reveal;
  m.clocks[idx(s)].running = false;
  if (!m.pending[idx(other(s))]) return m;

  const auto& ra = *m.pending[0];
  const auto& rb = *m.pending[1];
  if (ra.left != rb.left) {
    m.index = 2 * m.index;
    m.node_digest = {ra.left, rb.left};
  } else {
    if (ra.right == rb.right) throw error(errc::precondition_violated, "both children agree");
    m.index = 2 * m.index + 1;
    m.node_digest = {ra.right, rb.right};
  }
  --m.height;
  m.pending = {};
  m.clocks[0].running = m.clocks[1].running = true;
  m.opened_at = now;
  return m;
}

// A witness that does not prove the submitter's leaf is ignored.
inline match_state submit_step(match_state m, side s, const step_witness& w, virtual_time now) {
  detail::require_running(m);
  if (!m.at_leaf()) throw error(errc::not_at_leaf, "step at height " + std::to_string(m.height));
  detail::settle(m, now, false);
  detail::require_running(m);

  const machine_state& agreed = w.agreed_state;
  bool anchored = false;
  if (agreed.step_index == m.index) {
    if (m.index == 0) {
      anchored = agreed == initial_state(m.seed);
    } else {
      anchored = w.agreed_proof.leaf_index == m.index - 1 &&
                 w.agreed_proof.siblings.size() == m.tree_height &&
                 verify_inclusion(m.roots[idx(s)], hash_state(agreed), w.agreed_proof);
    }
  }
  if (!anchored || w.claimed_next != m.node_digest[idx(s)]) {
    throw error(errc::witness_hash_mismatch, "witness is not anchored at leaf " + std::to_string(m.index));
  }
  if (verify_step_witness(agreed, m.node_digest[idx(s)], m.tree_height)) {
    detail::finish(m, match_status::won_by_step, s, now);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Driving a match between two scripted participants.

enum class behavior { honest, active, stall, invalid_reveal, wrong_witness };

constexpr std::string_view to_string(behavior b) {
  switch (b) {
    case behavior::honest: return "honest";
    case behavior::active: return "active";
    case behavior::stall: return "stall";
    case behavior::invalid_reveal: return "invalid_reveal";
    case behavior::wrong_witness: return "wrong_witness";
  }
  return "?";
}

struct participant {
  claim_id id = 0;
  const commitment_tree* tree = nullptr;
  behavior play = behavior::honest;
};

struct transcript_entry {
  virtual_time time = 0;
  std::uint64_t match_id = 0;
  claim_id claim = 0;
  side by = side::a;
  std::string kind;  // bisect, step, rejected:<reason>, timeout, double_timeout, cutoff
  std::uint64_t index = 0;
  unsigned height = 0;
};

using transcript_sink = std::function<void(const transcript_entry&)>;

namespace detail {

inline step_witness make_witness(const match_state& m, const participant& p, bool garbage) {
  step_witness w;
  w.agreed_state = state_at(m.seed, m.index, m.tree_height);
  if (garbage) w.agreed_state.value = sha256(preimage{}.put(tag_garbage).put(w.agreed_state.value));
  w.claimed_next = p.tree->node(m.index, 0);
  if (m.index > 0) w.agreed_proof = p.tree->prove_leaf(m.index - 1);
  return w;
}

inline bool acts(behavior b) { return b != behavior::stall; }

}  // namespace detail

// Runs a match from `m` until it ends or `cutoff` passes. Adversarial sides
// act before honest ones at equal instants. Transactions from a claim are
// delayed by any censorship span targeting it.
inline match_state play_match(match_state m, const std::array<participant, 2>& who, const time_params& params,
                              const std::vector<censorship_span>& censorship, virtual_time cutoff,
                              std::uint64_t match_id = 0, const transcript_sink& sink = {}) {
  auto log = [&](virtual_time t, side s, std::string kind) {
    if (sink) sink({t, match_id, who[idx(s)].id, s, std::move(kind), m.index, m.height});
  };
  std::array<bool, 2> attempted{};
  unsigned node_height = m.height;
  std::uint64_t node_index = m.index;

  while (m.status == match_status::running) {
    if (m.height != node_height || m.index != node_index) {
      attempted = {};
      node_height = m.height;
      node_index = m.index;
    }
    unsigned action = m.tree_height - m.height;
    std::array<std::optional<virtual_time>, 2> when;
    for (side s : {side::a, side::b}) {
      const auto& p = who[idx(s)];
      if (!m.owes(s) || attempted[idx(s)] || !detail::acts(p.play)) continue;
      if (m.at_leaf() && p.play == behavior::invalid_reveal) continue;
      when[idx(s)] = release_time(censorship, m.opened_at + params.action_duration(action), p.id);
    }
    std::optional<virtual_time> next_action;
    for (auto w : when) {
      if (w && (!next_action || *w < *next_action)) next_action = w;
    }
    std::optional<virtual_time> next_exhaust;
    for (side s : {side::a, side::b}) {
      auto e = detail::exhaustion(m, s);
      if (e && (!next_exhaust || *e < *next_exhaust)) next_exhaust = e;
    }
    bool action_first = next_action && (!next_exhaust || *next_action <= *next_exhaust);
    if (!action_first) {
      if (!next_exhaust || *next_exhaust > cutoff) {
        m = advance_time(m, cutoff);
        log(cutoff, side::a, "cutoff");
        break;
      }
      m = advance_time(m, *next_exhaust);
      if (m.status == match_status::double_timeout) log(m.ended_at, side::a, "double_timeout");
      if (m.status == match_status::won_by_timeout) log(m.ended_at, other(*m.winner), "timeout");
      break;
    }
    if (*next_action > cutoff) {
      m = advance_time(m, cutoff);
      log(cutoff, side::a, "cutoff");
      break;
    }
    virtual_time now = *next_action;
    std::array<side, 2> order{side::a, side::b};
    if (who[0].play == behavior::honest && who[1].play != behavior::honest) order = {side::b, side::a};
    for (side s : order) {
      if (!when[idx(s)] || *when[idx(s)] != now || m.status != match_status::running) continue;
      if (m.height != node_height || m.index != node_index) break;  // node advanced; recompute
      const auto& p = who[idx(s)];
      attempted[idx(s)] = true;
      try {
        if (!m.at_leaf()) {
          auto r = p.tree->reveal_children(m.index, m.height);
          if (p.play == behavior::invalid_reveal) r.left[0] ^= 0x01;
          log(now, s, "bisect");
          m = submit_bisect(m, s, r, now);
        } else {
          log(now, s, "step");
          m = submit_step(m, s, detail::make_witness(m, p, p.play == behavior::wrong_witness), now);
          if (m.status == match_status::running) log(now, s, "rejected:StepNotProven");
        }
      } catch (const error& e) {
        log(now, s, std::string("rejected:") + std::string(to_string(e.code())));
      }
    }
  }
  return m;
}

}  // namespace dave
