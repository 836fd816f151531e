#pragma once

// Dense computation hash: a binary Merkle tree over the state hashes after
// every transition. node(i, b) is the i-th subtree of height b; node(0, B) is
// the claim.

#include <cstdint>
#include <string>
#include <vector>

#include "dave/error.hpp"
#include "dave/hash.hpp"
#include "dave/vm.hpp"

namespace dave {

inline digest hash_children(const digest& left, const digest& right) {
  return sha256(preimage{}.put(tag_internal).put(left).put(right));
}

struct children_reveal {
  digest left{};
  digest right{};
  std::uint64_t parent_index = 0;
  unsigned parent_height = 0;
};

inline bool verify_children(const digest& parent, const children_reveal& r) {
  return hash_children(r.left, r.right) == parent;
}

// Sibling path from a leaf to the root, bottom-up.
struct inclusion_proof {
  std::uint64_t leaf_index = 0;
  std::vector<digest> siblings;
};

inline bool verify_inclusion(const digest& root, const digest& leaf, const inclusion_proof& proof) {
  digest acc = leaf;
  std::uint64_t idx = proof.leaf_index;
  for (const auto& sib : proof.siblings) {
    acc = (idx & 1) ? hash_children(sib, acc) : hash_children(acc, sib);
    idx >>= 1;
  }
  return idx == 0 && acc == root;
}

class commitment_tree {
 public:
  explicit commitment_tree(const history& h) : height_(h.height) {
    check_height(h.height);
    if (h.size() != leaf_count(h.height)) {
      throw error(errc::invalid_param, "history has " + std::to_string(h.size()) +
                                           " leaves, expected 2^" + std::to_string(h.height));
    }
    levels_.reserve(height_ + 1);
    levels_.push_back(h.state_hashes);
    for (unsigned b = 1; b <= height_; ++b) {
      const auto& below = levels_.back();
      std::vector<digest> level(below.size() / 2);
      for (std::size_t i = 0; i < level.size(); ++i) level[i] = hash_children(below[2 * i], below[2 * i + 1]);
      levels_.push_back(std::move(level));
    }
  }

  unsigned height() const { return height_; }
  const digest& root() const { return levels_.back().front(); }
  std::uint64_t leaves() const { return levels_.front().size(); }

  const digest& node(std::uint64_t index, unsigned level) const {
    if (level > height_ || index >= levels_[level].size()) {
      throw error(errc::index_out_of_range,
                  "node(" + std::to_string(index) + ", " + std::to_string(level) + ")");
    }
    return levels_[level][index];
  }

  children_reveal reveal_children(std::uint64_t index, unsigned level) const {
    if (level == 0) throw error(errc::index_out_of_range, "leaves have no children");
    node(index, level);
    return {levels_[level - 1][2 * index], levels_[level - 1][2 * index + 1], index, level};
  }

  inclusion_proof prove_leaf(std::uint64_t leaf) const {
    node(leaf, 0);
    inclusion_proof p{leaf, {}};
    std::uint64_t idx = leaf;
    for (unsigned b = 0; b < height_; ++b) {
      p.siblings.push_back(levels_[b][idx ^ 1]);
      idx >>= 1;
    }
    return p;
  }

 private:
  unsigned height_;
  std::vector<std::vector<digest>> levels_;  // levels_[b] holds 2^(B-b) nodes
};

inline commitment_tree build_tree(const history& h) { return commitment_tree(h); }

// Referee-style descent: go left when the left children differ, else right.
// Returns the first leaf at which the two committed histories disagree.
inline std::uint64_t first_divergence(const commitment_tree& a, const commitment_tree& b) {
  if (a.height() != b.height()) throw error(errc::invalid_param, "tree heights differ");
  if (a.root() == b.root()) throw error(errc::identical_claims, "roots are equal");
  std::uint64_t i = 0;
  for (unsigned level = a.height(); level > 0; --level) {
    auto ra = a.reveal_children(i, level);
    auto rb = b.reveal_children(i, level);
    i = (ra.left != rb.left) ? 2 * i : 2 * i + 1;
  }
  return i;
}

}  // namespace dave
