#pragma once

// Bandit-based tree search over the factored link configuration:
// sweep period -> codebook size -> subset of beams to sweep. Every non-leaf
// node runs a bandit over its children; the realized slot reward is pushed
// back along the chosen path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "beamband/bandit.hpp"
#include "beamband/ratio.hpp"
#include "beamband/rng.hpp"

namespace beamband {

enum class Layer { kPeriodRoot, kPeriod, kBeamwidth, kBeamLeaf };

struct TreeNode {
  Layer layer = Layer::kPeriodRoot;
  // Period in ms, sector count, or beam index depending on the layer.
  double action_value = 0.0;
  ArmEstimate stats;
  std::vector<TreeNode> children;

  // Beamwidth nodes with beam leaves only: binary "connects" statistics per
  // beam, and the number of sweeps that consulted them.
  std::vector<ArmEstimate> leaf_policy_stats;
  std::uint64_t leaf_rounds = 0;
};

// Root over periods only; the period nodes are leaves.
TreeNode build_period_tree(std::span<const double> periods_ms);

// Root -> period -> beamwidth; with `beam_leaves` each beamwidth node also
// carries one leaf per beam of its codebook.
TreeNode build_period_beamwidth_tree(std::span<const double> periods_ms,
                                     std::span<const int> sector_counts, bool beam_leaves);

struct TreePolicy {
  PolicyKind node_policy = PolicyKind::kKlUcb;
  PolicyKind leaf_policy = PolicyKind::kUcb1;
};

struct PathSelection {
  std::size_t period_child = 0;
  // Absent (npos) for a period-only tree.
  std::size_t beamwidth_child = kNoChild;
  std::vector<int> swept_beams;

  static constexpr std::size_t kNoChild = static_cast<std::size_t>(-1);
};

// Walks from the root choosing one child per layer with the node policy. On
// a beamwidth node with beam leaves the swept set comes from select_best_k
// with k = round(N_s * sweep_ratio); otherwise every beam is swept.
PathSelection select_path(const TreeNode& root, const TreePolicy& policy, Rng& rng,
                          Ratio sweep_ratio = Ratio{1, 1});

// The k beams with the largest leaf indices (UCB1 by default), ties split
// uniformly at random. Returned in ascending beam order.
std::vector<int> select_best_k(const TreeNode& beamwidth_node, std::size_t k, Rng& rng,
                               PolicyKind leaf_policy = PolicyKind::kUcb1);

// Applies slot_reward to the root and every node on the path, and each
// beam's binary feedback to its leaf statistics.
void backpropagate(TreeNode& root, const PathSelection& path, double slot_reward,
                   std::span<const std::pair<int, bool>> per_beam_feedback = {});

}  // namespace beamband
