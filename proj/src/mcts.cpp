#include "beamband/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamband/errors.hpp"
#include "beamband/kernels.hpp"

namespace beamband {

TreeNode build_period_tree(std::span<const double> periods_ms) {
  if (periods_ms.empty()) throw PreconditionError("build_period_tree: no periods");
  TreeNode root;
  root.layer = Layer::kPeriodRoot;
  for (double p : periods_ms) {
    TreeNode child;
    child.layer = Layer::kPeriod;
    child.action_value = p;
    root.children.push_back(std::move(child));
  }
  return root;
}

TreeNode build_period_beamwidth_tree(std::span<const double> periods_ms,
                                     std::span<const int> sector_counts, bool beam_leaves) {
  if (sector_counts.empty()) throw PreconditionError("build_period_beamwidth_tree: no sector counts");
  TreeNode root = build_period_tree(periods_ms);
  for (auto& period : root.children) {
    for (int n : sector_counts) {
      if (n <= 0) throw PreconditionError("build_period_beamwidth_tree: sector count must be positive");
      TreeNode bw;
      bw.layer = Layer::kBeamwidth;
      bw.action_value = n;
      if (beam_leaves) {
        bw.leaf_policy_stats.resize(static_cast<std::size_t>(n));
        bw.children.resize(static_cast<std::size_t>(n));
        for (int b = 0; b < n; ++b) {
          bw.children[b].layer = Layer::kBeamLeaf;
          bw.children[b].action_value = b;
        }
      }
      period.children.push_back(std::move(bw));
    }
  }
  return root;
}

namespace {

std::size_t choose_child(const TreeNode& node, PolicyKind kind, Rng& rng) {
  std::vector<ArmEstimate> stats;
  stats.reserve(node.children.size());
  for (const auto& c : node.children) stats.push_back(c.stats);
  return select_by_index(kind, stats, std::max<std::uint64_t>(node.stats.pulls, 1), rng);
}

void expect_layer(const TreeNode& node, Layer layer) {
  if (node.layer != layer) throw StructuralError("tree layer mismatch");
}

std::vector<int> all_beams(int n) {
  std::vector<int> beams(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b) beams[b] = b;
  return beams;
}

}  // namespace

PathSelection select_path(const TreeNode& root, const TreePolicy& policy, Rng& rng,
                          Ratio sweep_ratio) {
  expect_layer(root, Layer::kPeriodRoot);
  if (root.children.empty()) throw StructuralError("select_path: root has no children");

  PathSelection path;
  path.period_child = choose_child(root, policy.node_policy, rng);
  const TreeNode& period = root.children[path.period_child];
  expect_layer(period, Layer::kPeriod);
  if (period.children.empty()) return path;

  path.beamwidth_child = choose_child(period, policy.node_policy, rng);
  const TreeNode& bw = period.children[path.beamwidth_child];
  expect_layer(bw, Layer::kBeamwidth);
  const int n = static_cast<int>(bw.action_value);
  if (bw.children.empty()) {
    path.swept_beams = all_beams(n);
    return path;
  }
  if (bw.children.size() != static_cast<std::size_t>(n) || bw.leaf_policy_stats.size() != bw.children.size()) {
    throw StructuralError("select_path: beamwidth node leaf count differs from its sector count");
  }
  const auto k = static_cast<std::size_t>(sweep_ratio.beams_for(n));
  path.swept_beams = select_best_k(bw, std::max<std::size_t>(k, 1), rng, policy.leaf_policy);
  return path;
}

std::vector<int> select_best_k(const TreeNode& node, std::size_t k, Rng& rng,
                               PolicyKind leaf_policy) {
  expect_layer(node, Layer::kBeamwidth);
  const auto& stats = node.leaf_policy_stats;
  const std::size_t n = stats.size();
  if (k < 1 || k > n) throw PreconditionError("select_best_k: k must be in [1, number of beams]");
  if (k == n) return all_beams(static_cast<int>(n));

  std::vector<double> index(n);
  const std::uint64_t rounds = std::max<std::uint64_t>(node.leaf_rounds, 1);
  switch (leaf_policy) {
    case PolicyKind::kUcb1: {
      std::vector<double> means(n), pulls(n);
      for (std::size_t i = 0; i < n; ++i) {
        means[i] = stats[i].mean_reward;
        pulls[i] = static_cast<double>(stats[i].pulls);
      }
      kernels::ucb1_indices(means, pulls, 2.0 * std::log(static_cast<double>(rounds)), index);
      break;
    }
    case PolicyKind::kKlUcb:
      for (std::size_t i = 0; i < n; ++i) index[i] = kl_ucb_index(stats[i], static_cast<double>(rounds));
      break;
    case PolicyKind::kRandom:
      // All-equal indices: the tie-break below draws a uniform subset.
      break;
    default:
      throw PreconditionError("select_best_k: leaf policy must be random, ucb1 or klucb");
  }

  std::vector<double> sorted = index;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end(),
                   std::greater<>());
  const double cutoff = sorted[k - 1];

  std::vector<int> chosen;
  std::vector<int> boundary;
  chosen.reserve(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (index[i] > cutoff) {
      chosen.push_back(static_cast<int>(i));
    } else if (index[i] == cutoff) {
      boundary.push_back(static_cast<int>(i));
    }
  }
  const std::size_t need = k - chosen.size();
  if (need < boundary.size()) {
    // Partial Fisher-Yates: a uniform `need`-subset of the tied group.
    for (std::size_t i = 0; i < need; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(boundary.size() - i));
      std::swap(boundary[i], boundary[j]);
    }
  }
  chosen.insert(chosen.end(), boundary.begin(), boundary.begin() + static_cast<std::ptrdiff_t>(need));
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

void backpropagate(TreeNode& root, const PathSelection& path, double slot_reward,
                   std::span<const std::pair<int, bool>> per_beam_feedback) {
  expect_layer(root, Layer::kPeriodRoot);
  if (path.period_child >= root.children.size()) throw StructuralError("backpropagate: bad period child");
  TreeNode& period = root.children[path.period_child];

  if (path.beamwidth_child == PathSelection::kNoChild) {
    if (!per_beam_feedback.empty()) throw ConsistencyError("backpropagate: feedback without a beam layer");
    root.stats.observe(slot_reward);
    period.stats.observe(slot_reward);
    return;
  }
  if (path.beamwidth_child >= period.children.size()) throw StructuralError("backpropagate: bad beamwidth child");
  TreeNode& bw = period.children[path.beamwidth_child];

  for (const auto& [beam, ok] : per_beam_feedback) {
    if (!std::binary_search(path.swept_beams.begin(), path.swept_beams.end(), beam)) {
      throw ConsistencyError("backpropagate: feedback for a beam that was not swept");
    }
  }
  if (!per_beam_feedback.empty() && bw.leaf_policy_stats.empty()) {
    throw ConsistencyError("backpropagate: feedback on a node without beam leaves");
  }

  root.stats.observe(slot_reward);
  period.stats.observe(slot_reward);
  bw.stats.observe(slot_reward);
  if (bw.children.empty()) return;

  for (int beam : path.swept_beams) bw.children.at(static_cast<std::size_t>(beam)).stats.observe(slot_reward);
  for (const auto& [beam, ok] : per_beam_feedback) {
    bw.leaf_policy_stats[static_cast<std::size_t>(beam)].observe(ok ? 1.0 : 0.0);
  }
  ++bw.leaf_rounds;
}

}  // namespace beamband
