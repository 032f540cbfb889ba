#include <doctest.h>

#include <algorithm>
#include <vector>

#include "beamband/errors.hpp"
#include "beamband/mcts.hpp"

using namespace beamband;

namespace {

// Reward of arm `a` at step `t`, independent of who asks.
double tape_reward(std::uint64_t seed, std::size_t t, std::size_t a) {
  Rng r(derive_seed(seed, t, StreamPurpose::kSynthetic, a));
  return r.uniform() < 0.15 + 0.15 * static_cast<double>(a) ? r.uniform() : 0.0;
}

TreeNode single_beamwidth(int sectors) {
  const double periods[] = {10.0};
  const int counts[] = {sectors};
  return build_period_beamwidth_tree(periods, counts, true);
}

}  // namespace

TEST_CASE("tree shapes") {
  const double periods[] = {10, 20, 40, 80, 160};
  const int counts[] = {16, 32, 64, 128, 256, 512};
  TreeNode t2 = build_period_beamwidth_tree(periods, counts, false);
  CHECK(t2.children.size() == 5);
  std::size_t leaves = 0;
  for (const auto& p : t2.children) {
    CHECK(p.layer == Layer::kPeriod);
    CHECK(p.children.size() == 6);
    leaves += p.children.size();
  }
  CHECK(leaves == 30);

  TreeNode t3 = build_period_beamwidth_tree(periods, counts, true);
  const auto& bw = t3.children[4].children[5];
  CHECK(bw.action_value == 512);
  CHECK(bw.children.size() == 512);
  CHECK(bw.leaf_policy_stats.size() == 512);
  CHECK(bw.children[7].layer == Layer::kBeamLeaf);
}

TEST_CASE("single-layer tree matches the flat bandit bit for bit") {
  const double periods[] = {10, 20, 40, 80, 160};
  for (auto kind : {PolicyKind::kKlUcb, PolicyKind::kUcb1, PolicyKind::kRandom}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      TreeNode root = build_period_tree(periods);
      PolicyState flat(kind, 5);
      Rng tree_rng(seed), flat_rng(seed);
      for (std::size_t t = 0; t < 2000; ++t) {
        const PathSelection path = select_path(root, TreePolicy{kind, PolicyKind::kUcb1}, tree_rng);
        const std::size_t a = flat.select(flat_rng);
        REQUIRE(path.period_child == a);
        const double r = tape_reward(seed, t, a);
        backpropagate(root, path, r);
        flat.update(a, r);
      }
      for (std::size_t a = 0; a < 5; ++a) {
        CHECK(root.children[a].stats.pulls == flat.arms()[a].pulls);
        CHECK(root.children[a].stats.mean_reward == flat.arms()[a].mean_reward);
      }
    }
  }
}

TEST_CASE("backpropagation conserves visit counts") {
  const double periods[] = {10, 20, 40};
  const int counts[] = {16, 32};
  TreeNode root = build_period_beamwidth_tree(periods, counts, true);
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const PathSelection path = select_path(root, TreePolicy{}, rng, Ratio{1, 2});
    std::vector<std::pair<int, bool>> fb;
    for (int b : path.swept_beams) fb.emplace_back(b, b % 3 == 0);
    backpropagate(root, path, rng.uniform(), fb);
  }
  std::uint64_t period_sum = 0;
  for (const auto& p : root.children) {
    period_sum += p.stats.pulls;
    std::uint64_t bw_sum = 0;
    for (const auto& bw : p.children) {
      bw_sum += bw.stats.pulls;
      CHECK(bw.leaf_rounds == bw.stats.pulls);
      std::uint64_t swept = 0;
      for (const auto& s : bw.leaf_policy_stats) swept += s.pulls;
      CHECK(swept == bw.leaf_rounds * static_cast<std::uint64_t>(bw.action_value / 2));
    }
    CHECK(bw_sum == p.stats.pulls);
  }
  CHECK(period_sum == root.stats.pulls);
  CHECK(root.stats.pulls == 300);
}

TEST_CASE("leaf feedback touches only swept beams") {
  TreeNode root = single_beamwidth(8);
  PathSelection path;
  path.period_child = 0;
  path.beamwidth_child = 0;
  path.swept_beams = {3, 7};
  const std::pair<int, bool> fb[] = {{3, true}, {7, false}};
  backpropagate(root, path, 0.25, fb);
  const auto& bw = root.children[0].children[0];
  CHECK(bw.leaf_policy_stats[3].pulls == 1);
  CHECK(bw.leaf_policy_stats[3].mean_reward == 1.0);
  CHECK(bw.leaf_policy_stats[7].pulls == 1);
  CHECK(bw.leaf_policy_stats[7].mean_reward == 0.0);
  CHECK(bw.leaf_policy_stats[5].pulls == 0);
  CHECK(bw.stats.mean_reward == 0.25);
  CHECK(root.children[0].stats.pulls == 1);

  const std::pair<int, bool> stray[] = {{5, true}};
  CHECK_THROWS_AS(backpropagate(root, path, 0.25, stray), ConsistencyError);
}

TEST_CASE("best-k selection") {
  TreeNode root = single_beamwidth(4);
  auto& bw = root.children[0].children[0];
  bw.leaf_policy_stats = {ArmEstimate{100, 1.0}, ArmEstimate{100, 0.0}, ArmEstimate{100, 0.0},
                          ArmEstimate{100, 0.0}};
  bw.leaf_rounds = 100000;
  Rng rng(1);
  CHECK(select_best_k(bw, 1, rng) == std::vector<int>{0});

  // Fresh beams all carry +inf: the subset is uniform and sorted.
  TreeNode big = single_beamwidth(512);
  auto& bw512 = big.children[0].children[0];
  const auto pick = select_best_k(bw512, 128, rng);
  CHECK(pick.size() == 128);
  CHECK(std::is_sorted(pick.begin(), pick.end()));
  CHECK(std::adjacent_find(pick.begin(), pick.end()) == pick.end());

  CHECK(select_path(big, TreePolicy{}, rng, Ratio{1, 4}).swept_beams.size() == 128);
  CHECK(select_path(big, TreePolicy{}, rng, Ratio{1, 1}).swept_beams.size() == 512);
  CHECK_THROWS_AS(select_best_k(bw512, 0, rng), PreconditionError);
  CHECK_THROWS_AS(select_best_k(bw512, 513, rng), PreconditionError);

  // k = N consumes no randomness.
  Rng a(8), b(8);
  select_best_k(bw512, 512, a);
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("best-k finds the strong beam") {
  const int n = 32;
  const std::size_t k = 8;
  double hits = 0.0, slots = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TreeNode root = single_beamwidth(n);
    Rng rng(derive_seed(seed, 0, StreamPurpose::kLeafPolicy));
    Rng env(derive_seed(seed, 0, StreamPurpose::kSynthetic));
    for (int t = 0; t < 1000; ++t) {
      PathSelection path;
      path.period_child = 0;
      path.beamwidth_child = 0;
      path.swept_beams = select_best_k(root.children[0].children[0], k, rng);
      std::vector<std::pair<int, bool>> fb;
      for (int b : path.swept_beams) fb.emplace_back(b, env.bernoulli(b == 0 ? 0.9 : 0.1));
      backpropagate(root, path, 0.5, fb);
      if (t >= 200) {
        slots += 1.0;
        hits += std::binary_search(path.swept_beams.begin(), path.swept_beams.end(), 0) ? 1.0 : 0.0;
      }
    }
  }
  CHECK(hits / slots > 0.95);
}

TEST_CASE("structural errors") {
  const double periods[] = {10};
  TreeNode root = build_period_tree(periods);
  Rng rng(1);
  CHECK_THROWS_AS(select_best_k(root, 1, rng), StructuralError);
  CHECK_THROWS_AS(select_path(root.children[0], TreePolicy{}, rng), StructuralError);
  PathSelection bad;
  bad.period_child = 4;
  CHECK_THROWS_AS(backpropagate(root, bad, 0.5), StructuralError);
}
