#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "sbai/proof_sets.hpp"

using namespace sbai;

namespace {

std::vector<std::vector<ObsIndex>> terminal_sets(const std::vector<ProofSet>& sets) {
  std::vector<std::vector<ObsIndex>> out;
  for (const auto& s : sets) out.push_back(s.terminals);
  std::sort(out.begin(), out.end());
  return out;
}

// Min root; move 1 is a max node over leaves 1..3, move 2 a leaf.
oracle::Tree min_over_max() {
  oracle::Tree root;
  root.player = -1;
  oracle::Tree m;
  m.player = 1;
  for (int i = 0; i < 3; ++i) m.children.emplace_back(i + 1, oracle::Tree::make_leaf(i));
  root.children.emplace_back(1, m);
  root.children.emplace_back(2, oracle::Tree::make_leaf(3));
  return root;
}

}  // namespace

TEST(ProofSets, MaximalMoveGivesSingleton) {
  const GameStructure g = identity_game(3);
  for (auto dir : {ProofDirection::upper, ProofDirection::lower}) {
    const auto sets = enumerate_proof_sets(g, 1, dir);
    ASSERT_EQ(sets.size(), 1u);
    EXPECT_EQ(sets[0].terminals, (std::vector<ObsIndex>{1}));
    EXPECT_EQ(count_proof_sets(g, 1, dir), 1.0);
  }
}

TEST(ProofSets, Depth2Structure) {
  const GameStructure g = oracle::to_game(oracle::depth2_tree(3, 3), 9);
  EXPECT_EQ(terminal_sets(enumerate_proof_sets(g, 0, ProofDirection::upper)),
            (std::vector<std::vector<ObsIndex>>{{0}, {1}, {2}}));
  for (ArmIndex j = 1; j < 3; ++j) {
    const auto lower = enumerate_proof_sets(g, j, ProofDirection::lower);
    ASSERT_EQ(lower.size(), 1u);
    EXPECT_EQ(lower[0].terminals, (std::vector<ObsIndex>{3 * j, 3 * j + 1, 3 * j + 2}));
  }
}

TEST(ProofSets, MaxNodeBelowMoveReversesPattern) {
  const oracle::Tree t = min_over_max();
  const GameStructure g = oracle::to_game(t, 4);
  const auto upper = terminal_sets(enumerate_proof_sets(g, 0, ProofDirection::upper));
  const auto lower = terminal_sets(enumerate_proof_sets(g, 0, ProofDirection::lower));
  EXPECT_EQ(upper, (std::vector<std::vector<ObsIndex>>{{0, 1, 2}}));
  EXPECT_EQ(lower, (std::vector<std::vector<ObsIndex>>{{0}, {1}, {2}}));

  // Agrees with the exhaustive check over all subsets of [L].
  auto as_int = [](const std::vector<std::vector<ObsIndex>>& v) {
    std::vector<std::vector<int>> out;
    for (const auto& s : v) out.emplace_back(s.begin(), s.end());
    return out;
  };
  const oracle::Tree& arm = t.children[0].second;
  EXPECT_EQ(as_int(upper), oracle::minimal_proof_sets(arm, 4, true));
  EXPECT_EQ(as_int(lower), oracle::minimal_proof_sets(arm, 4, false));
}

TEST(ProofSets, WitnessShape) {
  const GameStructure g = oracle::to_game(oracle::transposition_tree(), 6);
  for (ArmIndex j = 0; j < g.arms(); ++j) {
    for (auto dir : {ProofDirection::upper, ProofDirection::lower}) {
      const int choice_player = dir == ProofDirection::upper ? -1 : 1;
      for (const auto& s : enumerate_proof_sets(g, j, dir)) {
        const std::set<NodeId> w(s.witness.begin(), s.witness.end());
        EXPECT_TRUE(w.contains(g.arm_node(j)));
        std::set<ObsIndex> reached;
        for (NodeId h : w) {
          const GameNode& n = g.node(h);
          if (n.maximal()) {
            reached.insert(g.terminal(h));
            continue;
          }
          const auto kept = std::count_if(n.children.begin(), n.children.end(),
                                          [&](NodeId c) { return w.contains(c); });
          if (n.player == choice_player) {
            EXPECT_EQ(kept, 1);
          } else {
            EXPECT_EQ(static_cast<std::size_t>(kept), n.children.size());
          }
        }
        EXPECT_EQ(std::vector<ObsIndex>(reached.begin(), reached.end()), s.terminals);
      }
    }
  }
}

TEST(ProofSets, VerifyAcceptsValidAndRejectsCorrupted) {
  const GameStructure g = oracle::to_game(oracle::depth2_tree(3, 3), 9);
  SeededStream rng(1, 0);
  for (const auto& s : enumerate_proof_sets(g, 0, ProofDirection::upper)) EXPECT_TRUE(verify_proof_set(g, s, 1000, rng));
  auto lower = enumerate_proof_sets(g, 2, ProofDirection::lower);
  ASSERT_EQ(lower.size(), 1u);
  EXPECT_TRUE(verify_proof_set(g, lower[0], 1000, rng));
  ProofSet broken = lower[0];
  broken.terminals.pop_back();
  EXPECT_FALSE(verify_proof_set(g, broken, 1000, rng));

  auto upper = enumerate_proof_sets(oracle::to_game(min_over_max(), 4), 0, ProofDirection::upper);
  ProofSet broken_upper = upper[0];
  broken_upper.terminals.erase(broken_upper.terminals.begin() + 1);
  EXPECT_FALSE(verify_proof_set(oracle::to_game(min_over_max(), 4), broken_upper, 1000, rng));
}

TEST(ProofSets, LimitGuard) {
  // Max root over one min node whose children are max nodes of width 4:
  // lower proof sets pick one leaf per max node, 4^6 of them.
  GameStructure::Builder b(24);
  const NodeId arm = b.add_internal(b.root(), 1, -1);
  std::size_t t = 0;
  for (Move m = 1; m <= 6; ++m) {
    const NodeId n = b.add_internal(arm, m, 1);
    for (Move k = 1; k <= 4; ++k) b.add_terminal(n, k, t++);
  }
  b.add_terminal(b.root(), 2, 0);
  const GameStructure g = b.build();
  EXPECT_EQ(count_proof_sets(g, 0, ProofDirection::lower), 4096.0);
  EXPECT_EQ(enumerate_proof_sets(g, 0, ProofDirection::lower).size(), 4096u);
  try {
    enumerate_proof_sets(g, 0, ProofDirection::lower, 1000);
    FAIL() << "expected ProofSetLimitError";
  } catch (const ProofSetLimitError& e) {
    EXPECT_EQ(e.estimate(), 4096.0);
  }
}
