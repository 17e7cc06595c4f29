#pragma once

#include <memory>
#include <span>
#include <vector>

#include "sbai/game.hpp"
#include "sbai/types.hpp"

namespace sbai {

// The known map f from the L observable means to the K arm payoffs.
// Either the minimax value of each first move of a game, or the identity
// (plain best-arm identification, K = L).
class RewardMap {
 public:
  enum class Kind { minimax, identity };

  static RewardMap identity(std::size_t num_arms);
  static RewardMap minimax(std::shared_ptr<const GameStructure> game);
  static RewardMap minimax(GameStructure game);

  Kind kind() const { return kind_; }
  std::size_t arms() const;
  std::size_t observables() const;
  // Null for the identity kind.
  const GameStructure* game() const { return game_.get(); }
  std::shared_ptr<const GameStructure> shared_game() const { return game_; }

  std::vector<double> payoff(std::span<const double> mu) const;

  // D(j, u, v) = { i : [f_j(u), f_j(v)] is contained in [u_i, v_i] }, ascending.
  std::vector<ObsIndex> cover_set(ArmIndex j, std::span<const double> lower,
                                  std::span<const double> upper) const;

  // The canonical member of cover_set: j itself for the identity map, the
  // terminal reached by the MinMax descent from (j) for games.
  ObsIndex cover_pick(ArmIndex j, std::span<const double> lower, std::span<const double> upper) const;

 private:
  RewardMap(Kind kind, std::size_t arms, std::shared_ptr<const GameStructure> game)
      : kind_(kind), identity_arms_(arms), game_(std::move(game)) {}

  void require_length(std::span<const double> mu) const;

  Kind kind_;
  std::size_t identity_arms_ = 0;
  std::shared_ptr<const GameStructure> game_;
};

// Index of the largest entry; smallest index on ties.
std::size_t argmax(std::span<const double> values);

// Depth-1 game whose first moves are the terminals: the identity map as a tree.
GameStructure identity_game(std::size_t num_arms);

}  // namespace sbai
