#include "sbai/reward_map.hpp"

#include <stdexcept>
#include <string>

namespace sbai {

RewardMap RewardMap::identity(std::size_t num_arms) {
  if (num_arms == 0) throw std::invalid_argument("identity reward map needs at least one arm");
  return RewardMap(Kind::identity, num_arms, nullptr);
}

RewardMap RewardMap::minimax(std::shared_ptr<const GameStructure> game) {
  if (!game) throw std::invalid_argument("minimax reward map needs a game");
  return RewardMap(Kind::minimax, 0, std::move(game));
}

RewardMap RewardMap::minimax(GameStructure game) {
  return minimax(std::make_shared<const GameStructure>(std::move(game)));
}

std::size_t RewardMap::arms() const { return kind_ == Kind::identity ? identity_arms_ : game_->arms(); }

std::size_t RewardMap::observables() const {
  return kind_ == Kind::identity ? identity_arms_ : game_->observables();
}

void RewardMap::require_length(std::span<const double> mu) const {
  if (mu.size() != observables()) {
    throw std::invalid_argument("valuation has length " + std::to_string(mu.size()) +
                                ", expected L = " + std::to_string(observables()));
  }
}

std::vector<double> RewardMap::payoff(std::span<const double> mu) const {
  require_length(mu);
  if (kind_ == Kind::identity) return {mu.begin(), mu.end()};
  return sbai::payoff(*game_, mu);
}

std::vector<ObsIndex> RewardMap::cover_set(ArmIndex j, std::span<const double> lower,
                                           std::span<const double> upper) const {
  require_length(lower);
  require_ordered(lower, upper);
  if (j >= arms()) throw std::out_of_range("cover_set(): arm index out of range");
  const double fl = payoff(lower)[j];
  const double fu = payoff(upper)[j];
  std::vector<ObsIndex> members;
  for (ObsIndex i = 0; i < lower.size(); ++i) {
    if (lower[i] <= fl && fu <= upper[i]) members.push_back(i);
  }
  return members;
}

ObsIndex RewardMap::cover_pick(ArmIndex j, std::span<const double> lower,
                               std::span<const double> upper) const {
  require_length(lower);
  require_ordered(lower, upper);
  if (j >= arms()) throw std::out_of_range("cover_pick(): arm index out of range");
  if (kind_ == Kind::identity) return j;
  return game_->terminal(minmax_descent(*game_, game_->arm_node(j), lower, upper));
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

GameStructure identity_game(std::size_t num_arms) {
  GameStructure::Builder b(num_arms, 1);
  for (std::size_t i = 0; i < num_arms; ++i) b.add_terminal(b.root(), static_cast<Move>(i + 1), i);
  return b.build();
}

}  // namespace sbai
