#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sbai/types.hpp"

namespace sbai {

inline constexpr std::size_t kDefaultMaxHistoryLength = 10'000;

// One history of the game. Nodes are stored in pre-order, so every
// descendant of node h has an id in [h + 1, subtree_end).
struct GameNode {
  Move move = 0;          // last move of the history; unused at the root
  NodeId parent = kNoNode;
  int player = 1;         // +1 maximizing, -1 minimizing; +1 on maximal histories
  std::size_t depth = 0;  // history length
  NodeId subtree_end = 0;
  std::vector<NodeId> children;  // ordered by move identifier
  std::ptrdiff_t terminal = -1;  // 0-based terminal index on maximal histories

  bool maximal() const { return children.empty(); }
  friend bool operator==(const GameNode&, const GameNode&) = default;
};

// Explicit listing of a game as in the formal definition: a set of move
// sequences, a player function and a terminal labelling. Terminal indices
// are 0-based. Used to check well-formedness of externally supplied games.
struct RawGame {
  std::vector<std::vector<Move>> histories;
  std::map<std::vector<Move>, int> player;
  std::map<std::vector<Move>, std::size_t> terminal;
  std::size_t num_terminals = 0;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_game(const RawGame& raw,
                               std::size_t max_history_length = kDefaultMaxHistoryLength);

class GameStructure {
 public:
  // Incremental construction. Nodes may be added in any order; build()
  // validates and linearizes them.
  class Builder {
   public:
    explicit Builder(std::size_t num_terminals, int root_player = 1);

    NodeId root() const { return 0; }
    NodeId add_internal(NodeId parent, Move move, int player);
    NodeId add_terminal(NodeId parent, Move move, std::size_t terminal);

    ValidationReport validate(std::size_t max_history_length = kDefaultMaxHistoryLength) const;
    // Throws std::invalid_argument carrying the validation summary.
    GameStructure build(std::size_t max_history_length = kDefaultMaxHistoryLength) const;

   private:
    struct Proto {
      Move move;
      NodeId parent;
      int player;
      std::ptrdiff_t terminal;
      std::vector<NodeId> children;
    };
    NodeId add(NodeId parent, Move move, int player, std::ptrdiff_t terminal);

    std::size_t num_terminals_;
    std::vector<Proto> nodes_;
  };

  static GameStructure from_raw(const RawGame& raw,
                                std::size_t max_history_length = kDefaultMaxHistoryLength);

  std::size_t arms() const { return arm_nodes_.size(); }
  std::size_t observables() const { return num_terminals_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t max_depth() const { return max_depth_; }

  NodeId root() const { return 0; }
  const GameNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  NodeId arm_node(ArmIndex j) const { return arm_nodes_.at(j); }
  bool is_maximal(NodeId id) const { return node(id).maximal(); }
  ObsIndex terminal(NodeId id) const;

  // Maximal histories labelled with terminal i (more than one means a transposition).
  const std::vector<NodeId>& histories_of(ObsIndex i) const { return by_terminal_.at(i); }

  // Move sequence of a history.
  std::vector<Move> history(NodeId id) const;
  // Nodes of the prefixes of length 1..depth(id), in order.
  std::vector<NodeId> path(NodeId id) const;
  NodeId find(std::span<const Move> moves) const;

  // Values of every history under mu, indexed by NodeId.
  void evaluate(std::span<const double> mu, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> mu) const;

  friend bool operator==(const GameStructure&, const GameStructure&) = default;

 private:
  GameStructure() = default;
  void index();

  std::vector<GameNode> nodes_;
  std::vector<NodeId> arm_nodes_;
  std::vector<std::vector<NodeId>> by_terminal_;
  std::size_t num_terminals_ = 0;
  std::size_t max_depth_ = 0;
};

// V(h, mu): terminal mean at maximal histories, otherwise max/min over successors.
double value(const GameStructure& game, NodeId history, std::span<const double> mu);

// Arm payoffs f_j(mu) = V((j), mu).
std::vector<double> payoff(const GameStructure& game, std::span<const double> mu);

// Child of `history` attaining its value given per-node values; smallest move on ties.
NodeId optimal_child(const GameStructure& game, NodeId history, std::span<const double> node_values);
Move optimal_move(const GameStructure& game, NodeId history, std::span<const double> mu);

// MinMax descent: follows the optimal move under `lower` at minimizing nodes
// and under `upper` at maximizing nodes until a maximal history is reached.
// Requires lower <= upper componentwise.
NodeId minmax_descent(const GameStructure& game, NodeId start, std::span<const double> lower,
                      std::span<const double> upper);

// Same descent over precomputed per-node values. Does not check ordering.
NodeId minmax_descent_values(const GameStructure& game, NodeId start,
                             std::span<const double> lower_values,
                             std::span<const double> upper_values);

// Throws std::invalid_argument unless lower <= upper componentwise and sizes match.
void require_ordered(std::span<const double> lower, std::span<const double> upper);

}  // namespace sbai
