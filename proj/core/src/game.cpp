#include "sbai/game.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace sbai {

namespace {

std::string format_history(std::span<const Move> h) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (k) os << ',';
    os << h[k];
  }
  os << ')';
  return os.str();
}

}  // namespace

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  for (const auto& v : violations) os << "\n  " << v;
  return os.str();
}

ValidationReport validate_game(const RawGame& raw, std::size_t max_history_length) {
  ValidationReport report;
  auto add = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  std::set<std::vector<Move>> histories;
  for (const auto& h : raw.histories) {
    if (!h.empty()) histories.insert(h);
  }
  if (histories.empty()) {
    add("empty move set: no history of positive length");
    return report;
  }
  if (raw.num_terminals == 0) add("non-surjective terminal_map: L must be positive");

  // A history is non-maximal iff some history extends it; by prefix-closure it
  // suffices to look at histories one move longer.
  std::set<std::vector<Move>> non_maximal;
  for (const auto& h : histories) {
    if (h.size() > max_history_length) {
      add("history " + format_history(h) + " exceeds the maximum length " +
          std::to_string(max_history_length));
    }
    for (std::size_t len = 1; len < h.size(); ++len) {
      std::vector<Move> prefix(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(len));
      non_maximal.insert(prefix);
      if (!histories.contains(prefix)) {
        add("prefix-closure: " + format_history(prefix) + " is a prefix of " + format_history(h) +
            " but not a history");
      }
    }
  }

  for (const auto& [h, t] : raw.terminal) {
    if (!histories.contains(h)) {
      add("terminal_map defined on unknown history " + format_history(h));
    } else if (non_maximal.contains(h)) {
      add("terminal_map on non-maximal history " + format_history(h));
    }
    if (t >= raw.num_terminals) {
      add("terminal index " + std::to_string(t + 1) + " of " + format_history(h) +
          " outside [1.." + std::to_string(raw.num_terminals) + "]");
    }
  }

  std::vector<bool> hit(raw.num_terminals, false);
  for (const auto& h : histories) {
    const bool maximal = !non_maximal.contains(h);
    if (maximal) {
      auto it = raw.terminal.find(h);
      if (it == raw.terminal.end()) {
        add("terminal_map undefined on maximal history " + format_history(h));
      } else if (it->second < raw.num_terminals) {
        hit[it->second] = true;
      }
    } else {
      auto it = raw.player.find(h);
      if (it == raw.player.end()) {
        add("player undefined on non-maximal history " + format_history(h));
      } else if (it->second != 1 && it->second != -1) {
        add("player of " + format_history(h) + " must be +1 or -1");
      }
    }
  }
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (!hit[i]) add("non-surjective terminal_map: terminal " + std::to_string(i + 1) + " unreached");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Builder

GameStructure::Builder::Builder(std::size_t num_terminals, int root_player)
    : num_terminals_(num_terminals) {
  nodes_.push_back(Proto{0, kNoNode, root_player, -1, {}});
}

NodeId GameStructure::Builder::add(NodeId parent, Move move, int player, std::ptrdiff_t terminal) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= nodes_.size()) {
    throw std::out_of_range("GameStructure::Builder: unknown parent node");
  }
  if (nodes_[static_cast<std::size_t>(parent)].terminal >= 0) {
    throw std::invalid_argument("GameStructure::Builder: cannot extend a terminal history");
  }
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Proto{move, parent, player, terminal, {}});
  nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

NodeId GameStructure::Builder::add_internal(NodeId parent, Move move, int player) {
  return add(parent, move, player, -1);
}

NodeId GameStructure::Builder::add_terminal(NodeId parent, Move move, std::size_t terminal) {
  return add(parent, move, 1, static_cast<std::ptrdiff_t>(terminal));
}

ValidationReport GameStructure::Builder::validate(std::size_t max_history_length) const {
  ValidationReport report;
  auto add_violation = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (nodes_.front().children.empty()) add_violation("empty move set: root has no moves");
  if (num_terminals_ == 0) add_violation("non-surjective terminal_map: L must be positive");

  std::vector<bool> hit(num_terminals_, false);
  // Depth via parents; parents always precede children in insertion order.
  std::vector<std::size_t> depth(nodes_.size(), 0);
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Proto& p = nodes_[id];
    if (id > 0) depth[id] = depth[static_cast<std::size_t>(p.parent)] + 1;
    if (depth[id] > max_history_length) {
      add_violation("history length " + std::to_string(depth[id]) + " exceeds the maximum " +
                    std::to_string(max_history_length));
      break;
    }
    std::set<Move> seen;
    for (NodeId c : p.children) {
      if (!seen.insert(nodes_[static_cast<std::size_t>(c)].move).second) {
        add_violation("duplicate move " + std::to_string(nodes_[static_cast<std::size_t>(c)].move) +
                      " below one history");
      }
    }
    if (p.terminal >= 0) {
      if (static_cast<std::size_t>(p.terminal) >= num_terminals_) {
        add_violation("terminal index " + std::to_string(p.terminal + 1) + " outside [1.." +
                      std::to_string(num_terminals_) + "]");
      } else {
        hit[static_cast<std::size_t>(p.terminal)] = true;
      }
    } else if (id > 0) {
      if (p.children.empty()) add_violation("terminal_map undefined on maximal history");
      if (p.player != 1 && p.player != -1) add_violation("player must be +1 or -1");
    }
  }
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (!hit[i]) {
      add_violation("non-surjective terminal_map: terminal " + std::to_string(i + 1) + " unreached");
    }
  }
  return report;
}

GameStructure GameStructure::Builder::build(std::size_t max_history_length) const {
  const ValidationReport report = validate(max_history_length);
  if (!report.ok()) throw std::invalid_argument("invalid game: " + report.summary());

  GameStructure g;
  g.num_terminals_ = num_terminals_;
  g.nodes_.reserve(nodes_.size());

  // Pre-order with children visited in move order; explicit stack.
  struct Frame {
    NodeId proto;
    NodeId parent;
    std::size_t depth;
  };
  std::vector<Frame> stack{{0, kNoNode, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const Proto& p = nodes_[static_cast<std::size_t>(f.proto)];
    const auto id = static_cast<NodeId>(g.nodes_.size());
    GameNode n;
    n.move = p.move;
    n.parent = f.parent;
    n.player = p.terminal >= 0 ? 1 : p.player;
    n.depth = f.depth;
    n.terminal = p.terminal;
    g.nodes_.push_back(std::move(n));
    if (f.parent != kNoNode) g.nodes_[static_cast<std::size_t>(f.parent)].children.push_back(id);

    std::vector<NodeId> kids = p.children;
    std::sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) {
      return nodes_[static_cast<std::size_t>(a)].move < nodes_[static_cast<std::size_t>(b)].move;
    });
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, id, f.depth + 1});
  }
  g.index();
  return g;
}

void GameStructure::index() {
  for (auto& n : nodes_) n.subtree_end = 0;
  for (std::size_t k = nodes_.size(); k-- > 0;) {
    GameNode& n = nodes_[k];
    n.subtree_end = n.children.empty() ? static_cast<NodeId>(k + 1)
                                       : nodes_[static_cast<std::size_t>(n.children.back())].subtree_end;
  }
  arm_nodes_ = nodes_.front().children;
  by_terminal_.assign(num_terminals_, {});
  max_depth_ = 0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    max_depth_ = std::max(max_depth_, nodes_[k].depth);
    if (nodes_[k].terminal >= 0) {
      by_terminal_[static_cast<std::size_t>(nodes_[k].terminal)].push_back(static_cast<NodeId>(k));
    }
  }
}

GameStructure GameStructure::from_raw(const RawGame& raw, std::size_t max_history_length) {
  const ValidationReport report = validate_game(raw, max_history_length);
  if (!report.ok()) throw std::invalid_argument("invalid game: " + report.summary());

  std::set<std::vector<Move>> histories;
  for (const auto& h : raw.histories) {
    if (!h.empty()) histories.insert(h);
  }
  std::vector<std::vector<Move>> ordered(histories.begin(), histories.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });

  Builder b(raw.num_terminals);
  std::map<std::vector<Move>, NodeId> ids;
  for (const auto& h : ordered) {
    std::vector<Move> prefix(h.begin(), h.end() - 1);
    const NodeId parent = prefix.empty() ? b.root() : ids.at(prefix);
    auto t = raw.terminal.find(h);
    ids[h] = t != raw.terminal.end() ? b.add_terminal(parent, h.back(), t->second)
                                     : b.add_internal(parent, h.back(), raw.player.at(h));
  }
  return b.build(max_history_length);
}

ObsIndex GameStructure::terminal(NodeId id) const {
  const GameNode& n = node(id);
  if (n.terminal < 0) throw std::invalid_argument("terminal(): history is not maximal");
  return static_cast<ObsIndex>(n.terminal);
}

std::vector<Move> GameStructure::history(NodeId id) const {
  std::vector<Move> moves;
  for (NodeId k = id; k != kNoNode && k != root(); k = node(k).parent) moves.push_back(node(k).move);
  std::reverse(moves.begin(), moves.end());
  return moves;
}

std::vector<NodeId> GameStructure::path(NodeId id) const {
  std::vector<NodeId> nodes;
  for (NodeId k = id; k != kNoNode && k != root(); k = node(k).parent) nodes.push_back(k);
  std::reverse(nodes.begin(), nodes.end());
  return nodes;
}

NodeId GameStructure::find(std::span<const Move> moves) const {
  NodeId at = root();
  for (Move m : moves) {
    const auto& kids = node(at).children;
    auto it = std::lower_bound(kids.begin(), kids.end(), m,
                               [&](NodeId c, Move mv) { return node(c).move < mv; });
    if (it == kids.end() || node(*it).move != m) return kNoNode;
    at = *it;
  }
  return at;
}

namespace {

void evaluate_range(const std::vector<GameNode>& nodes, std::size_t first, std::size_t last,
                    std::span<const double> mu, std::span<double> out) {
  for (std::size_t k = last; k-- > first;) {
    const GameNode& n = nodes[k];
    if (n.children.empty()) {
      out[k] = mu[static_cast<std::size_t>(n.terminal)];
      continue;
    }
    double best = out[static_cast<std::size_t>(n.children.front())];
    if (n.player > 0) {
      for (NodeId c : n.children) best = std::max(best, out[static_cast<std::size_t>(c)]);
    } else {
      for (NodeId c : n.children) best = std::min(best, out[static_cast<std::size_t>(c)]);
    }
    out[k] = best;
  }
}

void require_length(const GameStructure& g, std::span<const double> mu) {
  if (mu.size() != g.observables()) {
    throw std::invalid_argument("valuation has length " + std::to_string(mu.size()) +
                                ", expected L = " + std::to_string(g.observables()));
  }
}

}  // namespace

void GameStructure::evaluate(std::span<const double> mu, std::span<double> out) const {
  require_length(*this, mu);
  if (out.size() != nodes_.size()) throw std::invalid_argument("evaluate(): output size mismatch");
  evaluate_range(nodes_, 0, nodes_.size(), mu, out);
}

std::vector<double> GameStructure::evaluate(std::span<const double> mu) const {
  std::vector<double> out(nodes_.size());
  evaluate(mu, out);
  return out;
}

double value(const GameStructure& game, NodeId history, std::span<const double> mu) {
  require_length(game, mu);
  if (history < 0 || static_cast<std::size_t>(history) >= game.node_count()) {
    throw std::out_of_range("value(): unknown history");
  }
  // The subtree of `history` is the contiguous range [history, subtree_end).
  const auto first = static_cast<std::size_t>(history);
  const auto last = static_cast<std::size_t>(game.node(history).subtree_end);
  std::vector<double> scratch(game.node_count());
  for (std::size_t k = last; k-- > first;) {
    const GameNode& n = game.node(static_cast<NodeId>(k));
    if (n.maximal()) {
      scratch[k] = mu[static_cast<std::size_t>(n.terminal)];
      continue;
    }
    double best = scratch[static_cast<std::size_t>(n.children.front())];
    for (NodeId c : n.children) {
      const double v = scratch[static_cast<std::size_t>(c)];
      best = n.player > 0 ? std::max(best, v) : std::min(best, v);
    }
    scratch[k] = best;
  }
  return scratch[first];
}

std::vector<double> payoff(const GameStructure& game, std::span<const double> mu) {
  const std::vector<double> values = game.evaluate(mu);
  std::vector<double> f(game.arms());
  for (ArmIndex j = 0; j < f.size(); ++j) f[j] = values[static_cast<std::size_t>(game.arm_node(j))];
  return f;
}

NodeId optimal_child(const GameStructure& game, NodeId history, std::span<const double> node_values) {
  const GameNode& n = game.node(history);
  if (n.maximal()) throw std::invalid_argument("optimal_move(): history is maximal");
  NodeId best = n.children.front();
  for (NodeId c : n.children) {
    const double v = node_values[static_cast<std::size_t>(c)];
    const double b = node_values[static_cast<std::size_t>(best)];
    // Strict comparison keeps the smallest move on ties.
    if (n.player > 0 ? v > b : v < b) best = c;
  }
  return best;
}

Move optimal_move(const GameStructure& game, NodeId history, std::span<const double> mu) {
  const std::vector<double> values = game.evaluate(mu);
  return game.node(optimal_child(game, history, values)).move;
}

void require_ordered(std::span<const double> lower, std::span<const double> upper) {
  if (lower.size() != upper.size()) throw std::invalid_argument("bound vectors differ in length");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      throw std::invalid_argument("lower <= upper violated at index " + std::to_string(i + 1));
    }
  }
}

NodeId minmax_descent_values(const GameStructure& game, NodeId start,
                             std::span<const double> lower_values,
                             std::span<const double> upper_values) {
  NodeId h = start;
  while (!game.is_maximal(h)) {
    h = game.node(h).player < 0 ? optimal_child(game, h, lower_values)
                                : optimal_child(game, h, upper_values);
  }
  return h;
}

NodeId minmax_descent(const GameStructure& game, NodeId start, std::span<const double> lower,
                      std::span<const double> upper) {
  require_ordered(lower, upper);
  if (start < 0 || static_cast<std::size_t>(start) >= game.node_count()) {
    throw std::out_of_range("minmax_descent(): unknown history");
  }
  const std::vector<double> lv = game.evaluate(lower);
  const std::vector<double> uv = game.evaluate(upper);
  return minmax_descent_values(game, start, lv, uv);
}

}  // namespace sbai
