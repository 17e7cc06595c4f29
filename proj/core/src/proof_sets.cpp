#include "sbai/proof_sets.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <map>

namespace sbai {

const char* to_string(ProofDirection direction) {
  return direction == ProofDirection::upper ? "upper" : "lower";
}

namespace {

// At "choice" histories only one successor is retained.
bool is_choice(const GameNode& n, ProofDirection direction) {
  return direction == ProofDirection::upper ? n.player < 0 : n.player > 0;
}

struct Option {
  std::vector<ObsIndex> terminals;
  std::vector<NodeId> witness;
};

std::vector<ObsIndex> merge_sets(const std::vector<ObsIndex>& a, const std::vector<ObsIndex>& b) {
  std::vector<ObsIndex> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void dedup(std::vector<Option>& options) {
  std::map<std::vector<ObsIndex>, std::size_t> seen;
  std::vector<Option> kept;
  kept.reserve(options.size());
  for (auto& o : options) {
    if (seen.emplace(o.terminals, kept.size()).second) kept.push_back(std::move(o));
  }
  options = std::move(kept);
}

}  // namespace

double count_proof_sets(const GameStructure& game, ArmIndex arm, ProofDirection direction) {
  const NodeId start = game.arm_node(arm);
  const auto first = static_cast<std::size_t>(start);
  const auto last = static_cast<std::size_t>(game.node(start).subtree_end);
  std::vector<double> count(last - first, 0.0);
  for (std::size_t k = last; k-- > first;) {
    const GameNode& n = game.node(static_cast<NodeId>(k));
    if (n.maximal()) {
      count[k - first] = 1.0;
      continue;
    }
    double c = is_choice(n, direction) ? 0.0 : 1.0;
    for (NodeId ch : n.children) {
      const double v = count[static_cast<std::size_t>(ch) - first];
      c = is_choice(n, direction) ? c + v : c * v;
    }
    count[k - first] = c;
  }
  return count.front();
}

std::vector<ProofSet> enumerate_proof_sets(const GameStructure& game, ArmIndex arm,
                                           ProofDirection direction, std::size_t limit) {
  const double estimate = count_proof_sets(game, arm, direction);
  if (estimate > static_cast<double>(limit)) throw ProofSetLimitError(estimate, limit);

  const NodeId start = game.arm_node(arm);
  const auto first = static_cast<std::size_t>(start);
  const auto last = static_cast<std::size_t>(game.node(start).subtree_end);
  std::vector<std::vector<Option>> options(last - first);

  for (std::size_t k = last; k-- > first;) {
    const auto id = static_cast<NodeId>(k);
    const GameNode& n = game.node(id);
    std::vector<Option>& mine = options[k - first];
    if (n.maximal()) {
      mine.push_back({{game.terminal(id)}, {id}});
      continue;
    }
    if (is_choice(n, direction)) {
      for (NodeId ch : n.children) {
        for (auto& o : options[static_cast<std::size_t>(ch) - first]) mine.push_back(std::move(o));
      }
    } else {
      mine.push_back({{}, {}});
      for (NodeId ch : n.children) {
        const auto& sub = options[static_cast<std::size_t>(ch) - first];
        std::vector<Option> next;
        next.reserve(mine.size() * sub.size());
        for (const auto& a : mine) {
          for (const auto& b : sub) {
            Option o{merge_sets(a.terminals, b.terminals), a.witness};
            o.witness.insert(o.witness.end(), b.witness.begin(), b.witness.end());
            next.push_back(std::move(o));
          }
        }
        mine = std::move(next);
      }
    }
    for (NodeId ch : n.children) options[static_cast<std::size_t>(ch) - first].clear();
    for (auto& o : mine) o.witness.insert(o.witness.begin(), id);
    dedup(mine);
  }

  std::vector<ProofSet> sets;
  for (auto& o : options.front()) {
    std::sort(o.witness.begin(), o.witness.end());
    sets.push_back({arm, direction, std::move(o.terminals), std::move(o.witness)});
  }
  return sets;
}

bool verify_proof_set(const GameStructure& game, const ProofSet& set, std::size_t trials,
                      SeededStream& stream) {
  const std::size_t num_terminals = game.observables();
  const bool upper = set.direction == ProofDirection::upper;
  std::vector<bool> in_set(num_terminals, false);
  for (ObsIndex i : set.terminals) in_set.at(i) = true;

  Valuation mu(num_terminals);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const bool adversarial = trial % 2 == 1;
    double bound = 0.0;
    if (!adversarial) {
      for (auto& m : mu) m = 2.0 * stream.uniform() - 1.0;
      bound = upper ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      for (ObsIndex i : set.terminals) bound = upper ? std::max(bound, mu[i]) : std::min(bound, mu[i]);
    } else {
      // mu = theta on the set; the rest pushed towards the side that could break the bound.
      const double theta = 2.0 * stream.uniform() - 1.0;
      for (ObsIndex i = 0; i < num_terminals; ++i) {
        const double spread = 1.0 + 4.0 * stream.uniform();
        mu[i] = in_set[i] ? theta : (upper ? theta + spread : theta - spread);
      }
      bound = theta;
    }
    const double f = value(game, game.arm_node(set.arm), mu);
    if (upper ? f > bound : f < bound) return false;
  }
  return true;
}

}  // namespace sbai
