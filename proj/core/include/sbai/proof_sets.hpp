#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbai/game.hpp"
#include "sbai/rng.hpp"

namespace sbai {

// upper: the set certifies upper bounds on the value of the move (one
// successor kept at minimizing histories, all at maximizing ones).
// lower: the mirror construction.
enum class ProofDirection { upper, lower };
const char* to_string(ProofDirection direction);

struct ProofSet {
  ArmIndex arm = 0;
  ProofDirection direction = ProofDirection::upper;
  std::vector<ObsIndex> terminals;  // ascending, duplicate-free
  std::vector<NodeId> witness;      // histories of the generating subtree, pre-order
};

inline constexpr std::size_t kDefaultProofSetLimit = 1'000'000;

class ProofSetLimitError : public std::runtime_error {
 public:
  ProofSetLimitError(double estimate, std::size_t limit)
      : std::runtime_error("proof-set enumeration would produce about " + std::to_string(estimate) +
                           " sets, above the limit of " + std::to_string(limit)),
        estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

// Number of witness subtrees the construction visits (before deduplication).
double count_proof_sets(const GameStructure& game, ArmIndex arm, ProofDirection direction);

// All proof sets of the construction for move `arm`, deduplicated by terminal set.
std::vector<ProofSet> enumerate_proof_sets(const GameStructure& game, ArmIndex arm,
                                           ProofDirection direction,
                                           std::size_t limit = kDefaultProofSetLimit);

// Randomized check of the proof-set property. Each trial draws a valuation
// and checks either f_j(mu) <= max_B mu (resp. >= min_B mu), or, with mu
// constant on B, the same bound against an adversarial fill of the other
// terminals.
bool verify_proof_set(const GameStructure& game, const ProofSet& set, std::size_t trials,
                      SeededStream& stream);

}  // namespace sbai
