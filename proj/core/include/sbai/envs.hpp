#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbai/reward_map.hpp"
#include "sbai/rng.hpp"
#include "sbai/types.hpp"

namespace sbai {

// Observation noise around the mean. All supported families are 1-subgaussian:
// Gaussian with sigma <= 1, uniform on [mu - a, mu + a] with a <= 1, or none.
struct NoiseSpec {
  enum class Kind { gaussian, uniform, deterministic };
  Kind kind = Kind::gaussian;
  double param = 1.0;  // sigma for gaussian, half-width for uniform

  static NoiseSpec gaussian(double sigma = 1.0) { return {Kind::gaussian, sigma}; }
  static NoiseSpec uniform(double half_width) { return {Kind::uniform, half_width}; }
  static NoiseSpec deterministic() { return {Kind::deterministic, 0.0}; }
};

const char* to_string(NoiseSpec::Kind kind);

// A problem instance: reward map, true means and noise family. Immutable
// and shareable across threads; randomness comes from the caller's stream.
class Instance {
 public:
  Instance(RewardMap reward_map, Valuation means, NoiseSpec noise = NoiseSpec::gaussian());

  const RewardMap& reward_map() const { return reward_map_; }
  const Valuation& means() const { return means_; }
  const NoiseSpec& noise() const { return noise_; }
  std::size_t observables() const { return means_.size(); }
  std::size_t arms() const { return reward_map_.arms(); }

  // One draw from P_i.
  double sample(ObsIndex i, SeededStream& stream) const;

  // Explicit family of departure vectors for the lower bound, used instead of
  // the proof-set construction when present (possibly empty).
  const std::optional<std::vector<Valuation>>& departures() const { return departures_; }
  void set_departures(std::vector<Valuation> departures);

 private:
  RewardMap reward_map_;
  Valuation means_;
  NoiseSpec noise_;
  std::optional<std::vector<Valuation>> departures_;
};

// Ground-truth best arm; throws UniquenessError if the top payoff is tied.
ArmIndex best_arm(const RewardMap& reward_map, std::span<const double> mu);
ArmIndex best_arm(const Instance& instance);

// Instance file: a game file (or "reward_map": "identity" with "L") plus
//   "means": [..L reals..], "noise": {"kind": "gaussian"|"uniform"|"deterministic", "param": x}
// and optionally "departures": [[..L reals..], ...].
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);
std::string serialize_instance(const Instance& instance);

}  // namespace sbai
