#include "sbai/envs.hpp"

#include <cmath>
#include <stdexcept>

#include "json_io.hpp"
#include "sbai/game_io.hpp"

namespace sbai {

const char* to_string(NoiseSpec::Kind kind) {
  switch (kind) {
    case NoiseSpec::Kind::gaussian: return "gaussian";
    case NoiseSpec::Kind::uniform: return "uniform";
    case NoiseSpec::Kind::deterministic: return "deterministic";
  }
  return "unknown";
}

Instance::Instance(RewardMap reward_map, Valuation means, NoiseSpec noise)
    : reward_map_(std::move(reward_map)), means_(std::move(means)), noise_(noise) {
  if (means_.size() != reward_map_.observables()) {
    throw std::invalid_argument("instance has " + std::to_string(means_.size()) +
                                " means but the reward map has L = " +
                                std::to_string(reward_map_.observables()));
  }
  for (double m : means_) {
    if (!std::isfinite(m)) throw std::invalid_argument("instance means must be finite");
  }
  switch (noise_.kind) {
    case NoiseSpec::Kind::gaussian:
      if (!(noise_.param > 0.0 && noise_.param <= 1.0)) {
        throw std::invalid_argument("gaussian noise needs 0 < sigma <= 1");
      }
      break;
    case NoiseSpec::Kind::uniform:
      if (!(noise_.param > 0.0 && noise_.param <= 1.0)) {
        throw std::invalid_argument("uniform noise needs 0 < half-width <= 1 (range/2 <= 1)");
      }
      break;
    case NoiseSpec::Kind::deterministic:
      break;
  }
}

double Instance::sample(ObsIndex i, SeededStream& stream) const {
  if (i >= means_.size()) throw std::out_of_range("sample(): observable index out of range");
  switch (noise_.kind) {
    case NoiseSpec::Kind::gaussian: return means_[i] + noise_.param * stream.gaussian();
    case NoiseSpec::Kind::uniform: return means_[i] + noise_.param * (2.0 * stream.uniform() - 1.0);
    case NoiseSpec::Kind::deterministic: return means_[i];
  }
  return means_[i];
}

void Instance::set_departures(std::vector<Valuation> departures) {
  for (const auto& d : departures) {
    if (d.size() != observables()) throw std::invalid_argument("departure vector has the wrong length");
  }
  departures_ = std::move(departures);
}

ArmIndex best_arm(const RewardMap& reward_map, std::span<const double> mu) {
  const std::vector<double> f = reward_map.payoff(mu);
  const ArmIndex best = argmax(f);
  for (ArmIndex j = 0; j < f.size(); ++j) {
    if (j != best && f[j] == f[best]) {
      throw UniquenessError("arms " + std::to_string(best + 1) + " and " + std::to_string(j + 1) +
                            " share the top payoff");
    }
  }
  return best;
}

ArmIndex best_arm(const Instance& instance) { return best_arm(instance.reward_map(), instance.means()); }

namespace {

Valuation real_vector(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of reals");
  Valuation out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ParseError(where + ": expected an array of reals");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const nlohmann::json doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("/: expected a JSON object");

  std::string kind = doc.contains("nodes") ? "minimax" : "identity";
  if (doc.contains("reward_map")) {
    if (!doc["reward_map"].is_string()) throw ParseError("/reward_map: expected a string");
    kind = doc["reward_map"].get<std::string>();
  }
  std::optional<RewardMap> reward_map;
  if (kind == "minimax") {
    reward_map = RewardMap::minimax(detail::game_from_json(doc));
  } else if (kind == "identity") {
    if (!doc.contains("L") || !doc["L"].is_number_integer() || doc["L"].get<long long>() <= 0) {
      throw ParseError("/L: expected a positive integer");
    }
    reward_map = RewardMap::identity(doc["L"].get<std::size_t>());
  } else {
    throw ParseError("/reward_map: unknown kind '" + kind + "' (expected minimax or identity)");
  }

  if (!doc.contains("means")) throw ParseError("/means: missing");
  Valuation means = real_vector(doc["means"], "/means");

  NoiseSpec noise = NoiseSpec::gaussian();
  if (doc.contains("noise")) {
    const auto& n = doc["noise"];
    if (!n.is_object() || !n.contains("kind") || !n["kind"].is_string()) {
      throw ParseError("/noise: expected {\"kind\": ..., \"param\": ...}");
    }
    const std::string k = n["kind"].get<std::string>();
    const double param = n.contains("param") && n["param"].is_number() ? n["param"].get<double>() : 1.0;
    if (k == "gaussian") {
      noise = NoiseSpec::gaussian(param);
    } else if (k == "uniform") {
      noise = NoiseSpec::uniform(param);
    } else if (k == "deterministic") {
      noise = NoiseSpec::deterministic();
    } else {
      throw ParseError("/noise/kind: unknown noise family '" + k + "'");
    }
  }

  try {
    Instance instance(std::move(*reward_map), std::move(means), noise);
    if (doc.contains("departures")) {
      std::vector<Valuation> departures;
      const auto& arr = doc["departures"];
      if (!arr.is_array()) throw ParseError("/departures: expected an array of vectors");
      for (std::size_t k = 0; k < arr.size(); ++k) {
        departures.push_back(real_vector(arr[k], "/departures/" + std::to_string(k)));
      }
      instance.set_departures(std::move(departures));
    }
    return instance;
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("/: ") + e.what());
  }
}

Instance load_instance(const std::filesystem::path& path) {
  try {
    return parse_instance(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_instance(const Instance& instance) {
  nlohmann::json doc;
  if (instance.reward_map().kind() == RewardMap::Kind::minimax) {
    doc = detail::game_to_json(*instance.reward_map().game());
    doc["reward_map"] = "minimax";
  } else {
    doc["reward_map"] = "identity";
    doc["L"] = instance.observables();
  }
  doc["means"] = instance.means();
  doc["noise"] = {{"kind", to_string(instance.noise().kind)}, {"param", instance.noise().param}};
  if (instance.departures()) doc["departures"] = *instance.departures();
  return doc.dump(2) + "\n";
}

}  // namespace sbai
