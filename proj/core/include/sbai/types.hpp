#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbai {

// All indices are 0-based inside the library. File formats and CSV output
// use 1-based arm and terminal numbers.
using ArmIndex = std::size_t;
using ObsIndex = std::size_t;
using NodeId = std::int32_t;
using Move = std::int64_t;

inline constexpr NodeId kNoNode = -1;

// A length-L vector of terminal means; also used for lower/upper bound vectors.
using Valuation = std::vector<double>;

// Raised when the best arm is not unique (zero or negative gap).
class UniquenessError : public std::domain_error {
 public:
  explicit UniquenessError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace sbai
