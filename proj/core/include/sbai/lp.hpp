#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sbai::lp {

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kObjectiveTolerance = 1e-7;

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Status { optimal, infeasible, unbounded };
const char* to_string(Status status);

struct Solution {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;     // primal solution
  std::vector<double> dual;  // one multiplier per constraint row
  std::size_t pivots = 0;
};

struct Options {
  double pivot_tolerance = kFeasibilityTolerance;
  // Consecutive degenerate pivots tolerated before switching from the
  // steepest-coefficient rule to Bland's rule.
  std::size_t degenerate_limit = 64;
};

// maximize c^T x  subject to  A x <= b, x >= 0.
// Two-phase dense tableau simplex; b may have negative entries.
Solution maximize(const DenseMatrix& a, std::span<const double> b, std::span<const double> c,
                  const Options& options = {});

}  // namespace sbai::lp
