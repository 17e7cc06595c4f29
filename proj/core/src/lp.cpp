#include "sbai/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sbai::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Tableau layout: rows [0, m) are constraints, row m the objective, row m+1
// the phase-one objective. Column n is the phase-one artificial variable and
// column n+1 the right-hand side. Variables n..n+m-1 are slacks.
class Tableau {
 public:
  Tableau(const DenseMatrix& a, std::span<const double> b, std::span<const double> c,
          const Options& options)
      : m_(a.rows()), n_(a.cols()), opt_(options), d_(m_ + 2, n_ + 2), basis_(m_), nonbasis_(n_ + 1) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) d_(i, j) = a(i, j);
      d_(i, n_) = -1.0;
      d_(i, n_ + 1) = b[i];
      basis_[i] = static_cast<long>(n_ + i);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasis_[j] = static_cast<long>(j);
      d_(m_, j) = -c[j];
    }
    nonbasis_[n_] = -1;
    d_(m_ + 1, n_) = 1.0;
  }

  Solution solve() {
    Solution sol;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i) {
      if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && d_(r, n_ + 1) < -opt_.pivot_tolerance) {
      pivot(r, n_);
      if (!run(2) || d_(m_ + 1, n_ + 1) < -opt_.pivot_tolerance) {
        sol.status = Status::infeasible;
        sol.pivots = pivots_;
        return sol;
      }
      // Drive the artificial variable out of the basis.
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        std::size_t s = 0;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (better(d_(i, j), nonbasis_[j], d_(i, s), nonbasis_[s])) s = j;
        }
        pivot(i, s);
      }
    }
    const bool bounded = run(1);
    sol.status = bounded ? Status::optimal : Status::unbounded;
    sol.objective = bounded ? d_(m_, n_ + 1) : std::numeric_limits<double>::infinity();
    sol.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) {
        sol.x[static_cast<std::size_t>(basis_[i])] = d_(i, n_ + 1);
      }
    }
    sol.dual.assign(m_, 0.0);
    for (std::size_t j = 0; j <= n_; ++j) {
      if (nonbasis_[j] >= static_cast<long>(n_)) {
        sol.dual[static_cast<std::size_t>(nonbasis_[j]) - n_] = d_(m_, j);
      }
    }
    sol.pivots = pivots_;
    return sol;
  }

 private:
  static bool better(double v, long id, double w, long wid) {
    return v < w || (v == w && id < wid);
  }

  void pivot(std::size_t r, std::size_t s) {
    ++pivots_;
    const double inv = 1.0 / d_(r, s);
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || std::abs(d_(i, s)) <= opt_.pivot_tolerance * 1e-3) continue;
      const double f = d_(i, s) * inv;
      for (std::size_t j = 0; j < n_ + 2; ++j) d_(i, j) -= d_(r, j) * f;
      d_(i, s) = d_(r, s) * f;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j) {
      if (j != s) d_(r, j) *= inv;
    }
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i != r) d_(i, s) *= -inv;
    }
    d_(r, s) = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Returns false if the objective is unbounded.
  bool run(int phase) {
    const std::size_t obj = m_ + static_cast<std::size_t>(phase) - 1;
    std::size_t degenerate = 0;
    for (;;) {
      const bool bland = degenerate > opt_.degenerate_limit;
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (nonbasis_[j] == -phase) continue;
        if (bland) {
          if (d_(obj, j) < -opt_.pivot_tolerance && (s > n_ || nonbasis_[j] < nonbasis_[s])) s = j;
        } else if (s > n_ || better(d_(obj, j), nonbasis_[j], d_(obj, s), nonbasis_[s])) {
          s = j;
        }
      }
      if (s > n_ || d_(obj, s) >= -opt_.pivot_tolerance) return true;

      std::size_t r = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (d_(i, s) <= opt_.pivot_tolerance) continue;
        if (r == m_) {
          r = i;
          continue;
        }
        const double ri = d_(i, n_ + 1) / d_(i, s);
        const double rr = d_(r, n_ + 1) / d_(r, s);
        if (ri < rr || (ri == rr && basis_[i] < basis_[r])) r = i;
      }
      if (r == m_) return false;
      const double before = d_(obj, n_ + 1);
      pivot(r, s);
      degenerate = std::abs(d_(obj, n_ + 1) - before) <= opt_.pivot_tolerance ? degenerate + 1 : 0;
    }
  }

  std::size_t m_, n_;
  Options opt_;
  DenseMatrix d_;
  std::vector<long> basis_;
  std::vector<long> nonbasis_;
  std::size_t pivots_ = 0;
};

}  // namespace

Solution maximize(const DenseMatrix& a, std::span<const double> b, std::span<const double> c,
                  const Options& options) {
  if (b.size() != a.rows() || c.size() != a.cols()) {
    throw std::invalid_argument("lp::maximize: dimension mismatch");
  }
  return Tableau(a, b, c, options).solve();
}

}  // namespace sbai::lp
