#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "ddekoop/history.hpp"

namespace ddekoop {

/// Uniform grid theta_j = -delay + (j-1) * delta(M), j = 1..M, with theta_M = 0.
class DiscretizationGrid {
 public:
  DiscretizationGrid(std::size_t points, double delay);

  std::size_t points() const noexcept { return points_; }
  double delay() const noexcept { return delay_; }
  double spacing() const noexcept { return spacing_; }
  /// Zero-based: theta(0) = -delay, theta(points-1) = 0.
  double theta(std::size_t j) const;

 private:
  std::size_t points_;
  double delay_;
  double spacing_;
};

/// Stacked samples (zeta_1, ..., zeta_M), oldest first; zeta_M is the current value.
struct DiscretizedState {
  std::size_t dim = 0;     // n
  std::size_t points = 0;  // M
  Eigen::VectorXd data;

  DiscretizedState() = default;
  DiscretizedState(std::size_t n, std::size_t m, Eigen::VectorXd values);

  std::size_t size() const noexcept { return dim * points; }
  auto block(std::size_t j) const { return data.segment(static_cast<Eigen::Index>(j * dim), static_cast<Eigen::Index>(dim)); }
  auto block(std::size_t j) { return data.segment(static_cast<Eigen::Index>(j * dim), static_cast<Eigen::Index>(dim)); }
  auto current() const { return block(points - 1); }
};

DiscretizedState sample(const HistorySegment& history, const DiscretizationGrid& grid);

/// Writes the samples into `out` (length n*M) without allocating.
void sample_into(const HistorySegment& history, const DiscretizationGrid& grid, double* out);

/// Piecewise-linear interpolant through the blocks.
HistorySegment reconstruct(const DiscretizedState& z, const DiscretizationGrid& grid);

/// reconstruct(sample(history)).
HistorySegment project(const HistorySegment& history, const DiscretizationGrid& grid);

/// max_j ||zeta1_j - zeta2_j||_2
double block_sup_distance(const DiscretizedState& a, const DiscretizedState& b);
double block_sup_norm(const DiscretizedState& z);

/// Membership in {||z||_b,inf <= gamma, ||zeta_{j+1} - zeta_j|| <= slope_bound * delta(M)}.
bool domain_check(const DiscretizedState& z, double gamma, double slope_bound,
                  const DiscretizationGrid& grid);

}  // namespace ddekoop
