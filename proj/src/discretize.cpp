#include "ddekoop/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ddekoop/error.hpp"

namespace ddekoop {

DiscretizationGrid::DiscretizationGrid(std::size_t points, double delay)
    : points_(points), delay_(delay), spacing_(0.0) {
  require(points >= 2, "discretization needs M >= 2");
  require(delay > 0.0, "delay must be positive");
  spacing_ = delay_ / static_cast<double>(points_ - 1);
}

double DiscretizationGrid::theta(std::size_t j) const {
  if (j + 1 == points_) return 0.0;
  // Same expression as the knots of a linear KnotTable, so sampling an R-image is exact.
  return -delay_ + static_cast<double>(j) * spacing_;
}

DiscretizedState::DiscretizedState(std::size_t n, std::size_t m, Eigen::VectorXd values)
    : dim(n), points(m), data(std::move(values)) {
  if (static_cast<std::size_t>(data.size()) != n * m) {
    throw Error(ErrorKind::DimensionMismatch, "discretized state length must equal n*M");
  }
}

namespace {

void check_delay(const HistorySegment& history, const DiscretizationGrid& grid) {
  require(!history.empty(), "history segment is empty");
  require(std::abs(history.delay() - grid.delay()) <= 1e-12 * grid.delay(),
          "history delay does not match the discretization grid");
}

}  // namespace

void sample_into(const HistorySegment& history, const DiscretizationGrid& grid, double* out) {
  check_delay(history, grid);
  const std::size_t n = history.dim();
  for (std::size_t j = 0; j < grid.points(); ++j) {
    history.eval(grid.theta(j), {out + j * n, n});
  }
}

DiscretizedState sample(const HistorySegment& history, const DiscretizationGrid& grid) {
  const std::size_t n = history.dim();
  DiscretizedState z(n, grid.points(), Eigen::VectorXd(static_cast<Eigen::Index>(n * grid.points())));
  sample_into(history, grid, z.data.data());
  return z;
}

HistorySegment reconstruct(const DiscretizedState& z, const DiscretizationGrid& grid) {
  require(z.points == grid.points(), "state M does not match the grid");
  std::vector<double> values(z.data.data(), z.data.data() + z.data.size());
  return HistorySegment::linear(grid.delay(), z.dim, std::move(values));
}

HistorySegment project(const HistorySegment& history, const DiscretizationGrid& grid) {
  return reconstruct(sample(history, grid), grid);
}

double block_sup_distance(const DiscretizedState& a, const DiscretizedState& b) {
  if (a.dim != b.dim || a.points != b.points) {
    throw Error(ErrorKind::DimensionMismatch, "block distance needs matching n and M");
  }
  double best = 0.0;
  for (std::size_t j = 0; j < a.points; ++j) {
    best = std::max(best, (a.block(j) - b.block(j)).norm());
  }
  return best;
}

double block_sup_norm(const DiscretizedState& z) {
  double best = 0.0;
  for (std::size_t j = 0; j < z.points; ++j) best = std::max(best, z.block(j).norm());
  return best;
}

bool domain_check(const DiscretizedState& z, double gamma, double slope_bound,
                  const DiscretizationGrid& grid) {
  require(gamma > 0.0 && slope_bound > 0.0, "domain bounds must be positive");
  require(z.points == grid.points(), "state M does not match the grid");
  if (block_sup_norm(z) > gamma) return false;
  const double max_step = slope_bound * grid.spacing();
  for (std::size_t j = 0; j + 1 < z.points; ++j) {
    if ((z.block(j + 1) - z.block(j)).norm() > max_step) return false;
  }
  return true;
}

}  // namespace ddekoop
