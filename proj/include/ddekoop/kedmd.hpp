#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddekoop/dde.hpp"
#include "ddekoop/discretize.hpp"
#include "ddekoop/kernel.hpp"
#include "ddekoop/neighbors.hpp"

namespace ddekoop {

struct Provenance {
  std::size_t trajectory = 0;
  std::size_t step = 0;
};

/// Transition pairs (z, z+) of discretized states, one pair per column.
class TransitionDataset {
 public:
  TransitionDataset(std::size_t dim, std::size_t points, double sample_interval, double delay,
                    Eigen::MatrixXd predecessors, Eigen::MatrixXd successors,
                    std::vector<Provenance> provenance = {});

  std::size_t dim() const noexcept { return dim_; }
  std::size_t points() const noexcept { return points_; }
  std::size_t state_size() const noexcept { return dim_ * points_; }
  double sample_interval() const noexcept { return sample_interval_; }
  double delay() const noexcept { return delay_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(predecessors_.cols()); }

  const Eigen::MatrixXd& predecessors() const noexcept { return predecessors_; }
  const Eigen::MatrixXd& successors() const noexcept { return successors_; }
  const std::vector<Provenance>& provenance() const noexcept { return provenance_; }

  DiscretizedState predecessor(std::size_t i) const;
  DiscretizedState successor(std::size_t i) const;

  /// Indices of the first occurrence of each distinct predecessor, in dataset order.
  const std::vector<std::size_t>& unique_predecessors() const;

 private:
  std::size_t dim_;
  std::size_t points_;
  double sample_interval_;
  double delay_;
  Eigen::MatrixXd predecessors_;
  Eigen::MatrixXd successors_;
  std::vector<Provenance> provenance_;
  mutable std::optional<std::vector<std::size_t>> unique_;
};

/// Pairs (Q(phi_k), Q(phi_{k+1})) from every consecutive segment of every trajectory.
TransitionDataset build_dataset(const std::vector<Trajectory>& trajectories,
                                const DiscretizationGrid& grid);

/// Q(phi_k) for k = 0..N_t, one state per column.
Eigen::MatrixXd discretize_trajectory(const Trajectory& trajectory, const DiscretizationGrid& grid);

enum class CenterStrategy { GreedyFarthest, Grid, Random };

CenterStrategy parse_center_strategy(const std::string& name);
std::string to_string(CenterStrategy strategy);

/// Selected centers as columns plus the dataset index each one came from.
struct CenterSet {
  Eigen::MatrixXd points;
  std::vector<std::size_t> source_index;
};

/// p pairwise-distinct predecessor states. Deterministic in (strategy, seed).
CenterSet select_centers(const TransitionDataset& dataset, std::size_t p, CenterStrategy strategy,
                         std::uint64_t seed);

/// Greedy k-center prefix: the fewest centers whose fill distance over the
/// distinct predecessors is <= target (capped at max_centers).
CenterSet select_centers_by_fill(const TransitionDataset& dataset, double target,
                                 std::size_t max_centers);

/// Which dataset points feed one local affine regression.
enum class NeighborPolicy {
  /// The d nearest predecessors, all of which must lie within rho.
  Nearest,
  /// Every predecessor within rho; at least d are required.
  Ball,
  /// d predecessors within rho chosen by farthest-point sampling seeded at
  /// the center, so the neighborhood spans the rho-ball.
  Spread,
};

NeighborPolicy parse_neighbor_policy(const std::string& name);
std::string to_string(NeighborPolicy policy);

enum class RegressionStatus { Ok, InsufficientNeighbors, RankDeficient };

struct LocalRegression {
  Eigen::VectorXd center;
  std::size_t neighbors = 0;
  double radius = 0.0;
  Eigen::VectorXd F_hat;  // estimate of the induced map at the center
  Eigen::MatrixXd B_hat;  // local Jacobian estimate
  double residual_norm = 0.0;
  std::size_t rank = 0;
  bool rank_ok = false;
  RegressionStatus status = RegressionStatus::Ok;
};

/// Index over dataset predecessors with the cell size matched to a radius.
class NeighborIndex {
 public:
  NeighborIndex(const TransitionDataset& dataset, double radius)
      : dataset_(dataset), index_(dataset.predecessors(), radius) {}

  const TransitionDataset& dataset() const noexcept { return dataset_; }
  std::vector<BucketIndex::Hit> within(const Eigen::Ref<const Eigen::VectorXd>& q, double r) const {
    return index_.within(q, r);
  }

 private:
  const TransitionDataset& dataset_;
  BucketIndex index_;
};

/// Least-squares affine fit z+ ~ F + B (z - center) over the neighborhood.
/// Status is reported in the result; the throwing overload raises
/// InsufficientNeighbors / RankDeficient instead.
LocalRegression local_regression(const NeighborIndex& index,
                                 const Eigen::Ref<const Eigen::VectorXd>& center, double rho,
                                 std::size_t d, NeighborPolicy policy = NeighborPolicy::Nearest);

LocalRegression local_regression_or_throw(const TransitionDataset& dataset,
                                          const Eigen::Ref<const Eigen::VectorXd>& center,
                                          double rho, std::size_t d,
                                          NeighborPolicy policy = NeighborPolicy::Nearest);

struct ScalePolicy {
  enum class Kind { MedianMultiple, Fixed };
  Kind kind = Kind::MedianMultiple;
  double value = 2.0;

  double resolve(const Eigen::MatrixXd& centers) const;
};

struct FitOptions {
  std::size_t p = 100;
  double rho = 0.3;
  /// 0 selects max(nM + 1, 10).
  std::size_t d = 0;
  ScalePolicy scale;
  CenterStrategy strategy = CenterStrategy::GreedyFarthest;
  NeighborPolicy neighbors = NeighborPolicy::Spread;
  std::uint64_t seed = 0;
  /// When > 0, p is chosen as the smallest greedy set reaching this fill distance.
  double fill_target = 0.0;
  double max_failed_fraction = 0.1;
};

std::size_t default_neighbor_count(std::size_t state_size);

struct FitReport {
  std::size_t dim = 0;
  std::size_t points = 0;
  std::size_t centers = 0;
  double rho = 0.0;
  std::size_t d = 0;
  double scale = 0.0;
  double fill_distance = 0.0;
  double jitter = 0.0;
  double condition_estimate = 0.0;
  std::string strategy;
  std::string neighbor_policy;
  std::uint64_t seed = 0;
  std::vector<std::size_t> failed_centers;
  std::vector<double> residual_norms;
  /// F_hat per center (columns), as used to build K_F.
  Eigen::MatrixXd mapped_centers;
};

enum class RolloutMode {
  /// Lift, advance, reconstruct at every step.
  StateSpace,
  /// Advance A^k Psi(z0) in lifted coordinates and reconstruct each iterate once.
  Lifted,
};

/// Linear surrogate Psi(z+) ~ A Psi(z) with kernel-interpolation reconstruction.
class KoopmanSurrogate {
 public:
  KoopmanSurrogate(WendlandKernel kernel, Eigen::MatrixXd centers, Eigen::MatrixXd koopman,
                   std::size_t dim, std::size_t points, FitReport report);

  const WendlandKernel& kernel() const noexcept { return kernel_; }
  const Eigen::MatrixXd& centers() const noexcept { return gram_.centers(); }
  const GramFactorization& gram() const noexcept { return gram_; }
  const Eigen::MatrixXd& koopman() const noexcept { return koopman_; }
  /// C K^{-1}, nM x p, obtained by solving against the factorization.
  const Eigen::MatrixXd& reconstruction() const noexcept { return reconstruction_; }
  const FitReport& report() const noexcept { return report_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t points() const noexcept { return points_; }
  std::size_t size() const noexcept { return gram_.size(); }

  Eigen::VectorXd lift(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  Eigen::VectorXd predict_lifted(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  Eigen::VectorXd reconstruct_state(const Eigen::Ref<const Eigen::VectorXd>& psi) const;
  Eigen::VectorXd predict_state(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  DiscretizedState predict_state(const DiscretizedState& z) const;

  /// [z_hat_0, ..., z_hat_steps] as columns, z_hat_0 = C K^{-1} Psi(z0).
  Eigen::MatrixXd rollout(const Eigen::Ref<const Eigen::VectorXd>& z0, std::size_t steps,
                          RolloutMode mode = RolloutMode::StateSpace) const;

 private:
  WendlandKernel kernel_;
  GramFactorization gram_;
  Eigen::MatrixXd koopman_;
  Eigen::MatrixXd reconstruction_;
  Eigen::MatrixXd fused_;  // reconstruction_ * koopman_
  std::size_t dim_;
  std::size_t points_;
  FitReport report_;
};

/// K_F with row l holding k(z_i, F_hat_l), i = 1..p.
Eigen::MatrixXd mapped_gram(const WendlandKernel& kernel, const Eigen::MatrixXd& centers,
                            const Eigen::MatrixXd& mapped_centers);

/// Solves A (K_X + lambda I) = K_F^T against the Gram factorization.
Eigen::MatrixXd koopman_matrix(const GramFactorization& gram, const Eigen::MatrixXd& mapped_gram);

KoopmanSurrogate fit(const TransitionDataset& dataset, const FitOptions& options);

}  // namespace ddekoop
