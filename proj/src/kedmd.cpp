#include "ddekoop/kedmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "ddekoop/error.hpp"

namespace ddekoop {

// ---------------------------------------------------------------------------
// Dataset

TransitionDataset::TransitionDataset(std::size_t dim, std::size_t points, double sample_interval,
                                     double delay, Eigen::MatrixXd predecessors,
                                     Eigen::MatrixXd successors, std::vector<Provenance> provenance)
    : dim_(dim),
      points_(points),
      sample_interval_(sample_interval),
      delay_(delay),
      predecessors_(std::move(predecessors)),
      successors_(std::move(successors)),
      provenance_(std::move(provenance)) {
  if (static_cast<std::size_t>(predecessors_.rows()) != dim_ * points_ ||
      predecessors_.rows() != successors_.rows() || predecessors_.cols() != successors_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "transition pairs must be n*M x N matrices of equal shape");
  }
  if (provenance_.empty()) {
    provenance_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) provenance_[i] = {0, i};
  }
  require(provenance_.size() == size(), "one provenance record per pair is required");
}

DiscretizedState TransitionDataset::predecessor(std::size_t i) const {
  return {dim_, points_, predecessors_.col(static_cast<Eigen::Index>(i))};
}

DiscretizedState TransitionDataset::successor(std::size_t i) const {
  return {dim_, points_, successors_.col(static_cast<Eigen::Index>(i))};
}

const std::vector<std::size_t>& TransitionDataset::unique_predecessors() const {
  if (!unique_) {
    // Lexicographic sort over columns, keep the lowest index of each run.
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& z = predecessors_;
    auto less = [&](std::size_t a, std::size_t b) {
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        const double x = z(r, static_cast<Eigen::Index>(a));
        const double y = z(r, static_cast<Eigen::Index>(b));
        if (x != y) return x < y;
      }
      return a < b;
    };
    std::sort(order.begin(), order.end(), less);
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k == 0 || z.col(static_cast<Eigen::Index>(order[k])) != z.col(static_cast<Eigen::Index>(order[k - 1]))) {
        keep.push_back(order[k]);
      }
    }
    std::sort(keep.begin(), keep.end());
    unique_ = std::move(keep);
  }
  return *unique_;
}

Eigen::MatrixXd discretize_trajectory(const Trajectory& trajectory, const DiscretizationGrid& grid) {
  const std::size_t nm = trajectory.dim() * grid.points();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(nm), static_cast<Eigen::Index>(trajectory.segment_count()));
  for (std::size_t k = 0; k < trajectory.segment_count(); ++k) {
    sample_into(trajectory.segment(k), grid, out.col(static_cast<Eigen::Index>(k)).data());
  }
  return out;
}

TransitionDataset build_dataset(const std::vector<Trajectory>& trajectories,
                                const DiscretizationGrid& grid) {
  require(!trajectories.empty(), "dataset needs at least one trajectory");
  const Trajectory& first = trajectories.front();
  std::size_t total = 0;
  for (const auto& tr : trajectories) {
    if (tr.dim() != first.dim() || tr.system_name() != first.system_name() ||
        std::abs(tr.sample_interval() - first.sample_interval()) > 1e-12 * first.sample_interval() ||
        std::abs(tr.delay() - first.delay()) > 1e-12 * first.delay()) {
      throw Error(ErrorKind::InconsistentTrajectories,
                  "trajectories differ in system, dimension, sample interval or delay");
    }
    require(tr.segment_count() >= 2, "trajectory has no transitions");
    total += tr.segment_count() - 1;
  }
  if (std::abs(grid.delay() - first.delay()) > 1e-12 * first.delay()) {
    throw Error(ErrorKind::InconsistentTrajectories, "grid delay differs from the trajectories");
  }

  const std::size_t nm = first.dim() * grid.points();
  Eigen::MatrixXd pred(static_cast<Eigen::Index>(nm), static_cast<Eigen::Index>(total));
  Eigen::MatrixXd succ(static_cast<Eigen::Index>(nm), static_cast<Eigen::Index>(total));
  std::vector<Provenance> prov(total);

  std::vector<std::size_t> offset(trajectories.size(), 0);
  for (std::size_t t = 1; t < trajectories.size(); ++t) {
    offset[t] = offset[t - 1] + trajectories[t - 1].segment_count() - 1;
  }
#pragma omp parallel for schedule(dynamic)
  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    const Eigen::MatrixXd states = discretize_trajectory(trajectories[t], grid);
    const std::size_t pairs = trajectories[t].segment_count() - 1;
    for (std::size_t k = 0; k < pairs; ++k) {
      const auto col = static_cast<Eigen::Index>(offset[t] + k);
      pred.col(col) = states.col(static_cast<Eigen::Index>(k));
      succ.col(col) = states.col(static_cast<Eigen::Index>(k + 1));
      prov[offset[t] + k] = {t, k};
    }
  }
  return TransitionDataset(first.dim(), grid.points(), first.sample_interval(), first.delay(),
                           std::move(pred), std::move(succ), std::move(prov));
}

// ---------------------------------------------------------------------------
// Centers

CenterStrategy parse_center_strategy(const std::string& name) {
  if (name == "greedy_farthest" || name == "greedy") return CenterStrategy::GreedyFarthest;
  if (name == "grid") return CenterStrategy::Grid;
  if (name == "random") return CenterStrategy::Random;
  throw Error(ErrorKind::Config, "unknown center strategy '" + name + "'");
}

std::string to_string(CenterStrategy strategy) {
  switch (strategy) {
    case CenterStrategy::GreedyFarthest: return "greedy_farthest";
    case CenterStrategy::Grid: return "grid";
    case CenterStrategy::Random: return "random";
  }
  return "?";
}

namespace {

CenterSet gather(const TransitionDataset& dataset, const std::vector<std::size_t>& picks) {
  CenterSet out;
  out.points.resize(static_cast<Eigen::Index>(dataset.state_size()), static_cast<Eigen::Index>(picks.size()));
  for (std::size_t c = 0; c < picks.size(); ++c) {
    out.points.col(static_cast<Eigen::Index>(c)) = dataset.predecessors().col(static_cast<Eigen::Index>(picks[c]));
  }
  out.source_index = picks;
  return out;
}

/// Greedy k-center over `candidates` (dataset indices). Stops after `p`
/// picks or once the covering radius drops to `target`.
std::vector<std::size_t> greedy_farthest(const TransitionDataset& dataset,
                                         const std::vector<std::size_t>& candidates,
                                         std::vector<std::size_t> seeds, std::size_t p,
                                         double target) {
  const auto& z = dataset.predecessors();
  const std::size_t m = candidates.size();
  std::vector<double> dist(m, std::numeric_limits<double>::infinity());

  auto absorb = [&](std::size_t pick) {
    const auto col = z.col(static_cast<Eigen::Index>(pick));
#pragma omp parallel for
    for (std::size_t i = 0; i < m; ++i) {
      dist[i] = std::min(dist[i], (z.col(static_cast<Eigen::Index>(candidates[i])) - col).squaredNorm());
    }
  };

  if (seeds.empty()) {
    // Start from the candidate nearest the centroid.
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(z.rows());
    for (std::size_t i : candidates) centroid += z.col(static_cast<Eigen::Index>(i));
    centroid /= static_cast<double>(m);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double d = (z.col(static_cast<Eigen::Index>(candidates[i])) - centroid).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    seeds.push_back(candidates[best]);
  }
  std::vector<std::size_t> picks;
  for (std::size_t s : seeds) {
    if (picks.size() >= p) break;
    picks.push_back(s);
    absorb(s);
  }
  const double target2 = target * target;
  while (picks.size() < p) {
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (dist[i] > far_d) {
        far_d = dist[i];
        far = i;
      }
    }
    if (far_d <= 0.0 || far_d <= target2) break;
    picks.push_back(candidates[far]);
    absorb(candidates[far]);
  }
  return picks;
}

}  // namespace

CenterSet select_centers(const TransitionDataset& dataset, std::size_t p, CenterStrategy strategy,
                         std::uint64_t seed) {
  require(p >= 1, "need at least one center");
  const auto& unique = dataset.unique_predecessors();
  if (unique.size() < p) {
    throw Error(ErrorKind::InsufficientData, "dataset has " + std::to_string(unique.size()) +
                                                 " distinct states, fewer than p = " + std::to_string(p));
  }

  switch (strategy) {
    case CenterStrategy::GreedyFarthest:
      return gather(dataset, greedy_farthest(dataset, unique, {}, p, 0.0));

    case CenterStrategy::Random: {
      std::vector<std::size_t> pool = unique;
      std::mt19937_64 rng(seed);
      for (std::size_t i = 0; i < p; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
      }
      pool.resize(p);
      return gather(dataset, pool);
    }

    case CenterStrategy::Grid: {
      // Tensor grid over the bounding box, snapped to the nearest distinct state.
      const auto& z = dataset.predecessors();
      const Eigen::Index dim = z.rows();
      Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim, std::numeric_limits<double>::infinity());
      Eigen::VectorXd hi = -lo;
      for (std::size_t i : unique) {
        lo = lo.cwiseMin(z.col(static_cast<Eigen::Index>(i)));
        hi = hi.cwiseMax(z.col(static_cast<Eigen::Index>(i)));
      }
      auto per_axis = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(p), 1.0 / static_cast<double>(dim)) - 1e-9));
      per_axis = std::max<std::size_t>(per_axis, 1);
      std::size_t nodes = 1;
      for (Eigen::Index c = 0; c < dim; ++c) nodes *= per_axis;

      std::vector<std::size_t> snapped;
      std::vector<char> taken(dataset.size(), 0);
      Eigen::VectorXd node(dim);
      for (std::size_t g = 0; g < nodes; ++g) {
        std::size_t rem = g;
        for (Eigen::Index c = 0; c < dim; ++c) {
          const std::size_t idx = rem % per_axis;
          rem /= per_axis;
          node[c] = per_axis == 1 ? 0.5 * (lo[c] + hi[c])
                                  : lo[c] + (hi[c] - lo[c]) * static_cast<double>(idx) / static_cast<double>(per_axis - 1);
        }
        std::size_t best = unique.front();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i : unique) {
          const double d = (z.col(static_cast<Eigen::Index>(i)) - node).squaredNorm();
          if (d < best_d) {
            best_d = d;
            best = i;
          }
        }
        if (!taken[best]) {
          taken[best] = 1;
          snapped.push_back(best);
        }
      }
      if (snapped.size() > p) {
        // Thin the snapped nodes by greedy coverage among themselves.
        return gather(dataset, greedy_farthest(dataset, snapped, {}, p, 0.0));
      }
      // Top up with greedy picks over the full cloud.
      return gather(dataset, greedy_farthest(dataset, unique, snapped, p, 0.0));
    }
  }
  throw Error(ErrorKind::PreconditionViolation, "unknown center strategy");
}

CenterSet select_centers_by_fill(const TransitionDataset& dataset, double target,
                                 std::size_t max_centers) {
  require(target > 0.0, "fill-distance target must be positive");
  const auto& unique = dataset.unique_predecessors();
  return gather(dataset, greedy_farthest(dataset, unique, {}, std::min(max_centers, unique.size()), target));
}

// ---------------------------------------------------------------------------
// Local regression

NeighborPolicy parse_neighbor_policy(const std::string& name) {
  if (name == "nearest") return NeighborPolicy::Nearest;
  if (name == "ball") return NeighborPolicy::Ball;
  if (name == "spread") return NeighborPolicy::Spread;
  throw Error(ErrorKind::Config, "unknown neighbor policy '" + name + "'");
}

std::string to_string(NeighborPolicy policy) {
  switch (policy) {
    case NeighborPolicy::Nearest: return "nearest";
    case NeighborPolicy::Ball: return "ball";
    case NeighborPolicy::Spread: return "spread";
  }
  return "?";
}

namespace {

/// Farthest-point subset of `hits` (sorted by distance), seeded by the
/// center: hits[0] is the nearest point, each further pick maximizes the
/// distance to the center and all earlier picks.
std::vector<BucketIndex::Hit> spread_subset(const Eigen::MatrixXd& points,
                                            const Eigen::Ref<const Eigen::VectorXd>& center,
                                            const std::vector<BucketIndex::Hit>& hits,
                                            std::size_t d) {
  const std::size_t m = hits.size();
  std::vector<double> gap(m);
  for (std::size_t i = 0; i < m; ++i) gap[i] = hits[i].distance * hits[i].distance;
  std::vector<BucketIndex::Hit> out;
  out.reserve(d);
  std::size_t pick = 0;
  while (out.size() < d) {
    out.push_back(hits[pick]);
    const auto col = points.col(static_cast<Eigen::Index>(hits[pick].index));
    double far = -1.0;
    std::size_t next = 0;
    for (std::size_t i = 0; i < m; ++i) {
      gap[i] = std::min(gap[i], (points.col(static_cast<Eigen::Index>(hits[i].index)) - col).squaredNorm());
      if (gap[i] > far) {
        far = gap[i];
        next = i;
      }
    }
    pick = next;
  }
  (void)center;
  return out;
}

}  // namespace

std::size_t default_neighbor_count(std::size_t state_size) {
  return std::max<std::size_t>(state_size + 1, 10);
}

LocalRegression local_regression(const NeighborIndex& index,
                                 const Eigen::Ref<const Eigen::VectorXd>& center, double rho,
                                 std::size_t d, NeighborPolicy policy) {
  const TransitionDataset& data = index.dataset();
  const std::size_t nm = data.state_size();
  require(rho > 0.0, "regression radius must be positive");
  require(d >= nm + 1, "need d >= nM + 1 neighbors");
  if (static_cast<std::size_t>(center.size()) != nm) {
    throw Error(ErrorKind::DimensionMismatch, "center dimension does not match the dataset");
  }

  LocalRegression out;
  out.center = center;
  out.radius = rho;

  auto hits = index.within(center, rho);
  if (hits.size() < d) {
    out.neighbors = hits.size();
    out.status = RegressionStatus::InsufficientNeighbors;
    return out;
  }
  if (policy == NeighborPolicy::Nearest) hits.resize(d);
  if (policy == NeighborPolicy::Spread) hits = spread_subset(data.predecessors(), center, hits, d);
  const std::size_t count = hits.size();
  out.neighbors = count;

  // Row j of the design is [1, (z_j - center)^T]; row j of the target is z_j^+.
  Eigen::MatrixXd design(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(nm + 1));
  Eigen::MatrixXd target(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(nm));
  for (std::size_t j = 0; j < count; ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    const auto col = static_cast<Eigen::Index>(hits[j].index);
    design(row, 0) = 1.0;
    design.row(row).tail(static_cast<Eigen::Index>(nm)) = (data.predecessors().col(col) - center).transpose();
    target.row(row) = data.successors().col(col).transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double tol = static_cast<double>(std::max(nm + 1, count)) * std::numeric_limits<double>::epsilon();
  svd.setThreshold(tol);
  out.rank = static_cast<std::size_t>(svd.rank());
  out.rank_ok = out.rank == nm + 1;
  if (!out.rank_ok) {
    out.status = RegressionStatus::RankDeficient;
    return out;
  }
  const Eigen::MatrixXd coeffs = svd.solve(target);  // (nM+1) x nM, transposed Phi
  out.F_hat = coeffs.row(0).transpose();
  out.B_hat = coeffs.bottomRows(static_cast<Eigen::Index>(nm)).transpose();
  out.residual_norm = (target - design * coeffs).norm();
  out.status = RegressionStatus::Ok;
  return out;
}

LocalRegression local_regression_or_throw(const TransitionDataset& dataset,
                                          const Eigen::Ref<const Eigen::VectorXd>& center,
                                          double rho, std::size_t d, NeighborPolicy policy) {
  NeighborIndex index(dataset, rho);
  LocalRegression r = local_regression(index, center, rho, d, policy);
  if (r.status == RegressionStatus::InsufficientNeighbors) {
    throw Error(ErrorKind::InsufficientNeighbors, "only " + std::to_string(r.neighbors) +
                                                      " points within rho, need " + std::to_string(d));
  }
  if (r.status == RegressionStatus::RankDeficient) {
    throw Error(ErrorKind::RankDeficient, "local design has rank " + std::to_string(r.rank) +
                                              ", need " + std::to_string(dataset.state_size() + 1));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Surrogate

double ScalePolicy::resolve(const Eigen::MatrixXd& centers) const {
  if (kind == Kind::Fixed) return value;
  const double med = median_pairwise_distance(centers);
  // A single center (or all at one point) has no spread; fall back to unit support.
  return med > 0.0 ? value * med : 1.0;
}

Eigen::MatrixXd mapped_gram(const WendlandKernel& kernel, const Eigen::MatrixXd& centers,
                            const Eigen::MatrixXd& mapped_centers) {
  const Eigen::Index p = centers.cols();
  Eigen::MatrixXd out(p, p);
#pragma omp parallel for
  for (Eigen::Index l = 0; l < p; ++l) {
    for (Eigen::Index i = 0; i < p; ++i) out(l, i) = kernel(centers.col(i), mapped_centers.col(l));
  }
  return out;
}

Eigen::MatrixXd koopman_matrix(const GramFactorization& gram, const Eigen::MatrixXd& mapped) {
  // (K + lambda I) A^T = K_F since K is symmetric.
  return gram.solve(mapped).transpose();
}

KoopmanSurrogate::KoopmanSurrogate(WendlandKernel kernel, Eigen::MatrixXd centers,
                                   Eigen::MatrixXd koopman, std::size_t dim, std::size_t points,
                                   FitReport report)
    : kernel_(kernel),
      gram_(kernel, std::move(centers)),
      koopman_(std::move(koopman)),
      dim_(dim),
      points_(points),
      report_(std::move(report)) {
  const Eigen::Index p = gram_.centers().cols();
  if (koopman_.rows() != p || koopman_.cols() != p) {
    throw Error(ErrorKind::DimensionMismatch, "Koopman matrix must be p x p");
  }
  if (static_cast<std::size_t>(gram_.centers().rows()) != dim_ * points_) {
    throw Error(ErrorKind::DimensionMismatch, "centers must have n*M rows");
  }
  reconstruction_ = gram_.solve(gram_.centers().transpose()).transpose();
  fused_ = reconstruction_ * koopman_;
  report_.jitter = gram_.jitter();
}

Eigen::VectorXd KoopmanSurrogate::lift(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return feature_vector(kernel_, gram_.centers(), z);
}

Eigen::VectorXd KoopmanSurrogate::predict_lifted(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return koopman_ * lift(z);
}

Eigen::VectorXd KoopmanSurrogate::reconstruct_state(const Eigen::Ref<const Eigen::VectorXd>& psi) const {
  if (psi.size() != koopman_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "lifted vector length must equal p");
  }
  return reconstruction_ * psi;
}

Eigen::VectorXd KoopmanSurrogate::predict_state(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return fused_ * lift(z);
}

DiscretizedState KoopmanSurrogate::predict_state(const DiscretizedState& z) const {
  return {dim_, points_, predict_state(z.data)};
}

Eigen::MatrixXd KoopmanSurrogate::rollout(const Eigen::Ref<const Eigen::VectorXd>& z0,
                                          std::size_t steps, RolloutMode mode) const {
  require(steps >= 1, "rollout needs at least one step");
  const auto nm = static_cast<Eigen::Index>(dim_ * points_);
  Eigen::MatrixXd out(nm, static_cast<Eigen::Index>(steps + 1));
  Eigen::VectorXd psi;
  feature_vector_into(kernel_, gram_.centers(), z0, psi);
  out.col(0) = reconstruction_ * psi;

  auto check = [&](Eigen::Index k) {
    if (!out.col(k).allFinite()) {
      throw Error(ErrorKind::NonFiniteState, "rollout diverged at step " + std::to_string(k));
    }
  };
  check(0);
  if (mode == RolloutMode::StateSpace) {
    for (std::size_t k = 1; k <= steps; ++k) {
      const auto col = static_cast<Eigen::Index>(k);
      feature_vector_into(kernel_, gram_.centers(), out.col(col - 1), psi);
      out.col(col) = fused_ * psi;
      check(col);
    }
  } else {
    for (std::size_t k = 1; k <= steps; ++k) {
      const auto col = static_cast<Eigen::Index>(k);
      psi = koopman_ * psi;
      out.col(col) = reconstruction_ * psi;
      check(col);
    }
  }
  return out;
}

KoopmanSurrogate fit(const TransitionDataset& dataset, const FitOptions& options) {
  require(dataset.size() > 0, "cannot fit on an empty dataset");
  const std::size_t nm = dataset.state_size();
  const std::size_t d = options.d == 0 ? default_neighbor_count(nm) : options.d;
  require(d >= nm + 1, "need d >= nM + 1 neighbors");

  CenterSet centers = options.fill_target > 0.0
                          ? select_centers_by_fill(dataset, options.fill_target, std::max<std::size_t>(options.p, 1))
                          : select_centers(dataset, options.p, options.strategy, options.seed);
  const auto p = static_cast<std::size_t>(centers.points.cols());

  FitReport report;
  report.dim = dataset.dim();
  report.points = dataset.points();
  report.centers = p;
  report.rho = options.rho;
  report.d = d;
  report.strategy = options.fill_target > 0.0 ? "greedy_fill" : to_string(options.strategy);
  report.neighbor_policy = to_string(options.neighbors);
  report.seed = options.seed;
  report.residual_norms.assign(p, 0.0);

  NeighborIndex index(dataset, options.rho);
  Eigen::MatrixXd mapped(static_cast<Eigen::Index>(nm), static_cast<Eigen::Index>(p));
  std::vector<char> failed(p, 0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t l = 0; l < p; ++l) {
    const auto col = static_cast<Eigen::Index>(l);
    LocalRegression r = local_regression(index, centers.points.col(col), options.rho, d, options.neighbors);
    if (r.status == RegressionStatus::Ok) {
      mapped.col(col) = r.F_hat;
      report.residual_norms[l] = r.residual_norm;
    } else {
      // Fall back to the observed successor of the center itself.
      failed[l] = 1;
      mapped.col(col) = dataset.successors().col(static_cast<Eigen::Index>(centers.source_index[l]));
    }
  }
  for (std::size_t l = 0; l < p; ++l) {
    if (failed[l]) report.failed_centers.push_back(l);
  }
  const double failed_fraction = static_cast<double>(report.failed_centers.size()) / static_cast<double>(p);
  if (failed_fraction > options.max_failed_fraction) {
    throw Error(ErrorKind::FitFailed,
                std::to_string(report.failed_centers.size()) + " of " + std::to_string(p) +
                    " local regressions failed (rank-deficient or too few neighbors within rho)");
  }

  const WendlandKernel kernel(nm, options.scale.resolve(centers.points));
  report.scale = kernel.scale();

  const auto& unique = dataset.unique_predecessors();
  Eigen::MatrixXd cloud(static_cast<Eigen::Index>(nm), static_cast<Eigen::Index>(unique.size()));
  for (std::size_t i = 0; i < unique.size(); ++i) {
    cloud.col(static_cast<Eigen::Index>(i)) = dataset.predecessors().col(static_cast<Eigen::Index>(unique[i]));
  }
  report.fill_distance = fill_distance(centers.points, cloud);

  GramFactorization gram(kernel, centers.points);
  const Eigen::MatrixXd k_mapped = mapped_gram(kernel, centers.points, mapped);
  Eigen::MatrixXd koopman = koopman_matrix(gram, k_mapped);
  report.jitter = gram.jitter();
  report.condition_estimate = gram.condition_estimate();
  report.mapped_centers = std::move(mapped);

  return KoopmanSurrogate(kernel, std::move(centers.points), std::move(koopman), dataset.dim(),
                          dataset.points(), std::move(report));
}

}  // namespace ddekoop
