#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace ddekoop {

/// Compactly supported Wendland RBF with smoothness s = 1 on R^D, D = n*M.
///
/// k(a, b) = Phi(||a - b|| / scale), where
///   Phi(r) = (1 - r)^(d - 1) * ((d - 1) r + 1) for r <= 1, 0 otherwise,
/// and the polynomial degree is d = floor(D / 2) + 4. Phi is C^2 and
/// strictly positive definite on R^D.
class WendlandKernel {
 public:
  WendlandKernel(std::size_t ambient_dim, double scale);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  int degree() const noexcept { return degree_; }
  double scale() const noexcept { return scale_; }

  /// Radial profile; throws on negative r.
  double profile(double r) const;

  template <typename A, typename B>
  double operator()(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) const {
    return profile_unchecked((a - b).norm() / scale_);
  }

 private:
  double profile_unchecked(double r) const noexcept;

  std::size_t ambient_dim_;
  int degree_;
  double scale_;
};

/// Gram matrix K_X and the SPD factorization of K_X + lambda*I.
class GramFactorization {
 public:
  /// Jitter values tried in order until the Cholesky factorization succeeds.
  static constexpr double kJitterLadder[] = {0.0, 1e-12, 1e-10, 1e-8};

  /// `centers` holds one center per column.
  GramFactorization(const WendlandKernel& kernel, Eigen::MatrixXd centers);

  const Eigen::MatrixXd& centers() const noexcept { return centers_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  const Eigen::LLT<Eigen::MatrixXd>& factor() const noexcept { return llt_; }
  double jitter() const noexcept { return jitter_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(centers_.cols()); }

  /// 1-norm condition estimate of K_X + lambda*I.
  double condition_estimate() const { return 1.0 / llt_.rcond(); }

  /// Solves (K_X + lambda*I) X = rhs.
  template <typename Rhs>
  auto solve(const Eigen::MatrixBase<Rhs>& rhs) const {
    return llt_.solve(rhs);
  }

 private:
  Eigen::MatrixXd centers_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
};

/// Psi(z) = (k(z_1, z), ..., k(z_p, z)).
Eigen::VectorXd feature_vector(const WendlandKernel& kernel, const Eigen::MatrixXd& centers,
                               const Eigen::Ref<const Eigen::VectorXd>& z);

void feature_vector_into(const WendlandKernel& kernel, const Eigen::MatrixXd& centers,
                         const Eigen::Ref<const Eigen::VectorXd>& z, Eigen::VectorXd& out);

/// max over cloud points of the distance to the nearest center.
double fill_distance(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& cloud);

/// Median of all pairwise Euclidean distances between columns.
double median_pairwise_distance(const Eigen::MatrixXd& points);

}  // namespace ddekoop
