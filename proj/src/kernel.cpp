#include "ddekoop/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddekoop/error.hpp"

namespace ddekoop {

WendlandKernel::WendlandKernel(std::size_t ambient_dim, double scale)
    : ambient_dim_(ambient_dim), degree_(static_cast<int>(ambient_dim / 2) + 4), scale_(scale) {
  require(ambient_dim >= 1, "kernel ambient dimension must be positive");
  require(std::isfinite(scale) && scale > 0.0, "kernel scale must be positive and finite");
}

double WendlandKernel::profile(double r) const {
  require(r >= 0.0, "Wendland profile needs r >= 0");
  return profile_unchecked(r);
}

double WendlandKernel::profile_unchecked(double r) const noexcept {
  if (r >= 1.0) return 0.0;
  const double one_minus = 1.0 - r;
  double power = 1.0;
  for (int i = 0; i < degree_ - 1; ++i) power *= one_minus;
  return power * ((degree_ - 1) * r + 1.0);
}

GramFactorization::GramFactorization(const WendlandKernel& kernel, Eigen::MatrixXd centers)
    : centers_(std::move(centers)) {
  const Eigen::Index p = centers_.cols();
  if (p == 0) throw Error(ErrorKind::EmptyCenters, "Gram matrix needs at least one center");
  if (static_cast<std::size_t>(centers_.rows()) != kernel.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "center dimension does not match the kernel");
  }

  gram_.resize(p, p);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index i = 0; i < p; ++i) {
    gram_(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < p; ++j) {
      gram_(i, j) = kernel(centers_.col(i), centers_.col(j));
    }
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if ((centers_.col(i) - centers_.col(j)).squaredNorm() == 0.0) {
        throw Error(ErrorKind::DuplicateCenters, "centers " + std::to_string(i) + " and " +
                                                     std::to_string(j) + " coincide");
      }
      gram_(j, i) = gram_(i, j);
    }
  }

  for (double lambda : kJitterLadder) {
    Eigen::MatrixXd shifted = gram_;
    shifted.diagonal().array() += lambda;
    llt_.compute(shifted);
    if (llt_.info() == Eigen::Success && llt_.matrixLLT().diagonal().minCoeff() > 0.0) {
      jitter_ = lambda;
      return;
    }
  }
  throw Error(ErrorKind::SingularGram,
              "Gram matrix is not positive definite even with jitter 1e-8 "
              "(near-duplicate centers relative to the kernel scale)");
}

void feature_vector_into(const WendlandKernel& kernel, const Eigen::MatrixXd& centers,
                         const Eigen::Ref<const Eigen::VectorXd>& z, Eigen::VectorXd& out) {
  if (centers.rows() != z.size()) {
    throw Error(ErrorKind::DimensionMismatch, "state dimension does not match the centers");
  }
  out.resize(centers.cols());
  for (Eigen::Index l = 0; l < centers.cols(); ++l) out[l] = kernel(centers.col(l), z);
}

Eigen::VectorXd feature_vector(const WendlandKernel& kernel, const Eigen::MatrixXd& centers,
                               const Eigen::Ref<const Eigen::VectorXd>& z) {
  Eigen::VectorXd out;
  feature_vector_into(kernel, centers, z, out);
  return out;
}

double fill_distance(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& cloud) {
  if (centers.cols() == 0) throw Error(ErrorKind::EmptyCenters, "fill distance needs centers");
  require(cloud.cols() > 0, "fill distance needs a non-empty cloud");
  if (centers.rows() != cloud.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "centers and cloud differ in dimension");
  }
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst)
  for (Eigen::Index c = 0; c < cloud.cols(); ++c) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index l = 0; l < centers.cols(); ++l) {
      best = std::min(best, (cloud.col(c) - centers.col(l)).squaredNorm());
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

double median_pairwise_distance(const Eigen::MatrixXd& points) {
  const Eigen::Index p = points.cols();
  if (p < 2) return 0.0;
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) d.push_back((points.col(i) - points.col(j)).norm());
  }
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

}  // namespace ddekoop
