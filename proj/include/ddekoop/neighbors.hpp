#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace ddekoop {

/// Exact fixed-radius search over the columns of a point matrix using a
/// uniform bucket grid. Falls back to brute force in high dimension, where
/// the number of neighboring cells explodes.
class BucketIndex {
 public:
  struct Hit {
    std::size_t index;
    double distance;
  };

  static constexpr std::size_t kMaxGridDim = 8;

  /// `points` must outlive the index.
  BucketIndex(const Eigen::MatrixXd& points, double cell_size);

  /// All points with distance <= radius, ordered by (distance, index).
  std::vector<Hit> within(const Eigen::Ref<const Eigen::VectorXd>& query, double radius) const;

  double cell_size() const noexcept { return cell_; }

 private:
  std::uint64_t key_of(const std::int64_t* cell) const noexcept;

  const Eigen::MatrixXd& points_;
  double cell_;
  std::size_t dim_;
  bool brute_force_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
  std::vector<std::int64_t> cells_;  // per point, dim_ cell coordinates
};

}  // namespace ddekoop
