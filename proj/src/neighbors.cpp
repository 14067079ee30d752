#include "ddekoop/neighbors.hpp"

#include <algorithm>
#include <cmath>

#include "ddekoop/error.hpp"

namespace ddekoop {

BucketIndex::BucketIndex(const Eigen::MatrixXd& points, double cell_size)
    : points_(points),
      cell_(cell_size),
      dim_(static_cast<std::size_t>(points.rows())),
      brute_force_(dim_ > kMaxGridDim) {
  require(cell_size > 0.0, "bucket cell size must be positive");
  if (brute_force_) return;
  const auto count = static_cast<std::size_t>(points.cols());
  cells_.resize(count * dim_);
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t* cell = cells_.data() + i * dim_;
    for (std::size_t c = 0; c < dim_; ++c) {
      cell[c] = static_cast<std::int64_t>(std::floor(points(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) / cell_));
    }
    buckets_[key_of(cell)].push_back(static_cast<std::uint32_t>(i));
  }
}

std::uint64_t BucketIndex::key_of(const std::int64_t* cell) const noexcept {
  // Hash collisions only merge buckets; candidates are distance-checked anyway.
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t c = 0; c < dim_; ++c) {
    h ^= static_cast<std::uint64_t>(cell[c]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<BucketIndex::Hit> BucketIndex::within(const Eigen::Ref<const Eigen::VectorXd>& query,
                                                  double radius) const {
  std::vector<Hit> hits;
  const double r2 = radius * radius;
  auto consider = [&](std::size_t i) {
    const double d2 = (points_.col(static_cast<Eigen::Index>(i)) - query).squaredNorm();
    if (d2 <= r2) hits.push_back({i, std::sqrt(d2)});
  };

  if (brute_force_) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(points_.cols()); ++i) consider(i);
  } else {
    const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_));
    std::vector<std::int64_t> lo(dim_), cell(dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
      lo[c] = static_cast<std::int64_t>(std::floor(query[static_cast<Eigen::Index>(c)] / cell_)) - reach;
      cell[c] = lo[c];
    }
    const std::int64_t width = 2 * reach + 1;
    // Odometer over the (2*reach+1)^dim neighboring cells.
    while (true) {
      if (auto it = buckets_.find(key_of(cell.data())); it != buckets_.end()) {
        for (std::uint32_t i : it->second) consider(i);
      }
      std::size_t c = 0;
      while (c < dim_ && ++cell[c] >= lo[c] + width) {
        cell[c] = lo[c];
        ++c;
      }
      if (c == dim_) break;
    }
  }

  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
  });
  // A hash collision can visit one bucket twice.
  hits.erase(std::unique(hits.begin(), hits.end(),
                         [](const Hit& a, const Hit& b) { return a.index == b.index; }),
             hits.end());
  return hits;
}

}  // namespace ddekoop
