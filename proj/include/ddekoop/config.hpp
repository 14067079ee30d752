#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ddekoop/kedmd.hpp"

namespace ddekoop {

/// One convergence study: the sweep M x (p or fill target) x rho over a
/// single system. Parsed from JSON; see configs/ for complete examples.
struct ExperimentConfig {
  std::string system;       // "hill", "tumor", or the "identity" test hook
  double delay = 0.0;       // <= 0 selects the system default
  double horizon = 10.0;
  double sample_interval = 0.01;
  double step = 0.001;

  std::vector<std::size_t> M;
  std::vector<std::size_t> p;
  /// When non-empty, replaces `p`: each entry picks the smallest greedy
  /// center set whose fill distance reaches it (capped at max_centers).
  std::vector<double> fill_distance;
  std::size_t max_centers = 2000;
  std::vector<double> rho;
  std::size_t d = 0;

  /// Training trajectories per entry of M; empty selects the desk default
  /// 20 (M-1), or 100 (M-1) when full_scale is set.
  std::vector<std::size_t> n_train;
  bool full_scale = false;
  std::size_t n_test = 15;
  std::vector<std::pair<double, double>> bounds;  // empty selects the system default

  std::uint64_t train_seed = 1;
  std::uint64_t test_seed = 1000003;
  std::uint64_t center_seed = 0;

  CenterStrategy strategy = CenterStrategy::GreedyFarthest;
  NeighborPolicy neighbors = NeighborPolicy::Spread;
  double scale_multiple = 2.0;
  double max_failed_fraction = 0.1;

  std::string output_dir = "out";
  bool plots = true;

  std::size_t training_count(std::size_t m_index) const;
  /// Throws Error(Config) naming the offending key.
  void validate() const;
};

/// Parses and validates; unknown keys and type errors name the first offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace ddekoop
