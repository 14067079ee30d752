#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ddekoop/history.hpp"

namespace ddekoop {

/// Retarded autonomous DDE with one discrete delay: x'(t) = f(x(t), x(t - delay)).
struct DdeSystem {
  using Rhs = std::function<void(std::span<const double> x, std::span<const double> x_delayed,
                                 std::span<double> dx)>;

  std::string name;
  std::size_t state_dim = 0;
  double delay = 0.0;
  Rhs rhs;

  Eigen::VectorXd evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& x_delayed) const;
};

/// x'(t) = 1 / (1 + x(t - delay)^2) - x(t)
DdeSystem hill_system(double delay = 1.0);

/// Two-compartment tumor/immune interaction model with delayed immune activation.
DdeSystem tumor_system(double delay = 1.64);

/// Looks up "hill" or "tumor"; a non-positive delay selects the system default.
DdeSystem system_by_name(const std::string& name, double delay = 0.0);

/// Default per-component bounds for constant initial histories.
std::vector<std::pair<double, double>> default_initial_bounds(const std::string& name);

struct IntegrationOptions {
  double horizon = 10.0;
  double sample_interval = 0.01;
  double step = 0.001;
};

/// Dense solution of one integration: the initial history on [-delay, 0)
/// followed by the cubic Hermite record of the marched solution on [0, horizon].
class DenseSolution final : public HistorySource {
 public:
  DenseSolution(HistorySegment initial, KnotTable solution)
      : initial_(std::move(initial)), solution_(std::move(solution)) {}

  std::size_t dim() const noexcept override { return solution_.dim(); }
  Interpolation mode() const noexcept override { return Interpolation::Hermite; }
  void eval(double t, std::span<double> out) const override;

  const KnotTable& solution() const noexcept { return solution_; }
  const HistorySegment& initial() const noexcept { return initial_; }

 private:
  HistorySegment initial_;
  KnotTable solution_;
};

/// Sampled history segments phi_k = x_{k*Delta} of one solution.
class Trajectory {
 public:
  Trajectory(std::string system_name, double delay, IntegrationOptions options,
             std::shared_ptr<const DenseSolution> dense, bool breakpoints_aligned);

  const std::string& system_name() const noexcept { return system_name_; }
  double delay() const noexcept { return delay_; }
  double sample_interval() const noexcept { return options_.sample_interval; }
  double horizon() const noexcept { return options_.horizon; }
  double step() const noexcept { return options_.step; }
  std::size_t dim() const noexcept { return dense_->dim(); }

  /// Number of sampled segments, N_t + 1.
  std::size_t segment_count() const noexcept { return segment_count_; }
  HistorySegment segment(std::size_t k) const;
  const HistorySegment& initial_history() const noexcept { return dense_->initial(); }

  /// Dense-output value x(t) for t in [-delay, horizon].
  Eigen::VectorXd state_at(double t) const;

  const DenseSolution& dense() const noexcept { return *dense_; }

  /// False when delay/step is not an integer, so derivative jumps fall between steps.
  bool breakpoints_aligned() const noexcept { return breakpoints_aligned_; }

 private:
  std::string system_name_;
  double delay_;
  IntegrationOptions options_;
  std::shared_ptr<const DenseSolution> dense_;
  std::size_t segment_count_;
  bool breakpoints_aligned_;
};

/// Fixed-step RK4 by the method of steps. Delayed values are read from the
/// dense Hermite record, so step <= delay is required.
Trajectory integrate(const DdeSystem& system, const HistorySegment& initial_history,
                     const IntegrationOptions& options);

/// Constant histories eta == c with c uniform in `bounds`, deterministic in `seed`.
std::vector<HistorySegment> sample_initial_histories(
    const DdeSystem& system, std::size_t count,
    const std::vector<std::pair<double, double>>& bounds, std::uint64_t seed);

/// Writes `t,x1,...,xn`, one row per integrator step, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace ddekoop
