#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ddekoop {

enum class Interpolation { Constant, Linear, Hermite, Function };

/// Piecewise interpolant over explicitly stored uniform knots t_i = t0 + i*h.
///
/// Values and slopes are stored row-major, one row of `dim` entries per knot.
/// Evaluation at a stored knot returns the stored value bit-for-bit.
class KnotTable {
 public:
  KnotTable() = default;
  KnotTable(double t0, double h, std::size_t dim, std::vector<double> values,
            std::vector<double> slopes, Interpolation mode);
  /// As above, with the last knot pinned to `end` exactly.
  KnotTable(double t0, double h, std::size_t dim, std::vector<double> values,
            std::vector<double> slopes, Interpolation mode, double end);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return knots_.size(); }
  double t0() const noexcept { return t0_; }
  double spacing() const noexcept { return h_; }
  double knot(std::size_t i) const { return knots_[i]; }
  Interpolation mode() const noexcept { return mode_; }
  std::span<const double> value(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  std::span<const double> slope(std::size_t i) const { return {slopes_.data() + i * dim_, dim_}; }

  /// Evaluates at t, clamping to the covered interval.
  void eval(double t, std::span<double> out) const;

  /// Appends a knot at t0 + size()*h; used by the integrator while marching.
  void push_back(std::span<const double> value, std::span<const double> slope);

  /// Evaluates using only the first `count` knots (count >= 1).
  void eval_prefix(double t, std::size_t count, std::span<double> out) const;

 private:
  double t0_ = 0.0;
  double h_ = 1.0;
  std::size_t dim_ = 0;
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  Interpolation mode_ = Interpolation::Hermite;
};

/// Anything that can be evaluated on an absolute time axis.
class HistorySource {
 public:
  virtual ~HistorySource() = default;
  virtual std::size_t dim() const noexcept = 0;
  virtual Interpolation mode() const noexcept = 0;
  virtual void eval(double t, std::span<double> out) const = 0;
};

/// A continuous function on [-delay, 0] into R^n, i.e. the state x_t of a DDE.
///
/// Immutable and cheap to copy: the underlying samples are shared. A segment
/// is a window [offset - delay, offset] onto a source, so consecutive
/// trajectory segments share storage and satisfy the shift identity exactly.
class HistorySegment {
 public:
  using Callable = std::function<void(double theta, std::span<double> out)>;

  HistorySegment() = default;
  HistorySegment(std::shared_ptr<const HistorySource> source, double delay, double offset);

  static HistorySegment constant(double delay, std::span<const double> value);
  static HistorySegment constant(double delay, const Eigen::VectorXd& value);

  /// Cubic Hermite interpolant through (K+1) uniform samples on [-delay, 0].
  /// `values` and `slopes` are (K+1) x n, row-major.
  static HistorySegment hermite(double delay, std::size_t dim, std::vector<double> values,
                                std::vector<double> slopes);

  /// Piecewise-linear interpolant through uniform samples on [-delay, 0].
  static HistorySegment linear(double delay, std::size_t dim, std::vector<double> values);

  /// Arbitrary function of theta, evaluated exactly.
  static HistorySegment function(double delay, std::size_t dim, Callable f);

  double delay() const noexcept { return delay_; }
  double offset() const noexcept { return offset_; }
  std::size_t dim() const noexcept { return source_ ? source_->dim() : 0; }
  Interpolation interpolation() const noexcept;
  bool empty() const noexcept { return !source_; }

  void eval(double theta, std::span<double> out) const;
  Eigen::VectorXd operator()(double theta) const;

  const std::shared_ptr<const HistorySource>& source() const noexcept { return source_; }

 private:
  std::shared_ptr<const HistorySource> source_;
  double delay_ = 0.0;
  double offset_ = 0.0;
};

}  // namespace ddekoop
