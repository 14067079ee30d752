#include "ddekoop/dde.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "ddekoop/error.hpp"

namespace ddekoop {

Eigen::VectorXd DdeSystem::evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& x_delayed) const {
  if (static_cast<std::size_t>(x.size()) != state_dim ||
      static_cast<std::size_t>(x_delayed.size()) != state_dim) {
    throw Error(ErrorKind::DimensionMismatch, "rhs arguments must have dimension " + std::to_string(state_dim));
  }
  Eigen::VectorXd dx(x.size());
  rhs({x.data(), state_dim}, {x_delayed.data(), state_dim}, {dx.data(), state_dim});
  return dx;
}

DdeSystem hill_system(double delay) {
  require(delay > 0.0, "delay must be positive");
  return DdeSystem{"hill", 1, delay,
                   [](std::span<const double> x, std::span<const double> xd, std::span<double> dx) {
                     dx[0] = 1.0 / (1.0 + xd[0] * xd[0]) - x[0];
                   }};
}

DdeSystem tumor_system(double delay) {
  require(delay > 0.0, "delay must be positive");
  return DdeSystem{"tumor", 2, delay,
                   [](std::span<const double> x, std::span<const double> xd, std::span<double> dx) {
                     const double coupling = xd[0] * xd[1];
                     dx[0] = 0.04411 + 0.6913 * coupling / (1.0 + xd[1]) - 0.0383 * coupling -
                             0.2288 * x[0];
                     dx[1] = x[1] * (1.0 - 0.04038 * x[1]) - x[0] * x[1];
                   }};
}

DdeSystem system_by_name(const std::string& name, double delay) {
  if (name == "hill") return hill_system(delay > 0.0 ? delay : 1.0);
  if (name == "tumor") return tumor_system(delay > 0.0 ? delay : 1.64);
  throw Error(ErrorKind::Config, "unknown system '" + name + "' (expected hill or tumor)");
}

std::vector<std::pair<double, double>> default_initial_bounds(const std::string& name) {
  if (name == "hill") return {{0.1, 1.5}};
  if (name == "tumor") return {{0.1, 1.5}, {0.1, 20.0}};
  throw Error(ErrorKind::Config, "no default initial bounds for system '" + name + "'");
}

void DenseSolution::eval(double t, std::span<double> out) const {
  if (t < 0.0) {
    initial_.eval(t, out);
  } else {
    solution_.eval(t, out);
  }
}

Trajectory::Trajectory(std::string system_name, double delay, IntegrationOptions options,
                       std::shared_ptr<const DenseSolution> dense, bool breakpoints_aligned)
    : system_name_(std::move(system_name)),
      delay_(delay),
      options_(options),
      dense_(std::move(dense)),
      segment_count_(static_cast<std::size_t>(std::llround(options.horizon / options.sample_interval)) + 1),
      breakpoints_aligned_(breakpoints_aligned) {}

HistorySegment Trajectory::segment(std::size_t k) const {
  require(k < segment_count_, "segment index out of range");
  return HistorySegment(dense_, delay_, static_cast<double>(k) * options_.sample_interval);
}

Eigen::VectorXd Trajectory::state_at(double t) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim()));
  dense_->eval(t, {out.data(), dim()});
  return out;
}

namespace {

bool near_integer(double ratio, double tol = 1e-9) {
  return std::abs(ratio - std::round(ratio)) <= tol * std::max(1.0, std::abs(ratio));
}

}  // namespace

Trajectory integrate(const DdeSystem& system, const HistorySegment& initial_history,
                     const IntegrationOptions& options) {
  const double tau = system.delay;
  const double h = options.step;
  require(h > 0.0 && options.sample_interval > 0.0 && options.horizon > 0.0,
          "step, sample interval and horizon must be positive");
  require(near_integer(options.sample_interval / h), "step must divide the sample interval");
  require(near_integer(options.horizon / options.sample_interval),
          "sample interval must divide the horizon");
  require(h <= tau * (1.0 + 1e-12), "step must not exceed the delay (method of steps)");
  require(!initial_history.empty() && initial_history.dim() == system.state_dim,
          "initial history dimension does not match the system");
  require(std::abs(initial_history.delay() - tau) <= 1e-12 * tau,
          "initial history must cover [-delay, 0] of the system");

  const std::size_t n = system.state_dim;
  const auto steps = static_cast<std::size_t>(std::llround(options.horizon / h));
  const bool aligned = near_integer(tau / h);

  std::vector<double> x(n), xd(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
  initial_history.eval(0.0, x);

  KnotTable table(0.0, h, n, {}, {}, Interpolation::Hermite);
  table.push_back(x, std::vector<double>(n, 0.0));

  // Delayed value at absolute time s; the table holds knots 0..count-1.
  auto delayed = [&](double s, std::size_t count, std::span<double> out) {
    if (s < 0.0) {
      initial_history.eval(s, out);
    } else {
      table.eval_prefix(s, count, out);
    }
  };
  auto check_finite = [&](std::span<const double> v, double t) {
    for (double c : v) {
      if (!std::isfinite(c)) {
        throw Error(ErrorKind::NonFiniteState,
                    system.name + " state became non-finite at t = " + std::to_string(t));
      }
    }
  };

  // Slope at knot 0 uses the right-hand derivative.
  {
    delayed(-tau, 1, xd);
    system.rhs(x, xd, k1);
    check_finite(k1, 0.0);
    std::vector<double> values(table.value(0).begin(), table.value(0).end());
    table = KnotTable(0.0, h, n, values, k1, Interpolation::Hermite);
  }

  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * h;
    const std::size_t count = i + 1;

    // k1 reuses the stored slope at the current knot.
    auto slope = table.slope(i);
    std::copy(slope.begin(), slope.end(), k1.begin());

    delayed(t + 0.5 * h - tau, count, xd);
    for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + 0.5 * h * k1[c];
    system.rhs(tmp, xd, k2);
    for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + 0.5 * h * k2[c];
    system.rhs(tmp, xd, k3);
    delayed(t + h - tau, count, xd);
    for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + h * k3[c];
    system.rhs(tmp, xd, k4);

    for (std::size_t c = 0; c < n; ++c) {
      x[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    const double t_next = static_cast<double>(i + 1) * h;
    check_finite(x, t_next);

    // x(t_next - tau) is already covered by knots 0..i (h <= tau).
    delayed(t_next - tau, count, xd);
    system.rhs(x, xd, tmp);
    check_finite(tmp, t_next);
    table.push_back(x, tmp);
  }

  auto dense = std::make_shared<DenseSolution>(initial_history, std::move(table));
  return Trajectory(system.name, tau, options, std::move(dense), aligned);
}

std::vector<HistorySegment> sample_initial_histories(
    const DdeSystem& system, std::size_t count,
    const std::vector<std::pair<double, double>>& bounds, std::uint64_t seed) {
  require(count >= 1, "need at least one initial history");
  require(bounds.size() == system.state_dim, "one bound interval per state component is required");
  for (const auto& [lo, hi] : bounds) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi, "initial-history bounds are empty");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<HistorySegment> out;
  out.reserve(count);
  std::vector<double> c(system.state_dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < system.state_dim; ++j) {
      const auto [lo, hi] = bounds[j];
      c[j] = lo == hi ? lo : std::min(hi, lo + (hi - lo) * unit(rng));
    }
    out.push_back(HistorySegment::constant(system.delay, c));
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  const auto& table = trajectory.dense().solution();
  const std::size_t n = trajectory.dim();
  os << "t";
  for (std::size_t c = 1; c <= n; ++c) os << ",x" << c;
  os << '\n';
  os << std::setprecision(17);
  for (std::size_t i = 0; i < table.size(); ++i) {
    os << table.knot(i);
    for (double v : table.value(i)) os << ',' << v;
    os << '\n';
  }
}

}  // namespace ddekoop
