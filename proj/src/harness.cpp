#include "ddekoop/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>

#include "ddekoop/error.hpp"
#include "ddekoop/plot.hpp"

namespace ddekoop {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  return os;
}

}  // namespace

// ---------------------------------------------------------------------------
// Error metric

Eigen::RowVectorXd step_errors(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& prediction) {
  if (truth.rows() != prediction.rows() || truth.cols() != prediction.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "prediction and truth differ in shape");
  }
  require(truth.cols() >= 2, "need at least one predicted step");
  Eigen::RowVectorXd e(truth.cols() - 1);
  for (Eigen::Index k = 1; k < truth.cols(); ++k) e[k - 1] = (truth.col(k) - prediction.col(k)).norm();
  return e;
}

ErrorCurve aggregate_errors(std::string label, double sample_interval, const Eigen::MatrixXd& errors) {
  require(errors.rows() >= 1 && errors.cols() >= 1, "error table must be non-empty");
  ErrorCurve c;
  c.label = std::move(label);
  const Eigen::Index n = errors.rows();
  const Eigen::Index steps = errors.cols();
  double total = 0.0;
  for (Eigen::Index k = 0; k < steps; ++k) {
    double sum = 0.0;
    double lo = errors(0, k);
    double hi = errors(0, k);
    for (Eigen::Index i = 0; i < n; ++i) {
      sum += errors(i, k);
      lo = std::min(lo, errors(i, k));
      hi = std::max(hi, errors(i, k));
    }
    const double mu = sum / static_cast<double>(n);
    c.t.push_back(static_cast<double>(k + 1) * sample_interval);
    c.mu.push_back(mu);
    c.min.push_back(lo);
    c.max.push_back(hi);
    total += mu;
  }
  c.mean_mu = total / static_cast<double>(steps);
  c.final_mu = c.mu.back();
  return c;
}

// ---------------------------------------------------------------------------
// Sources

DdeSource::DdeSource(const ExperimentConfig& config)
    : system_(system_by_name(config.system, config.delay)),
      options_{config.horizon, config.sample_interval, config.step},
      bounds_(config.bounds.empty() ? default_initial_bounds(system_.name) : config.bounds),
      train_seed_(config.train_seed),
      test_seed_(config.test_seed),
      n_test_(config.n_test) {
  require(train_seed_ != test_seed_, "train and test seeds must differ");
}

namespace {

std::vector<Trajectory> simulate_all(const DdeSystem& system, const std::vector<HistorySegment>& ics,
                                     const IntegrationOptions& options) {
  std::vector<std::optional<Trajectory>> slots(ics.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < ics.size(); ++i) slots[i].emplace(integrate(system, ics[i], options));
  std::vector<Trajectory> out;
  out.reserve(ics.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

Eigen::VectorXd initial_value(const Trajectory& tr) { return tr.initial_history()(0.0); }

}  // namespace

const std::vector<Trajectory>& DdeSource::training_trajectories(std::size_t n_train) {
  if (train_.size() < n_train) {
    // The sampler draws sequentially, so a smaller set is a prefix of a larger one.
    train_ = simulate_all(system_, sample_initial_histories(system_, n_train, bounds_, train_seed_), options_);
    test_.clear();  // re-run the independence guard against the larger set
  }
  return train_;
}

const std::vector<Trajectory>& DdeSource::test_trajectories() {
  if (test_.empty()) {
    test_ = simulate_all(system_, sample_initial_histories(system_, n_test_, bounds_, test_seed_), options_);
  }
  for (const auto& te : test_) {
    const Eigen::VectorXd c = initial_value(te);
    for (const auto& tr : train_) {
      if (initial_value(tr) == c) {
        throw Error(ErrorKind::PreconditionViolation,
                    "a test initial condition coincides with a training initial condition");
      }
    }
  }
  return test_;
}

TransitionDataset DdeSource::training(const DiscretizationGrid& grid, std::size_t n_train) {
  const auto& all = training_trajectories(n_train);
  std::vector<Trajectory> used(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  return build_dataset(used, grid);
}

std::vector<Eigen::MatrixXd> DdeSource::tests(const DiscretizationGrid& grid) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& tr : test_trajectories()) out.push_back(discretize_trajectory(tr, grid));
  return out;
}

IdentitySource::IdentitySource(const ExperimentConfig& config)
    : bounds_(config.bounds),
      sample_interval_(config.sample_interval),
      steps_(static_cast<std::size_t>(std::llround(config.horizon / config.sample_interval))),
      train_seed_(config.train_seed),
      test_seed_(config.test_seed),
      n_test_(config.n_test) {
  require(!bounds_.empty(), "identity source needs bounds");
  require(steps_ >= 1, "horizon must cover at least one sample interval");
}

Eigen::MatrixXd IdentitySource::states(const DiscretizationGrid& grid, std::size_t count) const {
  const std::size_t n = bounds_.size();
  std::mt19937_64 rng(train_seed_);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n * grid.points()), static_cast<Eigen::Index>(count));
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      const auto& [lo, hi] = bounds_[static_cast<std::size_t>(r) % n];
      z(r, c) = lo + (hi - lo) * u(rng);
    }
  }
  return z;
}

TransitionDataset IdentitySource::training(const DiscretizationGrid& grid, std::size_t n_train) {
  n_train_max_ = std::max(n_train_max_, n_train);
  Eigen::MatrixXd z = states(grid, n_train);
  return TransitionDataset(bounds_.size(), grid.points(), sample_interval_, grid.delay(), z, z);
}

std::vector<Eigen::MatrixXd> IdentitySource::tests(const DiscretizationGrid& grid) {
  require(n_train_max_ > 0, "identity tests are drawn from training states; call training() first");
  const Eigen::MatrixXd z = states(grid, n_train_max_);
  std::mt19937_64 rng(test_seed_);
  std::uniform_int_distribution<std::size_t> pick(0, n_train_max_ - 1);
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t i = 0; i < n_test_; ++i) {
    out.push_back(z.col(static_cast<Eigen::Index>(pick(rng))).replicate(1, static_cast<Eigen::Index>(steps_ + 1)));
  }
  return out;
}

std::unique_ptr<ExperimentSource> make_source(const ExperimentConfig& config) {
  if (config.system == "identity") return std::make_unique<IdentitySource>(config);
  return std::make_unique<DdeSource>(config);
}

// ---------------------------------------------------------------------------
// Sweep

std::string CellResult::tag() const {
  std::string s = "M" + std::to_string(M);
  s += fill_target > 0.0 ? "_h" + short_number(fill_target) : "_p" + std::to_string(p_requested);
  return s + "_rho" + short_number(rho);
}

namespace {

std::string cell_label(const CellResult& c) {
  std::string s = "M=" + std::to_string(c.M);
  s += c.fill_target > 0.0 ? ",h=" + short_number(c.fill_target) : ",p=" + std::to_string(c.p_requested);
  return s + ",rho=" + short_number(c.rho);
}

void write_cell_files(const std::filesystem::path& dir, const CellResult& cell,
                      const Eigen::MatrixXd& current, double dt, bool plots) {
  {
    auto os = open_out(dir / ("curve_" + cell.tag() + ".csv"));
    write_curve_csv(os, cell.curve);
  }
  {
    auto os = open_out(dir / ("errors_" + cell.tag() + ".csv"));
    write_errors_csv(os, cell.errors, dt);
  }
  {
    auto os = open_out(dir / ("current_" + cell.tag() + ".csv"));
    write_current_value_csv(os, current);
  }
  if (plots) {
    write_current_value_svg((dir / "plots" / ("current_" + cell.tag() + ".svg")).string(), current,
                            cell.system + " " + cell.curve.label + " (test trajectory 1)");
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files,
                                const FitObserver& observer) {
  auto source = make_source(config);
  return run_experiment(config, *source, write_files, observer);
}

ExperimentResult run_experiment(const ExperimentConfig& config, ExperimentSource& source,
                                bool write_files, const FitObserver& observer) {
  config.validate();
  const std::filesystem::path dir(config.output_dir);
  if (write_files) {
    std::filesystem::create_directories(dir);
    if (config.plots) std::filesystem::create_directories(dir / "plots");
  }

  const bool by_fill = !config.fill_distance.empty();
  const std::size_t columns = by_fill ? config.fill_distance.size() : config.p.size();
  ExperimentResult result;

  for (std::size_t mi = 0; mi < config.M.size(); ++mi) {
    const DiscretizationGrid grid(config.M[mi], source.delay());
    const std::size_t n_train = config.training_count(mi);
    const TransitionDataset dataset = source.training(grid, n_train);
    const std::vector<Eigen::MatrixXd> tests = source.tests(grid);

    for (std::size_t pi = 0; pi < columns; ++pi) {
      for (double rho : config.rho) {
        CellResult cell;
        cell.system = source.name();
        cell.M = grid.points();
        cell.fill_target = by_fill ? config.fill_distance[pi] : 0.0;
        cell.p_requested = by_fill ? config.max_centers : config.p[pi];
        cell.rho = rho;
        cell.d = config.d == 0 ? default_neighbor_count(dataset.state_size()) : config.d;
        cell.n_train = n_train;
        cell.curve.label = cell_label(cell);

        FitOptions opts;
        opts.p = cell.p_requested;
        opts.fill_target = cell.fill_target;
        opts.rho = rho;
        opts.d = config.d;
        opts.scale.value = config.scale_multiple;
        opts.strategy = config.strategy;
        opts.neighbors = config.neighbors;
        opts.seed = config.center_seed;
        opts.max_failed_fraction = config.max_failed_fraction;

        Eigen::MatrixXd current;
        try {
          const KoopmanSurrogate surrogate = fit(dataset, opts);
          const FitReport& rep = surrogate.report();
          cell.p = rep.centers;
          cell.h_fill = rep.fill_distance;
          cell.lambda = rep.jitter;
          cell.cond_est = rep.condition_estimate;
          if (observer) observer(cell, surrogate);

          const auto steps = static_cast<Eigen::Index>(tests.front().cols() - 1);
          cell.errors.resize(static_cast<Eigen::Index>(tests.size()), steps);
          for (std::size_t i = 0; i < tests.size(); ++i) {
            const Eigen::MatrixXd pred = surrogate.rollout(tests[i].col(0), static_cast<std::size_t>(steps));
            cell.errors.row(static_cast<Eigen::Index>(i)) = step_errors(tests[i], pred);
            if (i == 0) {
              current = compare_current_value(pred, tests[i], source.dim(), grid.points(),
                                              source.sample_interval());
            }
          }
          cell.curve = aggregate_errors(cell.curve.label, source.sample_interval(), cell.errors);
        } catch (const Error& e) {
          if (!is_numerical(e.kind())) throw;
          cell.status = std::string("failed:") + to_string(e.kind());
          cell.message = e.what();
        }
        if (write_files && cell.ok()) write_cell_files(dir, cell, current, source.sample_interval(), config.plots);
        result.cells.push_back(std::move(cell));
      }
    }
  }

  if (write_files) {
    auto os = open_out(dir / "summary.csv");
    write_summary_csv(os, result);
    if (config.plots) {
      std::vector<ErrorCurve> curves;
      for (const auto& c : result.cells) {
        if (c.ok()) curves.push_back(c.curve);
      }
      if (!curves.empty()) {
        write_curves_svg((dir / "plots" / "mu.svg").string(), curves,
                         source.name() + ": step-wise mean prediction error");
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// CSV

void write_summary_csv(std::ostream& os, const ExperimentResult& result) {
  os << "system,M,p,rho,d,N_tr,h_fill,lambda,cond_est,mean_mu,final_mu,status\n";
  for (const auto& c : result.cells) {
    os << c.system << ',' << c.M << ',' << (c.ok() ? c.p : c.p_requested) << ',' << format_double(c.rho)
       << ',' << c.d << ',' << c.n_train << ',';
    if (c.ok()) {
      os << format_double(c.h_fill) << ',' << format_double(c.lambda) << ',' << format_double(c.cond_est)
         << ',' << format_double(c.curve.mean_mu) << ',' << format_double(c.curve.final_mu);
    } else {
      os << ",,,,";
    }
    os << ',' << c.status << '\n';
  }
}

void write_curve_csv(std::ostream& os, const ErrorCurve& curve) {
  os << "k,t,mu,min,max\n";
  for (std::size_t k = 0; k < curve.mu.size(); ++k) {
    os << (k + 1) << ',' << format_double(curve.t[k]) << ',' << format_double(curve.mu[k]) << ','
       << format_double(curve.min[k]) << ',' << format_double(curve.max[k]) << '\n';
  }
}

void write_errors_csv(std::ostream& os, const Eigen::MatrixXd& errors, double sample_interval) {
  os << "k,t";
  for (Eigen::Index i = 0; i < errors.rows(); ++i) os << ",e" << (i + 1);
  os << '\n';
  for (Eigen::Index k = 0; k < errors.cols(); ++k) {
    os << (k + 1) << ',' << format_double(static_cast<double>(k + 1) * sample_interval);
    for (Eigen::Index i = 0; i < errors.rows(); ++i) os << ',' << format_double(errors(i, k));
    os << '\n';
  }
}

Eigen::MatrixXd compare_current_value(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& truth,
                                      std::size_t dim, std::size_t points, double sample_interval) {
  if (prediction.cols() != truth.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "rollout and truth differ in length (" +
                                                  std::to_string(prediction.cols()) + " vs " +
                                                  std::to_string(truth.cols()) + ")");
  }
  const auto nm = static_cast<Eigen::Index>(dim * points);
  if (prediction.rows() != nm || truth.rows() != nm) {
    throw Error(ErrorKind::DimensionMismatch, "states must have n*M rows");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  const Eigen::Index last = nm - n;  // block M, the current value
  Eigen::MatrixXd table(truth.cols(), 1 + 2 * n);
  for (Eigen::Index k = 0; k < truth.cols(); ++k) {
    table(k, 0) = static_cast<double>(k) * sample_interval;
    for (Eigen::Index c = 0; c < n; ++c) {
      table(k, 1 + 2 * c) = truth(last + c, k);
      table(k, 2 + 2 * c) = prediction(last + c, k);
    }
  }
  return table;
}

void write_current_value_csv(std::ostream& os, const Eigen::MatrixXd& table) {
  const Eigen::Index n = (table.cols() - 1) / 2;
  os << 't';
  for (Eigen::Index c = 1; c <= n; ++c) os << ",x" << c << "_true,x" << c << "_pred";
  os << '\n';
  for (Eigen::Index k = 0; k < table.rows(); ++k) {
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
      if (c) os << ',';
      os << format_double(table(k, c));
    }
    os << '\n';
  }
}

}  // namespace ddekoop
