#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddekoop/config.hpp"
#include "ddekoop/dde.hpp"
#include "ddekoop/discretize.hpp"
#include "ddekoop/kedmd.hpp"

namespace ddekoop {

/// Step-wise prediction error over the test set.
struct ErrorCurve {
  std::string label;
  std::vector<double> t;    // k * Delta, k = 1..N_t
  std::vector<double> mu;   // mean over test trajectories of e_k
  std::vector<double> min;
  std::vector<double> max;
  double mean_mu = 0.0;     // mean over k of mu
  double final_mu = 0.0;
};

/// errors(i, k-1) = e_k for test trajectory i. mu_k is accumulated in
/// trajectory order and divided once, so it can be recomputed exactly.
ErrorCurve aggregate_errors(std::string label, double sample_interval, const Eigen::MatrixXd& errors);

/// e_k = ||z_k - z_hat_k||_2 for k = 1..N_t, one column per step of `truth`.
Eigen::RowVectorXd step_errors(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& prediction);

/// Where training pairs and held-out test trajectories come from.
class ExperimentSource {
 public:
  virtual ~ExperimentSource() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double delay() const = 0;
  virtual double sample_interval() const = 0;
  virtual TransitionDataset training(const DiscretizationGrid& grid, std::size_t n_train) = 0;
  /// Discretized test trajectories, nM x (N_t + 1) each.
  virtual std::vector<Eigen::MatrixXd> tests(const DiscretizationGrid& grid) = 0;
};

/// Trajectories of a DDE from constant histories; test initial conditions use
/// a separate seed stream and are checked against every training one.
class DdeSource final : public ExperimentSource {
 public:
  explicit DdeSource(const ExperimentConfig& config);

  std::string name() const override { return system_.name; }
  std::size_t dim() const override { return system_.state_dim; }
  double delay() const override { return system_.delay; }
  double sample_interval() const override { return options_.sample_interval; }
  TransitionDataset training(const DiscretizationGrid& grid, std::size_t n_train) override;
  std::vector<Eigen::MatrixXd> tests(const DiscretizationGrid& grid) override;

  const std::vector<Trajectory>& training_trajectories(std::size_t n_train);
  const std::vector<Trajectory>& test_trajectories();

 private:
  DdeSystem system_;
  IntegrationOptions options_;
  std::vector<std::pair<double, double>> bounds_;
  std::uint64_t train_seed_;
  std::uint64_t test_seed_;
  std::size_t n_test_;
  std::vector<Trajectory> train_;  // grows as larger n_train is requested
  std::vector<Trajectory> test_;
};

/// Fixed-point test hook: pairs (z, z) at uniform random states of the box
/// [bounds]^M. Test trajectories sit at training states, which are all
/// centers once p >= n_train, so the exact answer is reachable.
class IdentitySource final : public ExperimentSource {
 public:
  explicit IdentitySource(const ExperimentConfig& config);

  std::string name() const override { return "identity"; }
  std::size_t dim() const override { return bounds_.size(); }
  double delay() const override { return 1.0; }
  double sample_interval() const override { return sample_interval_; }
  TransitionDataset training(const DiscretizationGrid& grid, std::size_t n_train) override;
  std::vector<Eigen::MatrixXd> tests(const DiscretizationGrid& grid) override;

 private:
  Eigen::MatrixXd states(const DiscretizationGrid& grid, std::size_t count) const;

  std::vector<std::pair<double, double>> bounds_;
  double sample_interval_;
  std::size_t steps_;
  std::uint64_t train_seed_;
  std::uint64_t test_seed_;
  std::size_t n_test_;
  std::size_t n_train_max_ = 0;
};

std::unique_ptr<ExperimentSource> make_source(const ExperimentConfig& config);

struct CellResult {
  std::string system;
  std::size_t M = 0;
  std::size_t p_requested = 0;
  double fill_target = 0.0;
  double rho = 0.0;
  std::size_t d = 0;
  std::size_t n_train = 0;
  std::string status = "ok";
  std::string message;
  // Valid only when status == "ok".
  std::size_t p = 0;
  double h_fill = 0.0;
  double lambda = 0.0;
  double cond_est = 0.0;
  ErrorCurve curve;
  Eigen::MatrixXd errors;  // n_test x N_t

  bool ok() const noexcept { return status == "ok"; }
  std::string tag() const;  // file-name safe cell id
};

struct ExperimentResult {
  std::vector<CellResult> cells;
};

/// Runs every (M, p or fill target, rho) cell. Numerical failures are
/// recorded per cell; the sweep continues. Writes CSVs (and SVG plots when
/// enabled) under config.output_dir when `write_files` is set.
/// Called after each successful fit, before the test rollouts.
using FitObserver = std::function<void(const CellResult& cell, const KoopmanSurrogate& surrogate)>;

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files = true,
                                const FitObserver& observer = {});
ExperimentResult run_experiment(const ExperimentConfig& config, ExperimentSource& source,
                                bool write_files = true, const FitObserver& observer = {});

void write_summary_csv(std::ostream& os, const ExperimentResult& result);
void write_curve_csv(std::ostream& os, const ErrorCurve& curve);
/// k,t,e1..e_ntest
void write_errors_csv(std::ostream& os, const Eigen::MatrixXd& errors, double sample_interval);

/// Current-value block (theta_M) of truth and prediction, paired per step:
/// one row per k = 0..N_t with columns t, x1_true, x1_pred, ..., xn_true, xn_pred.
Eigen::MatrixXd compare_current_value(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& truth,
                                      std::size_t dim, std::size_t points, double sample_interval);
void write_current_value_csv(std::ostream& os, const Eigen::MatrixXd& table);

/// Formats with 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace ddekoop
