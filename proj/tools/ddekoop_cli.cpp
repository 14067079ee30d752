// ddekoop: simulate DDEs, fit kernel EDMD surrogates, run convergence sweeps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "ddekoop/config.hpp"
#include "ddekoop/dde.hpp"
#include "ddekoop/discretize.hpp"
#include "ddekoop/error.hpp"
#include "ddekoop/harness.hpp"
#include "ddekoop/kedmd.hpp"
#include "ddekoop/serialize.hpp"

using namespace ddekoop;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string system = "hill";
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
  double delay = 0.0;
  double horizon = 10.0;
  double sample_interval = 0.01;
  double step = 0.001;
};

/// Reads a numeric CSV (an optional non-numeric header line is skipped),
/// returning one column per row of the file.
Eigen::MatrixXd read_points_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw Error(ErrorKind::Io, "non-numeric row in '" + path + "'");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::Io, "ragged rows in '" + path + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Io, "no data rows in '" + path + "'");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.front().size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    for (std::size_t r = 0; r < rows[c].size(); ++r) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[c][r];
    }
  }
  return m;
}

std::ofstream open_out(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  return os;
}

HistorySegment constant_history(const DdeSystem& sys, const std::vector<double>& value) {
  if (value.size() != sys.state_dim) {
    throw Error(ErrorKind::Config, "--ic needs " + std::to_string(sys.state_dim) + " value(s) for " + sys.name);
  }
  return HistorySegment::constant(sys.delay, std::span<const double>(value));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Koopman surrogates of delay differential equations via kernel EDMD"};
  app.require_subcommand(1);
  Common co;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--system", co.system, "hill or tumor")->check(CLI::IsMember({"hill", "tumor"}));
    sub->add_option("--seed", co.seed, "random seed");
    sub->add_option("--threads", co.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--delay", co.delay, "delay (default: system value)");
    sub->add_option("--horizon", co.horizon, "simulated time span");
    sub->add_option("--dt", co.sample_interval, "sample interval Delta");
    sub->add_option("--step", co.step, "integrator step");
  };

  // simulate
  auto* sim = app.add_subcommand("simulate", "integrate trajectories from random constant histories");
  add_common(sim);
  std::size_t sim_count = 1;
  std::vector<double> sim_ic;
  sim->add_option("--count", sim_count, "number of trajectories")->check(CLI::PositiveNumber);
  sim->add_option("--ic", sim_ic, "explicit constant history value(s) instead of random ones")->delimiter(',');
  sim->add_option("--out", co.out, "output directory")->default_str("trajectories");

  // fit
  auto* fitc = app.add_subcommand("fit", "simulate training data and fit a surrogate");
  add_common(fitc);
  std::size_t fit_M = 2, fit_p = 121, fit_ntr = 20, fit_d = 0;
  double fit_rho = 0.3;
  std::string fit_neighbors = "spread", fit_strategy = "greedy_farthest";
  fitc->add_option("--M", fit_M, "discretization points")->check(CLI::Range(2, 1000));
  fitc->add_option("--p", fit_p, "number of centers")->check(CLI::PositiveNumber);
  fitc->add_option("--rho", fit_rho, "regression radius")->check(CLI::PositiveNumber);
  fitc->add_option("--d", fit_d, "neighbors per regression (0: max(nM+1, 10))");
  fitc->add_option("--n-train", fit_ntr, "training trajectories")->check(CLI::PositiveNumber);
  fitc->add_option("--neighbors", fit_neighbors, "nearest, ball or spread");
  fitc->add_option("--strategy", fit_strategy, "greedy_farthest, grid or random");
  fitc->add_option("--out", co.out, "surrogate file")->default_str("surrogate.cbor");

  // predict
  auto* pred = app.add_subcommand("predict", "roll out a saved surrogate from a constant history");
  add_common(pred);
  std::string pred_model;
  std::vector<double> pred_ic;
  std::size_t pred_steps = 1000;
  pred->add_option("--surrogate", pred_model, "surrogate file")->required();
  pred->add_option("--ic", pred_ic, "constant history value(s)")->delimiter(',')->required();
  pred->add_option("--steps", pred_steps, "rollout steps")->check(CLI::PositiveNumber);
  pred->add_option("--out", co.out, "rollout CSV")->default_str("rollout.csv");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a convergence sweep from a JSON config");
  std::string exp_config;
  std::vector<std::size_t> exp_M, exp_p;
  std::vector<double> exp_rho;
  std::optional<std::uint64_t> exp_seed;
  bool exp_full = false;
  exp->add_option("--config", exp_config, "experiment config (JSON)")->required();
  exp->add_option("--out", co.out, "output directory (overrides the config)");
  exp->add_option("--seed", exp_seed, "training seed (overrides the config)");
  exp->add_option("--M", exp_M, "override the M list")->delimiter(',');
  exp->add_option("--p", exp_p, "override the p list")->delimiter(',');
  exp->add_option("--rho", exp_rho, "override the rho list")->delimiter(',');
  exp->add_flag("--full-scale", exp_full, "use the full training sizes, 100 (M-1) trajectories");
  exp->add_option("--threads", co.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);

  // fill-distance
  auto* fd = app.add_subcommand("fill-distance", "max over cloud points of the distance to the nearest center");
  std::string fd_centers, fd_cloud;
  fd->add_option("--centers", fd_centers, "CSV, one center per row")->required();
  fd->add_option("--cloud", fd_cloud, "CSV, one point per row")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  }

  try {
#ifdef _OPENMP
    if (co.threads > 0) omp_set_num_threads(co.threads);
#endif
    if (*sim) {
      const DdeSystem sys = system_by_name(co.system, co.delay);
      const IntegrationOptions opts{co.horizon, co.sample_interval, co.step};
      std::vector<HistorySegment> ics;
      if (!sim_ic.empty()) {
        ics.push_back(constant_history(sys, sim_ic));
      } else {
        ics = sample_initial_histories(sys, sim_count, default_initial_bounds(sys.name), co.seed);
      }
      const std::string dir = co.out.empty() ? "trajectories" : co.out;
      fs::create_directories(dir);
      for (std::size_t i = 0; i < ics.size(); ++i) {
        const Trajectory tr = integrate(sys, ics[i], opts);
        auto os = open_out((fs::path(dir) / (sys.name + "_" + std::to_string(i) + ".csv")).string());
        write_trajectory_csv(os, tr);
      }
      std::cout << "wrote " << ics.size() << " trajectories to " << dir << '\n';
    } else if (*fitc) {
      const DdeSystem sys = system_by_name(co.system, co.delay);
      const IntegrationOptions opts{co.horizon, co.sample_interval, co.step};
      std::vector<Trajectory> trs;
      for (const auto& h : sample_initial_histories(sys, fit_ntr, default_initial_bounds(sys.name), co.seed)) {
        trs.push_back(integrate(sys, h, opts));
      }
      const TransitionDataset ds = build_dataset(trs, DiscretizationGrid(fit_M, sys.delay));
      FitOptions fo;
      fo.p = fit_p;
      fo.rho = fit_rho;
      fo.d = fit_d;
      fo.neighbors = parse_neighbor_policy(fit_neighbors);
      fo.strategy = parse_center_strategy(fit_strategy);
      fo.seed = co.seed;
      const KoopmanSurrogate s = fit(ds, fo);
      const std::string path = co.out.empty() ? "surrogate.cbor" : co.out;
      save_surrogate(path, s);
      const FitReport& r = s.report();
      std::cout << "p=" << r.centers << " h_fill=" << r.fill_distance << " lambda=" << r.jitter
                << " cond=" << r.condition_estimate << " failed=" << r.failed_centers.size() << " -> " << path
                << '\n';
    } else if (*pred) {
      const KoopmanSurrogate s = load_surrogate(pred_model);
      if (pred_ic.size() != s.dim()) {
        throw Error(ErrorKind::Config, "--ic needs " + std::to_string(s.dim()) + " value(s)");
      }
      const double dt = co.sample_interval;
      const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(pred_ic.data(), static_cast<Eigen::Index>(pred_ic.size()));
      const Eigen::VectorXd z0 = c.replicate(static_cast<Eigen::Index>(s.points()), 1);
      const Eigen::MatrixXd roll = s.rollout(z0, pred_steps);
      auto os = open_out(co.out.empty() ? "rollout.csv" : co.out);
      os << "k,t";
      for (Eigen::Index r = 0; r < roll.rows(); ++r) os << ",z" << (r + 1);
      os << '\n';
      for (Eigen::Index k = 0; k < roll.cols(); ++k) {
        os << k << ',' << format_double(static_cast<double>(k) * dt);
        for (Eigen::Index r = 0; r < roll.rows(); ++r) os << ',' << format_double(roll(r, k));
        os << '\n';
      }
    } else if (*exp) {
      ExperimentConfig cfg = load_config(exp_config);
      if (!co.out.empty()) cfg.output_dir = co.out;
      if (exp_seed) cfg.train_seed = *exp_seed;
      if (!exp_M.empty()) {
        cfg.M = exp_M;
        cfg.n_train.clear();
      }
      if (!exp_p.empty()) {
        cfg.p = exp_p;
        cfg.fill_distance.clear();
      }
      if (!exp_rho.empty()) cfg.rho = exp_rho;
      if (exp_full) {
        cfg.full_scale = true;
        cfg.n_train.clear();
      }
      cfg.validate();
      const ExperimentResult res = run_experiment(cfg);
      std::size_t failed = 0;
      for (const auto& c : res.cells) {
        std::cout << c.curve.label << ": ";
        if (c.ok()) {
          std::cout << "p=" << c.p << " mean_mu=" << c.curve.mean_mu << " final_mu=" << c.curve.final_mu << '\n';
        } else {
          ++failed;
          std::cout << c.message << '\n';
        }
      }
      std::cout << "summary: " << (fs::path(cfg.output_dir) / "summary.csv").string() << '\n';
      if (failed == res.cells.size()) return 2;
    } else if (*fd) {
      std::printf("%.17g\n", fill_distance(read_points_csv(fd_centers), read_points_csv(fd_cloud)));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numerical(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
