// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [path-to-ddekoop-cli]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddekoop/config.hpp"
#include "ddekoop/dde.hpp"
#include "ddekoop/discretize.hpp"
#include "ddekoop/error.hpp"
#include "ddekoop/harness.hpp"
#include "ddekoop/kedmd.hpp"
#include "ddekoop/kernel.hpp"
#include "ddekoop/serialize.hpp"
#include "oracles.hpp"

using namespace ddekoop;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void info(const std::string& s) { std::printf("  info: %s\n", s.c_str()); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  std::printf("criterion %d: %s\n", id, name.c_str());
  std::fflush(stdout);
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail += " [runtime limit " + fmt("%.0f", limit_s) + " s exceeded]";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Surrogates fitted in criteria 5-7, checked by criterion 8.
struct NodeCheck {
  std::string label;
  double error = 0.0;
  double bound = 0.0;
};
std::vector<NodeCheck> node_checks;

void record_nodes(const std::string& label, const KoopmanSurrogate& s) {
  const Eigen::MatrixXd& c = s.centers();
  double err = 0.0, zmax = 0.0;
  for (Eigen::Index l = 0; l < c.cols(); ++l) {
    err = std::max(err, (s.reconstruct_state(s.lift(c.col(l))) - c.col(l)).norm());
    zmax = std::max(zmax, c.col(l).norm());
  }
  node_checks.push_back({label, err, 1e-6 * (1.0 + zmax)});
}

// ---------------------------------------------------------------------------

Outcome operator_identities() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> nd(1, 3), md(2, 12);
  std::uniform_real_distribution<double> tau(0.5, 3.0), val(-5.0, 5.0);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = nd(rng), m = md(rng);
    const DiscretizationGrid g(m, tau(rng));
    Eigen::VectorXd v(static_cast<Eigen::Index>(n * m));
    for (auto& x : v) x = val(rng);
    const DiscretizedState z(n, m, v);
    const DiscretizedState back = sample(reconstruct(z, g), g);
    for (Eigen::Index k = 0; k < v.size(); ++k) mismatches += back.data[k] != v[k];
  }
  o.detail = "Q(R(z)) mismatched entries over 1000 states: " + std::to_string(mismatches);
  o.pass = mismatches == 0;

  const double two_pi = 2.0 * std::acos(-1.0);
  const HistorySegment eta = HistorySegment::function(1.0, 1, [&](double th, std::span<double> out) {
    out[0] = std::sin(two_pi * th);
  });
  double prev = INFINITY;
  for (std::size_t m : {2, 3, 5, 11, 101}) {
    const DiscretizationGrid g(m, 1.0);
    const HistorySegment pe = project(eta, g);
    double sup = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      const double th = -1.0 + i * 1e-4;
      sup = std::max(sup, std::abs(eta(th)[0] - pe(th)[0]));
    }
    const double bound = two_pi * g.spacing();
    const bool ok = sup <= bound && sup <= prev;
    o.pass = o.pass && ok;
    o.detail += "; M=" + std::to_string(m) + " sup=" + fmt("%.3e", sup) + " bound=" + fmt("%.3e", bound);
    prev = sup;
  }
  return o;
}

Outcome integrator_oracle() {
  Outcome o;
  const DdeSystem lin{"linear", 1, 1.0, [](auto, auto xd, auto dx) { dx[0] = -xd[0]; }};
  const HistorySegment one = HistorySegment::constant(1.0, Eigen::VectorXd::Constant(1, 1.0));
  const Trajectory tr = integrate(lin, one, {2.0, 0.01, 0.001});
  const double e1 = std::abs(tr.state_at(1.0)[0] - oracle::linear_dde(1.0));
  const double e2 = std::abs(tr.state_at(2.0)[0] - oracle::linear_dde(2.0));
  o.pass = e1 <= 1e-8 && e2 <= 1e-8 && oracle::linear_dde(1.0) == 0.0 && oracle::linear_dde(2.0) == -0.5;
  o.detail = "|x(1)-0|=" + fmt("%.2e", e1) + " |x(2)+0.5|=" + fmt("%.2e", e2);

  // On [0, 2] the solution is a low-degree polynomial reproduced to round-off;
  // the rate is measured at t = 6.
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025}) {
    err.push_back(std::abs(integrate(lin, one, {6.0, 0.1, h}).state_at(6.0)[0] - oracle::linear_dde(6.0)));
  }
  const double f1 = err[0] / err[1], f2 = err[1] / err[2];
  o.pass = o.pass && f1 >= 8.0 && f2 >= 8.0;
  o.detail += "; halving factors at t=6: " + fmt("%.2f", f1) + ", " + fmt("%.2f", f2);
  return o;
}

Outcome kernel_correctness() {
  Outcome o;
  const WendlandKernel k2(2, 1.0);
  bool exact = k2.profile(0.0) == 1.0;
  for (double r : {1.0, 1.0 + 1e-15, 1.5, 2.0, 10.0, 1e6}) exact = exact && k2.profile(r) == 0.0;
  const double half = k2.profile(0.5);
  const double half_oracle = oracle::wendland_expanded(5, 0.5);
  o.pass = exact && k2.degree() == 5 && std::abs(half - 0.1875) <= 1e-15 && std::abs(half_oracle - 0.1875) <= 1e-15;
  o.detail = std::string("Phi(0)=1, Phi(r>=1)=0 ") + (exact ? "exact" : "NOT exact") + "; Phi(0.5)=" +
             fmt("%.17g", half) + " (expanded " + fmt("%.17g", half_oracle) + ")";

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t sets = 0, bad = 0;
  double worst_jitter = 0.0, min_eig = INFINITY;
  for (std::size_t dim : {1, 2, 3, 4, 6}) {
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::MatrixXd c(static_cast<Eigen::Index>(dim), 50);
      for (Eigen::Index j = 0; j < c.size(); ++j) c.data()[j] = u(rng);
      const double scale = ScalePolicy{}.resolve(c);
      const GramFactorization g(WendlandKernel(dim, scale), c);
      const Eigen::MatrixXd shifted = g.gram() + g.jitter() * Eigen::MatrixXd::Identity(50, 50);
      const double e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(shifted, Eigen::EigenvaluesOnly).eigenvalues()(0);
      worst_jitter = std::max(worst_jitter, g.jitter());
      min_eig = std::min(min_eig, e);
      ++sets;
      bad += !(e > 0.0 && g.jitter() <= 1e-8);
    }
  }
  o.pass = o.pass && bad == 0;
  o.detail += "; " + std::to_string(sets) + " Gram sets, max lambda=" + fmt("%.1e", worst_jitter) +
              " min eigenvalue=" + fmt("%.3e", min_eig);
  return o;
}

Outcome regression_exactness() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_f = 0.0, worst_b = 0.0;
  std::size_t checked = 0, not_ok = 0;
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{1, 2}, {1, 3}, {2, 2}, {2, 3}}) {
    const auto D = static_cast<Eigen::Index>(n * m);
    Eigen::VectorXd a(D);
    Eigen::MatrixXd B(D, D);
    for (auto& x : a) x = u(rng);
    for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = 0.5 * u(rng);
    Eigen::MatrixXd X(D, 8000);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = u(rng);
    const Eigen::MatrixXd Y = (B * X).colwise() + a;
    const TransitionDataset ds(n, m, 0.01, 1.0, X, Y);
    const CenterSet cs = select_centers(ds, 40, CenterStrategy::GreedyFarthest, 0);
    const double rho = 1.5;
    const NeighborIndex index(ds, rho);
    for (Eigen::Index l = 0; l < cs.points.cols(); ++l) {
      const LocalRegression r = local_regression(index, cs.points.col(l), rho, default_neighbor_count(static_cast<std::size_t>(D)));
      ++checked;
      if (r.status != RegressionStatus::Ok) {
        ++not_ok;
        continue;
      }
      const Eigen::VectorXd truth = a + B * cs.points.col(l);
      worst_f = std::max(worst_f, (r.F_hat - truth).norm() / truth.norm());
      worst_b = std::max(worst_b, (r.B_hat - B).norm() / B.norm());
    }
  }
  o.pass = not_ok == 0 && worst_f <= 1e-8 && worst_b <= 1e-8;
  o.detail = std::to_string(checked) + " centers, " + std::to_string(not_ok) + " not ok, max rel err F=" +
             fmt("%.2e", worst_f) + " B=" + fmt("%.2e", worst_b);

  // Identity dynamics.
  Eigen::MatrixXd Z(2, 400);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = u(rng);
  const TransitionDataset id(1, 2, 0.01, 1.0, Z, Z);
  FitOptions fo;
  fo.p = 60;
  fo.rho = 0.5;
  const KoopmanSurrogate s = fit(id, fo);
  const double dev = (s.koopman() - Eigen::MatrixXd::Identity(60, 60)).cwiseAbs().maxCoeff();
  o.pass = o.pass && dev <= 1e-6;
  o.detail += "; identity: max|A-I|=" + fmt("%.2e", dev);
  return o;
}

DiscretizedState oracle_successor(const DdeSystem& sys, const DiscretizationGrid& g, const Eigen::VectorXd& z) {
  const Trajectory tr = integrate(sys, reconstruct(DiscretizedState(sys.state_dim, g.points(), z), g), {0.01, 0.01, 0.001});
  return sample(tr.segment(1), g);
}

Outcome rho_scaling() {
  Outcome o;
  const DdeSystem sys = hill_system();
  const DiscretizationGrid g(2, sys.delay);
  std::vector<Trajectory> trs;
  for (const auto& h : sample_initial_histories(sys, 20, default_initial_bounds("hill"), 1)) {
    trs.push_back(integrate(sys, h, {10.0, 0.01, 0.001}));
  }
  const TransitionDataset raw = build_dataset(trs, g);

  // Successors replaced by the induced map of the predecessor, so the
  // regression sees F~ and not F~ plus the discretization residual.
  Eigen::MatrixXd succ(raw.predecessors().rows(), raw.predecessors().cols());
  const Eigen::Index pairs = succ.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < pairs; ++i) succ.col(i) = oracle_successor(sys, g, raw.predecessors().col(i)).data;
  const TransitionDataset ds(1, 2, 0.01, sys.delay, raw.predecessors(), succ);
  info("raw pairs vs induced map: max ||z+ - F~(z)|| = " + fmt("%.3e", (raw.successors() - succ).colwise().norm().maxCoeff()));

  const CenterSet cs = select_centers(ds, 121, CenterStrategy::GreedyFarthest, 0);
  const std::vector<double> rhos = {0.4, 0.2, 0.1};
  const std::size_t d = 10;
  const auto p = cs.points.cols();
  std::vector<Eigen::VectorXd> oracle(static_cast<std::size_t>(p));
  for (Eigen::Index l = 0; l < p; ++l) oracle[static_cast<std::size_t>(l)] = oracle_successor(sys, g, cs.points.col(l)).data;

  Eigen::MatrixXd err(p, 3), raw_err(p, 3);
  std::vector<bool> valid(static_cast<std::size_t>(p), true);
  for (std::size_t r = 0; r < rhos.size(); ++r) {
    const NeighborIndex idx(ds, rhos[r]), raw_idx(raw, rhos[r]);
    for (Eigen::Index l = 0; l < p; ++l) {
      const LocalRegression a = local_regression(idx, cs.points.col(l), rhos[r], d, NeighborPolicy::Spread);
      const LocalRegression b = local_regression(raw_idx, cs.points.col(l), rhos[r], d, NeighborPolicy::Spread);
      if (a.status != RegressionStatus::Ok || b.status != RegressionStatus::Ok) {
        valid[static_cast<std::size_t>(l)] = false;
        continue;
      }
      err(l, static_cast<Eigen::Index>(r)) = (a.F_hat - oracle[static_cast<std::size_t>(l)]).norm();
      raw_err(l, static_cast<Eigen::Index>(r)) = (b.F_hat - oracle[static_cast<std::size_t>(l)]).norm();
    }
  }
  std::size_t count = 0;
  double mx[3] = {0, 0, 0}, raw_mx[3] = {0, 0, 0};
  for (Eigen::Index l = 0; l < p; ++l) {
    if (!valid[static_cast<std::size_t>(l)]) continue;
    ++count;
    for (int r = 0; r < 3; ++r) {
      mx[r] = std::max(mx[r], err(l, r));
      raw_mx[r] = std::max(raw_mx[r], raw_err(l, r));
    }
  }
  info("raw trajectory pairs, max error at rho 0.4/0.2/0.1: " + fmt("%.3e", raw_mx[0]) + " " +
       fmt("%.3e", raw_mx[1]) + " " + fmt("%.3e", raw_mx[2]));

  for (double rho : rhos) {
    FitOptions fo;
    fo.p = 121;
    fo.rho = rho;
    fo.d = d;
    try {
      record_nodes("c5 rho=" + fmt("%g", rho), fit(ds, fo));
    } catch (const Error& e) {
      info("c5 surrogate at rho=" + fmt("%g", rho) + " not fitted: " + e.what());
    }
  }

  const double f1 = mx[0] / mx[1], f2 = mx[1] / mx[2];
  o.pass = count > 0 && f1 >= 3.0 && f2 >= 3.0;
  o.detail = std::to_string(count) + "/" + std::to_string(p) + " centers valid at all radii; max error " +
             fmt("%.3e", mx[0]) + " -> " + fmt("%.3e", mx[1]) + " -> " + fmt("%.3e", mx[2]) +
             "; reduction per halving " + fmt("%.2f", f1) + ", " + fmt("%.2f", f2) + " (need >= 3)";
  return o;
}

ExperimentConfig hill_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.system = "hill";
  c.train_seed = seed;
  c.plots = false;
  return c;
}

ExperimentResult observed_run(const ExperimentConfig& cfg, const std::string& prefix) {
  return run_experiment(cfg, false, [&](const CellResult& cell, const KoopmanSurrogate& s) {
    record_nodes(prefix + " " + cell.curve.label, s);
  });
}

std::string means(const ExperimentResult& r) {
  std::string s;
  for (const auto& c : r.cells) {
    s += (s.empty() ? "" : " ");
    s += c.ok() ? fmt("%.4g", c.curve.mean_mu) : c.status;
  }
  return s;
}

bool all_ok(const ExperimentResult& r) {
  return std::all_of(r.cells.begin(), r.cells.end(), [](const CellResult& c) { return c.ok(); });
}

Outcome trend_reproduction() {
  Outcome o;
  int a_ok = 0, b_ok = 0, c_ok = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const std::string tag = "seed " + std::to_string(seed);

    ExperimentConfig a = hill_config(seed);
    a.M = {2, 3};
    a.fill_distance = {0.05};
    a.rho = {0.3};
    a.n_train = {20, 40};
    const ExperimentResult ra = observed_run(a, "c6a " + tag);
    const bool pa = all_ok(ra) && ra.cells[1].curve.mean_mu < ra.cells[0].curve.mean_mu;
    info("(a) " + tag + " M=2 p=" + std::to_string(ra.cells[0].p) + " h=" + fmt("%.4f", ra.cells[0].h_fill) +
         ", M=3 p=" + std::to_string(ra.cells[1].p) + " h=" + fmt("%.4f", ra.cells[1].h_fill) +
         "; mean mu " + means(ra) + (pa ? "" : "  <- violated"));

    ExperimentConfig b = hill_config(seed);
    b.M = {2};
    b.p = {25, 64, 121};
    b.rho = {0.3};
    b.n_train = {20};
    const ExperimentResult rb = observed_run(b, "c6b " + tag);
    const bool pb = all_ok(rb) && rb.cells[1].curve.mean_mu < rb.cells[0].curve.mean_mu &&
                    rb.cells[2].curve.mean_mu < rb.cells[1].curve.mean_mu;
    info("(b) " + tag + " p=25,64,121 mean mu " + means(rb) + (pb ? "" : "  <- violated"));

    ExperimentConfig c = hill_config(seed);
    c.M = {2};
    c.p = {169};
    c.rho = {0.5, 0.3, 0.15};
    c.n_train = {20};
    const ExperimentResult rc = observed_run(c, "c6c " + tag);
    const bool pc = all_ok(rc) && rc.cells[1].curve.mean_mu < rc.cells[0].curve.mean_mu &&
                    rc.cells[2].curve.mean_mu < rc.cells[1].curve.mean_mu;
    info("(c) " + tag + " rho=0.5,0.3,0.15 mean mu " + means(rc) + (pc ? "" : "  <- violated"));

    a_ok += pa;
    b_ok += pb;
    c_ok += pc;
  }
  o.pass = a_ok == 3 && b_ok == 3 && c_ok == 3;
  o.detail = "(a) " + std::to_string(a_ok) + "/3, (b) " + std::to_string(b_ok) + "/3, (c) " + std::to_string(c_ok) +
             "/3 seeds";
  return o;
}

// Current-value table of test trajectory 1 for the single cell of `cfg`.
Eigen::MatrixXd tracking_table(const ExperimentConfig& cfg, const std::string& label) {
  DdeSource source(cfg);
  std::optional<KoopmanSurrogate> fitted;
  const ExperimentResult r = run_experiment(cfg, source, false, [&](const CellResult& cell, const KoopmanSurrogate& s) {
    record_nodes(label + " " + cell.curve.label, s);
    fitted.emplace(s);
  });
  if (!fitted) throw Error(ErrorKind::FitFailed, label + ": " + r.cells.front().message);
  const DiscretizationGrid g(cfg.M.front(), source.delay());
  const Eigen::MatrixXd truth = source.tests(g).front();
  const Eigen::MatrixXd pred = fitted->rollout(truth.col(0), static_cast<std::size_t>(truth.cols() - 1));
  info(label + ": mean mu over all 15 test trajectories " + fmt("%.4g", r.cells.front().curve.mean_mu));
  return compare_current_value(pred, truth, source.dim(), g.points(), source.sample_interval());
}

Outcome tracking() {
  Outcome o;
  ExperimentConfig hill = hill_config(1);
  hill.M = {2};
  hill.p = {121};
  hill.rho = {0.3};
  hill.n_train = {20};
  const Eigen::MatrixXd th = tracking_table(hill, "c7 hill");
  const double range = th.col(1).maxCoeff() - th.col(1).minCoeff();
  const double dev = (th.col(1) - th.col(2)).cwiseAbs().maxCoeff();
  const bool hill_ok = dev <= 0.1 * range;
  o.detail = "hill max|x-x_hat|/range=" + fmt("%.3f", dev / range) + " (need <= 0.1)";

  ExperimentConfig tumor;
  tumor.system = "tumor";
  tumor.M = {2};
  tumor.p = {1200};
  tumor.rho = {1.0};
  tumor.n_train = {20};
  tumor.plots = false;
  const Eigen::MatrixXd tt = tracking_table(tumor, "c7 tumor");
  bool tumor_ok = true;
  for (int i = 0; i < 2; ++i) {
    const auto truth = tt.col(1 + 2 * i), pred = tt.col(2 + 2 * i);
    const double rel = ((truth - pred).cwiseAbs().array() / truth.cwiseAbs().array()).maxCoeff();
    tumor_ok = tumor_ok && rel <= 0.2;
    o.detail += "; tumor x" + std::to_string(i + 1) + " max relative deviation=" + fmt("%.3f", rel);
  }
  o.detail += " (need <= 0.2)";
  o.pass = hill_ok && tumor_ok;
  return o;
}

Outcome node_exactness() {
  Outcome o;
  std::size_t bad = 0;
  double worst = 0.0;
  for (const auto& c : node_checks) {
    worst = std::max(worst, c.error / c.bound);
    if (!(c.error <= c.bound)) {
      ++bad;
      info("node exactness violated: " + c.label + " error=" + fmt("%.3e", c.error));
    }
  }
  o.pass = !node_checks.empty() && bad == 0;
  o.detail = std::to_string(node_checks.size()) + " surrogates, " + std::to_string(bad) +
             " violations, worst error/bound=" + fmt("%.3e", worst);
  return o;
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path other = b / fs::relative(e.path(), a);
    if (!fs::exists(other) || read_file(e.path()) != read_file(other)) return false;
    ++files;
  }
  return files > 0;
}

Outcome determinism(const std::string& cli, const fs::path& work) {
  Outcome o;
  ExperimentConfig cfg = hill_config(7);
  cfg.M = {2, 3};
  cfg.p = {49};
  cfg.rho = {0.3, 0.5};
  cfg.n_train = {6, 8};
  cfg.n_test = 4;
  cfg.plots = true;
  for (const char* run : {"run1", "run2"}) {
    cfg.output_dir = (work / run).string();
    fs::remove_all(cfg.output_dir);
    run_experiment(cfg);
  }
  std::size_t files = 0;
  const bool same = same_tree(work / "run1", work / "run2", files);
  o.pass = same;
  o.detail = "experiment outputs " + std::string(same ? "byte-identical" : "DIFFER") + " (" + std::to_string(files) + " files)";

  // Save/load round trip.
  const DdeSystem sys = hill_system();
  std::vector<Trajectory> trs;
  for (const auto& h : sample_initial_histories(sys, 5, default_initial_bounds("hill"), 3)) {
    trs.push_back(integrate(sys, h, {10.0, 0.01, 0.001}));
  }
  FitOptions fo;
  fo.p = 60;
  fo.seed = 3;
  const KoopmanSurrogate s = fit(build_dataset(trs, DiscretizationGrid(2, 1.0)), fo);
  const fs::path file = work / "roundtrip.cbor";
  save_surrogate(file.string(), s);
  const KoopmanSurrogate loaded = load_surrogate(file.string());
  const Eigen::VectorXd z0 = Eigen::VectorXd::Constant(2, 0.9);
  const Eigen::MatrixXd r1 = s.rollout(z0, 1000), r2 = loaded.rollout(z0, 1000);
  const bool rt = r1.cols() == r2.cols() && std::memcmp(r1.data(), r2.data(), sizeof(double) * r1.size()) == 0 &&
                  surrogate_to_bytes(s) == surrogate_to_bytes(loaded);
  o.pass = o.pass && rt;
  o.detail += std::string("; save/load rollout ") + (rt ? "bit-identical" : "DIFFERS");

  if (!cli.empty()) {
    bool cli_ok = true;
    std::string outputs[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path model = work / ("cli" + std::to_string(i) + ".cbor");
      const fs::path roll = work / ("cli" + std::to_string(i) + ".csv");
      const std::string fit_cmd = "\"" + cli + "\" fit --system hill --seed 3 --n-train 5 --p 60 --out \"" +
                                  model.string() + "\" > /dev/null";
      const std::string pred_cmd = "\"" + cli + "\" predict --surrogate \"" + model.string() +
                                   "\" --ic 0.9 --steps 1000 --out \"" + roll.string() + "\"";
      cli_ok = cli_ok && std::system(fit_cmd.c_str()) == 0 && std::system(pred_cmd.c_str()) == 0;
      outputs[i] = read_file(model) + read_file(roll);
    }
    std::ostringstream expect;
    expect << "k,t,z1,z2\n";
    for (Eigen::Index k = 0; k < r1.cols(); ++k) {
      expect << k << ',' << format_double(static_cast<double>(k) * 0.01) << ',' << format_double(r1(0, k)) << ','
             << format_double(r1(1, k)) << '\n';
    }
    cli_ok = cli_ok && outputs[0] == outputs[1] && !outputs[0].empty() && read_file(work / "cli0.csv") == expect.str();
    o.pass = o.pass && cli_ok;
    o.detail += std::string("; CLI fit/predict ") + (cli_ok ? "repeatable and equal to in-process rollout" : "MISMATCH");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path work = fs::absolute("acceptance_work");
  fs::create_directories(work);

  criterion(1, "operator identities", 1.0, operator_identities);
  criterion(2, "integrator oracle", 1.0, integrator_oracle);
  criterion(3, "kernel correctness", 5.0, kernel_correctness);
  criterion(4, "regression exactness", 10.0, regression_exactness);
  criterion(5, "rho^2 regression scaling (hill, M=2)", 120.0, rho_scaling);
  criterion(6, "error trends over M, p, rho (3 seeds)", 900.0, trend_reproduction);
  criterion(7, "current-value tracking (hill p=121, tumor p=1200)", 1200.0, tracking);
  criterion(8, "reconstruction node exactness", 0.0, node_exactness);
  criterion(9, "determinism and surrogate round trip", 0.0, [&] { return determinism(cli, work); });

  std::printf("acceptance: %d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
