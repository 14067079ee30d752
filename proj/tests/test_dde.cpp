#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "ddekoop/dde.hpp"
#include "ddekoop/error.hpp"
#include "oracles.hpp"

using namespace ddekoop;

namespace {

DdeSystem linear_test_system() {
  return DdeSystem{"linear", 1, 1.0, [](auto, auto xd, auto dx) { dx[0] = -xd[0]; }};
}

Trajectory linear_solution(double horizon, double dt, double step) {
  const double one = 1.0;
  return integrate(linear_test_system(), HistorySegment::constant(1.0, std::span<const double>(&one, 1)),
                   {horizon, dt, step});
}

}  // namespace

TEST_CASE("hill right-hand side") {
  const DdeSystem s = hill_system();
  CHECK(s.delay == 1.0);
  CHECK(s.evaluate(Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 0.0))[0] == 1.0);
  CHECK(s.evaluate(Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 0.0))[0] == 0.0);
  CHECK(s.evaluate(Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, 1.0))[0] == 0.0);
}

TEST_CASE("tumor right-hand side") {
  const DdeSystem s = tumor_system();
  CHECK(s.delay == 1.64);
  Eigen::Vector2d r = s.evaluate(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0));
  CHECK(r[0] == doctest::Approx(0.04411).epsilon(1e-14));
  CHECK(r[1] == 0.0);
  r = s.evaluate(Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 0));
  CHECK(r[0] == doctest::Approx(0.04411).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(0.95962).epsilon(1e-14));
  // 0.04411 + 0.6913 * 1 / 2 - 0.0383 - 0.2288
  r = s.evaluate(Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 1));
  CHECK(r[0] == doctest::Approx(0.12266).epsilon(1e-13));
  CHECK(r[1] == 0.0);
}

TEST_CASE("system lookup") {
  CHECK(system_by_name("hill").name == "hill");
  CHECK(system_by_name("tumor", 2.0).delay == 2.0);
  CHECK_THROWS_AS(system_by_name("lorenz"), Error);
}

TEST_CASE("oracle pieces agree with the closed-form series") {
  for (double t : {0.0, 0.3, 1.0, 1.7, 2.0, 3.4, 6.0}) {
    CHECK(oracle::linear_dde(t) == doctest::Approx(oracle::linear_dde_series(t)).epsilon(1e-13));
  }
  CHECK(oracle::linear_dde(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(oracle::linear_dde(2.0) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("linear DDE: method-of-steps values at t = 1 and t = 2") {
  const Trajectory tr = linear_solution(2.0, 0.01, 0.001);
  CHECK(std::abs(tr.state_at(1.0)[0] - 0.0) <= 1e-8);
  CHECK(std::abs(tr.state_at(2.0)[0] + 0.5) <= 1e-8);
}

TEST_CASE("linear DDE: fourth-order convergence under step halving") {
  // On [0, 2] the solution is a polynomial of degree <= 2 and RK4 is exact,
  // so the rate is measured where the pieces have degree 6.
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025}) {
    err.push_back(std::abs(linear_solution(6.0, 0.1, h).state_at(6.0)[0] - oracle::linear_dde(6.0)));
  }
  CHECK(err[0] / err[1] >= 8.0);
  CHECK(err[1] / err[2] >= 8.0);
}

TEST_CASE("hill trajectory: half-step reference agrees over 10 s") {
  const DdeSystem s = hill_system();
  const HistorySegment h = HistorySegment::constant(1.0, Eigen::VectorXd::Constant(1, 0.7));
  const Trajectory a = integrate(s, h, {10.0, 0.01, 0.001});
  const Trajectory b = integrate(s, h, {10.0, 0.01, 0.0005});
  CHECK(std::abs(a.state_at(10.0)[0] - b.state_at(10.0)[0]) <= 1e-6);
}

TEST_CASE("tumor trajectory: half-step reference agrees over 10 s") {
  const DdeSystem s = tumor_system();
  const HistorySegment h = HistorySegment::constant(1.64, Eigen::Vector2d(0.8, 5.0));
  const Trajectory a = integrate(s, h, {10.0, 0.01, 0.001});
  const Trajectory b = integrate(s, h, {10.0, 0.01, 0.0005});
  CHECK((a.state_at(10.0) - b.state_at(10.0)).norm() <= 1e-6);
}

TEST_CASE("trajectory segments satisfy the shift identity") {
  const DdeSystem s = hill_system();
  const Trajectory tr = integrate(s, HistorySegment::constant(1.0, Eigen::VectorXd::Constant(1, 1.2)),
                                  {3.0, 0.01, 0.001});
  CHECK(tr.segment_count() == 301);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, -0.01);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < tr.segment_count(); k += 7) {
    const HistorySegment a = tr.segment(k);
    const HistorySegment b = tr.segment(k + 1);
    for (int i = 0; i < 100; ++i) {
      const double th = u(rng);
      worst = std::max(worst, std::abs(b(th)[0] - a(th + 0.01)[0]));
    }
  }
  CHECK(worst <= 1e-8 * (1.0 + 1.5));
}

TEST_CASE("integrate preconditions") {
  const DdeSystem s = hill_system();
  const HistorySegment h = HistorySegment::constant(1.0, Eigen::VectorXd::Constant(1, 1.0));
  CHECK_THROWS_AS(integrate(s, h, {10.0, 0.01, 0.003}), Error);  // step does not divide Delta
  CHECK_THROWS_AS(integrate(s, h, {10.0, 2.0, 2.0}), Error);     // step > delay
  const HistorySegment wrong = HistorySegment::constant(1.0, Eigen::Vector2d(1, 1));
  CHECK_THROWS_AS(integrate(s, wrong, {1.0, 0.01, 0.001}), Error);
}

TEST_CASE("divergent right-hand side raises NonFiniteState") {
  const DdeSystem blow{"blow", 1, 1.0, [](auto x, auto, auto dx) { dx[0] = x[0] * x[0] * x[0]; }};
  try {
    integrate(blow, HistorySegment::constant(1.0, Eigen::VectorXd::Constant(1, 10.0)), {10.0, 0.1, 0.01});
    FAIL("expected NonFiniteState");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFiniteState);
  }
}

TEST_CASE("initial history sampler") {
  const DdeSystem s = hill_system();
  auto zero = sample_initial_histories(s, 1, {{0.0, 0.0}}, 5);
  CHECK(zero.at(0)(-0.5)[0] == 0.0);

  auto a = sample_initial_histories(s, 3, {{0.0, 1.0}}, 42);
  auto b = sample_initial_histories(s, 3, {{0.0, 1.0}}, 42);
  for (int i = 0; i < 3; ++i) CHECK(a[i](0.0)[0] == b[i](0.0)[0]);

  for (const auto& h : sample_initial_histories(s, 100, {{0.1, 1.5}}, 9)) {
    CHECK(h(0.0)[0] >= 0.1);
    CHECK(h(0.0)[0] <= 1.5);
  }
  CHECK_THROWS_AS(sample_initial_histories(s, 2, {{1.0, 0.0}}, 1), Error);
}

TEST_CASE("trajectory CSV export") {
  const Trajectory tr = integrate(hill_system(), HistorySegment::constant(1.0, Eigen::VectorXd::Constant(1, 0.5)),
                                  {0.02, 0.01, 0.01});
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  const std::string s = os.str();
  CHECK(s.rfind("t,x1\n", 0) == 0);
  CHECK(s.find("0,0.5\n") != std::string::npos);
  std::size_t lines = 0;
  for (char c : s) lines += c == '\n';
  CHECK(lines == 4);  // header + knots at 0, 0.01, 0.02
}
