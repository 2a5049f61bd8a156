#include <array>
#include <cmath>
#include <limits>

#include <doctest.h>

#include "enso/integrate.hpp"

using namespace enso;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

IntegratorConfig tight(double t_end) {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  cfg.t_end = t_end;
  return cfg;
}

}  // namespace

TEST_SUITE("integrate") {

TEST_CASE("config validation rejects inconsistent settings") {
  IntegratorConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = IntegratorConfig{};
  cfg.t_end = cfg.t_begin;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = IntegratorConfig{};
  cfg.transient_discard = 2.0;  // >= span
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = IntegratorConfig{};
  cfg.sample_dt = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("exponential decay is integrated to the requested accuracy") {
  auto rhs = [](double, const std::array<double, 1>& y) {
    return std::array<double, 1>{-y[0]};
  };
  const auto traj = integrate<1>(rhs, {1.0}, tight(1.0));
  REQUIRE(traj.ok());
  CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(traj.states.back()[0] ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  CHECK(traj.steps_accepted > 0);
  CHECK(traj.size() == traj.steps_accepted + 1);  // every step + initial point
}

TEST_CASE("harmonic oscillator closes after one period") {
  auto rhs = [](double, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -y[0]};
  };
  const auto traj = integrate<2>(rhs, {1.0, 0.0}, tight(2.0 * kPi));
  REQUIRE(traj.ok());
  CHECK(traj.states.back()[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(traj.states.back()[1]) < 1e-8);
}

TEST_CASE("uniform sampling honors the transient and the grid") {
  auto rhs = [](double, const std::array<double, 1>& y) {
    return std::array<double, 1>{-y[0]};
  };
  IntegratorConfig cfg = tight(4.0);
  cfg.transient_discard = 1.0;
  cfg.sample_dt = 0.25;
  const auto traj = integrate<1>(rhs, {1.0}, cfg);
  REQUIRE(traj.ok());
  REQUIRE(traj.size() >= 13);  // 1.0, 1.25, ..., 4.0
  CHECK(traj.times.front() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(traj.times.back() == doctest::Approx(4.0).epsilon(1e-9));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(traj.states[i][0] ==
          doctest::Approx(std::exp(-traj.times[i])).epsilon(1e-8));
  }
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    CHECK(traj.times[i] - traj.times[i - 1] ==
          doctest::Approx(0.25).epsilon(1e-9));
  }
}

TEST_CASE("accepted-step output honors transient_discard") {
  auto rhs = [](double, const std::array<double, 1>& y) {
    return std::array<double, 1>{-y[0]};
  };
  IntegratorConfig cfg = tight(4.0);
  cfg.transient_discard = 2.0;
  const auto traj = integrate<1>(rhs, {1.0}, cfg);
  REQUIRE(traj.ok());
  REQUIRE(traj.size() > 0);
  CHECK(traj.times.front() >= 2.0);
  CHECK(traj.times.back() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("max_step caps the step size") {
  auto rhs = [](double, const std::array<double, 1>&) {
    return std::array<double, 1>{1.0};
  };
  IntegratorConfig cfg = tight(1.0);
  cfg.max_step = 0.01;
  const auto traj = integrate<1>(rhs, {0.0}, cfg);
  REQUIRE(traj.ok());
  CHECK(traj.steps_accepted >= 99);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    CHECK(traj.times[i] - traj.times[i - 1] <= 0.01 + 1e-12);
  }
}

TEST_CASE("events are localized to the requested tolerance") {
  auto rhs = [](double, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -y[0]};
  };
  Event<2> crossing;
  crossing.g = [](double, const std::array<double, 2>& y) { return y[0]; };
  crossing.direction = EventDirection::Falling;
  crossing.label = "x-falls-through-zero";
  const auto traj =
      integrate<2>(rhs, {1.0, 0.0}, tight(2.0 * kPi), {crossing});
  REQUIRE(traj.ok());
  REQUIRE(traj.events.size() == 1);  // one falling crossing per period
  CHECK(traj.events[0].label == "x-falls-through-zero");
  CHECK(std::abs(traj.events[0].t - kPi / 2.0) < 1e-8);
  CHECK(std::abs(traj.events[0].state[0]) < 1e-9);
}

TEST_CASE("a terminal event truncates the run with Success status") {
  auto rhs = [](double, const std::array<double, 1>& y) {
    return std::array<double, 1>{-y[0]};
  };
  Event<1> half;
  half.g = [](double, const std::array<double, 1>& y) { return y[0] - 0.5; };
  half.direction = EventDirection::Falling;
  half.label = "half-life";
  half.terminal = true;
  const auto traj = integrate<1>(rhs, {1.0}, tight(10.0), {half});
  REQUIRE(traj.ok());
  REQUIRE(traj.events.size() == 1);
  CHECK(traj.events[0].t == doctest::Approx(std::log(2.0)).epsilon(1e-8));
  CHECK(traj.times.back() == doctest::Approx(std::log(2.0)).epsilon(1e-8));
  CHECK(traj.states.back()[0] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("rising/falling filters select the matching crossings only") {
  auto rhs = [](double, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -y[0]};
  };
  Event<2> rising;
  rising.g = [](double, const std::array<double, 2>& y) { return y[0]; };
  rising.direction = EventDirection::Rising;
  rising.label = "rise";
  const auto traj =
      integrate<2>(rhs, {1.0, 0.0}, tight(4.0 * kPi), {rising});
  REQUIRE(traj.ok());
  REQUIRE(traj.events.size() == 2);  // 3π/2 and 7π/2
  CHECK(std::abs(traj.events[0].t - 1.5 * kPi) < 1e-8);
  CHECK(std::abs(traj.events[1].t - 3.5 * kPi) < 1e-8);
}

TEST_CASE("a non-finite initial field aborts immediately") {
  auto rhs = [](double, const std::array<double, 1>&) {
    return std::array<double, 1>{std::numeric_limits<double>::quiet_NaN()};
  };
  const auto traj = integrate<1>(rhs, {1.0}, tight(1.0));
  CHECK_FALSE(traj.ok());
  CHECK(traj.status == IntegratorStatus::NonFiniteState);
  CHECK_FALSE(traj.diagnostic.empty());
}

TEST_CASE("a field turning non-finite mid-run aborts with a partial path") {
  auto rhs = [](double t, const std::array<double, 1>& y) {
    return std::array<double, 1>{
        t < 0.5 ? -y[0] : std::numeric_limits<double>::quiet_NaN()};
  };
  const auto traj = integrate<1>(rhs, {1.0}, tight(1.0));
  CHECK_FALSE(traj.ok());
  CHECK(traj.status == IntegratorStatus::StepSizeUnderflow);
  REQUIRE(traj.size() > 0);
  CHECK(traj.times.back() <= 0.5 + 1e-6);
}

TEST_CASE("the step budget aborts runaway integrations") {
  auto rhs = [](double, const std::array<double, 1>& y) {
    return std::array<double, 1>{-y[0]};
  };
  IntegratorConfig cfg = tight(1000.0);
  cfg.max_steps = 10;
  const auto traj = integrate<1>(rhs, {1.0}, cfg);
  CHECK(traj.status == IntegratorStatus::MaxStepsExceeded);
}

TEST_CASE("poincare_samples interpolates section crossings of stored paths") {
  Trajectory<1> traj;
  for (int i = 0; i <= 1300; ++i) {
    const double t = 0.1 + 0.01 * i;
    traj.times.push_back(t);
    traj.states.push_back({std::sin(t)});
  }
  const auto hits = poincare_samples<1>(
      traj, [](const std::array<double, 1>& y) { return y[0]; },
      EventDirection::Rising, "upcross");
  REQUIRE(hits.size() == 2);
  CHECK(std::abs(hits[0].t - 2.0 * kPi) < 1e-3);
  CHECK(std::abs(hits[1].t - 4.0 * kPi) < 1e-3);
  CHECK(hits[0].label == "upcross");
}

}  // TEST_SUITE
