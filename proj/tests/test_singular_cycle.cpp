#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "enso/manifold.hpp"
#include "enso/singular_cycle.hpp"

using namespace enso;

namespace {

double dist(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

const SingularCycle& reference_cycle() {
  static const SingularCycle cycle = [] {
    CycleOptions opts;
    opts.z_dep = 0.5;
    return build_singular_cycle(DimensionlessParams{}, opts);
  }();
  return cycle;
}

}  // namespace

TEST_SUITE("singular_cycle") {

TEST_CASE("five segments come out in order with the right flow kinds") {
  const SingularCycle& cyc = reference_cycle();
  REQUIRE(cyc.segments.size() == 5);
  const std::vector<std::string> labels = {"S1", "S2", "F1", "S3", "F2"};
  const std::vector<SegmentKind> kinds = {
      SegmentKind::ReducedMs, SegmentKind::ReducedMs, SegmentKind::Layer,
      SegmentKind::ReducedM0, SegmentKind::Layer};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(cyc.segments[i].label == labels[i]);
    CHECK(cyc.segments[i].kind == kinds[i]);
    CHECK(cyc.segments[i].points.size() >= 10);
  }
  CHECK(to_string(SegmentKind::ReducedMs) == "reduced-Ms");
  CHECK(to_string(SegmentKind::ReducedM0) == "reduced-M0");
  CHECK(to_string(SegmentKind::Layer) == "layer");
  CHECK(&cyc.segment("S3") == &cyc.segments[3]);
  CHECK_THROWS_AS((void)cyc.segment("S9"), std::invalid_argument);
}

TEST_CASE("anchors sit at the frozen folded node and reduced saddle") {
  const SingularCycle& cyc = reference_cycle();
  CHECK(cyc.fn.x == doctest::Approx(-3.11254187011155).epsilon(1e-10));
  CHECK(cyc.fn.z == doctest::Approx(1.8330523815972437).epsilon(1e-10));
  CHECK(cyc.fn.y == doctest::Approx(-3.8487662745547323).epsilon(1e-10));
  CHECK(cyc.eq.x == doctest::Approx(-3.1065855256582431).epsilon(1e-10));
  CHECK(cyc.eq.z == doctest::Approx(1.8932927628291216).epsilon(1e-10));
  CHECK(cyc.eq.y == doctest::Approx(-3.784656324795805).epsilon(1e-10));
}

TEST_CASE("slow segments run between the expected endpoints") {
  const SingularCycle& cyc = reference_cycle();
  const Vec3 fn_pt = {cyc.fn.x, cyc.fn.y, cyc.fn.z};
  const Vec3 eq_pt = {cyc.eq.x, cyc.eq.y, cyc.eq.z};

  // S1 flows into the folded node and stops on the termination ball.
  CHECK(dist(cyc.segment("S1").points.back(), fn_pt) < 1e-2);
  // S2 is oriented node → equilibrium.
  CHECK(dist(cyc.segment("S2").points.front(), fn_pt) < 1e-2);
  CHECK(dist(cyc.segment("S2").points.back(), eq_pt) < 1e-3);
  // S3 lives on the x = 0 sheet, starting under the equilibrium and ending
  // at the prescribed departure height.
  const auto& s3 = cyc.segment("S3").points;
  for (const Vec3& p : s3) CHECK(p[0] == 0.0);
  CHECK(s3.front()[1] == doctest::Approx(cyc.eq.y).epsilon(1e-12));
  CHECK(s3.front()[2] == doctest::Approx(cyc.eq.z).epsilon(1e-12));
  CHECK(s3.back()[2] == doctest::Approx(0.5).epsilon(1e-8));

  // Slow Ms segments stay on the sheet chart.
  const DimensionlessParams q;
  for (const char* label : {"S1", "S2"}) {
    for (const Vec3& p : cyc.segment(label).points) {
      CHECK(std::abs(p[1] - ms_chart(p[0], p[2], q)) < 1e-12);
    }
  }
}

TEST_CASE("fast jumps conserve the slow variables exactly") {
  const SingularCycle& cyc = reference_cycle();
  for (const char* label : {"F1", "F2"}) {
    const auto& pts = cyc.segment(label).points;
    REQUIRE(pts.size() >= 2);
    for (const Vec3& p : pts) {
      CHECK(std::abs(p[1] - pts.front()[1]) <= 1e-12);
      CHECK(std::abs(p[2] - pts.front()[2]) <= 1e-12);
    }
  }
  // F1 rises from the middle sheet to just below x = 0.
  const auto& f1 = cyc.segment("F1").points;
  CHECK(f1.front()[0] == doctest::Approx(cyc.eq.x).epsilon(1e-4));
  CHECK(std::abs(f1.back()[0]) < 1e-4);
  CHECK(f1.back()[0] < 0.0);
  // F2 falls from x = 0 onto the attracting branch.
  const auto& f2 = cyc.segment("F2").points;
  CHECK(std::abs(f2.front()[0]) < 1e-4);
  CHECK(f2.back()[0] == doctest::Approx(cyc.f2_target).epsilon(1e-4));
}

TEST_CASE("departure and landing data are mutually consistent") {
  const SingularCycle& cyc = reference_cycle();
  const DimensionlessParams q;
  CHECK(cyc.z_dep == 0.5);

  // The reduced flow on x = 0 gives y ∝ (z − k)^(ρa) along S3.
  const double expected_y =
      cyc.eq.y * std::pow((cyc.z_dep - q.k) / (cyc.eq.z - q.k), q.rho * q.a);
  CHECK(cyc.y_dep == doctest::Approx(expected_y).epsilon(1e-6));
  CHECK(cyc.y_dep < 0.0);
  CHECK(cyc.y_dep > -1.0);

  // F2 lands on the attracting outer branch of the slow manifold.
  CHECK(cyc.f2_target < -6.0);
  CHECK(std::abs(manifold_residual({cyc.f2_target, cyc.y_dep, cyc.z_dep}, q)) <
        1e-8);
  CHECK(stability_ms(cyc.f2_target, cyc.z_dep, q) == SheetStability::Attracting);

  // The default S1 start is the F2 landing point, so the loop closes.
  CHECK(cyc.closure_gap < 1e-4);
}

TEST_CASE("departure heights outside the reachable window are rejected") {
  const DimensionlessParams q;
  CycleOptions opts;
  opts.z_dep = 0.2;  // below the x = 0 rest height z = k
  CHECK_THROWS_AS((void)build_singular_cycle(q, opts), NumericalError);
  opts.z_dep = 2.5;  // above the landing height of F1
  CHECK_THROWS_AS((void)build_singular_cycle(q, opts), NumericalError);
  opts.z_dep = 0.5;
  opts.arc_step = -1.0;
  CHECK_THROWS_AS((void)build_singular_cycle(q, opts), std::invalid_argument);
  CHECK_THROWS_AS((void)build_singular_cycle(q, CycleOptions{}),
                  std::invalid_argument);
}

TEST_CASE("a monostable parameter set has no cycle skeleton") {
  DimensionlessParams q;
  q.c = 0.9;  // no folds, no folded singularities
  CycleOptions opts;
  opts.z_dep = 0.5;
  CHECK_THROWS_AS((void)build_singular_cycle(q, opts), std::invalid_argument);
}

TEST_CASE("the trajectory overload reads z_dep off the reference orbit") {
  Trajectory<3> ref;
  ref.times = {0.0, 1.0, 2.0};
  ref.states = {{-4.0, -1.0, 0.8}, {-5.0, -2.0, 0.6}, {-3.0, -1.5, 1.2}};
  const SingularCycle cyc = build_singular_cycle(DimensionlessParams{}, ref);
  CHECK(cyc.z_dep == 0.6);

  Trajectory<3> empty;
  CHECK_THROWS_AS((void)build_singular_cycle(DimensionlessParams{}, empty),
                  std::invalid_argument);
}

TEST_CASE("comparison distance vanishes against the cycle itself") {
  CycleOptions opts;
  opts.z_dep = 0.5;
  opts.arc_step = 1e-2;  // coarse: keeps the O(N·M) comparison cheap
  const SingularCycle cyc = build_singular_cycle(DimensionlessParams{}, opts);

  Trajectory<3> orbit;
  for (const auto& seg : cyc.segments) {
    for (const Vec3& p : seg.points) {
      orbit.times.push_back(static_cast<double>(orbit.times.size()));
      orbit.states.push_back(p);
    }
  }
  const CycleComparison self = compare_cycle_to_orbit(cyc, orbit);
  REQUIRE(self.segments.size() == 5);
  CHECK(self.overall_max < 1e-12);

  // Shifting the orbit by 0.1 in x bounds every distance by 0.1 and keeps
  // the bound tight somewhere.
  for (auto& p : orbit.states) p[0] += 0.1;
  const CycleComparison shifted = compare_cycle_to_orbit(cyc, orbit);
  CHECK(shifted.overall_max <= 0.1 + 1e-9);
  CHECK(shifted.overall_max > 0.02);

  Trajectory<3> empty;
  CHECK_THROWS_AS((void)compare_cycle_to_orbit(cyc, empty),
                  std::invalid_argument);
}

}  // TEST_SUITE
