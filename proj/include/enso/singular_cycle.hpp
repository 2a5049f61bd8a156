#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "enso/integrate.hpp"
#include "enso/model.hpp"
#include "enso/params.hpp"
#include "enso/reduced_flow.hpp"

namespace enso {

enum class SegmentKind { ReducedMs, ReducedM0, Layer };
[[nodiscard]] std::string to_string(SegmentKind kind);

/// One labeled piece of the concatenated slow/fast cycle, lifted to (x,y,z).
struct CycleSegment {
  std::string label;          ///< "S1", "S2", "F1", "S3" or "F2"
  SegmentKind kind = SegmentKind::Layer;
  std::vector<Vec3> points;
};

struct CycleOptions {
  /// z value at which the cycle leaves the x=0 sheet. When absent, the
  /// trajectory-taking overload fills it with the minimum z of a reference
  /// orbit; the plain overload requires it.
  std::optional<double> z_dep;
  /// Optional (x, z) start of S1; default is the landing point of F2, which
  /// closes the cycle.
  std::optional<std::array<double, 2>> s1_start;
  double fn_radius = 1e-4;     ///< termination ball around the folded node
  double layer_offset = 1e-6;  ///< seed offset and landing slack of fast jumps
  double seed_offset = 1e-6;   ///< eigenvector offset seeding S2 at EQ
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double arc_step = 1e-3;      ///< max arc-length step on slow segments
  double max_arc = 100.0;      ///< arc-length budget per slow segment
  double max_layer_time = 500.0;  ///< fast-time budget per jump
};

/// The five-segment skeleton: funnel approach S1 into the folded node,
/// FN-to-EQ connection S2 on the middle sheet, fast jump F1 to x=0, slow
/// drift S3 down the x=0 sheet, and fast jump F2 back to the attracting
/// left branch. Segments are stored in that fixed order; S2 is oriented
/// FN → EQ as the reduced flow (not the desingularized one) traverses it.
struct SingularCycle {
  std::vector<CycleSegment> segments;
  double closure_gap = 0.0;  ///< distance from F2 endpoint to S1 start
  FoldedSingularity fn;
  ReducedEquilibrium eq;
  double z_dep = 0.0;
  double y_dep = 0.0;      ///< y where the cycle leaves x=0
  double f2_target = 0.0;  ///< x of the attracting branch hit by F2

  [[nodiscard]] const CycleSegment& segment(const std::string& label) const;
};

/// Requires opts.z_dep. Throws std::invalid_argument on malformed options and
/// NumericalError naming the failed segment when a construction step fails
/// (folded node not a node, equilibrium missing, jump not converging).
[[nodiscard]] SingularCycle build_singular_cycle(const DimensionlessParams& q,
                                                 const CycleOptions& opts);

/// Fills z_dep from the minimum z sampled on the reference orbit (which
/// should already have its transient discarded), then builds as above.
[[nodiscard]] SingularCycle build_singular_cycle(const DimensionlessParams& q,
                                                 const Trajectory<3>& reference,
                                                 CycleOptions opts = {});

struct SegmentDistance {
  std::string label;
  double max_distance = 0.0;
};

struct CycleComparison {
  std::vector<SegmentDistance> segments;  ///< one entry per cycle segment
  double overall_max = 0.0;
};

/// Directed distance from the cycle to the orbit: for every cycle point, the
/// distance to the nearest point of the piecewise-linear orbit; reported as
/// the maximum per segment. The orbit is expected to be post-transient and
/// densely sampled.
[[nodiscard]] CycleComparison compare_cycle_to_orbit(const SingularCycle& cycle,
                                                     const Trajectory<3>& traj);

}  // namespace enso
