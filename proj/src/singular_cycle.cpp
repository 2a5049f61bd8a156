#include "enso/singular_cycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enso/manifold.hpp"
#include "enso/numerics.hpp"

namespace enso {

namespace {

constexpr const char* kBallLabel = "target-ball";

std::string seg_error(const char* segment, const std::string& what) {
  return std::string("singular cycle, segment ") + segment + ": " + what;
}

// Unit-speed desingularized integration toward a target ball. Arc length is
// the integration time, so max_step bounds the polyline spacing directly.
Trajectory<2> slow_arc(const DimensionlessParams& q, const Vec2& start,
                       const Vec2& target, const CycleOptions& opts,
                       const char* segment) {
  auto rhs = [&q, segment](double, const Vec2& u) -> Vec2 {
    const Vec2 v = desingularized_rhs(u, q);
    const double speed = std::hypot(v[0], v[1]);
    if (!(speed > 1e-300)) {
      throw NumericalError(seg_error(segment, "flow stalled at an equilibrium"));
    }
    return {v[0] / speed, v[1] / speed};
  };

  std::vector<Event<2>> events(2);
  const double radius = opts.fn_radius;
  events[0].g = [target, radius](double, const Vec2& u) {
    const double dx = u[0] - target[0];
    const double dz = u[1] - target[1];
    return dx * dx + dz * dz - radius * radius;
  };
  events[0].direction = EventDirection::Falling;
  events[0].label = kBallLabel;
  events[0].terminal = true;
  // Generous escape box around the region of interest; reaching it means the
  // construction failed.
  events[1].g = [](double, const Vec2& u) {
    return std::max(std::max(u[0] - 4.0, -16.0 - u[0]),
                    std::max(u[1] - 10.0, -6.0 - u[1]));
  };
  events[1].direction = EventDirection::Rising;
  events[1].label = "domain-exit";
  events[1].terminal = true;

  IntegratorConfig cfg;
  cfg.rel_tol = opts.rel_tol;
  cfg.abs_tol = opts.abs_tol;
  cfg.t_begin = 0.0;
  cfg.t_end = opts.max_arc;
  cfg.max_step = opts.arc_step;

  Trajectory<2> traj = integrate<2>(rhs, start, cfg, events);
  if (!traj.ok()) throw NumericalError(seg_error(segment, traj.diagnostic));
  const bool reached = !traj.events.empty() && traj.events.back().label == kBallLabel;
  if (!reached) {
    throw NumericalError(
        seg_error(segment, "did not reach the folded-node neighborhood"));
  }
  return traj;
}

Trajectory<3> layer_jump(const DimensionlessParams& q, const Vec3& start,
                         double x_stop, EventDirection dir,
                         const CycleOptions& opts, const char* segment) {
  auto rhs = [&q](double, const Vec3& u) { return layer_rhs(u, q); };
  std::vector<Event<3>> events(1);
  events[0].g = [x_stop](double, const Vec3& u) { return u[0] - x_stop; };
  events[0].direction = dir;
  events[0].label = "landing";
  events[0].terminal = true;

  IntegratorConfig cfg;
  cfg.rel_tol = opts.rel_tol;
  cfg.abs_tol = opts.abs_tol;
  cfg.t_begin = 0.0;
  cfg.t_end = opts.max_layer_time;

  Trajectory<3> traj = integrate<3>(rhs, start, cfg, events);
  if (!traj.ok()) throw NumericalError(seg_error(segment, traj.diagnostic));
  if (traj.events.empty()) {
    throw NumericalError(seg_error(segment, "jump did not converge"));
  }
  return traj;
}

std::vector<Vec3> lift_to_ms(const Trajectory<2>& arc,
                             const DimensionlessParams& q, bool reversed) {
  std::vector<Vec3> pts;
  pts.reserve(arc.size());
  for (std::size_t i = 0; i < arc.size(); ++i) {
    const auto& u = arc.states[reversed ? arc.size() - 1 - i : i];
    pts.push_back({u[0], ms_chart(u[0], u[1], q), u[1]});
  }
  return pts;
}

double dist3(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

}  // namespace

std::string to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::ReducedMs: return "reduced-Ms";
    case SegmentKind::ReducedM0: return "reduced-M0";
    case SegmentKind::Layer: return "layer";
  }
  return "unknown";
}

const CycleSegment& SingularCycle::segment(const std::string& label) const {
  for (const auto& seg : segments) {
    if (seg.label == label) return seg;
  }
  throw std::invalid_argument("unknown cycle segment: " + label);
}

SingularCycle build_singular_cycle(const DimensionlessParams& q,
                                   const CycleOptions& opts) {
  q.validate();
  if (!opts.z_dep) {
    throw std::invalid_argument(
        "singular cycle: z_dep required (or pass a reference trajectory)");
  }
  if (!(opts.fn_radius > 0.0) || !(opts.layer_offset > 0.0) ||
      !(opts.seed_offset > 0.0) || !(opts.arc_step > 0.0)) {
    throw std::invalid_argument("singular cycle: offsets must be positive");
  }

  SingularCycle cycle;
  cycle.z_dep = *opts.z_dep;

  // Anchors: the folded node on L− and the saddle of the reduced flow.
  std::optional<FoldedSingularity> fn;
  for (const FoldedSingularity& f : find_folded_singularities(q)) {
    if (f.side == -1 && f.x < 0.0 && f.kind == PlanarKind::Node &&
        (!fn || f.x > fn->x)) {
      fn = f;
    }
  }
  if (!fn) {
    throw NumericalError(
        "singular cycle: no folded node with x < 0 on L- (segment S1/S2 "
        "anchors missing)");
  }
  cycle.fn = *fn;

  std::optional<ReducedEquilibrium> eq;
  for (const ReducedEquilibrium& e : find_reduced_equilibria(q)) {
    if (e.x < 0.0 && (!eq || e.x > eq->x)) eq = e;
  }
  if (!eq || eq->kind != PlanarKind::Saddle) {
    throw NumericalError(
        "singular cycle: reduced equilibrium with x < 0 missing or not a "
        "saddle (segment S2 anchor)");
  }
  cycle.eq = *eq;

  // S2: the desingularized unstable manifold of EQ runs into the folded
  // node; traversed FN → EQ by the reduced flow (orientation is reversed
  // between the folds), so the polyline is stored reversed.
  const double mu_u =
      eq->mu1.real() > 0.0 ? eq->mu1.real() : eq->mu2.real();
  if (!(mu_u > 0.0)) {
    throw NumericalError(seg_error("S2", "equilibrium has no unstable direction"));
  }
  const Mat2 jac = desingularized_jacobian({eq->x, eq->z}, q);
  const auto v_u = eigvec_2x2(jac[0][0], jac[0][1], jac[1][0], jac[1][1], mu_u);
  const double toward_fn =
      v_u[0] * (fn->x - eq->x) + v_u[1] * (fn->z - eq->z) >= 0.0 ? 1.0 : -1.0;
  const Vec2 s2_seed = {eq->x + toward_fn * opts.seed_offset * v_u[0],
                        eq->z + toward_fn * opts.seed_offset * v_u[1]};
  const Trajectory<2> s2_arc =
      slow_arc(q, s2_seed, {fn->x, fn->z}, opts, "S2");

  // F1: fast escape from the repelling middle sheet at EQ up to x = 0.
  const Vec3 f1_start = {eq->x + opts.layer_offset, eq->y, eq->z};
  const Trajectory<3> f1 = layer_jump(q, f1_start, -opts.layer_offset,
                                      EventDirection::Rising, opts, "F1");

  // S3: slow drift on the x = 0 sheet from the F1 landing down to z_dep.
  const double z_dep = cycle.z_dep;
  if (!((z_dep > q.k && z_dep < eq->z) || (z_dep < q.k && z_dep > eq->z))) {
    throw NumericalError(
        seg_error("S3", "departure z is not between the landing z and k"));
  }
  auto m0_rhs = [&q](double, const Vec2& u) -> Vec2 {
    const Vec2 v = reduced_m0_rhs(u, q);
    const double speed = std::hypot(v[0], v[1]);
    if (!(speed > 1e-300)) {
      throw NumericalError(seg_error("S3", "flow stalled at the rest point"));
    }
    return {v[0] / speed, v[1] / speed};
  };
  std::vector<Event<2>> s3_events(1);
  s3_events[0].g = [z_dep](double, const Vec2& u) { return u[1] - z_dep; };
  s3_events[0].direction = EventDirection::Both;
  s3_events[0].label = "departure";
  s3_events[0].terminal = true;
  IntegratorConfig s3_cfg;
  s3_cfg.rel_tol = opts.rel_tol;
  s3_cfg.abs_tol = opts.abs_tol;
  s3_cfg.t_begin = 0.0;
  s3_cfg.t_end = opts.max_arc;
  s3_cfg.max_step = opts.arc_step;
  const Trajectory<2> s3 =
      integrate<2>(m0_rhs, {eq->y, eq->z}, s3_cfg, s3_events);
  if (!s3.ok()) throw NumericalError(seg_error("S3", s3.diagnostic));
  if (s3.events.empty()) {
    throw NumericalError(seg_error("S3", "departure z never attained"));
  }
  cycle.y_dep = s3.states.back()[0];

  // F2: fast jump from just left of x = 0 to the attracting outer branch.
  const auto branch = solve_x_on_ms(cycle.y_dep, z_dep, q);
  if (branch.empty()) {
    throw NumericalError(seg_error("F2", "no landing branch found"));
  }
  cycle.f2_target = branch.front().x;
  if (stability_ms(cycle.f2_target, z_dep, q) != SheetStability::Attracting) {
    throw NumericalError(seg_error("F2", "landing branch is not attracting"));
  }
  const Vec3 f2_start = {-opts.layer_offset, cycle.y_dep, z_dep};
  const Trajectory<3> f2 =
      layer_jump(q, f2_start, cycle.f2_target + opts.layer_offset,
                 EventDirection::Falling, opts, "F2");

  // S1: funnel approach into the folded node, by default from the F2 landing
  // so that the cycle closes.
  const Vec2 s1_start = opts.s1_start
                            ? Vec2{(*opts.s1_start)[0], (*opts.s1_start)[1]}
                            : Vec2{f2.states.back()[0], f2.states.back()[2]};
  const Trajectory<2> s1_arc =
      slow_arc(q, s1_start, {fn->x, fn->z}, opts, "S1");

  cycle.segments.push_back(
      {"S1", SegmentKind::ReducedMs, lift_to_ms(s1_arc, q, false)});
  cycle.segments.push_back(
      {"S2", SegmentKind::ReducedMs, lift_to_ms(s2_arc, q, true)});
  cycle.segments.push_back({"F1", SegmentKind::Layer, f1.states});
  std::vector<Vec3> s3_points;
  s3_points.reserve(s3.size());
  for (const auto& u : s3.states) s3_points.push_back({0.0, u[0], u[1]});
  cycle.segments.push_back({"S3", SegmentKind::ReducedM0, std::move(s3_points)});
  cycle.segments.push_back({"F2", SegmentKind::Layer, f2.states});

  cycle.closure_gap = dist3(cycle.segments.back().points.back(),
                            cycle.segments.front().points.front());
  return cycle;
}

SingularCycle build_singular_cycle(const DimensionlessParams& q,
                                   const Trajectory<3>& reference,
                                   CycleOptions opts) {
  if (reference.size() == 0) {
    throw std::invalid_argument("singular cycle: reference trajectory empty");
  }
  if (!opts.z_dep) {
    double z_min = std::numeric_limits<double>::infinity();
    for (const auto& u : reference.states) z_min = std::min(z_min, u[2]);
    opts.z_dep = z_min;
  }
  return build_singular_cycle(q, opts);
}

CycleComparison compare_cycle_to_orbit(const SingularCycle& cycle,
                                       const Trajectory<3>& traj) {
  if (traj.size() == 0) {
    throw std::invalid_argument("cycle comparison: empty trajectory");
  }
  const auto& s = traj.states;
  const std::size_t n = s.size();

  auto min_dist2 = [&](const Vec3& p) {
    double best = std::numeric_limits<double>::infinity();
    if (n == 1) {
      const double dx = p[0] - s[0][0], dy = p[1] - s[0][1], dz = p[2] - s[0][2];
      return dx * dx + dy * dy + dz * dz;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double abx = s[i + 1][0] - s[i][0];
      const double aby = s[i + 1][1] - s[i][1];
      const double abz = s[i + 1][2] - s[i][2];
      const double apx = p[0] - s[i][0];
      const double apy = p[1] - s[i][1];
      const double apz = p[2] - s[i][2];
      const double denom = abx * abx + aby * aby + abz * abz;
      double tt = denom > 0.0 ? (apx * abx + apy * aby + apz * abz) / denom : 0.0;
      tt = std::clamp(tt, 0.0, 1.0);
      const double dx = apx - tt * abx;
      const double dy = apy - tt * aby;
      const double dz = apz - tt * abz;
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < best) best = d2;
    }
    return best;
  };

  CycleComparison cmp;
  for (const CycleSegment& seg : cycle.segments) {
    double worst = 0.0;
    for (const Vec3& p : seg.points) worst = std::max(worst, min_dist2(p));
    cmp.segments.push_back({seg.label, std::sqrt(worst)});
    cmp.overall_max = std::max(cmp.overall_max, std::sqrt(worst));
  }
  return cmp;
}

}  // namespace enso
