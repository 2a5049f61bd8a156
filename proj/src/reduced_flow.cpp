#include "enso/reduced_flow.hpp"

#include <algorithm>
#include <cmath>

#include "enso/integrate.hpp"

namespace enso {

Vec2 reduced_m0_rhs(const Vec2& yz, const DimensionlessParams& q) {
  return {-q.rho * q.a * yz[0], q.k - yz[1]};
}

double desingularization_factor(const Vec2& xz, const DimensionlessParams& q) {
  return 1.0 - q.c * sech2_safe(xz[0] + xz[1]);
}

namespace {

/// Shared pieces of the on-Ms fields at (x, z).
struct MsTerms {
  double numerator;  ///< ρ(a·h + x²) + c·w·sech²
  double w;          ///< k − z − x/2
  double factor;     ///< 1 − c·sech²
};

MsTerms ms_terms(const Vec2& xz, const DimensionlessParams& q) {
  const double x = xz[0], z = xz[1];
  const double s2 = sech2_safe(x + z);
  const double h = -x - q.c + q.c * tanh_safe(x + z);
  MsTerms t;
  t.w = q.k - z - x / 2.0;
  t.numerator = q.rho * (q.a * h + x * x) + q.c * t.w * s2;
  t.factor = 1.0 - q.c * s2;
  return t;
}

}  // namespace

Vec2 reduced_ms_rhs(const Vec2& xz, const DimensionlessParams& q) {
  const auto t = ms_terms(xz, q);
  if (std::abs(t.factor) < 1e-12) {
    throw NumericalError(
        "reduced_ms_rhs: singular point on a fold curve; use the "
        "desingularized flow there");
  }
  return {t.numerator / t.factor, t.w};
}

Vec2 desingularized_rhs(const Vec2& xz, const DimensionlessParams& q) {
  const auto t = ms_terms(xz, q);
  return {t.numerator, t.factor * t.w};
}

Mat2 desingularized_jacobian(const Vec2& xz, const DimensionlessParams& q) {
  const double x = xz[0], z = xz[1];
  const double th = tanh_safe(x + z);
  const double s2 = 1.0 - th * th;
  const double w = q.k - z - x / 2.0;
  // d(sech²)/du = −2·tanh·sech²  feeds both rows.
  const double ds2 = -2.0 * th * s2;

  Mat2 jac{};
  jac[0][0] = q.rho * (q.a * (q.c * s2 - 1.0) + 2.0 * x) - q.c * s2 / 2.0 +
              q.c * w * ds2;
  jac[0][1] = q.rho * q.a * q.c * s2 - q.c * s2 + q.c * w * ds2;
  jac[1][0] = -q.c * ds2 * w - (1.0 - q.c * s2) / 2.0;
  jac[1][1] = -q.c * ds2 * w - (1.0 - q.c * s2);
  return jac;
}

std::vector<FoldedSingularity> find_folded_singularities(
    const DimensionlessParams& q) {
  q.validate();
  const auto folds = fold_curves(q);
  if (!folds.has_folds) {
    throw std::invalid_argument(
        "find_folded_singularities: c <= 1 admits no fold curves");
  }

  std::vector<FoldedSingularity> out;
  for (int side : {-1, +1}) {
    // On x + z = ±eta: sech² = 1/c and h = −x − c + c·tanh(±eta), so the
    // ẋ numerator restricted to the fold is the quadratic
    //   ρx² + (1/2 − ρa)x + (k ∓ eta − ρaB),  B = c − c·tanh(±eta).
    const double B = q.c - q.c * tanh_safe(side * folds.eta);
    const double A2 = q.rho;
    const double A1 = 0.5 - q.rho * q.a;
    const double A0 = q.k - side * folds.eta - q.rho * q.a * B;
    const double disc = A1 * A1 - 4.0 * A2 * A0;
    if (disc < 0.0) continue;  // no folded singularity on this fold line
    const double sq = std::sqrt(disc);
    const double big = (A1 >= 0.0) ? (-A1 - sq) / (2.0 * A2)
                                   : (-A1 + sq) / (2.0 * A2);
    const double small = (big != 0.0) ? A0 / (A2 * big) : -A1 / (2.0 * A2);
    std::vector<double> roots{big, small};
    if (disc == 0.0) roots.pop_back();

    for (double x : roots) {
      FoldedSingularity fs;
      fs.x = x;
      fs.z = side * folds.eta - x;
      fs.y = ms_chart(fs.x, fs.z, q);
      fs.side = side;
      fs.w = q.k - fs.z - fs.x / 2.0;
      const auto rhs_here = desingularized_rhs({fs.x, fs.z}, q);
      fs.residual = std::max(std::abs(rhs_here[0]), std::abs(rhs_here[1]));
      const auto jac = desingularized_jacobian({fs.x, fs.z}, q);
      const auto eig = eig_2x2(jac[0][0], jac[0][1], jac[1][0], jac[1][1]);
      // Order by magnitude: strong eigenvalue first.
      if (std::abs(eig.lambda1) >= std::abs(eig.lambda2)) {
        fs.mu_strong = eig.lambda1;
        fs.mu_weak = eig.lambda2;
      } else {
        fs.mu_strong = eig.lambda2;
        fs.mu_weak = eig.lambda1;
      }
      if (eig.degenerate) {
        fs.kind = PlanarKind::Degenerate;
      } else if (!eig.real) {
        fs.kind = PlanarKind::Focus;
      } else if (eig.lambda1.real() * eig.lambda2.real() < 0.0) {
        fs.kind = PlanarKind::Saddle;
      } else {
        fs.kind = PlanarKind::Node;
      }
      fs.stable = eig.lambda1.real() < 0.0 && eig.lambda2.real() < 0.0;
      out.push_back(fs);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FoldedSingularity& a, const FoldedSingularity& b) {
              return a.x < b.x;
            });
  return out;
}

std::vector<ReducedEquilibrium> find_reduced_equilibria(
    const DimensionlessParams& q, const ScanWindow& window) {
  q.validate();
  // Substituting the drift condition z = k − x/2 into the ẋ numerator kills
  // the sech² term, leaving the scalar equation a·h(x, k − x/2) + x² = 0.
  auto defining = [&](double x) {
    const double h = -x - q.c + q.c * tanh_safe(q.k + x / 2.0);
    return q.a * h + x * x;
  };
  const auto roots = scan_roots(defining, window.lo, window.hi, window.n);
  const auto folds = fold_curves(q);

  std::vector<ReducedEquilibrium> out;
  for (const auto& root : roots) {
    ReducedEquilibrium eq;
    eq.x = root.x;
    eq.z = q.k - root.x / 2.0;
    eq.y = ms_chart(eq.x, eq.z, q);
    eq.time_factor = desingularization_factor({eq.x, eq.z}, q);
    if (folds.has_folds) {
      const double offset = eq.x + eq.z;
      eq.strip_side = (offset < -folds.eta) ? -1 : (offset > folds.eta ? +1 : 0);
    }
    const auto jac = desingularized_jacobian({eq.x, eq.z}, q);
    const auto eig = eig_2x2(jac[0][0], jac[0][1], jac[1][0], jac[1][1]);
    eq.mu1 = eig.lambda1;
    eq.mu2 = eig.lambda2;
    if (eig.degenerate) {
      eq.kind = PlanarKind::Degenerate;
    } else if (!eig.real) {
      eq.kind = PlanarKind::Focus;
    } else if (eig.lambda1.real() * eig.lambda2.real() < 0.0) {
      eq.kind = PlanarKind::Saddle;
    } else {
      eq.kind = PlanarKind::Node;
    }
    eq.stable = eig.lambda1.real() < 0.0 && eig.lambda2.real() < 0.0;
    out.push_back(eq);
  }
  return out;
}

namespace {

/// Unit-speed desingularized field, sign = ±1 for forward/backward time.
Vec2 unit_speed(const Vec2& p, const DimensionlessParams& q, double sign) {
  const auto f = desingularized_rhs(p, q);
  const double norm = std::hypot(f[0], f[1]);
  if (norm == 0.0) return {0.0, 0.0};
  return {sign * f[0] / norm, sign * f[1] / norm};
}

}  // namespace

SingularCanard strong_singular_canard(const FoldedSingularity& fn,
                                      const DimensionlessParams& q,
                                      const CanardOptions& options) {
  if (fn.kind != PlanarKind::Node) {
    throw std::invalid_argument(
        "strong_singular_canard: defined only for folded nodes");
  }
  const auto jac = desingularized_jacobian({fn.x, fn.z}, q);
  const auto v = eigvec_2x2(jac[0][0], jac[0][1], jac[1][0], jac[1][1],
                            fn.mu_strong.real());

  auto trace_branch = [&](double branch_sign) {
    std::array<double, 2> seed{fn.x + branch_sign * options.seed_offset * v[0],
                               fn.z + branch_sign * options.seed_offset * v[1]};
    IntegratorConfig cfg;
    cfg.t_begin = 0.0;
    cfg.t_end = options.max_arc;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    cfg.max_step = options.max_step;
    std::vector<Event<2>> stops;
    // Leaving the bounding box terminates the branch.
    auto make_stop = [&](auto fn_g) {
      Event<2> ev;
      ev.g = fn_g;
      ev.direction = EventDirection::Both;
      ev.terminal = true;
      ev.label = "box";
      stops.push_back(ev);
    };
    make_stop([lo = options.box_x_lo](double, const std::array<double, 2>& s) {
      return s[0] - lo;
    });
    make_stop([hi = options.box_x_hi](double, const std::array<double, 2>& s) {
      return s[0] - hi;
    });
    make_stop([lo = options.box_z_lo](double, const std::array<double, 2>& s) {
      return s[1] - lo;
    });
    make_stop([hi = options.box_z_hi](double, const std::array<double, 2>& s) {
      return s[1] - hi;
    });
    auto traj = integrate<2>(
        [&](double, const std::array<double, 2>& s) {
          return unit_speed({s[0], s[1]}, q, -1.0);  // backward time
        },
        seed, cfg, stops);
    if (!traj.ok()) {
      throw NumericalError(std::string("strong_singular_canard: ") +
                           to_string(traj.status));
    }
    return traj;
  };

  const auto plus = trace_branch(+1.0);
  const auto minus = trace_branch(-1.0);

  SingularCanard canard;
  canard.fn = {fn.x, fn.z};
  canard.points.reserve(plus.size() + minus.size() + 1);
  // minus branch reversed, then the node, then the plus branch: one polyline.
  for (auto it = minus.states.rbegin(); it != minus.states.rend(); ++it) {
    canard.points.push_back({(*it)[0], (*it)[1]});
  }
  canard.fn_index = canard.points.size();
  canard.points.push_back(canard.fn);
  for (const auto& s : plus.states) canard.points.push_back({s[0], s[1]});
  return canard;
}

namespace {

double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const double ax = poly[i][0], az = poly[i][1];
    const double bx = poly[i + 1][0], bz = poly[i + 1][1];
    const double dx = bx - ax, dz = bz - az;
    const double len2 = dx * dx + dz * dz;
    double s = 0.0;
    if (len2 > 0.0) {
      s = ((p[0] - ax) * dx + (p[1] - az) * dz) / len2;
      s = std::clamp(s, 0.0, 1.0);
    }
    best = std::min(best, std::hypot(p[0] - (ax + s * dx), p[1] - (az + s * dz)));
  }
  return best;
}

}  // namespace

bool funnel_contains(const Vec2& point, const SingularCanard& canard,
                     const DimensionlessParams& q,
                     const FunnelOptions& options) {
  const auto folds = fold_curves(q);
  if (!folds.has_folds) {
    throw std::invalid_argument("funnel_contains: c <= 1 admits no folds");
  }
  // Boundary convention: the strong singular canard belongs to the funnel.
  if (distance_to_polyline(point, canard.points) <= options.boundary_tol) {
    return true;
  }
  const Vec2 fn = canard.fn;
  // Already inside the target neighborhood.
  if (std::hypot(point[0] - fn[0], point[1] - fn[1]) <= options.fn_radius) {
    return true;
  }
  // Starting beyond L− means the orbit would have to cross the fold.
  if (point[0] + point[1] + folds.eta > 0.0) return false;

  IntegratorConfig cfg;
  cfg.t_begin = 0.0;
  cfg.t_end = options.max_time;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  cfg.max_step = 1.0;

  std::vector<Event<2>> events;
  Event<2> reach;  // success: entered the folded-node ball
  reach.g = [fn, r = options.fn_radius](double, const std::array<double, 2>& s) {
    return std::hypot(s[0] - fn[0], s[1] - fn[1]) - r;
  };
  reach.direction = EventDirection::Falling;
  reach.terminal = true;
  reach.label = "fn-ball";
  events.push_back(reach);

  Event<2> cross;  // failure: crossed L−
  cross.g = [eta = folds.eta](double, const std::array<double, 2>& s) {
    return s[0] + s[1] + eta;
  };
  cross.direction = EventDirection::Rising;
  cross.terminal = true;
  cross.label = "fold-crossing";
  events.push_back(cross);

  auto box_event = [&](double val, int comp, int side) {
    Event<2> ev;
    ev.g = [val, comp, side](double, const std::array<double, 2>& s) {
      return side * (s[comp] - val);
    };
    ev.direction = EventDirection::Rising;
    ev.terminal = true;
    ev.label = "domain-exit";
    events.push_back(ev);
  };
  const double m = options.box_margin;
  CanardOptions box_defaults;
  box_event(box_defaults.box_x_lo - m, 0, -1);
  box_event(box_defaults.box_x_hi + m, 0, +1);
  box_event(box_defaults.box_z_lo - m, 1, -1);
  box_event(box_defaults.box_z_hi + m, 1, +1);

  auto traj = integrate<2>(
      [&](double, const std::array<double, 2>& s) {
        const auto f = desingularized_rhs({s[0], s[1]}, q);
        return std::array<double, 2>{f[0], f[1]};
      },
      {point[0], point[1]}, cfg, events);
  if (!traj.ok()) return false;
  for (const auto& hit : traj.events) {
    if (hit.label == "fn-ball") return true;
    if (hit.label == "fold-crossing" || hit.label == "domain-exit") return false;
  }
  return false;  // time cap without reaching the node
}

}  // namespace enso
