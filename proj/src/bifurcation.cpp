#include "enso/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "enso/io.hpp"
#include "enso/manifold.hpp"
#include "enso/numerics.hpp"
#include "enso/reduced_flow.hpp"

namespace enso {

namespace {

// Characteristic-cubic coefficients of a 3x3 matrix: λ³ + p2·λ² + p1·λ + p0.
struct CharCubic {
  double p2, p1, p0;
};

CharCubic char_cubic(const Mat3& m) {
  const double tr = m[0][0] + m[1][1] + m[2][2];
  const double minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) +
                        (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                        (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return {-tr, minors, -det};
}

std::optional<std::complex<double>> complex_pair(
    const std::array<std::complex<double>, 3>& eigs) {
  for (const auto& lam : eigs) {
    if (lam.imag() > 0.0) return lam;
  }
  return std::nullopt;
}

FullEquilibrium make_equilibrium(const Vec3& u, const DimensionlessParams& q,
                                 bool trivial) {
  FullEquilibrium eq;
  eq.state = u;
  eq.trivial = trivial;
  const Mat3 jac = fast_jacobian({u[0], u[1], u[2]}, q);
  eq.eig_fast = eig_3x3(jac);
  for (int i = 0; i < 3; ++i) eq.eig_slow[i] = eq.eig_fast[i] / q.delta;

  const CharCubic p = char_cubic(jac);
  double res = 0.0;
  for (const auto& lam : eq.eig_fast) {
    const std::complex<double> val =
        ((lam + p.p2) * lam + p.p1) * lam + p.p0;
    res = std::max(res, std::abs(val));
  }
  eq.char_residual = res;

  const auto pair = complex_pair(eq.eig_fast);
  if (pair) {
    double real_eig = 0.0;
    for (const auto& lam : eq.eig_fast) {
      if (lam.imag() == 0.0) real_eig = lam.real();
    }
    eq.saddle_focus = real_eig < 0.0 && pair->real() > 0.0;
  }
  return eq;
}

// Rightmost x < 0 member, or nothing. The scans all track the negative-x
// branch of their respective families.
template <typename T, typename GetX>
std::optional<T> rightmost_negative(const std::vector<T>& items, GetX get_x) {
  std::optional<T> best;
  for (const auto& item : items) {
    const double x = get_x(item);
    if (x < 0.0 && (!best || x > get_x(*best))) best = item;
  }
  return best;
}

std::optional<FoldedSingularity> tracked_fn(const DimensionlessParams& q) {
  auto fns = find_folded_singularities(q);
  fns.erase(std::remove_if(fns.begin(), fns.end(),
                           [](const FoldedSingularity& f) {
                             return f.side != -1;
                           }),
            fns.end());
  return rightmost_negative(fns, [](const FoldedSingularity& f) { return f.x; });
}

std::optional<ReducedEquilibrium> tracked_eq(const DimensionlessParams& q) {
  return rightmost_negative(find_reduced_equilibria(q),
                            [](const ReducedEquilibrium& e) { return e.x; });
}

std::optional<FullEquilibrium> tracked_full(const DimensionlessParams& q) {
  std::vector<FullEquilibrium> eqs = full_equilibria(q);
  eqs.erase(std::remove_if(eqs.begin(), eqs.end(),
                           [](const FullEquilibrium& e) { return e.trivial; }),
            eqs.end());
  return rightmost_negative(eqs,
                            [](const FullEquilibrium& e) { return e.state[0]; });
}

// Signed distance of the tracked reduced equilibrium to L−, in the sense of
// sign(x + z + eta). With z = k − x/2 this is x/2 + k + eta.
std::optional<double> eq_fold_distance(const DimensionlessParams& q,
                                       double eta) {
  const auto eq = tracked_eq(q);
  if (!eq) return std::nullopt;
  return eq->x / 2.0 + q.k + eta;
}

DimensionlessParams with_a(DimensionlessParams q, double a) {
  q.a = a;
  return q;
}

}  // namespace

std::vector<FullEquilibrium> full_equilibria(const DimensionlessParams& q) {
  q.validate();
  std::vector<FullEquilibrium> out;
  out.push_back(make_equilibrium({0.0, 0.0, q.k}, q, true));

  // On the nontrivial branch y = −x²/a, z = k − x/2, and the x-equation
  // divided by x leaves one scalar condition.
  const auto branch = [&q](double x) {
    return q.rho * q.delta * (x - q.a) + x - x * x / q.a + q.c -
           q.c * tanh_safe(q.k + x / 2.0);
  };
  for (const ScalarRoot& root : scan_roots(branch, -20.0, 5.0)) {
    const double x = root.x;
    out.push_back(
        make_equilibrium({x, -x * x / q.a, q.k - x / 2.0}, q, false));
  }
  std::sort(out.begin(), out.end(),
            [](const FullEquilibrium& lhs, const FullEquilibrium& rhs) {
              return lhs.state[0] < rhs.state[0];
            });
  return out;
}

std::vector<FullEquilibrium> full_equilibria(const DimensionlessParams& q,
                                             double delta) {
  DimensionlessParams qd = q;
  qd.delta = delta;
  return full_equilibria(qd);
}

double fsn2_closed_form(const DimensionlessParams& q_base) {
  const FoldCurves folds = fold_curves(q_base);
  if (!folds.has_folds) {
    throw std::invalid_argument("fsn2_closed_form: requires c > 1");
  }
  const double x_star = -2.0 * (q_base.k + folds.eta);
  const double b_minus = q_base.c + std::sqrt(q_base.c * (q_base.c - 1.0));
  return x_star * x_star / (x_star + b_minus);
}

Fsn2Scan fsn2_scan(const DimensionlessParams& q_base, double a_lo, double a_hi,
                   int n) {
  if (!(a_hi > a_lo) || n < 2) {
    throw std::invalid_argument("fsn2_scan: need a_hi > a_lo and n >= 2");
  }
  const FoldCurves folds = fold_curves(q_base);
  if (!folds.has_folds) {
    throw std::invalid_argument("fsn2_scan: requires c > 1");
  }
  const double eta = folds.eta;

  Fsn2Scan scan;
  scan.points.reserve(static_cast<std::size_t>(n));
  std::optional<double> prev_re;
  for (int i = 0; i < n; ++i) {
    Fsn2Point pt;
    pt.a = a_lo + (a_hi - a_lo) * i / (n - 1);
    const DimensionlessParams q = with_a(q_base, pt.a);

    const auto fn = tracked_fn(q);
    const auto eq = tracked_eq(q);
    if (fn && eq) {
      pt.valid = true;
      pt.fn_x = fn->x;
      pt.fn_z = fn->z;
      pt.eq_x = eq->x;
      pt.eq_z = eq->z;
      const double dist = eq->x + eq->z + eta;
      pt.side = dist > 0.0 ? 1 : (dist < 0.0 ? -1 : 0);
    }
    if (const auto full = tracked_full(q)) {
      pt.eq_eigs = full->eig_slow;
      pt.saddle_focus = full->saddle_focus;
      if (const auto pair = complex_pair(full->eig_slow)) {
        const double re = pair->real();
        if (prev_re && *prev_re * re < 0.0) pt.hopf = true;
        prev_re = re;
      } else {
        prev_re.reset();
      }
    }
    scan.points.push_back(pt);
  }

  // Transcritical collision: bisection on the signed EQ-to-L− distance over
  // the first grid cell where it changes sign.
  for (std::size_t i = 1; i < scan.points.size(); ++i) {
    if (!scan.points[i - 1].valid || !scan.points[i].valid) continue;
    auto dist = [&](double a) {
      const auto d = eq_fold_distance(with_a(q_base, a), eta);
      if (!d) throw NumericalError("fsn2_scan: lost equilibrium track");
      return *d;
    };
    double lo = scan.points[i - 1].a, hi = scan.points[i].a;
    double flo = dist(lo), fhi = dist(hi);
    if (flo == 0.0) {
      scan.a_star = lo;
    } else if (fhi == 0.0) {
      scan.a_star = hi;
    } else if (flo * fhi < 0.0) {
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = dist(mid);
        if (fmid == 0.0) {
          lo = hi = mid;
          break;
        }
        (flo * fmid < 0.0 ? hi : lo) = mid;
        (flo * fmid < 0.0 ? fhi : flo) = fmid;
      }
      scan.a_star = 0.5 * (lo + hi);
    }
    if (scan.a_star) break;
  }

  if (scan.a_star) {
    // At a* the merged point must satisfy both defining systems at once.
    const DimensionlessParams q = with_a(q_base, *scan.a_star);
    const auto eq = tracked_eq(q);
    if (eq) {
      const double x = eq->x, z = eq->z;
      const Vec2 desing = desingularized_rhs({x, z}, q);
      const double chart_y = ms_chart(x, z, q);
      double res = std::max(std::abs(desing[0]), std::abs(desing[1]));
      res = std::max(res, std::abs(q.a * chart_y + x * x));
      res = std::max(res, std::abs(q.k - z - x / 2.0));
      res = std::max(res, std::abs(x + z + eta));
      scan.collision_residual = res;
    }
  }
  return scan;
}

HopfResult hopf_locate(const DimensionlessParams& q_base, double delta,
                       double a_lo, double a_hi, int n) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("hopf_locate: delta must be positive");
  }
  if (!(a_hi > a_lo) || n < 2) {
    throw std::invalid_argument("hopf_locate: need a_hi > a_lo and n >= 2");
  }
  DimensionlessParams qd = q_base;
  qd.delta = delta;

  auto pair_re = [&qd](double a) -> std::optional<double> {
    const auto eq = tracked_full(with_a(qd, a));
    if (!eq) return std::nullopt;
    const auto pair = complex_pair(eq->eig_slow);
    if (!pair) return std::nullopt;
    return pair->real();
  };

  HopfResult result;
  std::optional<double> prev_a, prev_re;
  for (int i = 0; i < n && !result.found; ++i) {
    const double a = a_lo + (a_hi - a_lo) * i / (n - 1);
    const auto re = pair_re(a);
    if (re && prev_re && *prev_re * *re < 0.0) {
      double lo = *prev_a, hi = a, flo = *prev_re;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const auto fmid = pair_re(mid);
        if (!fmid) throw NumericalError("hopf_locate: complex pair vanished");
        if (*fmid == 0.0) {
          lo = hi = mid;
          break;
        }
        (flo * *fmid < 0.0 ? hi : lo) = mid;
        if (flo * *fmid >= 0.0) flo = *fmid;
      }
      result.found = true;
      result.a_H = 0.5 * (lo + hi);
      const auto final_re = pair_re(result.a_H);
      result.re_residual = final_re ? std::abs(*final_re) : 0.0;
    }
    if (re) {
      prev_a = a;
      prev_re = re;
    } else {
      prev_a.reset();
      prev_re.reset();
    }
  }
  return result;
}

ImScalingResult im_scaling(const DimensionlessParams& q_base, double a_offset,
                           const std::vector<double>& deltas) {
  if (deltas.size() < 2) {
    throw std::invalid_argument("im_scaling: need at least two delta values");
  }
  const double a = fsn2_closed_form(q_base) + a_offset;
  ImScalingResult result;
  std::vector<double> log_d, log_im;
  for (double delta : deltas) {
    if (!(delta > 0.0)) {
      throw std::invalid_argument("im_scaling: deltas must be positive");
    }
    DimensionlessParams q = with_a(q_base, a);
    q.delta = delta;
    const auto eq = tracked_full(q);
    if (!eq) throw NumericalError("im_scaling: equilibrium not found");
    const auto pair = complex_pair(eq->eig_slow);
    if (!pair) {
      throw NumericalError("im_scaling: no complex pair at delta=" +
                           std::to_string(delta));
    }
    result.deltas.push_back(delta);
    result.im_values.push_back(std::abs(pair->imag()));
    log_d.push_back(std::log(delta));
    log_im.push_back(std::log(std::abs(pair->imag())));
  }
  result.slope = fit_line(log_d, log_im).slope;
  return result;
}

std::string fsn2_scan_csv(const Fsn2Scan& scan) {
  std::ostringstream out;
  out << "# units: a,fn_x,fn_z,eq_x,eq_z dimensionless; side sign; "
         "re*,im* 1/slow-time; flags text\n";
  out << "a,fn_x,fn_z,eq_x,eq_z,side,re1,im1,re2,im2,re3,im3,flags\n";
  for (const Fsn2Point& pt : scan.points) {
    if (!pt.valid) continue;
    out << g17(pt.a) << ',' << g17(pt.fn_x) << ',' << g17(pt.fn_z) << ','
        << g17(pt.eq_x) << ',' << g17(pt.eq_z) << ',' << pt.side;
    for (const auto& lam : pt.eq_eigs) {
      out << ',' << g17(lam.real()) << ',' << g17(lam.imag());
    }
    out << ',';
    if (pt.saddle_focus) out << "saddle-focus";
    if (pt.saddle_focus && pt.hopf) out << ';';
    if (pt.hopf) out << "hopf";
    out << '\n';
  }
  return out.str();
}

}  // namespace enso
