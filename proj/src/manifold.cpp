#include "enso/manifold.hpp"

#include <algorithm>
#include <cmath>

namespace enso {

namespace {
constexpr double kDegenerateTol = 1e-12;
}

double manifold_residual(const Vec3& u, const DimensionlessParams& q) {
  const double x = u[0], y = u[1], z = u[2];
  return x * (x + y + q.c - q.c * tanh_safe(x + z));
}

double ms_chart(double x, double z, const DimensionlessParams& q) {
  return -x - q.c + q.c * tanh_safe(x + z);
}

std::vector<ScalarRoot> solve_x_on_ms(double y, double z,
                                      const DimensionlessParams& q,
                                      const ScanWindow& window) {
  auto f = [&](double x) { return x + y + q.c - q.c * tanh_safe(x + z); };
  auto roots = scan_roots(f, window.lo, window.hi, window.n);
  if (roots.empty()) {
    throw NumericalError(
        "solve_x_on_ms: no bracket found in the scan window; the single "
        "guaranteed root lies outside it");
  }
  for (const auto& r : roots) {
    if (r.residual > 1e-10) {
      throw NumericalError("solve_x_on_ms: root polish stalled above 1e-10");
    }
  }
  return roots;
}

namespace {

SheetStability classify(double fx) {
  if (std::abs(fx) < kDegenerateTol) return SheetStability::Degenerate;
  return fx < 0.0 ? SheetStability::Attracting : SheetStability::Repelling;
}

}  // namespace

SheetStability stability_m0(double y, double z, const DimensionlessParams& q) {
  return classify(y + q.c - q.c * tanh_safe(z));
}

SheetStability stability_ms(double x, double z, const DimensionlessParams& q) {
  return classify(x * (1.0 - q.c * sech2_safe(x + z)));
}

FoldCurves fold_curves(const DimensionlessParams& q) {
  FoldCurves out;
  if (q.c <= 1.0) return out;  // sech² <= 1 everywhere: no fold lines
  out.has_folds = true;
  out.eta = std::acosh(std::sqrt(q.c));
  return out;
}

double eta_bisection(double c) {
  if (c <= 1.0) throw std::invalid_argument("eta_bisection: requires c > 1");
  // c·sech²(u) − 1 is positive at u = 0 and decays to −1; bracket upward.
  auto f = [c](double u) { return c * sech2_safe(u) - 1.0; };
  double hi = 1.0;
  while (f(hi) > 0.0) hi *= 2.0;
  return polish_root(f, 0.0, hi).x;
}

BranchRoots branch_roots(double z, const DimensionlessParams& q) {
  BranchRoots out;
  auto defining = [&](double x) {
    return x * (1.0 - q.c * sech2_safe(x + z));
  };
  out.roots.push_back(0.0);
  const auto folds = fold_curves(q);
  if (folds.has_folds) {
    out.roots.push_back(-z - folds.eta);
    out.roots.push_back(-z + folds.eta);
  }
  std::sort(out.roots.begin(), out.roots.end());
  // Deduplicate the coincidence x± = 0 (z = ±eta).
  out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                              [](double a, double b) {
                                return std::abs(a - b) < 1e-14;
                              }),
                  out.roots.end());
  for (double r : out.roots) out.residuals.push_back(std::abs(defining(r)));

  if (folds.has_folds) {
    const double x_minus = -z - folds.eta;
    const double x_plus = -z + folds.eta;
    if (x_minus > 0.0) out.ordering_case = 1;
    else if (x_plus < 0.0) out.ordering_case = 3;
    else out.ordering_case = 2;
  }
  return out;
}

}  // namespace enso
