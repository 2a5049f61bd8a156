#pragma once

#include <optional>
#include <vector>

#include "enso/model.hpp"
#include "enso/numerics.hpp"
#include "enso/params.hpp"

namespace enso {

/// One-sided layer stability of a critical-manifold sheet at a point.
enum class SheetStability { Attracting, Repelling, Degenerate };

[[nodiscard]] inline const char* to_string(SheetStability s) {
  switch (s) {
    case SheetStability::Attracting: return "attracting";
    case SheetStability::Repelling: return "repelling";
    case SheetStability::Degenerate: return "degenerate";
  }
  return "unknown";
}

/// Defining function of the critical manifold M = {F = 0} with
/// F(x,y,z) = x·(x + y + c − c·tanh(x+z)). Zero on both the plane M0 (x = 0)
/// and the curved sheet Ms.
[[nodiscard]] double manifold_residual(const Vec3& u,
                                       const DimensionlessParams& q);

/// Single-chart parameterization of Ms: y = h(x,z) = −x − c + c·tanh(x+z).
[[nodiscard]] double ms_chart(double x, double z, const DimensionlessParams& q);

/// Grid window for the sign-scan root search in x.
struct ScanWindow {
  double lo = -20.0;
  double hi = 5.0;
  int n = 4001;
};

/// All x with (x,y,z) on Ms for the given (y,z): roots of
/// x + y + c − c·tanh(x+z) = 0, ascending, each with residual < 1e-10.
/// The function is strictly increasing outside the fold strip and always has
/// at least one real root; an empty bracket scan therefore throws
/// NumericalError (window too small) rather than returning silently.
[[nodiscard]] std::vector<ScalarRoot> solve_x_on_ms(
    double y, double z, const DimensionlessParams& q,
    const ScanWindow& window = {});

/// Layer stability of M0 at (y,z): sign of F_x|M0 = y + c − c·tanh(z).
[[nodiscard]] SheetStability stability_m0(double y, double z,
                                          const DimensionlessParams& q);

/// Layer stability of Ms at (x,z): sign of F_x|Ms = x·(1 − c·sech²(x+z)).
[[nodiscard]] SheetStability stability_ms(double x, double z,
                                          const DimensionlessParams& q);

/// Fold curves L± = {x + z = ±eta} on Ms, eta = arccosh(√c). Present only for
/// c > 1; c = 1 degenerates both curves onto x + z = 0.
struct FoldCurves {
  bool has_folds = false;
  double eta = 0.0;

  /// x-coordinate of L+ (side = +1) or L− (side = −1) at height z.
  [[nodiscard]] double x_at(double z, int side) const {
    return side * eta - z;
  }
};

[[nodiscard]] FoldCurves fold_curves(const DimensionlessParams& q);

/// eta from the defining relation c·sech²(eta) = 1 by bisection; closed-form
/// cross-check for fold_curves. Requires c > 1.
[[nodiscard]] double eta_bisection(double c);

/// Roots of x·(1 − c·sech²(x+z)) in x at fixed z: the rest points of the
/// layer problem restricted to the line, i.e. the Ms fold locations ±eta − z
/// (when c > 1) together with the M0 intersection x = 0.
struct BranchRoots {
  std::vector<double> roots;      ///< ascending
  std::vector<double> residuals;  ///< |defining function| at each root
  int ordering_case = 0;  ///< 1: 0 < x− < x+, 2: x− < 0 < x+, 3: x− < x+ < 0
};

[[nodiscard]] BranchRoots branch_roots(double z, const DimensionlessParams& q);

}  // namespace enso
