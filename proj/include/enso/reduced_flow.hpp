#pragma once

#include <array>
#include <complex>
#include <vector>

#include "enso/manifold.hpp"
#include "enso/params.hpp"

namespace enso {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

// ---------------------------------------------------------------------------
// Reduced vector fields
// ---------------------------------------------------------------------------

/// Slow flow on the plane M0 (x = 0), state (y, z):  (ẏ, ż) = (−ρay, k−z).
[[nodiscard]] Vec2 reduced_m0_rhs(const Vec2& yz, const DimensionlessParams& q);

/// Slow flow on Ms in the chart (x, z), singular form:
///   ẋ = [ρ(a·h(x,z) + x²) + c·(k − z − x/2)·sech²(x+z)] / [1 − c·sech²(x+z)]
///   ż = k − z − x/2
/// Throws NumericalError on the fold curves (|denominator| < 1e-12), where
/// the field blows up; use desingularized_rhs there.
[[nodiscard]] Vec2 reduced_ms_rhs(const Vec2& xz, const DimensionlessParams& q);

/// Desingularized flow on Ms (time rescaled by 1 − c·sech²(x+z); orientation
/// is reversed relative to reduced_ms_rhs wherever that factor is negative):
///   ẋ = ρ(a·h(x,z) + x²) + c·(k − z − x/2)·sech²(x+z)
///   ż = [1 − c·sech²(x+z)]·(k − z − x/2)
[[nodiscard]] Vec2 desingularized_rhs(const Vec2& xz,
                                      const DimensionlessParams& q);

/// Analytic Jacobian of desingularized_rhs.
[[nodiscard]] Mat2 desingularized_jacobian(const Vec2& xz,
                                           const DimensionlessParams& q);

/// Time-rescale factor 1 − c·sech²(x+z) between the desingularized and
/// singular reduced flows.
[[nodiscard]] double desingularization_factor(const Vec2& xz,
                                              const DimensionlessParams& q);

// ---------------------------------------------------------------------------
// Special points
// ---------------------------------------------------------------------------

/// Linearization type within the desingularized plane.
enum class PlanarKind { Node, Saddle, Focus, Degenerate };

[[nodiscard]] inline const char* to_string(PlanarKind k) {
  switch (k) {
    case PlanarKind::Node: return "node";
    case PlanarKind::Saddle: return "saddle";
    case PlanarKind::Focus: return "focus";
    case PlanarKind::Degenerate: return "degenerate";
  }
  return "unknown";
}

/// Equilibrium of the desingularized flow lying on a fold curve: the slow
/// drift k − z − x/2 does not vanish, but the ẋ numerator does.
struct FoldedSingularity {
  double x = 0.0;
  double z = 0.0;
  double y = 0.0;  ///< via ms_chart
  int side = 0;    ///< −1 for L−, +1 for L+
  double w = 0.0;  ///< k − z − x/2 at the point (nonzero by definition)
  std::complex<double> mu_strong;  ///< |mu_strong| >= |mu_weak|
  std::complex<double> mu_weak;
  PlanarKind kind = PlanarKind::Degenerate;
  bool stable = false;   ///< Re(mu) < 0 for both eigenvalues
  double residual = 0.0; ///< max |desingularized_rhs| component at the point
};

/// All folded singularities for c > 1: per fold line, the roots of
/// ρ(a·h + x²) + (k − z − x/2) = 0 restricted to x + z = ±eta (where
/// sech² = 1/c), classified by the desingularized Jacobian. Ascending in x.
/// Throws std::invalid_argument when c <= 1 (no fold curves).
[[nodiscard]] std::vector<FoldedSingularity> find_folded_singularities(
    const DimensionlessParams& q);

/// Genuine equilibrium of the reduced flow on Ms: k − z − x/2 = 0 and
/// a·h(x,z) + x² = 0 simultaneously.
struct ReducedEquilibrium {
  double x = 0.0;
  double z = 0.0;
  double y = 0.0;
  std::complex<double> mu1;  ///< desingularized eigenvalues
  std::complex<double> mu2;
  PlanarKind kind = PlanarKind::Degenerate;
  bool stable = false;
  double time_factor = 0.0;  ///< 1 − c·sech²(x+z); < 0 inside the fold strip
  int strip_side = 0;  ///< −1 left of L−, 0 between the folds, +1 right of L+
};

/// All reduced equilibria: roots of a·h(x, k − x/2) + x² = 0 over the scan
/// window (the drift condition z = k − x/2 removes the sech² term from ẋ).
[[nodiscard]] std::vector<ReducedEquilibrium> find_reduced_equilibria(
    const DimensionlessParams& q, const ScanWindow& window = {});

// ---------------------------------------------------------------------------
// Strong singular canard and funnel
// ---------------------------------------------------------------------------

struct CanardOptions {
  double seed_offset = 1e-6;  ///< displacement along ±strong eigenvector
  double max_step = 1e-3;     ///< arc-length step bound
  double max_arc = 100.0;     ///< safety cap on total arc length per branch
  double box_x_lo = -12.0, box_x_hi = 0.0;  ///< termination box
  double box_z_lo = -2.0, box_z_hi = 6.0;
};

/// Strong stable manifold of a folded node, stored as a single polyline
/// running through the node: points[0..fn_index..] with points[fn_index]
/// equal to the node itself. Computed by backward unit-speed integration of
/// the desingularized flow from ±seed_offset along the strong eigenvector,
/// each branch truncated at the bounding box (or the arc cap).
struct SingularCanard {
  std::vector<Vec2> points;
  std::size_t fn_index = 0;
  Vec2 fn{};  ///< the folded node (x, z)
};

/// Throws std::invalid_argument unless fn.kind == Node with real eigenvalues.
[[nodiscard]] SingularCanard strong_singular_canard(
    const FoldedSingularity& fn, const DimensionlessParams& q,
    const CanardOptions& options = {});

struct FunnelOptions {
  double fn_radius = 1e-4;     ///< success radius around the folded node
  double boundary_tol = 1e-9;  ///< distance to SC counted as membership
  double max_time = 5000.0;    ///< desingularized-time cap
  double box_margin = 4.0;     ///< domain box grown around the canard box
};

/// Membership in the folded-node funnel: the forward desingularized orbit of
/// the point must reach the node's fn_radius neighborhood without crossing
/// L− (detected by the sign of x + z + eta). Points on the strong singular
/// canard itself count as inside (closed funnel boundary).
[[nodiscard]] bool funnel_contains(const Vec2& point,
                                   const SingularCanard& canard,
                                   const DimensionlessParams& q,
                                   const FunnelOptions& options = {});

}  // namespace enso
