#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "enso/model.hpp"
#include "enso/params.hpp"

namespace enso {

/// Equilibrium of the full three-dimensional system with its spectrum.
struct FullEquilibrium {
  Vec3 state{};
  std::array<std::complex<double>, 3> eig_fast{};  ///< of fast_jacobian
  std::array<std::complex<double>, 3> eig_slow{};  ///< fast eigenvalues / δ
  bool trivial = false;       ///< the always-present rest point (0, 0, k)
  bool saddle_focus = false;  ///< one negative real + complex pair with Re > 0
  double char_residual = 0.0; ///< max |p(λ)| over the characteristic cubic
};

/// Every rest point of the full system: (0,0,k) plus all x ≠ 0 roots of the
/// scalar reduction y = −x²/a, z = k − x/2,
///   ρδ(x − a) + x − x²/a + c − c·tanh(k + x/2) = 0.
/// The delta overload substitutes a different δ with ρ, a, c, k unchanged.
[[nodiscard]] std::vector<FullEquilibrium> full_equilibria(
    const DimensionlessParams& q);
[[nodiscard]] std::vector<FullEquilibrium> full_equilibria(
    const DimensionlessParams& q, double delta);

/// One grid record of an FSN-II scan in the parameter a.
struct Fsn2Point {
  double a = 0.0;
  bool valid = false;  ///< tracked FN and EQ both found at this a
  double fn_x = 0.0, fn_z = 0.0;  ///< folded singularity tracked on L−
  double eq_x = 0.0, eq_z = 0.0;  ///< reduced equilibrium (Ms sheet)
  int side = 0;  ///< sign of x_EQ + z_EQ + eta: EQ's side of L−
  std::array<std::complex<double>, 3> eq_eigs{};  ///< full-system, slow time
  bool saddle_focus = false;
  bool hopf = false;  ///< Re(complex pair) changed sign since previous record
};

struct Fsn2Scan {
  std::vector<Fsn2Point> points;
  std::optional<double> a_star;    ///< transcritical collision parameter
  double collision_residual = 0.0; ///< max defining residual at a_star
};

/// Scan a ∈ [a_lo, a_hi] with n grid points at fixed ρ, c, k (and δ for the
/// full-system spectra). Tracks the x < 0 folded singularity on L− and the
/// x < 0 reduced equilibrium; a* is located by bisection (tolerance 1e-10 in
/// a) on the signed distance of EQ to L−, when the sign changes in range.
[[nodiscard]] Fsn2Scan fsn2_scan(const DimensionlessParams& q_base,
                                 double a_lo = 2.0, double a_hi = 3.5,
                                 int n = 401);

/// Closed-form FSN-II parameter for the collision on L−: the merged point has
/// x* = −2(k + eta) and a* = x*²/(x* + B) with B = c + √(c(c−1)).
[[nodiscard]] double fsn2_closed_form(const DimensionlessParams& q_base);

struct HopfResult {
  bool found = false;
  double a_H = 0.0;
  double re_residual = 0.0;  ///< |Re(pair)| at a_H
};

/// Location of the Hopf parameter a_H at the given δ: bisection in a on the
/// real part of the complex eigenvalue pair of the tracked nontrivial
/// equilibrium (grid pre-scan over [a_lo, a_hi], then bisection to 1e-10).
[[nodiscard]] HopfResult hopf_locate(const DimensionlessParams& q_base,
                                     double delta, double a_lo = 2.0,
                                     double a_hi = 3.5, int n = 401);

struct ImScalingResult {
  std::vector<double> deltas;
  std::vector<double> im_values;  ///< |Im(pair)| in slow time at each δ
  double slope = 0.0;             ///< log|Im| vs log δ least-squares slope
};

/// |Im λ| of the equilibrium's complex pair (slow time) against δ, evaluated
/// at a = a* + a_offset with a* from fsn2_closed_form. A slope near −1/2
/// reflects the intermediate singular-Hopf frequency between the time scales.
[[nodiscard]] ImScalingResult im_scaling(const DimensionlessParams& q_base,
                                         double a_offset,
                                         const std::vector<double>& deltas);

/// CSV rows "a,fn_x,fn_z,eq_x,eq_z,side,re1,im1,re2,im2,re3,im3,flags" for a
/// scan result; flags is a semicolon-joined subset of {saddle-focus, hopf}.
[[nodiscard]] std::string fsn2_scan_csv(const Fsn2Scan& scan);

}  // namespace enso
