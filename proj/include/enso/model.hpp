#pragma once

#include <array>

#include "enso/params.hpp"
#include "enso/state.hpp"

namespace enso {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// ---------------------------------------------------------------------------
// Dimensional model (state = (T1, T2, h1), time in days)
// ---------------------------------------------------------------------------

/// Subsurface-temperature closure
/// T_sub = (T_r+T_r0)/2 − (T_r−T_r0)/2 · tanh( (H − z0 + h1 + (bL/β)μ(T2−T1)) / h* ).
/// Saturates cleanly for large |argument|.
[[nodiscard]] double subsurface_temperature(const PhysState& s,
                                            const PhysicalParams& p);

/// Time derivatives (°C/day, °C/day, m/day) of the dimensional system:
///   T1' = −α(T1−T_r) − εμ(T2−T1)²
///   T2' = −α(T2−T_r) + ζμ(T2−T1)(T2−T_sub)
///   h1' = −r(h1 + (bL/β)μ(T2−T1)/2)
[[nodiscard]] Vec3 physical_rhs(const Vec3& s, const PhysicalParams& p);

/// Analytic Jacobian of physical_rhs.
[[nodiscard]] Mat3 physical_jacobian(const Vec3& s, const PhysicalParams& p);

// ---------------------------------------------------------------------------
// Anomaly form (state = (S, T, h), time in days)
// ---------------------------------------------------------------------------

/// Translated system:
///   S' = −αS + εμS² + ζμS(S + T + C − C·tanh(h/h* + (bL/β)(μ/h*)·S))
///   T' = −αT − εμS²
///   h' = −r(h − K + (bL/β)(μ/2)·S)
/// with C = (T_r−T_r0)/2 and K = H−z0.
[[nodiscard]] Vec3 anomaly_rhs(const Vec3& s, const PhysicalParams& p);

[[nodiscard]] Mat3 anomaly_jacobian(const Vec3& s, const PhysicalParams& p);

// ---------------------------------------------------------------------------
// Dimensionless forms (state = (x, y, z))
// ---------------------------------------------------------------------------

/// Primary dimensionless system in time τ:
///   x' = ρδ(x² − ax) + x(x + y + c − c·tanh(x+z))
///   y' = −ρδ(ay + x²)
///   z' = −δ(z − k + x/2)
[[nodiscard]] Vec3 fast_rhs(const Vec3& u, const DimensionlessParams& q);

/// Slow-time form (s = δτ): identical phase curves, field = fast_rhs / δ.
[[nodiscard]] Vec3 slow_rhs(const Vec3& u, const DimensionlessParams& q);

/// Layer problem (δ → 0 frozen slow variables):
///   x' = x(x + y + c − c·tanh(x+z)),  y' = 0,  z' = 0.
[[nodiscard]] Vec3 layer_rhs(const Vec3& u, const DimensionlessParams& q);

[[nodiscard]] Mat3 fast_jacobian(const Vec3& u, const DimensionlessParams& q);
[[nodiscard]] Mat3 slow_jacobian(const Vec3& u, const DimensionlessParams& q);
[[nodiscard]] Mat3 layer_jacobian(const Vec3& u, const DimensionlessParams& q);

}  // namespace enso
