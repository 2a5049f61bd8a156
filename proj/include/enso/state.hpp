#pragma once

#include "enso/params.hpp"

namespace enso {

/// Western/eastern Pacific temperatures (°C) and western thermocline depth
/// anomaly (m) of the dimensional system.
struct PhysState {
  double T1 = 0.0;
  double T2 = 0.0;
  double h1 = 0.0;
};

/// Translated variables: S = T2−T1, T = T1−T_r, h = h1 + K with K = H−z0.
struct AnomalyState {
  double S = 0.0;
  double T = 0.0;
  double h = 0.0;
};

/// Dimensionless variables x = S/S0, y = T/T0, z = h/h0.
struct DimlessState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Depth offset K = H − z0 (m).
[[nodiscard]] inline double anomaly_depth_offset(const PhysicalParams& p) {
  return p.H - p.z0;
}

/// Temperature half-range C = (T_r − T_r0)/2 (°C).
[[nodiscard]] inline double anomaly_temp_range(const PhysicalParams& p) {
  return (p.T_r - p.T_r0) / 2.0;
}

[[nodiscard]] inline AnomalyState to_anomaly(const PhysState& s,
                                             const PhysicalParams& p) {
  return {s.T2 - s.T1, s.T1 - p.T_r, s.h1 + anomaly_depth_offset(p)};
}

[[nodiscard]] inline PhysState from_anomaly(const AnomalyState& a,
                                            const PhysicalParams& p) {
  const double T1 = a.T + p.T_r;
  return {T1, a.S + T1, a.h - anomaly_depth_offset(p)};
}

[[nodiscard]] inline DimlessState to_dimensionless(const AnomalyState& a,
                                                   const Scales& sc) {
  return {a.S / sc.S0, a.T / sc.T0, a.h / sc.h0};
}

[[nodiscard]] inline AnomalyState from_dimensionless(const DimlessState& u,
                                                     const Scales& sc) {
  return {u.x * sc.S0, u.y * sc.T0, u.z * sc.h0};
}

/// Dimensionless time τ of the primary (fast-form) system for a dimensional
/// time in days: τ = t / t0. The slow time is a further rescale s = δ·τ.
[[nodiscard]] inline double tau_from_days(double t_days, const Scales& sc) {
  return t_days / sc.t0_days;
}

[[nodiscard]] inline double days_from_tau(double tau, const Scales& sc) {
  return tau * sc.t0_days;
}

}  // namespace enso
