#include "enso/model.hpp"

#include "enso/numerics.hpp"

namespace enso {

double subsurface_temperature(const PhysState& s, const PhysicalParams& p) {
  const double arg =
      (p.H - p.z0 + s.h1 + p.bL_over_beta * p.mu * (s.T2 - s.T1)) / p.h_star;
  return (p.T_r + p.T_r0) / 2.0 - (p.T_r - p.T_r0) / 2.0 * tanh_safe(arg);
}

Vec3 physical_rhs(const Vec3& s, const PhysicalParams& p) {
  const double T1 = s[0], T2 = s[1], h1 = s[2];
  const double S = T2 - T1;
  const double tsub = subsurface_temperature({T1, T2, h1}, p);
  return {
      -p.alpha * (T1 - p.T_r) - p.epsilon * p.mu * S * S,
      -p.alpha * (T2 - p.T_r) + p.zeta * p.mu * S * (T2 - tsub),
      -p.r * (h1 + p.bL_over_beta * p.mu * S / 2.0),
  };
}

Mat3 physical_jacobian(const Vec3& s, const PhysicalParams& p) {
  const double T1 = s[0], T2 = s[1], h1 = s[2];
  const double S = T2 - T1;
  const double G = p.bL_over_beta * p.mu;  // m/K
  const double C = (p.T_r - p.T_r0) / 2.0;
  const double arg = (p.H - p.z0 + h1 + G * S) / p.h_star;
  const double s2 = sech2_safe(arg);
  const double tsub = (p.T_r + p.T_r0) / 2.0 - C * tanh_safe(arg);
  // T_sub partials: chain through the tanh argument.
  const double dts_dT1 = C * s2 * G / p.h_star;
  const double dts_dT2 = -C * s2 * G / p.h_star;
  const double dts_dh1 = -C * s2 / p.h_star;

  Mat3 jac{};
  jac[0] = {-p.alpha + 2.0 * p.epsilon * p.mu * S,
            -2.0 * p.epsilon * p.mu * S, 0.0};
  jac[1] = {p.zeta * p.mu * (-(T2 - tsub) - S * dts_dT1),
            -p.alpha + p.zeta * p.mu * ((T2 - tsub) + S * (1.0 - dts_dT2)),
            -p.zeta * p.mu * S * dts_dh1};
  jac[2] = {p.r * G / 2.0, -p.r * G / 2.0, -p.r};
  return jac;
}

Vec3 anomaly_rhs(const Vec3& s, const PhysicalParams& p) {
  const double S = s[0], T = s[1], h = s[2];
  const double C = (p.T_r - p.T_r0) / 2.0;
  const double K = p.H - p.z0;
  const double arg = h / p.h_star + p.bL_over_beta * p.mu / p.h_star * S;
  return {
      -p.alpha * S + p.epsilon * p.mu * S * S +
          p.zeta * p.mu * S * (S + T + C - C * tanh_safe(arg)),
      -p.alpha * T - p.epsilon * p.mu * S * S,
      -p.r * (h - K + p.bL_over_beta * p.mu * S / 2.0),
  };
}

Mat3 anomaly_jacobian(const Vec3& s, const PhysicalParams& p) {
  const double S = s[0], T = s[1], h = s[2];
  const double C = (p.T_r - p.T_r0) / 2.0;
  const double G = p.bL_over_beta * p.mu;
  const double arg = (h + G * S) / p.h_star;
  const double s2 = sech2_safe(arg);
  const double coupling = S + T + C - C * tanh_safe(arg);

  Mat3 jac{};
  jac[0] = {-p.alpha + 2.0 * p.epsilon * p.mu * S + p.zeta * p.mu * coupling +
                p.zeta * p.mu * S * (1.0 - C * s2 * G / p.h_star),
            p.zeta * p.mu * S,
            -p.zeta * p.mu * S * C * s2 / p.h_star};
  jac[1] = {-2.0 * p.epsilon * p.mu * S, -p.alpha, 0.0};
  jac[2] = {-p.r * G / 2.0, 0.0, -p.r};
  return jac;
}

Vec3 fast_rhs(const Vec3& u, const DimensionlessParams& q) {
  const double x = u[0], y = u[1], z = u[2];
  const double coupling = x + y + q.c - q.c * tanh_safe(x + z);
  return {
      q.rho * q.delta * (x * x - q.a * x) + x * coupling,
      -q.rho * q.delta * (q.a * y + x * x),
      -q.delta * (z - q.k + x / 2.0),
  };
}

Vec3 slow_rhs(const Vec3& u, const DimensionlessParams& q) {
  const auto f = fast_rhs(u, q);
  return {f[0] / q.delta, f[1] / q.delta, f[2] / q.delta};
}

Vec3 layer_rhs(const Vec3& u, const DimensionlessParams& q) {
  const double x = u[0], y = u[1], z = u[2];
  const double coupling = x + y + q.c - q.c * tanh_safe(x + z);
  return {x * coupling, 0.0, 0.0};
}

Mat3 fast_jacobian(const Vec3& u, const DimensionlessParams& q) {
  const double x = u[0], y = u[1], z = u[2];
  const double s2 = sech2_safe(x + z);
  const double coupling = x + y + q.c - q.c * tanh_safe(x + z);

  Mat3 jac{};
  jac[0] = {q.rho * q.delta * (2.0 * x - q.a) + coupling +
                x * (1.0 - q.c * s2),
            x, -x * q.c * s2};
  jac[1] = {-2.0 * q.rho * q.delta * x, -q.rho * q.delta * q.a, 0.0};
  jac[2] = {-q.delta / 2.0, 0.0, -q.delta};
  return jac;
}

Mat3 slow_jacobian(const Vec3& u, const DimensionlessParams& q) {
  Mat3 jac = fast_jacobian(u, q);
  for (auto& row : jac)
    for (auto& entry : row) entry /= q.delta;
  return jac;
}

Mat3 layer_jacobian(const Vec3& u, const DimensionlessParams& q) {
  const double x = u[0], y = u[1], z = u[2];
  const double s2 = sech2_safe(x + z);
  const double coupling = x + y + q.c - q.c * tanh_safe(x + z);

  Mat3 jac{};
  jac[0] = {coupling + x * (1.0 - q.c * s2), x, -x * q.c * s2};
  jac[1] = {0.0, 0.0, 0.0};
  jac[2] = {0.0, 0.0, 0.0};
  return jac;
}

}  // namespace enso
