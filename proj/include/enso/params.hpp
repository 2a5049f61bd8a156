#pragma once

#include <string>
#include <vector>

namespace enso {

/// Dimensional model constants. Units: temperatures °C, rates day⁻¹, depths m.
/// β and b never enter separately; only the advection group bL/β does, stored
/// directly. With the default μ it reproduces μ·bL/β = 22 m·K⁻¹.
struct PhysicalParams {
  double T_r0 = 16.0;    ///< minimum subsurface temperature, °C
  double T_r = 29.5;     ///< radiative-convective equilibrium temperature, °C
  double alpha = 1.0 / 180.0;  ///< thermal damping rate, day⁻¹
  double r = 1.0 / 400.0;      ///< thermocline adjustment rate, day⁻¹
  double H = 100.0;      ///< mean thermocline depth, m
  double z0 = 75.0;      ///< depth of strongest subsurface response, m
  double h_star = 62.0;  ///< sharpness scale of the subsurface profile, m
  double mu = 0.0026;    ///< coupling rate, K⁻¹·day⁻¹
  double epsilon = 0.11; ///< advective efficiency, dimensionless
  double zeta = 1.3;     ///< upwelling efficiency, dimensionless
  double bL_over_beta = 22.0 / 0.0026;  ///< combined group bL/β, m

  /// Throws std::invalid_argument on non-positive rates/depths/groups or
  /// T_r <= T_r0.
  void validate() const;
};

/// Parameters of the dimensionless system. c > 1 is required for fold curves
/// to exist (sech² never exceeds 1).
struct DimensionlessParams {
  double delta = 0.1;
  double rho = 0.5;
  double a = 2.55;
  double c = 3.75;
  double k = 0.34;

  void validate() const;  ///< throws std::invalid_argument if any value <= 0
};

/// Scales produced by nondimensionalization: S0 = T0 (°C), h0 (m), t0 (days).
struct Scales {
  double S0 = 0.0;
  double T0 = 0.0;
  double h0 = 0.0;
  double t0_days = 0.0;
};

struct NondimResult {
  DimensionlessParams params;
  Scales scales;
};

/// δ = r(bL/β)/(ζh*), ρ = εh*β/(rbL), a = αbL/(εβh*), c = (T_r−T_r0)/(2S0),
/// k = (H−z0)/h*, with S0 = T0 = h*β/(bLμ), h0 = h*, t0 = bL/(βζh*).
[[nodiscard]] NondimResult nondimensionalize(const PhysicalParams& p);

// ---------------------------------------------------------------------------
// Presets and parameter parsing
// ---------------------------------------------------------------------------

/// Names understood by preset_params(): "table1" (nondimensionalized from the
/// default PhysicalParams) plus the figure-caption sets fig2a, fig2b, fig2c,
/// fig4, fig6, fig7.
[[nodiscard]] std::vector<std::string> preset_names();

[[nodiscard]] bool is_preset(const std::string& name);

/// Dimensionless parameters for a named preset.
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] DimensionlessParams preset_params(const std::string& name);

/// Parse "delta=0.1,rho=0.5,a=2.55,c=3.75,k=0.34". Unlisted keys keep the
/// fig4-style defaults of DimensionlessParams. Unknown keys or unparsable
/// numbers throw std::invalid_argument; the result is validated.
[[nodiscard]] DimensionlessParams parse_params(const std::string& spec);

/// Load a plain-text key=value file (one pair per line, '#' comments and
/// blank lines ignored) with the same keys as parse_params.
[[nodiscard]] DimensionlessParams load_params_file(const std::string& path);

}  // namespace enso
