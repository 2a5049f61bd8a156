#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "enso/integrate.hpp"
#include "enso/params.hpp"

namespace enso {

/// Peak detection and classification knobs. The default thresholds follow the
/// event conventions used throughout: a burst (large oscillation, El Niño
/// phase) peaks above x = −2, and a strong cold excursion dips below x = −4.
struct PeakOptions {
  int component = 0;               ///< state component to analyze (0 = x)
  double prominence_floor = 1e-4;  ///< reject ripple below this prominence
  double lao_threshold = -2.0;     ///< peak value above → large oscillation
  double trough_threshold = -4.0;  ///< reference level for deep troughs
};

struct Peak {
  std::size_t index = 0;  ///< sample index in the trajectory
  double t = 0.0;
  double value = 0.0;
  double prominence = 0.0;
  bool large = false;
};

/// Local maxima of the chosen component with prominence ≥ floor, time-ordered.
/// Prominence is measured by walking outward to the nearest higher terrain on
/// each side and taking the peak height above the higher of the two walk
/// minima (the usual topographic convention).
[[nodiscard]] std::vector<Peak> extract_peaks(const Trajectory<3>& traj,
                                              const PeakOptions& opts = {});

/// One "L^s" block: L consecutive large peaks followed by s small ones.
struct SignaturePair {
  int large_count = 0;
  int small_count = 0;
};

struct MmoSignature {
  std::vector<Peak> peaks;          ///< the classified peaks analyzed
  std::vector<SignaturePair> pairs; ///< alternating run-length encoding
  std::string text;                 ///< rendered "L1^s1 L2^s2 …"
  bool degenerate = false;          ///< single-class or empty peak sequence
  std::string note;
};

/// Run-length encodes a large/small class sequence into signature pairs.
/// A leading small run renders as "0^s"; a trailing large run as "L^0".
[[nodiscard]] MmoSignature encode_signature(const std::vector<bool>& large_flags);

/// Full pipeline: extract peaks, classify, encode. Expects the caller to have
/// discarded transients (see IntegratorConfig::transient_discard).
[[nodiscard]] MmoSignature signature(const Trajectory<3>& traj,
                                     const PeakOptions& opts = {});

enum class SaoShape { MonotoneIncreasing, NonMonotone, Other };
[[nodiscard]] std::string to_string(SaoShape shape);

/// Amplitude profile of the small oscillations inside one inter-burst window.
struct SaoProfile {
  std::vector<double> amplitudes;  ///< prominences of consecutive small peaks
  SaoShape shape = SaoShape::Other;
  std::string note;
};

/// Shape of an amplitude sequence under a relative tie tolerance:
/// all-rising → monotone-increasing; falling then rising → non-monotone;
/// anything else (including < 3 amplitudes) → other.
[[nodiscard]] SaoProfile classify_sao_amplitudes(
    const std::vector<double>& amplitudes, double rel_tol = 1e-3);

/// Profile of the window between large peaks window_index and window_index+1.
[[nodiscard]] SaoProfile sao_profile(const Trajectory<3>& traj,
                                     std::size_t window_index,
                                     const PeakOptions& opts = {});

/// All inter-burst windows of the trajectory, in time order.
[[nodiscard]] std::vector<SaoProfile> sao_profiles(const Trajectory<3>& traj,
                                                   const PeakOptions& opts = {});

struct BurstStats {
  std::vector<double> lao_times;      ///< times of large peaks
  std::vector<double> intervals;      ///< successive differences
  std::vector<double> trough_values;  ///< min of component between large peaks
  double mean_interval = 0.0;
  double min_interval = 0.0;
  double max_interval = 0.0;
  std::optional<double> mean_interval_days;  ///< set when scales are given
};

/// Inter-burst statistics; trajectory time is the fast dimensionless time, so
/// one unit corresponds to t0 days when scales are supplied.
[[nodiscard]] BurstStats burst_stats(
    const Trajectory<3>& traj, const PeakOptions& opts = {},
    const std::optional<Scales>& scales = std::nullopt);

}  // namespace enso
