#include "enso/mmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace enso {

namespace {

double component_at(const Trajectory<3>& traj, std::size_t i, int component) {
  return traj.states[i][static_cast<std::size_t>(component)];
}

}  // namespace

std::vector<Peak> extract_peaks(const Trajectory<3>& traj,
                                const PeakOptions& opts) {
  std::vector<Peak> peaks;
  const std::size_t n = traj.size();
  if (n < 3) return peaks;
  if (opts.component < 0 || opts.component > 2) {
    throw std::invalid_argument("extract_peaks: component must be 0, 1 or 2");
  }
  auto x = [&](std::size_t i) { return component_at(traj, i, opts.component); };

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double v = x(i);
    if (!(v > x(i - 1)) || !(v > x(i + 1))) continue;

    // Walk outward until terrain exceeds the peak; the base on each side is
    // the lowest sample passed. Boundaries count as bases.
    double left_min = v;
    for (std::size_t j = i; j-- > 0;) {
      if (x(j) > v) break;
      left_min = std::min(left_min, x(j));
    }
    double right_min = v;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (x(j) > v) break;
      right_min = std::min(right_min, x(j));
    }
    const double prominence = v - std::max(left_min, right_min);
    if (prominence < opts.prominence_floor) continue;

    Peak p;
    p.index = i;
    p.t = traj.times[i];
    p.value = v;
    p.prominence = prominence;
    p.large = v > opts.lao_threshold;
    peaks.push_back(p);
  }
  return peaks;
}

MmoSignature encode_signature(const std::vector<bool>& large_flags) {
  MmoSignature sig;
  if (large_flags.empty()) {
    sig.degenerate = true;
    sig.note = "no peaks detected";
    return sig;
  }

  for (std::size_t i = 0; i < large_flags.size();) {
    std::size_t j = i;
    while (j < large_flags.size() && large_flags[j] == large_flags[i]) ++j;
    const int count = static_cast<int>(j - i);
    if (large_flags[i]) {
      sig.pairs.push_back({count, 0});
    } else if (sig.pairs.empty()) {
      sig.pairs.push_back({0, count});
    } else {
      sig.pairs.back().small_count = count;
    }
    i = j;
  }

  const bool any_large =
      std::find(large_flags.begin(), large_flags.end(), true) !=
      large_flags.end();
  const bool any_small =
      std::find(large_flags.begin(), large_flags.end(), false) !=
      large_flags.end();
  if (!any_large || !any_small) {
    sig.degenerate = true;
    sig.note = any_large ? "all peaks are large oscillations"
                         : "all peaks are small oscillations";
  }

  std::ostringstream text;
  for (std::size_t i = 0; i < sig.pairs.size(); ++i) {
    if (i) text << ' ';
    text << sig.pairs[i].large_count << '^' << sig.pairs[i].small_count;
  }
  sig.text = text.str();
  return sig;
}

MmoSignature signature(const Trajectory<3>& traj, const PeakOptions& opts) {
  std::vector<Peak> peaks = extract_peaks(traj, opts);
  std::vector<bool> flags;
  flags.reserve(peaks.size());
  for (const Peak& p : peaks) flags.push_back(p.large);
  MmoSignature sig = encode_signature(flags);
  sig.peaks = std::move(peaks);
  return sig;
}

std::string to_string(SaoShape shape) {
  switch (shape) {
    case SaoShape::MonotoneIncreasing: return "monotone-increasing";
    case SaoShape::NonMonotone: return "non-monotone";
    case SaoShape::Other: return "other";
  }
  return "other";
}

SaoProfile classify_sao_amplitudes(const std::vector<double>& amplitudes,
                                   double rel_tol) {
  SaoProfile profile;
  profile.amplitudes = amplitudes;
  if (amplitudes.size() < 3) {
    profile.note = "fewer than 3 small-oscillation peaks in window";
    return profile;
  }

  // Sign pattern of successive differences, with near-ties flattened to 0.
  std::vector<int> signs;
  for (std::size_t i = 0; i + 1 < amplitudes.size(); ++i) {
    const double d = amplitudes[i + 1] - amplitudes[i];
    const double tol = rel_tol * std::max({std::abs(amplitudes[i]),
                                           std::abs(amplitudes[i + 1]),
                                           1e-300});
    signs.push_back(d > tol ? 1 : (d < -tol ? -1 : 0));
  }

  std::vector<int> nonzero;
  for (int s : signs) {
    if (s != 0) nonzero.push_back(s);
  }
  if (nonzero.empty()) {
    profile.note = "amplitudes flat within tolerance";
    return profile;
  }
  const bool any_down =
      std::find(nonzero.begin(), nonzero.end(), -1) != nonzero.end();
  if (!any_down) {
    profile.shape = SaoShape::MonotoneIncreasing;
    return profile;
  }
  // Falling then rising: after the first rise no further fall may occur.
  const auto first_up = std::find(nonzero.begin(), nonzero.end(), 1);
  const bool down_after_up =
      first_up != nonzero.end() &&
      std::find(first_up, nonzero.end(), -1) != nonzero.end();
  if (nonzero.front() == -1 && first_up != nonzero.end() && !down_after_up) {
    profile.shape = SaoShape::NonMonotone;
  } else {
    profile.note = "difference pattern matches neither shape";
  }
  return profile;
}

std::vector<SaoProfile> sao_profiles(const Trajectory<3>& traj,
                                     const PeakOptions& opts) {
  const std::vector<Peak> peaks = extract_peaks(traj, opts);
  std::vector<std::size_t> lao_positions;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    if (peaks[i].large) lao_positions.push_back(i);
  }

  std::vector<SaoProfile> profiles;
  for (std::size_t w = 0; w + 1 < lao_positions.size(); ++w) {
    std::vector<double> amps;
    for (std::size_t i = lao_positions[w] + 1; i < lao_positions[w + 1]; ++i) {
      amps.push_back(peaks[i].prominence);
    }
    profiles.push_back(classify_sao_amplitudes(amps));
  }
  return profiles;
}

SaoProfile sao_profile(const Trajectory<3>& traj, std::size_t window_index,
                       const PeakOptions& opts) {
  const std::vector<SaoProfile> all = sao_profiles(traj, opts);
  if (window_index >= all.size()) {
    throw std::invalid_argument("sao_profile: window index out of range");
  }
  return all[window_index];
}

BurstStats burst_stats(const Trajectory<3>& traj, const PeakOptions& opts,
                       const std::optional<Scales>& scales) {
  BurstStats stats;
  const std::vector<Peak> peaks = extract_peaks(traj, opts);
  std::vector<const Peak*> laos;
  for (const Peak& p : peaks) {
    if (p.large) laos.push_back(&p);
  }
  for (const Peak* p : laos) stats.lao_times.push_back(p->t);

  for (std::size_t i = 0; i + 1 < laos.size(); ++i) {
    stats.intervals.push_back(laos[i + 1]->t - laos[i]->t);
    double trough = std::numeric_limits<double>::infinity();
    for (std::size_t j = laos[i]->index; j <= laos[i + 1]->index; ++j) {
      trough = std::min(trough, component_at(traj, j, opts.component));
    }
    stats.trough_values.push_back(trough);
  }

  if (!stats.intervals.empty()) {
    double sum = 0.0;
    stats.min_interval = stats.intervals.front();
    stats.max_interval = stats.intervals.front();
    for (double dt : stats.intervals) {
      sum += dt;
      stats.min_interval = std::min(stats.min_interval, dt);
      stats.max_interval = std::max(stats.max_interval, dt);
    }
    stats.mean_interval = sum / static_cast<double>(stats.intervals.size());
    if (scales) stats.mean_interval_days = stats.mean_interval * scales->t0_days;
  }
  return stats;
}

}  // namespace enso
