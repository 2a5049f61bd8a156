#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "enso/mmo.hpp"

using namespace enso;

namespace {

Trajectory<3> series(const std::vector<double>& times,
                     const std::vector<double>& xs) {
  Trajectory<3> traj;
  traj.times = times;
  for (double x : xs) traj.states.push_back({x, 0.0, 0.0});
  return traj;
}

Trajectory<3> sampled(double t0, double t1, double dt,
                      const std::function<double(double)>& f) {
  Trajectory<3> traj;
  for (double t = t0; t <= t1 + 1e-12; t += dt) {
    traj.times.push_back(t);
    traj.states.push_back({f(t), 0.0, 0.0});
  }
  return traj;
}

}  // namespace

TEST_SUITE("mmo") {

TEST_CASE("extract_peaks pins the analytic maximum of a two-tone signal") {
  const auto traj = sampled(0.0, 6.2831853071795865, 1e-3, [](double t) {
    return std::sin(t) + 0.4 * std::sin(2.0 * t);
  });
  const auto peaks = extract_peaks(traj);
  REQUIRE(peaks.size() == 1);  // one maximum per period
  CHECK(std::abs(peaks[0].t - 1.0921452082496483) < 1e-3);
  CHECK(peaks[0].value == doctest::Approx(1.2146735483117126).epsilon(1e-6));
  CHECK(peaks[0].large);  // well above the default −2 threshold
}

TEST_CASE("the prominence floor filters ripple but keeps real peaks") {
  const auto traj = sampled(0.0, 25.0, 1e-3, [](double t) {
    return std::sin(t) + 0.003 * std::sin(50.0 * t);
  });
  PeakOptions coarse;
  coarse.prominence_floor = 0.01;
  const auto big_only = extract_peaks(traj, coarse);
  CHECK(big_only.size() == 4);  // carrier maxima only

  PeakOptions fine;
  fine.prominence_floor = 1e-4;
  const auto with_ripple = extract_peaks(traj, fine);
  CHECK(with_ripple.size() > big_only.size());
}

TEST_CASE("extract_peaks validates the component index") {
  const auto traj = series({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  PeakOptions opts;
  opts.component = 3;
  CHECK_THROWS_AS((void)extract_peaks(traj, opts), std::invalid_argument);
}

TEST_CASE("prominence uses the higher of the two walk bases") {
  // Middle bump between a deep left valley and a shallow right valley.
  const auto traj = series({0, 1, 2, 3, 4, 5, 6},
                           {2.0, -3.0, 1.0, -0.5, 3.0, -1.0, 2.5});
  const auto peaks = extract_peaks(traj);
  REQUIRE(peaks.size() == 2);
  // Peak value 1.0 at index 2: left base −3, right base −0.5 → prominence 1.5.
  CHECK(peaks[0].value == doctest::Approx(1.0));
  CHECK(peaks[0].prominence == doctest::Approx(1.5));
  // Peak value 3.0 at index 4: bases −3 (walk to the start) and −1.
  CHECK(peaks[1].value == doctest::Approx(3.0));
  CHECK(peaks[1].prominence == doctest::Approx(4.0));
}

TEST_CASE("encode_signature renders the canonical alternation") {
  const MmoSignature sig = encode_signature(
      {true, false, false, true, false, false});  // L s s L s s
  CHECK(sig.text == "1^2 1^2");
  CHECK_FALSE(sig.degenerate);
  REQUIRE(sig.pairs.size() == 2);
  CHECK(sig.pairs[0].large_count == 1);
  CHECK(sig.pairs[0].small_count == 2);
}

TEST_CASE("encode_signature handles ragged leading/trailing runs") {
  const MmoSignature leading = encode_signature({false, false, true, false});
  CHECK(leading.text == "0^2 1^1");

  const MmoSignature trailing = encode_signature({true, false, true, true});
  CHECK(trailing.text == "1^1 2^0");

  const MmoSignature multi =
      encode_signature({true, true, false, true, false, false, false});
  CHECK(multi.text == "2^1 1^3");
}

TEST_CASE("single-class and empty sequences are flagged degenerate") {
  CHECK(encode_signature({}).degenerate);
  const MmoSignature all_small = encode_signature({false, false});
  CHECK(all_small.degenerate);
  CHECK(all_small.text == "0^2");
  const MmoSignature all_large = encode_signature({true, true, true});
  CHECK(all_large.degenerate);
  CHECK(all_large.text == "3^0");
  CHECK_FALSE(all_large.note.empty());
}

TEST_CASE("classify_sao_amplitudes distinguishes the documented shapes") {
  CHECK(classify_sao_amplitudes({0.1, 0.2, 0.4}).shape ==
        SaoShape::MonotoneIncreasing);
  CHECK(classify_sao_amplitudes({0.5, 0.2, 0.1, 0.4, 0.9}).shape ==
        SaoShape::NonMonotone);
  CHECK(classify_sao_amplitudes({0.1, 0.4, 0.2}).shape == SaoShape::Other);
  CHECK(classify_sao_amplitudes({0.3, 0.3, 0.3}).shape == SaoShape::Other);
  CHECK(classify_sao_amplitudes({0.1, 0.2}).shape == SaoShape::Other);
  // Near-ties within the relative tolerance count as flat, not as a fall.
  CHECK(classify_sao_amplitudes({0.1, 0.0999999, 0.2, 0.4}).shape ==
        SaoShape::MonotoneIncreasing);
  CHECK(to_string(SaoShape::MonotoneIncreasing) == "monotone-increasing");
  CHECK(to_string(SaoShape::NonMonotone) == "non-monotone");
}

TEST_CASE("signature and windows on a synthetic burst train") {
  // Bursts at t = 10, 40, 70 with growing small wiggles in between.
  auto wave = [](double t) {
    double v = -3.0;
    for (double tb : {10.0, 40.0, 70.0}) {
      v += 3.5 * std::exp(-(t - tb) * (t - tb) / 2.0);
    }
    // Small oscillations, amplitude ramping up toward each burst.
    const double phase = std::fmod(t, 30.0);
    v += 0.05 * (1.0 + phase / 10.0) * std::sin(2.0 * 3.14159265358979 * t / 3.0);
    return v;
  };
  const auto traj = sampled(0.0, 80.0, 0.01, wave);

  const MmoSignature sig = signature(traj);
  REQUIRE_FALSE(sig.degenerate);
  // A possible leading 0^s block aside, every burst carries a 1^s pair.
  int full_pairs = 0;
  for (const auto& pr : sig.pairs) {
    if (pr.large_count == 0) continue;
    CHECK(pr.large_count == 1);
    if (pr.small_count >= 5) ++full_pairs;
  }
  CHECK(full_pairs >= 2);

  const auto profiles = sao_profiles(traj);
  REQUIRE(profiles.size() == 2);  // two inter-burst windows
  for (const auto& prof : profiles) {
    CHECK(prof.amplitudes.size() >= 5);
  }
  CHECK(sao_profile(traj, 0).amplitudes.size() ==
        profiles[0].amplitudes.size());
  CHECK_THROWS_AS((void)sao_profile(traj, 5), std::invalid_argument);

  const BurstStats stats = burst_stats(traj);
  REQUIRE(stats.lao_times.size() == 3);
  REQUIRE(stats.intervals.size() == 2);
  CHECK(stats.mean_interval == doctest::Approx(30.0).epsilon(1e-3));
  CHECK(stats.min_interval <= stats.max_interval);
  CHECK_FALSE(stats.mean_interval_days.has_value());
  for (double trough : stats.trough_values) CHECK(trough < -2.5);

  Scales scales{};
  scales.t0_days = 104.98186676846726;
  const BurstStats days = burst_stats(traj, {}, scales);
  REQUIRE(days.mean_interval_days.has_value());
  CHECK(*days.mean_interval_days ==
        doctest::Approx(stats.mean_interval * 104.98186676846726)
            .epsilon(1e-12));
}

TEST_CASE("short trajectories yield empty, well-formed results") {
  const auto traj = series({0.0, 1.0}, {0.0, 1.0});
  CHECK(extract_peaks(traj).empty());
  const MmoSignature sig = signature(traj);
  CHECK(sig.degenerate);
  CHECK(sig.pairs.empty());
  const BurstStats stats = burst_stats(traj);
  CHECK(stats.lao_times.empty());
  CHECK(stats.mean_interval == 0.0);
}

}  // TEST_SUITE
