#pragma once

#include <vector>

#include "mdsift/radar.hpp"

namespace mdsift {

/// Prescription for one synthetic sign recording. The recording is split
/// into `strokes` equal cells inside the active span; each cell holds a
/// raised-cosine approach lobe at the stroke's peak speed followed by a
/// retraction lobe that returns the hand to its start range, with
/// `gap_fraction` of the cell spent at rest (half before, half after).
struct SyntheticSignSpec {
  int hands = 1;                             // 1 or 2
  int strokes = 1;                           // >= 1
  double peak_speed_mps = 0.5;               // dominant-hand approach peak
  double duration_s = 4.0;                   // recording length
  double active_span_s = 0.0;                // 0 -> activity fills the recording
  double gap_fraction = 0.1;                 // rest fraction of each stroke cell
  double retraction_ratio = 1.0;             // retraction peak / stroke peak
  double second_hand_speed_scale = 0.75;     // two-handed: second hand velocity scale
  std::vector<double> stroke_speed_scales;   // optional per-stroke peak multipliers
  double start_range_m = 1.5;
  double hand_amplitude = 1.0;
  double torso_amplitude = 0.25;             // 0 disables the torso scatterer
};

/// Generator output: scatterer tracks for the simulator plus the analytic
/// envelope-velocity profiles the estimators are expected to recover.
/// analytic_upper_mps[p] is the fastest approaching speed over all moving
/// scatterers at pulse p (>= 0, exactly `strokes` positive lobes peaking at
/// the prescribed speed); analytic_lower_mps[p] is the fastest receding
/// velocity (<= 0). Per-stroke displacement closure makes
/// mean(upper) == mean(|lower|), the quantity average_hand_speed measures.
struct SyntheticSign {
  std::vector<ScattererTrajectory> scatterers;   // hand(s) first, torso last if present
  std::vector<double> analytic_upper_mps;
  std::vector<double> analytic_lower_mps;
  int stroke_count = 0;
  int hands = 1;
};

/// Builds the scatterer set for `spec` on the pulse grid of `config`.
/// Throws DomainError if the spec is out of range, the peak Doppler would
/// alias, or a range track would go non-positive.
SyntheticSign synth_sign_trajectory(const RadarConfig& config, const SyntheticSignSpec& spec);

}  // namespace mdsift
