#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mdsift/envelope.hpp"
#include "mdsift/lexicon.hpp"
#include "mdsift/stft.hpp"

namespace mdsift {

/// Scalar kinematic summary of one sample.
struct KinematicProfile {
  std::string sample_id;
  std::string class_label;
  double avg_speed_mps = 0.0;
  int stroke_count = 0;
  int handedness = 1;          // 1 or 2
  double total_energy = 0.0;   // linear spectrogram energy
};

/// Peak-detection gates for stroke counting, in velocity units.
struct PeakConfig {
  double min_height_mps = 0.0;          // peaks must exceed this (strict)
  double min_prominence_mps = 0.0;      // inclusive
  std::size_t min_separation_frames = 4;  // inclusive pairwise distance

  /// Resolution-scaled defaults: one velocity bin of the spectrogram's
  /// window grid, v_res = (prf / window_len) * c / (2 * carrier);
  /// min_height = 2 * v_res, min_prominence = v_res, min_separation = 4.
  static PeakConfig defaults_for(const Spectrogram& spec,
                                 double light_speed = kSpeedOfLight);
};

/// Per-class corpus statistics. std fields (and the DTW pair stats) are
/// empty when too few samples or pairs exist to define them.
struct ClassStats {
  std::string class_label;
  std::size_t sample_count = 0;
  double mean_total_energy = 0.0;
  std::optional<double> std_total_energy;
  double mean_speed_mps = 0.0;
  std::optional<double> std_speed_mps;
  std::optional<double> mean_dtw;
  std::optional<double> std_dtw;
};

/// Profile plus the envelope-velocity curve used for DTW statistics.
struct CorpusSample {
  KinematicProfile profile;
  std::vector<double> envelope_curve;
};

/// Shared knobs for the spectrogram -> envelopes -> profile pipeline.
struct AnalysisConfig {
  double envelope_scale_factor = 0.01;
  bool smooth_envelopes = false;            // 3-point median before estimation
  std::optional<PeakConfig> peaks;          // empty -> PeakConfig::defaults_for
  double light_speed = kSpeedOfLight;
};

/// Mean over columns of (|v_upper| + |v_lower|) / 2.
double average_hand_speed(const EnvelopePair& env, double carrier_hz,
                          double light_speed = kSpeedOfLight);

/// Local maxima of the upper-envelope velocity series that exceed
/// min_height, have prominence >= min_prominence, and sit at least
/// min_separation frames apart (conflicts resolved highest-first; a flat
/// maximal run counts once, at its first frame).
int count_strokes(const EnvelopePair& env, double carrier_hz, const PeakConfig& cfg,
                  double light_speed = kSpeedOfLight);

/// 2 if total_energy >= threshold else 1 (normalized scale, threshold > 0).
int classify_handedness(double total_energy, double threshold);

struct ThresholdCalibration {
  double threshold = 0.0;   // on the max-normalized energy scale
  double accuracy = 0.0;    // fraction of profiles classified correctly
};

/// Midpoint scan over max-normalized energies maximizing labelled accuracy
/// (labels from the lexicon via class_label); ties resolve to the smallest
/// threshold. Requires profiles of both handedness classes.
ThresholdCalibration calibrate_handedness_threshold(
    const std::vector<KinematicProfile>& profiles,
    const std::vector<SignLexeme>& lexicon);

/// Groups samples by class label and computes per-class energy, speed and
/// pairwise-DTW statistics (sample std, n-1 denominator; a single DTW pair
/// reports zero dispersion).
std::vector<ClassStats> corpus_kinematic_stats(const std::vector<CorpusSample>& samples);

/// Rule-3 series: upper-envelope velocities followed by lower-envelope
/// velocities, one concatenated curve.
std::vector<double> concat_envelope_velocities(const EnvelopePair& env, double carrier_hz,
                                               double light_speed = kSpeedOfLight);

/// Runs spectrogram -> envelopes -> profile. handedness is left at 1; it
/// needs a corpus-level energy scale, so callers classify afterwards.
KinematicProfile profile_spectrogram(const Spectrogram& spec, const AnalysisConfig& cfg,
                                     const std::string& sample_id = {},
                                     const std::string& class_label = {});

/// Same pipeline, also returning the rule-3 envelope curve.
CorpusSample corpus_sample_from_spectrogram(const Spectrogram& spec, const AnalysisConfig& cfg,
                                            const std::string& sample_id = {},
                                            const std::string& class_label = {});

}  // namespace mdsift
