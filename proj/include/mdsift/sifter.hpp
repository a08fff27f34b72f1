#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdsift/kinematics.hpp"
#include "mdsift/lexicon.hpp"
#include "mdsift/stft.hpp"

namespace mdsift {

/// One labelled spectrogram entering the sifter.
struct SiftSample {
  std::string sample_id;
  std::string class_label;
  Spectrogram spectrogram;
};

struct SiftConfig {
  AnalysisConfig analysis;
  /// Normalized handedness threshold; empty -> calibrate on the reference
  /// corpus (requires both handedness classes there).
  std::optional<double> handedness_threshold;
};

struct SiftVerdict {
  std::string sample_id;
  std::string class_label;
  bool rule_strokes_pass = false;
  bool rule_energy_pass = false;
  bool rule_envelope_pass = false;
  bool accepted = false;             // all three rules
  KinematicProfile profile;
  double mean_dtw_to_reference = 0.0;
  std::string error;                 // non-empty -> sample not evaluable (counts as sifted)
};

struct ClassBreakdown {
  std::size_t n_candidates = 0;
  std::size_t n_accepted = 0;
  std::size_t n_sifted = 0;
  std::size_t rule_strokes_failures = 0;
  std::size_t rule_energy_failures = 0;
  std::size_t rule_envelope_failures = 0;
  std::size_t n_errors = 0;
};

struct SiftReport {
  std::vector<SiftVerdict> verdicts;       // candidate order preserved
  std::size_t n_candidates = 0;
  std::size_t n_sifted = 0;                // candidates not accepted
  // Error metrics over the accepted set (empty when nothing was accepted).
  std::optional<double> error_speed_mean_mps;   // |candidate - class mean| average
  std::optional<double> error_speed_std_mps;
  std::optional<double> pct_wrong_strokes;      // 0..100
  std::optional<double> pct_wrong_handedness;   // 0..100
  std::map<std::string, ClassBreakdown> per_class;
  std::vector<ClassStats> reference_stats;      // cached, keyed by class_label
  double handedness_threshold = 0.0;            // normalized scale
  double reference_max_energy = 0.0;            // normalization anchor
};

/// Rule 1: measured stroke count equals the lexicon's. The profile's class
/// label must match the lexeme's gloss.
bool rule_strokes(const KinematicProfile& profile, const SignLexeme& lexeme);

/// Rule 2: |total_energy - class mean| <= class std (inclusive).
bool rule_energy(const KinematicProfile& profile, const ClassStats& stats);

/// Mean DTW distance from `candidate_curve` to every reference curve.
double mean_dtw_to_reference(const std::vector<double>& candidate_curve,
                             const std::vector<std::vector<double>>& reference_curves);

/// Rule 3: mean DTW distance to the reference curves lies inside
/// [mean_dtw - std_dtw, mean_dtw + std_dtw] (inclusive).
bool rule_envelope(const std::vector<double>& candidate_curve,
                   const std::vector<std::vector<double>>& reference_curves,
                   const ClassStats& stats);

/// Full pipeline: profiles the reference corpus, derives per-class stats and
/// the handedness threshold, then evaluates all three rules for every
/// candidate (no short-circuiting). Candidates whose class is missing from
/// the lexicon or reference corpus get an error verdict, not an exception.
SiftReport sift_corpus(const std::vector<SiftSample>& candidates,
                       const std::vector<SiftSample>& reference,
                       const std::vector<SignLexeme>& lexicon,
                       const SiftConfig& cfg = {});

}  // namespace mdsift
