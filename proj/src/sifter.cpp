#include "mdsift/sifter.hpp"

#include <algorithm>
#include <cmath>

#include "mdsift/dtw.hpp"
#include "mdsift/errors.hpp"

namespace mdsift {

namespace {

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_std_of(const std::vector<double>& values, double mean) {
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

bool rule_strokes(const KinematicProfile& profile, const SignLexeme& lexeme) {
  if (profile.class_label != lexeme.gloss) {
    throw ConfigError("rule_strokes: profile class '" + profile.class_label +
                      "' does not match lexeme '" + lexeme.gloss + "'");
  }
  return profile.stroke_count == lexeme.expected_strokes;
}

bool rule_energy(const KinematicProfile& profile, const ClassStats& stats) {
  if (!stats.std_total_energy.has_value()) {
    throw ConfigError("rule_energy: class '" + stats.class_label +
                      "' has no energy dispersion (need >= 2 reference samples)");
  }
  return std::abs(profile.total_energy - stats.mean_total_energy) <= *stats.std_total_energy;
}

double mean_dtw_to_reference(const std::vector<double>& candidate_curve,
                             const std::vector<std::vector<double>>& reference_curves) {
  if (reference_curves.empty()) {
    throw DomainError("mean_dtw_to_reference: no reference curves");
  }
  double sum = 0.0;
  for (const auto& ref : reference_curves) {
    sum += dtw_distance_only(candidate_curve, ref);
  }
  return sum / static_cast<double>(reference_curves.size());
}

bool rule_envelope(const std::vector<double>& candidate_curve,
                   const std::vector<std::vector<double>>& reference_curves,
                   const ClassStats& stats) {
  if (!stats.mean_dtw.has_value() || !stats.std_dtw.has_value()) {
    throw ConfigError("rule_envelope: class '" + stats.class_label +
                      "' has no DTW statistics (need >= 2 reference samples)");
  }
  const double d = mean_dtw_to_reference(candidate_curve, reference_curves);
  return d >= *stats.mean_dtw - *stats.std_dtw && d <= *stats.mean_dtw + *stats.std_dtw;
}

SiftReport sift_corpus(const std::vector<SiftSample>& candidates,
                       const std::vector<SiftSample>& reference,
                       const std::vector<SignLexeme>& lexicon, const SiftConfig& cfg) {
  if (reference.empty()) {
    throw ConfigError("sift_corpus: reference corpus is empty");
  }

  std::map<std::string, SignLexeme> lexemes;
  for (const auto& lex : lexicon) lexemes[lex.gloss] = lex;

  // Profile the reference corpus once; every rule band derives from it.
  std::vector<CorpusSample> ref_samples;
  ref_samples.reserve(reference.size());
  for (const auto& s : reference) {
    ref_samples.push_back(
        corpus_sample_from_spectrogram(s.spectrogram, cfg.analysis, s.sample_id, s.class_label));
  }

  SiftReport report;
  report.reference_stats = corpus_kinematic_stats(ref_samples);
  std::map<std::string, const ClassStats*> stats_by_class;
  for (const auto& st : report.reference_stats) {
    if (st.sample_count < 2) {
      throw ConfigError("sift_corpus: reference class '" + st.class_label +
                        "' needs >= 2 samples to define rule bands");
    }
    stats_by_class[st.class_label] = &st;
  }

  std::map<std::string, std::vector<std::vector<double>>> curves_by_class;
  for (const auto& s : ref_samples) {
    curves_by_class[s.profile.class_label].push_back(s.envelope_curve);
  }

  double max_energy = 0.0;
  for (const auto& s : ref_samples) max_energy = std::max(max_energy, s.profile.total_energy);
  if (!(max_energy > 0.0) || !std::isfinite(max_energy)) {
    throw ConfigError("sift_corpus: reference corpus has no positive-energy sample");
  }
  report.reference_max_energy = max_energy;

  if (cfg.handedness_threshold.has_value()) {
    if (!std::isfinite(*cfg.handedness_threshold) || *cfg.handedness_threshold <= 0.0) {
      throw ConfigError("sift_corpus: handedness threshold must be finite and positive");
    }
    report.handedness_threshold = *cfg.handedness_threshold;
  } else {
    std::vector<KinematicProfile> ref_profiles;
    ref_profiles.reserve(ref_samples.size());
    for (const auto& s : ref_samples) ref_profiles.push_back(s.profile);
    report.handedness_threshold =
        calibrate_handedness_threshold(ref_profiles, lexicon).threshold;
  }

  report.n_candidates = candidates.size();
  report.verdicts.reserve(candidates.size());
  std::vector<double> speed_errors;
  std::size_t accepted_wrong_strokes = 0;
  std::size_t accepted_wrong_handedness = 0;

  for (const auto& cand : candidates) {
    SiftVerdict verdict;
    verdict.sample_id = cand.sample_id;
    verdict.class_label = cand.class_label;
    ClassBreakdown& breakdown = report.per_class[cand.class_label];
    ++breakdown.n_candidates;

    const auto lex_it = lexemes.find(cand.class_label);
    const auto stats_it = stats_by_class.find(cand.class_label);
    if (lex_it == lexemes.end()) {
      verdict.error = "class '" + cand.class_label + "' missing from lexicon";
    } else if (stats_it == stats_by_class.end()) {
      verdict.error = "class '" + cand.class_label + "' missing from reference corpus";
    } else {
      try {
        CorpusSample sample = corpus_sample_from_spectrogram(cand.spectrogram, cfg.analysis,
                                                             cand.sample_id, cand.class_label);
        sample.profile.handedness = classify_handedness(
            sample.profile.total_energy / max_energy, report.handedness_threshold);
        verdict.profile = sample.profile;

        const ClassStats& stats = *stats_it->second;
        const auto& ref_curves = curves_by_class.at(cand.class_label);
        verdict.rule_strokes_pass = rule_strokes(sample.profile, lex_it->second);
        verdict.rule_energy_pass = rule_energy(sample.profile, stats);
        verdict.mean_dtw_to_reference =
            mean_dtw_to_reference(sample.envelope_curve, ref_curves);
        verdict.rule_envelope_pass = verdict.mean_dtw_to_reference >=
                                         *stats.mean_dtw - *stats.std_dtw &&
                                     verdict.mean_dtw_to_reference <=
                                         *stats.mean_dtw + *stats.std_dtw;
        verdict.accepted = verdict.rule_strokes_pass && verdict.rule_energy_pass &&
                           verdict.rule_envelope_pass;
      } catch (const std::invalid_argument& e) {
        verdict.error = e.what();
      }
    }

    if (!verdict.error.empty()) {
      ++breakdown.n_errors;
      ++breakdown.n_sifted;
    } else if (verdict.accepted) {
      ++breakdown.n_accepted;
      const ClassStats& stats = *stats_it->second;
      speed_errors.push_back(std::abs(verdict.profile.avg_speed_mps - stats.mean_speed_mps));
      if (verdict.profile.stroke_count != lex_it->second.expected_strokes) {
        ++accepted_wrong_strokes;
      }
      if (verdict.profile.handedness != lex_it->second.expected_handedness) {
        ++accepted_wrong_handedness;
      }
    } else {
      ++breakdown.n_sifted;
      if (!verdict.rule_strokes_pass) ++breakdown.rule_strokes_failures;
      if (!verdict.rule_energy_pass) ++breakdown.rule_energy_failures;
      if (!verdict.rule_envelope_pass) ++breakdown.rule_envelope_failures;
    }
    report.verdicts.push_back(std::move(verdict));
  }

  report.n_sifted = 0;
  for (const auto& [label, breakdown] : report.per_class) {
    (void)label;
    report.n_sifted += breakdown.n_sifted;
  }

  if (!speed_errors.empty()) {
    const std::size_t n_accepted = speed_errors.size();
    report.error_speed_mean_mps = mean_of(speed_errors);
    if (n_accepted >= 2) {
      report.error_speed_std_mps = sample_std_of(speed_errors, *report.error_speed_mean_mps);
    }
    report.pct_wrong_strokes =
        100.0 * static_cast<double>(accepted_wrong_strokes) / static_cast<double>(n_accepted);
    report.pct_wrong_handedness =
        100.0 * static_cast<double>(accepted_wrong_handedness) / static_cast<double>(n_accepted);
  }
  return report;
}

}  // namespace mdsift
