#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mdsift/errors.hpp"
#include "mdsift/sifter.hpp"

using namespace mdsift;

namespace {

constexpr double kUnitCarrier = 1.5e8;  // Hz reads as m/s under the rounded c

// Single-ridge spectrogram following `trace_hz` column by column; every pixel
// carries 4 * scale, so total energy is 36 * scale for a 9-column trace while
// the envelopes (and the rule-3 curve) do not depend on scale at all.
Spectrogram ridge_spectrogram(const std::vector<double>& trace_hz, double scale) {
  Spectrogram spec;
  spec.rows = 32;
  spec.cols = trace_hz.size();
  spec.power.assign(spec.rows * spec.cols, 0.0);
  spec.freq_axis_hz.resize(spec.rows);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    spec.freq_axis_hz[r] = (static_cast<double>(r) - 16.0) * 25.0;
  }
  spec.time_axis_s.assign(spec.cols, 0.0);
  spec.window.hop = 2;
  spec.window.window_len = 8;
  spec.sample_interval_s = 1.0e-3;
  spec.carrier_hz = kUnitCarrier;
  for (std::size_t c = 0; c < spec.cols; ++c) {
    for (std::size_t r = 0; r < spec.rows; ++r) {
      if (spec.freq_axis_hz[r] == trace_hz[c]) spec.at(r, c) = 4.0 * scale;
    }
  }
  return spec;
}

const std::vector<double> kTwoStrokeTrace = {0, 50, 150, 50, 0, 50, 250, 50, 0};
const std::vector<double> kWarpedTrace = {0, 50, 150, 50, 0, 50, 250, 50, 100};

SiftSample sample(std::string id, std::string label, const std::vector<double>& trace,
                  double scale) {
  return SiftSample{std::move(id), std::move(label), ridge_spectrogram(trace, scale)};
}

// amplitude-jittered references: energy dispersion without curve dispersion,
// so the rule-3 band collapses to [0, 0] and the rule-2 band to mean +- 3.6
std::vector<SiftSample> jittered_references(const std::string& label) {
  return {sample(label + "_r0", label, kTwoStrokeTrace, 0.9),
          sample(label + "_r1", label, kTwoStrokeTrace, 1.0),
          sample(label + "_r2", label, kTwoStrokeTrace, 1.1)};
}

std::vector<SignLexeme> test_lexicon() {
  return {{"wave", 1, 2}, {"tap", 1, 3}, {"ghost", 1, 1}};
}

SiftConfig test_config() {
  SiftConfig cfg;
  cfg.analysis.envelope_scale_factor = 0.5;
  PeakConfig peaks;
  peaks.min_height_mps = 60.0;
  peaks.min_prominence_mps = 1.0;
  peaks.min_separation_frames = 4;
  cfg.analysis.peaks = peaks;
  cfg.analysis.light_speed = kRoundedSpeedOfLight;
  cfg.handedness_threshold = 0.95;
  return cfg;
}

ClassStats stats_with_energy(double mean, double std) {
  ClassStats s;
  s.class_label = "wave";
  s.mean_total_energy = mean;
  s.std_total_energy = std;
  return s;
}

}  // namespace

TEST_CASE("stroke rule compares against the lexeme and guards the pairing") {
  KinematicProfile p;
  p.class_label = "wave";
  p.stroke_count = 2;
  CHECK(rule_strokes(p, {"wave", 1, 2}));
  CHECK_FALSE(rule_strokes(p, {"wave", 1, 3}));
  CHECK_THROWS_AS(rule_strokes(p, {"tap", 1, 2}), ConfigError);
}

TEST_CASE("energy rule is an inclusive one-sigma band") {
  KinematicProfile p;
  p.total_energy = 13.0;
  CHECK(rule_energy(p, stats_with_energy(10.0, 3.0)));        // exactly on the edge
  p.total_energy = 7.0;
  CHECK(rule_energy(p, stats_with_energy(10.0, 3.0)));
  p.total_energy = 13.1;
  CHECK_FALSE(rule_energy(p, stats_with_energy(10.0, 3.0)));

  ClassStats no_std;
  no_std.class_label = "wave";
  no_std.mean_total_energy = 10.0;
  CHECK_THROWS_AS(rule_energy(p, no_std), ConfigError);
}

TEST_CASE("envelope rule averages the alignment cost over the references") {
  CHECK(mean_dtw_to_reference({0.0}, {{0.0}, {2.0}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(mean_dtw_to_reference({0.0}, {}), DomainError);

  ClassStats stats;
  stats.class_label = "wave";
  stats.mean_dtw = 1.0;
  stats.std_dtw = 0.5;
  CHECK(rule_envelope({0.0}, {{1.5}}, stats));         // distance 1.5, upper edge
  CHECK_FALSE(rule_envelope({0.0}, {{1.6}}, stats));
  CHECK_FALSE(rule_envelope({0.0}, {{0.2}}, stats));   // distance 0.2, below the band

  ClassStats no_dtw;
  no_dtw.class_label = "wave";
  CHECK_THROWS_AS(rule_envelope({0.0}, {{1.0}}, no_dtw), ConfigError);
}

TEST_CASE("each injected violation trips its own rule") {
  std::vector<SiftSample> reference = jittered_references("wave");
  {
    auto tap_refs = jittered_references("tap");
    reference.insert(reference.end(), tap_refs.begin(), tap_refs.end());
  }

  const std::vector<SiftSample> candidates = {
      sample("clean", "wave", kTwoStrokeTrace, 1.0),
      sample("hot", "wave", kTwoStrokeTrace, 1.2),       // energy 43.2, band tops at 39.6
      sample("warped", "wave", kWarpedTrace, 1.0),       // same energy, different curve
      sample("miscount", "tap", kTwoStrokeTrace, 1.0),   // lexeme expects 3 strokes
  };

  const SiftReport report =
      sift_corpus(candidates, reference, test_lexicon(), test_config());

  REQUIRE(report.verdicts.size() == 4);
  CHECK(report.n_candidates == 4);
  CHECK(report.n_sifted == 3);

  const SiftVerdict& clean = report.verdicts[0];
  CHECK(clean.sample_id == "clean");
  CHECK(clean.error.empty());
  CHECK(clean.rule_strokes_pass);
  CHECK(clean.rule_energy_pass);
  CHECK(clean.rule_envelope_pass);
  CHECK(clean.accepted);
  CHECK(clean.mean_dtw_to_reference == doctest::Approx(0.0));
  CHECK(clean.profile.stroke_count == 2);
  CHECK(clean.profile.handedness == 1);  // 36 / 39.6 sits under the 0.95 threshold

  const SiftVerdict& hot = report.verdicts[1];
  CHECK_FALSE(hot.rule_energy_pass);
  CHECK(hot.rule_strokes_pass);
  CHECK(hot.rule_envelope_pass);        // brightness does not move the envelopes
  CHECK_FALSE(hot.accepted);

  const SiftVerdict& warped = report.verdicts[2];
  CHECK_FALSE(warped.rule_envelope_pass);
  CHECK(warped.rule_strokes_pass);
  CHECK(warped.rule_energy_pass);       // same pixel budget, same energy
  CHECK(warped.mean_dtw_to_reference > 0.0);
  CHECK_FALSE(warped.accepted);

  const SiftVerdict& miscount = report.verdicts[3];
  CHECK_FALSE(miscount.rule_strokes_pass);
  CHECK(miscount.rule_energy_pass);
  CHECK(miscount.rule_envelope_pass);
  CHECK_FALSE(miscount.accepted);
  CHECK(miscount.profile.stroke_count == 2);

  const ClassBreakdown& wave = report.per_class.at("wave");
  CHECK(wave.n_candidates == 3);
  CHECK(wave.n_accepted == 1);
  CHECK(wave.n_sifted == 2);
  CHECK(wave.rule_energy_failures == 1);
  CHECK(wave.rule_envelope_failures == 1);
  CHECK(wave.rule_strokes_failures == 0);
  CHECK(wave.n_errors == 0);

  const ClassBreakdown& tap = report.per_class.at("tap");
  CHECK(tap.n_candidates == 1);
  CHECK(tap.rule_strokes_failures == 1);
  CHECK(tap.rule_energy_failures == 0);
  CHECK(tap.rule_envelope_failures == 0);

  // accepted-set metrics: the lone accepted sample matches its class exactly
  REQUIRE(report.error_speed_mean_mps.has_value());
  CHECK(*report.error_speed_mean_mps == doctest::Approx(0.0));
  CHECK_FALSE(report.error_speed_std_mps.has_value());  // one sample, no dispersion
  CHECK(*report.pct_wrong_strokes == doctest::Approx(0.0));
  CHECK(*report.pct_wrong_handedness == doctest::Approx(0.0));

  CHECK(report.handedness_threshold == doctest::Approx(0.95));
  CHECK(report.reference_max_energy == doctest::Approx(39.6));
  REQUIRE(report.reference_stats.size() == 2);
  CHECK(report.reference_stats[0].class_label == "tap");
  CHECK(report.reference_stats[1].class_label == "wave");
  CHECK(report.reference_stats[1].mean_total_energy == doctest::Approx(36.0));
  CHECK(report.reference_stats[1].std_total_energy.value() == doctest::Approx(3.6));
  CHECK(report.reference_stats[1].mean_dtw.value() == doctest::Approx(0.0));
  CHECK(report.reference_stats[1].std_dtw.value() == doctest::Approx(0.0));
}

TEST_CASE("unknown classes produce error verdicts, not exceptions") {
  const std::vector<SiftSample> reference = jittered_references("wave");
  std::vector<SiftSample> candidates = {
      sample("m", "mystery", kTwoStrokeTrace, 1.0),      // not in the lexicon
      sample("g", "ghost", kTwoStrokeTrace, 1.0),        // lexeme without references
      sample("ok", "wave", kTwoStrokeTrace, 1.0),
  };
  // a structurally broken candidate is also downgraded to an error verdict
  candidates.push_back(sample("torn", "wave", kTwoStrokeTrace, 1.0));
  candidates.back().spectrogram.power.pop_back();

  const SiftReport report =
      sift_corpus(candidates, reference, test_lexicon(), test_config());

  REQUIRE(report.verdicts.size() == 4);
  CHECK_FALSE(report.verdicts[0].error.empty());
  CHECK_FALSE(report.verdicts[1].error.empty());
  CHECK(report.verdicts[2].error.empty());
  CHECK(report.verdicts[2].accepted);
  CHECK_FALSE(report.verdicts[3].error.empty());

  CHECK(report.n_sifted == 3);  // every error verdict counts as sifted
  CHECK(report.per_class.at("mystery").n_errors == 1);
  CHECK(report.per_class.at("ghost").n_errors == 1);
  CHECK(report.per_class.at("wave").n_errors == 1);
  CHECK(report.per_class.at("wave").n_accepted == 1);
}

TEST_CASE("unusable reference corpora are configuration errors") {
  const std::vector<SiftSample> candidates = {sample("c", "wave", kTwoStrokeTrace, 1.0)};

  CHECK_THROWS_AS(sift_corpus(candidates, {}, test_lexicon(), test_config()), ConfigError);

  // one reference sample cannot define a dispersion band
  const std::vector<SiftSample> lone = {sample("r", "wave", kTwoStrokeTrace, 1.0)};
  CHECK_THROWS_AS(sift_corpus(candidates, lone, test_lexicon(), test_config()), ConfigError);

  // a silent reference corpus has no energy scale
  std::vector<SiftSample> silent = {sample("r0", "wave", kTwoStrokeTrace, 1.0),
                                    sample("r1", "wave", kTwoStrokeTrace, 1.0)};
  for (auto& s : silent) {
    std::fill(s.spectrogram.power.begin(), s.spectrogram.power.end(), 0.0);
  }
  CHECK_THROWS_AS(sift_corpus(candidates, silent, test_lexicon(), test_config()), ConfigError);

  // calibration without both handedness classes in the lexicon
  SiftConfig no_threshold = test_config();
  no_threshold.handedness_threshold.reset();
  CHECK_THROWS_AS(sift_corpus(candidates, jittered_references("wave"), test_lexicon(),
                              no_threshold),
                  ConfigError);

  // explicit thresholds must be positive and finite
  SiftConfig bad_threshold = test_config();
  bad_threshold.handedness_threshold = 0.0;
  CHECK_THROWS_AS(sift_corpus(candidates, jittered_references("wave"), test_lexicon(),
                              bad_threshold),
                  ConfigError);
  bad_threshold.handedness_threshold = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sift_corpus(candidates, jittered_references("wave"), test_lexicon(),
                              bad_threshold),
                  ConfigError);
}

TEST_CASE("sifting is deterministic") {
  const std::vector<SiftSample> reference = jittered_references("wave");
  const std::vector<SiftSample> candidates = {
      sample("a", "wave", kTwoStrokeTrace, 1.0),
      sample("b", "wave", kWarpedTrace, 1.05),
  };

  const SiftReport first = sift_corpus(candidates, reference, test_lexicon(), test_config());
  const SiftReport second = sift_corpus(candidates, reference, test_lexicon(), test_config());

  REQUIRE(first.verdicts.size() == second.verdicts.size());
  for (std::size_t i = 0; i < first.verdicts.size(); ++i) {
    CHECK(first.verdicts[i].accepted == second.verdicts[i].accepted);
    CHECK(first.verdicts[i].mean_dtw_to_reference ==
          second.verdicts[i].mean_dtw_to_reference);
    CHECK(first.verdicts[i].profile.total_energy == second.verdicts[i].profile.total_energy);
  }
  CHECK(first.n_sifted == second.n_sifted);
  CHECK(first.handedness_threshold == second.handedness_threshold);
}
