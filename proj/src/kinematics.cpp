#include "mdsift/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mdsift/dtw.hpp"
#include "mdsift/errors.hpp"

namespace mdsift {

namespace {

struct MeanStd {
  double mean = 0.0;
  std::optional<double> std;
};

MeanStd mean_and_sample_std(const std::vector<double>& values) {
  MeanStd out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

// Local maxima with plateau handling: a flat maximal run counts once, at its
// first frame. Frames touching the series boundary are not peaks.
std::vector<std::size_t> plateau_maxima(const std::vector<double>& v) {
  std::vector<std::size_t> peaks;
  std::size_t i = 1;
  const std::size_t n = v.size();
  while (n >= 3 && i + 1 < n) {
    if (v[i - 1] < v[i]) {
      std::size_t j = i;
      while (j + 1 < n && v[j + 1] == v[i]) ++j;
      if (j + 1 < n && v[j + 1] < v[i]) {
        peaks.push_back(i);
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return peaks;
}

// Height above the higher of the two base minima, where each base is the
// minimum between the peak and the nearest strictly higher point (or the
// series edge).
double prominence_of(const std::vector<double>& v, std::size_t peak) {
  double left_min = v[peak];
  for (std::size_t k = peak; k-- > 0;) {
    if (v[k] > v[peak]) break;
    left_min = std::min(left_min, v[k]);
  }
  double right_min = v[peak];
  for (std::size_t k = peak + 1; k < v.size(); ++k) {
    if (v[k] > v[peak]) break;
    right_min = std::min(right_min, v[k]);
  }
  return v[peak] - std::max(left_min, right_min);
}

void validate_envelope_pair(const EnvelopePair& env, const char* caller) {
  if (env.upper_hz.empty() || env.lower_hz.empty()) {
    throw DomainError(std::string(caller) + ": empty envelope");
  }
  if (env.upper_hz.size() != env.lower_hz.size()) {
    throw ShapeError(std::string(caller) + ": envelope lengths differ");
  }
}

}  // namespace

PeakConfig PeakConfig::defaults_for(const Spectrogram& spec, double light_speed) {
  if (!(spec.carrier_hz > 0.0) || !(spec.sample_interval_s > 0.0) || spec.window.window_len == 0) {
    throw DomainError("PeakConfig: spectrogram lacks carrier, sample interval, or window");
  }
  const double prf = 1.0 / spec.sample_interval_s;
  const double v_res = (prf / static_cast<double>(spec.window.window_len)) * light_speed /
                       (2.0 * spec.carrier_hz);
  PeakConfig cfg;
  cfg.min_height_mps = 2.0 * v_res;
  cfg.min_prominence_mps = v_res;
  cfg.min_separation_frames = 4;
  return cfg;
}

double average_hand_speed(const EnvelopePair& env, double carrier_hz, double light_speed) {
  validate_envelope_pair(env, "average_hand_speed");
  const std::vector<double> upper = envelope_to_velocity(env.upper_hz, carrier_hz, light_speed);
  const std::vector<double> lower = envelope_to_velocity(env.lower_hz, carrier_hz, light_speed);
  double sum = 0.0;
  for (std::size_t c = 0; c < upper.size(); ++c) {
    sum += (std::abs(upper[c]) + std::abs(lower[c])) / 2.0;
  }
  return sum / static_cast<double>(upper.size());
}

int count_strokes(const EnvelopePair& env, double carrier_hz, const PeakConfig& cfg,
                  double light_speed) {
  validate_envelope_pair(env, "count_strokes");
  if (!std::isfinite(cfg.min_height_mps) || cfg.min_height_mps < 0.0 ||
      !std::isfinite(cfg.min_prominence_mps) || cfg.min_prominence_mps < 0.0) {
    throw DomainError("count_strokes: peak gates must be finite and non-negative");
  }

  const std::vector<double> v = envelope_to_velocity(env.upper_hz, carrier_hz, light_speed);
  std::vector<std::size_t> candidates = plateau_maxima(v);

  std::erase_if(candidates, [&](std::size_t p) {
    return v[p] <= cfg.min_height_mps || prominence_of(v, p) < cfg.min_prominence_mps;
  });

  // Enforce pairwise separation, strongest peak first (ties: earlier frame).
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return a < b;
  });
  std::vector<std::size_t> kept;
  for (std::size_t p : candidates) {
    const bool clashes = std::any_of(kept.begin(), kept.end(), [&](std::size_t q) {
      const std::size_t gap = p > q ? p - q : q - p;
      return gap < cfg.min_separation_frames;
    });
    if (!clashes) kept.push_back(p);
  }
  return static_cast<int>(kept.size());
}

int classify_handedness(double total_energy, double threshold) {
  if (!std::isfinite(total_energy) || total_energy < 0.0) {
    throw DomainError("classify_handedness: energy must be finite and non-negative");
  }
  if (!std::isfinite(threshold) || threshold <= 0.0) {
    throw DomainError("classify_handedness: threshold must be finite and positive");
  }
  return total_energy >= threshold ? 2 : 1;
}

ThresholdCalibration calibrate_handedness_threshold(
    const std::vector<KinematicProfile>& profiles, const std::vector<SignLexeme>& lexicon) {
  if (profiles.empty()) {
    throw ConfigError("calibrate_handedness_threshold: no profiles");
  }
  std::map<std::string, int> handedness_by_gloss;
  for (const auto& lex : lexicon) {
    handedness_by_gloss[lex.gloss] = lex.expected_handedness;
  }

  std::vector<double> energies;
  std::vector<int> labels;
  energies.reserve(profiles.size());
  for (const auto& p : profiles) {
    const auto it = handedness_by_gloss.find(p.class_label);
    if (it == handedness_by_gloss.end()) {
      throw ConfigError("calibrate_handedness_threshold: class '" + p.class_label +
                        "' missing from the lexicon");
    }
    energies.push_back(p.total_energy);
    labels.push_back(it->second);
  }
  if (std::count(labels.begin(), labels.end(), 1) == 0 ||
      std::count(labels.begin(), labels.end(), 2) == 0) {
    throw ConfigError("calibrate_handedness_threshold: both handedness classes are required");
  }

  const double max_energy = *std::max_element(energies.begin(), energies.end());
  if (!(max_energy > 0.0) || !std::isfinite(max_energy)) {
    throw ConfigError("calibrate_handedness_threshold: corpus maximum energy must be positive");
  }
  for (double& e : energies) e /= max_energy;

  std::set<double> distinct(energies.begin(), energies.end());
  std::vector<double> candidates;
  if (*distinct.begin() > 0.0) {
    candidates.push_back(*distinct.begin());  // everything classified two-handed
  }
  for (auto it = distinct.begin(); std::next(it) != distinct.end(); ++it) {
    candidates.push_back((*it + *std::next(it)) / 2.0);
  }
  candidates.push_back(1.5);  // above the normalized maximum: everything one-handed

  ThresholdCalibration best;
  best.threshold = candidates.front();
  best.accuracy = -1.0;
  for (double threshold : candidates) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < energies.size(); ++i) {
      if (classify_handedness(energies[i], threshold) == labels[i]) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(energies.size());
    if (accuracy > best.accuracy ||
        (accuracy == best.accuracy && threshold < best.threshold)) {
      best.threshold = threshold;
      best.accuracy = accuracy;
    }
  }
  return best;
}

std::vector<ClassStats> corpus_kinematic_stats(const std::vector<CorpusSample>& samples) {
  std::map<std::string, std::vector<const CorpusSample*>> by_class;
  for (const auto& s : samples) {
    by_class[s.profile.class_label].push_back(&s);
  }

  std::vector<ClassStats> all;
  all.reserve(by_class.size());
  for (const auto& [label, members] : by_class) {
    ClassStats stats;
    stats.class_label = label;
    stats.sample_count = members.size();

    std::vector<double> energies, speeds;
    for (const auto* m : members) {
      energies.push_back(m->profile.total_energy);
      speeds.push_back(m->profile.avg_speed_mps);
    }
    const MeanStd e = mean_and_sample_std(energies);
    const MeanStd v = mean_and_sample_std(speeds);
    stats.mean_total_energy = e.mean;
    stats.std_total_energy = e.std;
    stats.mean_speed_mps = v.mean;
    stats.std_speed_mps = v.std;

    if (members.size() >= 2) {
      std::vector<std::vector<double>> curves;
      curves.reserve(members.size());
      for (const auto* m : members) curves.push_back(m->envelope_curve);
      const PairwiseDtwStats d = pairwise_dtw_stats(curves);
      stats.mean_dtw = d.mean;
      stats.std_dtw = d.std;
    }
    all.push_back(std::move(stats));
  }
  return all;
}

std::vector<double> concat_envelope_velocities(const EnvelopePair& env, double carrier_hz,
                                               double light_speed) {
  validate_envelope_pair(env, "concat_envelope_velocities");
  std::vector<double> curve = envelope_to_velocity(env.upper_hz, carrier_hz, light_speed);
  const std::vector<double> lower = envelope_to_velocity(env.lower_hz, carrier_hz, light_speed);
  curve.insert(curve.end(), lower.begin(), lower.end());
  return curve;
}

KinematicProfile profile_spectrogram(const Spectrogram& spec, const AnalysisConfig& cfg,
                                     const std::string& sample_id,
                                     const std::string& class_label) {
  return corpus_sample_from_spectrogram(spec, cfg, sample_id, class_label).profile;
}

CorpusSample corpus_sample_from_spectrogram(const Spectrogram& spec, const AnalysisConfig& cfg,
                                            const std::string& sample_id,
                                            const std::string& class_label) {
  EnvelopePair env = extract_envelopes(spec, cfg.envelope_scale_factor);
  if (cfg.smooth_envelopes) {
    env.upper_hz = median_smooth3(env.upper_hz);
    env.lower_hz = median_smooth3(env.lower_hz);
  }
  const PeakConfig peaks =
      cfg.peaks.has_value() ? *cfg.peaks : PeakConfig::defaults_for(spec, cfg.light_speed);

  CorpusSample sample;
  sample.profile.sample_id = sample_id;
  sample.profile.class_label = class_label;
  sample.profile.avg_speed_mps = average_hand_speed(env, spec.carrier_hz, cfg.light_speed);
  sample.profile.stroke_count = count_strokes(env, spec.carrier_hz, peaks, cfg.light_speed);
  sample.profile.handedness = 1;  // corpus-level energy scale required; classify later
  sample.profile.total_energy = total_energy(spec);
  sample.envelope_curve = concat_envelope_velocities(env, spec.carrier_hz, cfg.light_speed);
  return sample;
}

}  // namespace mdsift
