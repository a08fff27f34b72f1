#include "mdsift/synth.hpp"

#include <algorithm>
#include <cmath>

#include "mdsift/errors.hpp"

namespace mdsift {

namespace {

// Range stagger keeps simultaneous scatterers from summing coherently.
constexpr double kSecondHandRangeOffset = 0.06;
constexpr double kTorsoRangeOffset = 0.12;

void validate_spec(const SyntheticSignSpec& spec) {
  if (spec.hands != 1 && spec.hands != 2) {
    throw DomainError("synth_sign_trajectory: hands must be 1 or 2");
  }
  if (spec.strokes < 1) {
    throw DomainError("synth_sign_trajectory: strokes must be >= 1");
  }
  if (!std::isfinite(spec.peak_speed_mps) || spec.peak_speed_mps <= 0.0) {
    throw DomainError("synth_sign_trajectory: peak speed must be positive");
  }
  if (!std::isfinite(spec.duration_s) || spec.duration_s <= 0.0) {
    throw DomainError("synth_sign_trajectory: duration must be positive");
  }
  if (!std::isfinite(spec.active_span_s) || spec.active_span_s < 0.0 ||
      spec.active_span_s > spec.duration_s * (1.0 + 1e-12)) {
    throw DomainError("synth_sign_trajectory: active span must lie within the recording");
  }
  if (!std::isfinite(spec.gap_fraction) || spec.gap_fraction < 0.0 || spec.gap_fraction >= 1.0) {
    throw DomainError("synth_sign_trajectory: gap fraction must lie in [0, 1)");
  }
  if (!std::isfinite(spec.retraction_ratio) || spec.retraction_ratio <= 0.0) {
    throw DomainError("synth_sign_trajectory: retraction ratio must be positive");
  }
  if (!std::isfinite(spec.second_hand_speed_scale) || spec.second_hand_speed_scale <= 0.0 ||
      spec.second_hand_speed_scale > 1.0) {
    throw DomainError("synth_sign_trajectory: second-hand speed scale must lie in (0, 1]");
  }
  if (spec.stroke_speed_scales.size() > static_cast<std::size_t>(spec.strokes)) {
    throw DomainError("synth_sign_trajectory: more stroke speed scales than strokes");
  }
  for (double s : spec.stroke_speed_scales) {
    if (!std::isfinite(s) || s <= 0.0) {
      throw DomainError("synth_sign_trajectory: stroke speed scales must be positive");
    }
  }
  if (!std::isfinite(spec.start_range_m) || spec.start_range_m <= 0.0) {
    throw DomainError("synth_sign_trajectory: start range must be positive");
  }
  if (!std::isfinite(spec.hand_amplitude) || spec.hand_amplitude <= 0.0) {
    throw DomainError("synth_sign_trajectory: hand amplitude must be positive");
  }
  if (!std::isfinite(spec.torso_amplitude) || spec.torso_amplitude < 0.0) {
    throw DomainError("synth_sign_trajectory: torso amplitude must be non-negative");
  }
}

double raised_cosine(double x) {  // 0 -> 0 -> 1 -> 0 over x in [0, 1]
  return 0.5 * (1.0 - std::cos(2.0 * kPi * x));
}

}  // namespace

SyntheticSign synth_sign_trajectory(const RadarConfig& config, const SyntheticSignSpec& spec) {
  config.validate();
  validate_spec(spec);

  const double tau = config.chirp_duration_s;
  const auto pulses = static_cast<std::size_t>(std::llround(spec.duration_s / tau));
  if (pulses < 2) {
    throw DomainError("synth_sign_trajectory: recording shorter than two pulses");
  }

  const int n = spec.strokes;
  const double active = spec.active_span_s > 0.0 ? spec.active_span_s : spec.duration_s;
  const double pad = (spec.duration_s - active) / 2.0;
  const double cell = active / n;
  const double rho = spec.retraction_ratio;
  const double w_pos = (1.0 - spec.gap_fraction) * cell * rho / (rho + 1.0);
  const double w_neg = w_pos / rho;
  const double pre_gap = spec.gap_fraction * cell / 2.0;

  auto stroke_scale = [&](int s) {
    return s < static_cast<int>(spec.stroke_speed_scales.size()) ? spec.stroke_speed_scales[s]
                                                                 : 1.0;
  };

  double max_scale = 1.0;
  for (int s = 0; s < n; ++s) max_scale = std::max(max_scale, stroke_scale(s));
  const double v_extreme = spec.peak_speed_mps * max_scale * std::max(1.0, rho);
  const double f_extreme = 2.0 * v_extreme * config.center_frequency_hz / kSpeedOfLight;
  if (f_extreme >= config.unambiguous_doppler_span_hz() / 2.0) {
    throw DomainError("synth_sign_trajectory: peak Doppler would alias at this pulse rate");
  }

  // Dominant-hand velocity, positive toward the radar.
  auto velocity_at = [&](double t) -> double {
    const double u = t - pad;
    if (u < 0.0 || u >= active) return 0.0;
    int s = std::min(static_cast<int>(u / cell), n - 1);
    const double local = u - s * cell;
    const double peak = spec.peak_speed_mps * stroke_scale(s);
    if (local >= pre_gap && local < pre_gap + w_pos) {
      return peak * raised_cosine((local - pre_gap) / w_pos);
    }
    if (local >= pre_gap + w_pos && local < pre_gap + w_pos + w_neg) {
      return -peak * rho * raised_cosine((local - pre_gap - w_pos) / w_neg);
    }
    return 0.0;
  };

  SyntheticSign sign;
  sign.stroke_count = n;
  sign.hands = spec.hands;
  sign.analytic_upper_mps.resize(pulses);
  sign.analytic_lower_mps.resize(pulses);

  std::vector<double> v_a(pulses);
  for (std::size_t p = 0; p < pulses; ++p) {
    v_a[p] = velocity_at(static_cast<double>(p) * tau);
  }

  auto integrate_track = [&](double start_range, double speed_scale) {
    ScattererTrajectory track;
    track.amplitude = spec.hand_amplitude;
    track.range_track_m.resize(pulses);
    double r = start_range;
    for (std::size_t p = 0; p < pulses; ++p) {
      track.range_track_m[p] = r;
      r -= speed_scale * v_a[p] * tau;
    }
    const double r_min =
        *std::min_element(track.range_track_m.begin(), track.range_track_m.end());
    if (r_min <= 0.0) {
      throw DomainError("synth_sign_trajectory: stroke displacement drives range non-positive");
    }
    return track;
  };

  sign.scatterers.push_back(integrate_track(spec.start_range_m, 1.0));
  if (spec.hands == 2) {
    sign.scatterers.push_back(integrate_track(spec.start_range_m + kSecondHandRangeOffset,
                                              spec.second_hand_speed_scale));
  }
  if (spec.torso_amplitude > 0.0) {
    ScattererTrajectory torso;
    torso.amplitude = spec.torso_amplitude;
    torso.range_track_m.assign(pulses, spec.start_range_m + kTorsoRangeOffset);
    sign.scatterers.push_back(torso);
  }

  const double second = spec.hands == 2 ? spec.second_hand_speed_scale : 1.0;
  for (std::size_t p = 0; p < pulses; ++p) {
    const double va = v_a[p];
    const double vb = second * va;
    sign.analytic_upper_mps[p] = std::max({0.0, va, vb});
    sign.analytic_lower_mps[p] = std::min({0.0, va, vb});
  }
  return sign;
}

}  // namespace mdsift
