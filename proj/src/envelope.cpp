#include "mdsift/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "mdsift/errors.hpp"

namespace mdsift {

EnvelopePair extract_envelopes(const Spectrogram& spec, double scale_factor) {
  if (!std::isfinite(scale_factor) || scale_factor <= 0.0 || scale_factor >= 1.0) {
    throw DomainError("extract_envelopes: scale factor must lie in (0, 1)");
  }
  if (spec.rows == 0 || spec.cols == 0 || spec.power.size() != spec.rows * spec.cols) {
    throw ShapeError("extract_envelopes: malformed spectrogram");
  }

  EnvelopePair env;
  env.scale_factor = scale_factor;
  env.carrier_hz = spec.carrier_hz;
  env.frame_interval_s = spec.sample_interval_s * static_cast<double>(spec.window.hop);
  env.upper_hz.assign(spec.cols, 0.0);
  env.lower_hz.assign(spec.cols, 0.0);

  for (std::size_t c = 0; c < spec.cols; ++c) {
    double energy = 0.0;
    for (std::size_t r = 0; r < spec.rows; ++r) {
      const double p = spec.at(r, c);
      if (!std::isfinite(p) || p < 0.0) {
        throw DomainError("extract_envelopes: power must be finite and non-negative");
      }
      energy += p;
    }
    if (energy <= 0.0) {
      continue;  // silent column: both envelopes stay at 0 Hz
    }
    const double threshold = scale_factor * energy;

    // Outside-in scans across the full axis; the first qualifying bin from
    // the top is never below the first from the bottom, so upper >= lower.
    bool found = false;
    for (std::size_t r = spec.rows; r-- > 0;) {
      if (spec.at(r, c) >= threshold) {
        env.upper_hz[c] = spec.freq_axis_hz[r];
        found = true;
        break;
      }
    }
    if (!found) {
      continue;  // threshold above every bin: both envelopes stay at 0 Hz
    }
    for (std::size_t r = 0; r < spec.rows; ++r) {
      if (spec.at(r, c) >= threshold) {
        env.lower_hz[c] = spec.freq_axis_hz[r];
        break;
      }
    }
  }
  return env;
}

std::vector<double> envelope_to_velocity(const std::vector<double>& envelope_hz,
                                         double carrier_hz, double light_speed) {
  if (!std::isfinite(carrier_hz) || carrier_hz <= 0.0) {
    throw DomainError("envelope_to_velocity: carrier must be finite and positive");
  }
  const double factor = light_speed / (2.0 * carrier_hz);
  std::vector<double> v(envelope_hz.size());
  std::transform(envelope_hz.begin(), envelope_hz.end(), v.begin(),
                 [factor](double f) { return f * factor; });
  return v;
}

std::vector<double> median_smooth3(const std::vector<double>& series) {
  if (series.size() < 3) {
    return series;
  }
  std::vector<double> out(series);
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    double a = series[i - 1], b = series[i], c = series[i + 1];
    out[i] = std::max(std::min(a, b), std::min(std::max(a, b), c));
  }
  return out;
}

}  // namespace mdsift
