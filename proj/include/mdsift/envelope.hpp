#pragma once

#include <vector>

#include "mdsift/constants.hpp"
#include "mdsift/stft.hpp"

namespace mdsift {

/// Per-column extreme-Doppler envelopes. upper_hz >= lower_hz always; a
/// column with no qualifying bin (or zero energy) reports 0 Hz on both.
struct EnvelopePair {
  std::vector<double> upper_hz;
  std::vector<double> lower_hz;
  double scale_factor = 0.0;      // threshold fraction used for extraction
  double carrier_hz = 0.0;        // copied from the source spectrogram
  double frame_interval_s = 0.0;  // hop * sample interval
};

/// Threshold each column at scale_factor * column energy; the upper envelope
/// is the frequency of the first qualifying bin scanning from the highest
/// frequency downward, the lower envelope the first scanning from the lowest
/// frequency upward. scale_factor must lie in (0, 1).
EnvelopePair extract_envelopes(const Spectrogram& spec, double scale_factor = 0.01);

/// v = f * c / (2 * f_carrier), elementwise.
std::vector<double> envelope_to_velocity(const std::vector<double>& envelope_hz,
                                         double carrier_hz,
                                         double light_speed = kSpeedOfLight);

/// 3-point median smoothing; endpoints are copied through.
std::vector<double> median_smooth3(const std::vector<double>& series);

}  // namespace mdsift
