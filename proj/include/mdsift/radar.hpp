#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "mdsift/constants.hpp"

namespace mdsift {

/// FMCW waveform and frame parameters. The chirp duration doubles as the
/// slow-time sample interval: one complex sample is retained per chirp.
struct RadarConfig {
  double center_frequency_hz = 0.0;
  double bandwidth_hz = 0.0;
  double chirp_duration_s = 0.0;
  std::int64_t pulses_per_cpi = 0;
  double cpi_duration_s = 0.0;             // pulses_per_cpi * chirp_duration_s
  double slow_time_sample_rate_hz = 0.0;   // 1 / chirp_duration_s

  /// Builds a config with the derived fields filled in and validated.
  static RadarConfig make(double center_frequency_hz, double bandwidth_hz,
                          double chirp_duration_s, std::int64_t pulses_per_cpi);

  /// Throws DomainError if any field is out of range or the derived fields
  /// disagree with the primary ones beyond rounding.
  void validate() const;

  double chirp_slope_hz_per_s() const { return bandwidth_hz / chirp_duration_s; }

  double wavelength_m(double light_speed = kSpeedOfLight) const {
    return light_speed / center_frequency_hz;
  }

  /// Width of the unambiguous Doppler interval. Simulated trajectories must
  /// keep |f_D| below half of this.
  double unambiguous_doppler_span_hz() const { return slow_time_sample_rate_hz; }
};

/// One point scatterer: a range sample per pulse plus a linear amplitude.
struct ScattererTrajectory {
  double amplitude = 1.0;
  std::vector<double> range_track_m;
};

/// Circularly symmetric complex Gaussian receiver noise.
struct NoiseSpec {
  double power = 0.0;       // linear, E[|n|^2]
  std::uint64_t seed = 0;
};

/// Complex slow-time phase history, one sample per pulse.
struct IQSeries {
  std::vector<std::complex<double>> samples;
  double sample_interval_s = 0.0;
  RadarConfig config;
};

/// Unit-magnitude transmit chirp sample exp(j*2*pi*(fc*t + k/2*t^2)) with
/// k = B / T_chirp. Valid for |fast_time_s| <= chirp_duration_s / 2.
std::complex<double> transmit_chirp_phase(const RadarConfig& config, double fast_time_s);

/// Slow-time return: x[p] = sum_i a_i * exp(-j*4*pi*fc*R_i[p] / c).
/// All tracks must be equally long, finite, and strictly positive.
IQSeries simulate_returns(const RadarConfig& config,
                          const std::vector<ScattererTrajectory>& scatterers,
                          const std::optional<NoiseSpec>& noise = std::nullopt,
                          double light_speed = kSpeedOfLight);

double range_resolution_m(const RadarConfig& config, double light_speed = kSpeedOfLight);

double velocity_resolution_mps(const RadarConfig& config, double light_speed = kSpeedOfLight);

/// f_D = 2 * v * f_carrier / c; positive toward the radar.
double doppler_shift_hz(double radial_velocity_mps, double carrier_hz,
                        double light_speed = kSpeedOfLight);

/// Stationary-target beat frequency to range: R = c * T_chirp * f_beat / (2 * B).
double beat_to_range_m(double beat_hz, const RadarConfig& config,
                       double light_speed = kSpeedOfLight);

}  // namespace mdsift
