#include "mdsift/radar.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "mdsift/errors.hpp"

namespace mdsift {

namespace {

void require_finite_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw DomainError(std::string("RadarConfig: ") + name + " must be finite and positive");
  }
}

}  // namespace

RadarConfig RadarConfig::make(double center_frequency_hz, double bandwidth_hz,
                              double chirp_duration_s, std::int64_t pulses_per_cpi) {
  RadarConfig cfg;
  cfg.center_frequency_hz = center_frequency_hz;
  cfg.bandwidth_hz = bandwidth_hz;
  cfg.chirp_duration_s = chirp_duration_s;
  cfg.pulses_per_cpi = pulses_per_cpi;
  cfg.cpi_duration_s = static_cast<double>(pulses_per_cpi) * chirp_duration_s;
  cfg.slow_time_sample_rate_hz = 1.0 / chirp_duration_s;
  cfg.validate();
  return cfg;
}

void RadarConfig::validate() const {
  require_finite_positive(center_frequency_hz, "center frequency");
  require_finite_positive(bandwidth_hz, "bandwidth");
  require_finite_positive(chirp_duration_s, "chirp duration");
  if (pulses_per_cpi < 1) {
    throw DomainError("RadarConfig: pulses per CPI must be >= 1");
  }
  require_finite_positive(cpi_duration_s, "CPI duration");
  require_finite_positive(slow_time_sample_rate_hz, "slow-time sample rate");

  const double eps = std::numeric_limits<double>::epsilon();
  const double expected_cpi = static_cast<double>(pulses_per_cpi) * chirp_duration_s;
  if (std::abs(cpi_duration_s - expected_cpi) > 8.0 * eps * expected_cpi) {
    throw DomainError("RadarConfig: CPI duration must equal pulses_per_cpi * chirp_duration_s");
  }
  const double expected_rate = 1.0 / chirp_duration_s;
  if (std::abs(slow_time_sample_rate_hz - expected_rate) > 8.0 * eps * expected_rate) {
    throw DomainError("RadarConfig: slow-time sample rate must equal 1 / chirp_duration_s");
  }
}

std::complex<double> transmit_chirp_phase(const RadarConfig& config, double fast_time_s) {
  config.validate();
  if (!std::isfinite(fast_time_s) || std::abs(fast_time_s) > config.chirp_duration_s / 2.0) {
    throw DomainError("transmit_chirp_phase: fast time outside +/- chirp_duration/2");
  }
  const double k = config.chirp_slope_hz_per_s();
  const double phase =
      2.0 * kPi * (config.center_frequency_hz * fast_time_s + 0.5 * k * fast_time_s * fast_time_s);
  return std::polar(1.0, phase);
}

IQSeries simulate_returns(const RadarConfig& config,
                          const std::vector<ScattererTrajectory>& scatterers,
                          const std::optional<NoiseSpec>& noise, double light_speed) {
  config.validate();
  if (scatterers.empty()) {
    throw DomainError("simulate_returns: scatterer list is empty");
  }
  if (!(light_speed > 0.0) || !std::isfinite(light_speed)) {
    throw DomainError("simulate_returns: light speed must be positive");
  }

  const std::size_t pulses = scatterers.front().range_track_m.size();
  if (pulses == 0) {
    throw ShapeError("simulate_returns: range tracks are empty");
  }
  for (const auto& s : scatterers) {
    if (s.range_track_m.size() != pulses) {
      throw ShapeError("simulate_returns: range tracks differ in length");
    }
    if (!std::isfinite(s.amplitude) || s.amplitude < 0.0) {
      throw DomainError("simulate_returns: amplitudes must be finite and non-negative");
    }
    for (double r : s.range_track_m) {
      if (!std::isfinite(r) || r <= 0.0) {
        throw DomainError("simulate_returns: ranges must be finite and positive");
      }
    }
  }

  IQSeries iq;
  iq.sample_interval_s = config.chirp_duration_s;
  iq.config = config;
  iq.samples.resize(pulses);

  // One retained sample per chirp; the fast-time beat is out of scope, so
  // each scatterer contributes only its round-trip carrier phase.
  const double phase_per_meter = -4.0 * kPi * config.center_frequency_hz / light_speed;
  for (std::size_t p = 0; p < pulses; ++p) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& s : scatterers) {
      acc += s.amplitude * std::polar(1.0, phase_per_meter * s.range_track_m[p]);
    }
    iq.samples[p] = acc;
  }

  if (noise.has_value()) {
    if (!std::isfinite(noise->power) || noise->power < 0.0) {
      throw DomainError("simulate_returns: noise power must be finite and non-negative");
    }
    if (noise->power > 0.0) {
      std::mt19937_64 rng(noise->seed);
      std::normal_distribution<double> gauss(0.0, std::sqrt(noise->power / 2.0));
      for (auto& x : iq.samples) {
        x += std::complex<double>(gauss(rng), gauss(rng));
      }
    }
  }
  return iq;
}

double range_resolution_m(const RadarConfig& config, double light_speed) {
  config.validate();
  return light_speed / (2.0 * config.bandwidth_hz);
}

double velocity_resolution_mps(const RadarConfig& config, double light_speed) {
  config.validate();
  return config.wavelength_m(light_speed) / (2.0 * config.cpi_duration_s);
}

double doppler_shift_hz(double radial_velocity_mps, double carrier_hz, double light_speed) {
  if (!std::isfinite(radial_velocity_mps)) {
    throw DomainError("doppler_shift_hz: velocity must be finite");
  }
  if (!std::isfinite(carrier_hz) || carrier_hz <= 0.0) {
    throw DomainError("doppler_shift_hz: carrier must be finite and positive");
  }
  return 2.0 * radial_velocity_mps * carrier_hz / light_speed;
}

double beat_to_range_m(double beat_hz, const RadarConfig& config, double light_speed) {
  config.validate();
  if (!std::isfinite(beat_hz) || beat_hz < 0.0) {
    throw DomainError("beat_to_range_m: beat frequency must be finite and non-negative");
  }
  return light_speed * config.chirp_duration_s * beat_hz / (2.0 * config.bandwidth_hz);
}

}  // namespace mdsift
