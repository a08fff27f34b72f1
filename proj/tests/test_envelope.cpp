#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "mdsift/envelope.hpp"
#include "mdsift/errors.hpp"

using namespace mdsift;

namespace {

// Doppler-centered grid with df = 25 Hz per row and direct pixel control.
Spectrogram make_grid(std::size_t rows, std::size_t cols) {
  Spectrogram spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.power.assign(rows * cols, 0.0);
  spec.freq_axis_hz.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    spec.freq_axis_hz[r] =
        (static_cast<double>(r) - static_cast<double>(rows / 2)) * 25.0;
  }
  spec.time_axis_s.assign(cols, 0.0);
  spec.window.hop = 4;
  spec.sample_interval_s = 1.0e-3;
  spec.carrier_hz = 77.0e9;
  return spec;
}

std::size_t row_of(const Spectrogram& spec, double freq_hz) {
  for (std::size_t r = 0; r < spec.rows; ++r) {
    if (spec.freq_axis_hz[r] == freq_hz) return r;
  }
  REQUIRE(false);
  return 0;
}

Spectrogram two_tone_spectrogram() {
  // Two unit tones placed exactly on the 64-bin grid of a 1 kHz sample rate.
  const double interval = 1.0e-3;
  const double f = 187.5;  // 12 bins
  IQSeries iq;
  iq.sample_interval_s = interval;
  iq.config.center_frequency_hz = 77.0e9;
  iq.samples.resize(256);
  for (std::size_t p = 0; p < iq.samples.size(); ++p) {
    const double t = static_cast<double>(p) * interval;
    const double up = 2.0 * kPi * f * t;
    iq.samples[p] = std::complex<double>{std::cos(up), std::sin(up)} +
                    std::complex<double>{std::cos(up), -std::sin(up)};
  }
  WindowMeta w;
  w.kind = WindowKind::rectangular;
  w.window_len = 64;
  w.hop = 16;
  w.fft_len = 64;
  return stft_spectrogram(iq, w);
}

}  // namespace

TEST_CASE("two opposite ridges set the upper and lower envelopes") {
  Spectrogram spec = make_grid(32, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    spec.at(row_of(spec, 200.0), c) = 10.0;
    spec.at(row_of(spec, -200.0), c) = 10.0;
    spec.at(row_of(spec, 0.0), c) = 1.0;  // weak clutter below threshold
  }

  const EnvelopePair env = extract_envelopes(spec, 0.2);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(env.upper_hz[c] == 200.0);
    CHECK(env.lower_hz[c] == -200.0);
  }
  CHECK(env.scale_factor == 0.2);
  CHECK(env.carrier_hz == 77.0e9);
  CHECK(env.frame_interval_s == doctest::Approx(4.0e-3));
}

TEST_CASE("a single ridge pins both envelopes to the same bin") {
  Spectrogram spec = make_grid(32, 1);
  spec.at(row_of(spec, 200.0), 0) = 5.0;
  const EnvelopePair env = extract_envelopes(spec, 0.5);
  CHECK(env.upper_hz[0] == 200.0);
  CHECK(env.lower_hz[0] == 200.0);
}

TEST_CASE("silent and sub-threshold columns report zero on both envelopes") {
  Spectrogram spec = make_grid(8, 2);
  // column 0 stays all-zero; column 1 is flat so the 50% threshold tops every bin
  for (std::size_t r = 0; r < 8; ++r) spec.at(r, 1) = 1.0;

  const EnvelopePair env = extract_envelopes(spec, 0.5);
  CHECK(env.upper_hz[0] == 0.0);
  CHECK(env.lower_hz[0] == 0.0);
  CHECK(env.upper_hz[1] == 0.0);
  CHECK(env.lower_hz[1] == 0.0);
}

TEST_CASE("raising the threshold fraction never widens the envelope band") {
  Spectrogram spec = make_grid(16, 1);
  // peaked column decaying away from +25 Hz
  for (std::size_t r = 0; r < 16; ++r) {
    const double d = std::abs(spec.freq_axis_hz[r] - 25.0) / 25.0;
    spec.at(r, 0) = std::exp(-0.7 * d);
  }

  double last_width = std::numeric_limits<double>::infinity();
  for (double alpha : {0.01, 0.03, 0.06, 0.09, 0.12, 0.15}) {
    const EnvelopePair env = extract_envelopes(spec, alpha);
    const double width = env.upper_hz[0] - env.lower_hz[0];
    CHECK(width >= 0.0);
    CHECK(width <= last_width);
    last_width = width;
  }
}

TEST_CASE("scaling every pixel by a common factor leaves the envelopes unchanged") {
  // power-of-two factor: threshold and pixels scale bit-exactly together
  Spectrogram spec = make_grid(32, 4);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (double& p : spec.power) p = dist(rng);

  const EnvelopePair base = extract_envelopes(spec, 0.04);
  Spectrogram scaled = spec;
  for (double& p : scaled.power) p *= 8.0;
  const EnvelopePair bright = extract_envelopes(scaled, 0.04);
  CHECK(bright.upper_hz == base.upper_hz);
  CHECK(bright.lower_hz == base.lower_hz);

  // and for a transform-produced spectrogram with a generic gain
  const Spectrogram tones = two_tone_spectrogram();
  const EnvelopePair tone_base = extract_envelopes(tones, 0.05);
  Spectrogram gained = tones;
  for (double& p : gained.power) p *= 7.3;
  const EnvelopePair tone_gained = extract_envelopes(gained, 0.05);
  CHECK(tone_gained.upper_hz == tone_base.upper_hz);
  CHECK(tone_gained.lower_hz == tone_base.lower_hz);
}

TEST_CASE("on-grid tones produce exact envelope frequencies through the transform") {
  const Spectrogram spec = two_tone_spectrogram();
  const EnvelopePair env = extract_envelopes(spec, 0.05);
  for (std::size_t c = 0; c < spec.cols; ++c) {
    CHECK(env.upper_hz[c] == doctest::Approx(187.5));
    CHECK(env.lower_hz[c] == doctest::Approx(-187.5));
  }
}

TEST_CASE("upper envelope never drops below the lower one") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Spectrogram spec = make_grid(24, 8);
    for (double& p : spec.power) {
      p = dist(rng) < 0.3 ? 0.0 : dist(rng);
    }
    const double alpha = 0.01 + 0.3 * dist(rng);
    const EnvelopePair env = extract_envelopes(spec, alpha);
    for (std::size_t c = 0; c < spec.cols; ++c) {
      CHECK(env.upper_hz[c] >= env.lower_hz[c]);
    }
  }
}

TEST_CASE("extraction validates the threshold fraction and the grid") {
  Spectrogram spec = make_grid(8, 2);
  CHECK_THROWS_AS(extract_envelopes(spec, 0.0), DomainError);
  CHECK_THROWS_AS(extract_envelopes(spec, 1.0), DomainError);
  CHECK_THROWS_AS(extract_envelopes(spec, -0.1), DomainError);
  CHECK_THROWS_AS(extract_envelopes(spec, std::numeric_limits<double>::quiet_NaN()),
                  DomainError);

  Spectrogram truncated = spec;
  truncated.power.pop_back();
  CHECK_THROWS_AS(extract_envelopes(truncated, 0.1), ShapeError);

  Spectrogram negative = spec;
  negative.at(3, 0) = -1.0;
  CHECK_THROWS_AS(extract_envelopes(negative, 0.1), DomainError);

  Spectrogram poisoned = spec;
  poisoned.at(3, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(extract_envelopes(poisoned, 0.1), DomainError);
}

TEST_CASE("frequency envelopes convert to radial velocity") {
  // 184.8 Hz at 77 GHz with the datasheet light speed is the 0.36 m/s line
  const std::vector<double> hz = {184.8, -184.8, 0.0};
  const std::vector<double> v = envelope_to_velocity(hz, 77.0e9, kRoundedSpeedOfLight);
  CHECK(v[0] == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(-0.36).epsilon(1e-12));
  CHECK(v[2] == 0.0);

  // exact light speed shifts the figure by the c ratio
  const std::vector<double> v_si = envelope_to_velocity({184.8}, 77.0e9);
  CHECK(v_si[0] == doctest::Approx(0.36 * kSpeedOfLight / 3.0e8).epsilon(1e-12));

  CHECK_THROWS_AS(envelope_to_velocity(hz, 0.0), DomainError);
  CHECK_THROWS_AS(envelope_to_velocity(hz, -77.0e9), DomainError);
}

TEST_CASE("3-point median smoothing removes single-frame spikes") {
  CHECK(median_smooth3({0.0, 10.0, 0.0}) == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(median_smooth3({1.0, 2.0, 3.0, 100.0, 3.0}) ==
        std::vector<double>{1.0, 2.0, 3.0, 3.0, 3.0});
  // plateaus survive
  CHECK(median_smooth3({0.0, 5.0, 5.0, 0.0}) == std::vector<double>{0.0, 5.0, 5.0, 0.0});
  // endpoints copy through even when the interior moves
  CHECK(median_smooth3({9.0, 1.0, 2.0}) == std::vector<double>{9.0, 2.0, 2.0});
  // short series pass through
  CHECK(median_smooth3({1.0, 2.0}) == std::vector<double>{1.0, 2.0});
  CHECK(median_smooth3({}) == std::vector<double>{});
}
