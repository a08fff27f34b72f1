#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mdsift/radar.hpp"

namespace mdsift {

enum class WindowKind { hann, hamming, rectangular, gaussian };

WindowKind window_kind_from_string(const std::string& name);  // throws DomainError
std::string to_string(WindowKind kind);

/// Symmetric analysis window of the given length (gaussian: sigma = (N-1)/6).
std::vector<double> make_window(WindowKind kind, std::size_t length);

struct WindowMeta {
  WindowKind kind = WindowKind::hann;
  std::size_t window_len = 64;
  std::size_t hop = 8;
  std::size_t fft_len = 0;   // 0 -> next power of two >= window_len
};

/// |STFT|^2 on a Doppler-centered grid. Rows are Doppler bins in strictly
/// increasing frequency, row r at (r - rows/2) * prf / rows, so 0 Hz sits at
/// row rows/2 (even-length grid: negative Nyquist included, positive
/// excluded). Columns are slow-time frames; column c covers input pulses
/// [c*hop, c*hop + window_len) and is stamped with the window-center time.
/// The DFT is the unnormalized forward transform, so with a rectangular
/// window the per-column power sums to fft_len * sum(|x|^2) over the frame.
struct Spectrogram {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> power;           // row-major, linear units
  std::vector<double> freq_axis_hz;    // per row
  std::vector<double> time_axis_s;     // per column
  WindowMeta window;
  double sample_interval_s = 0.0;
  double carrier_hz = 0.0;

  double at(std::size_t row, std::size_t col) const { return power[row * cols + col]; }
  double& at(std::size_t row, std::size_t col) { return power[row * cols + col]; }
};

/// Columns = floor((n_pulses - window_len) / hop) + 1; no input padding,
/// only full windows are transformed.
Spectrogram stft_spectrogram(const IQSeries& iq, const WindowMeta& window);

/// Per-column sum of power.
std::vector<double> column_energy(const Spectrogram& spec);

/// Sum over all pixels; computed as the sum of column energies.
double total_energy(const Spectrogram& spec);

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace mdsift
