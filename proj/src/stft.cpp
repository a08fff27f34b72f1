#include "mdsift/stft.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>

#include "mdsift/errors.hpp"

namespace mdsift {

namespace {

// FFTW plan creation is not thread-safe; execution via the new-array
// interface is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    std::vector<std::complex<double>> in(n), out(n);
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n),
                             reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()),
                             FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  ~FftPlan() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan_);
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute(std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
  }

  std::size_t size() const { return n_; }

 private:
  fftw_plan plan_;
  std::size_t n_;
};

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

WindowKind window_kind_from_string(const std::string& name) {
  if (name == "hann") return WindowKind::hann;
  if (name == "hamming") return WindowKind::hamming;
  if (name == "rectangular") return WindowKind::rectangular;
  if (name == "gaussian") return WindowKind::gaussian;
  throw DomainError("unknown window kind: " + name);
}

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::hann: return "hann";
    case WindowKind::hamming: return "hamming";
    case WindowKind::rectangular: return "rectangular";
    case WindowKind::gaussian: return "gaussian";
  }
  throw DomainError("unknown window kind");
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  if (length == 0) {
    throw DomainError("make_window: length must be >= 1");
  }
  std::vector<double> h(length, 1.0);
  if (length == 1 || kind == WindowKind::rectangular) {
    return h;
  }
  const double den = static_cast<double>(length - 1);
  switch (kind) {
    case WindowKind::hann:
      for (std::size_t n = 0; n < length; ++n) {
        h[n] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(n) / den);
      }
      break;
    case WindowKind::hamming:
      for (std::size_t n = 0; n < length; ++n) {
        h[n] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(n) / den);
      }
      break;
    case WindowKind::gaussian: {
      const double center = den / 2.0;
      const double sigma = den / 6.0;
      for (std::size_t n = 0; n < length; ++n) {
        const double z = (static_cast<double>(n) - center) / sigma;
        h[n] = std::exp(-0.5 * z * z);
      }
      break;
    }
    case WindowKind::rectangular:
      break;
  }
  return h;
}

Spectrogram stft_spectrogram(const IQSeries& iq, const WindowMeta& window) {
  if (iq.samples.empty()) {
    throw ShapeError("stft_spectrogram: empty input series");
  }
  if (!(iq.sample_interval_s > 0.0) || !std::isfinite(iq.sample_interval_s)) {
    throw DomainError("stft_spectrogram: sample interval must be positive");
  }
  for (const auto& x : iq.samples) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
      throw DomainError("stft_spectrogram: input samples must be finite");
    }
  }
  if (window.window_len == 0) {
    throw DomainError("stft_spectrogram: window length must be >= 1");
  }
  if (window.hop == 0) {
    throw DomainError("stft_spectrogram: hop must be >= 1");
  }
  if (window.window_len > iq.samples.size()) {
    throw ShapeError("stft_spectrogram: window longer than the input series");
  }

  const std::size_t w = window.window_len;
  const std::size_t fft_len = window.fft_len == 0 ? next_pow2(w) : window.fft_len;
  if (fft_len < w) {
    throw DomainError("stft_spectrogram: fft length shorter than the window");
  }
  if (fft_len % 2 != 0) {
    throw DomainError("stft_spectrogram: fft length must be even");
  }

  Spectrogram spec;
  spec.window = window;
  spec.window.fft_len = fft_len;
  spec.sample_interval_s = iq.sample_interval_s;
  spec.carrier_hz = iq.config.center_frequency_hz;
  spec.cols = (iq.samples.size() - w) / window.hop + 1;
  spec.rows = fft_len;
  spec.power.assign(spec.rows * spec.cols, 0.0);

  const double prf = 1.0 / iq.sample_interval_s;
  const double df = prf / static_cast<double>(fft_len);
  const auto half = static_cast<std::ptrdiff_t>(fft_len / 2);
  spec.freq_axis_hz.resize(fft_len);
  for (std::size_t r = 0; r < fft_len; ++r) {
    spec.freq_axis_hz[r] = static_cast<double>(static_cast<std::ptrdiff_t>(r) - half) * df;
  }
  spec.time_axis_s.resize(spec.cols);
  for (std::size_t c = 0; c < spec.cols; ++c) {
    spec.time_axis_s[c] =
        (static_cast<double>(c * window.hop) + static_cast<double>(w - 1) / 2.0) *
        iq.sample_interval_s;
  }

  const std::vector<double> h = make_window(window.kind, w);
  FftPlan plan(fft_len);
  std::vector<std::complex<double>> frame(fft_len), out(fft_len);
  for (std::size_t c = 0; c < spec.cols; ++c) {
    const std::size_t offset = c * window.hop;
    for (std::size_t n = 0; n < w; ++n) {
      frame[n] = h[n] * iq.samples[offset + n];
    }
    std::fill(frame.begin() + static_cast<std::ptrdiff_t>(w), frame.end(),
              std::complex<double>{0.0, 0.0});
    plan.execute(frame.data(), out.data());
    for (std::size_t r = 0; r < fft_len; ++r) {
      const std::size_t bin = (r + fft_len / 2) % fft_len;  // fftshift
      spec.power[r * spec.cols + c] = std::norm(out[bin]);
    }
  }
  return spec;
}

std::vector<double> column_energy(const Spectrogram& spec) {
  if (spec.rows == 0 || spec.cols == 0 || spec.power.size() != spec.rows * spec.cols) {
    throw ShapeError("column_energy: malformed spectrogram");
  }
  std::vector<double> energy(spec.cols, 0.0);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    const double* row = spec.power.data() + r * spec.cols;
    for (std::size_t c = 0; c < spec.cols; ++c) {
      energy[c] += row[c];
    }
  }
  return energy;
}

double total_energy(const Spectrogram& spec) {
  const std::vector<double> energy = column_energy(spec);
  return std::accumulate(energy.begin(), energy.end(), 0.0);
}

}  // namespace mdsift
