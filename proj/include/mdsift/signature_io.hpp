#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mdsift/radar.hpp"
#include "mdsift/stft.hpp"

namespace mdsift {

inline constexpr std::uint32_t kSignatureFormatVersion = 1;

/// On-disk micro-Doppler signature. Layout:
///   "MDSG" | u32 version | u32 header_len | JSON header
///        | u64 payload_len | payload (rows*cols float32, little endian)
/// The JSON header carries ids, the radar config, the STFT meta, the grid
/// shape and the axis descriptors; the payload is the row-major power
/// matrix. payload_len must equal rows*cols*4 and the file must end with
/// the payload, else reads fail with the documented ParseError kinds.
struct SignatureFile {
  std::uint32_t version = kSignatureFormatVersion;
  std::string sample_id;
  std::string class_label;
  RadarConfig radar;
  WindowMeta window;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  double freq_start_hz = 0.0;
  double freq_step_hz = 0.0;
  double time_start_s = 0.0;
  double time_step_s = 0.0;
  std::vector<float> power;   // row-major, non-negative, finite
};

/// Packs a spectrogram (power cast to float32) with its labels and the radar
/// config it came from; the config must agree with the spectrogram's carrier
/// and sample interval.
SignatureFile make_signature(const Spectrogram& spec, const RadarConfig& radar,
                             const std::string& sample_id, const std::string& class_label);

/// Rebuilds an analysis-ready spectrogram (float payload widened to double,
/// axes regenerated from the descriptors).
Spectrogram to_spectrogram(const SignatureFile& sig);

/// Writes to a temp file in the target directory, then renames into place,
/// so failures leave no partial output.
void write_signature(const std::filesystem::path& path, const SignatureFile& sig);

SignatureFile read_signature(const std::filesystem::path& path);

}  // namespace mdsift
