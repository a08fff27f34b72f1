#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mdsift/kinematics.hpp"
#include "mdsift/sifter.hpp"
#include "mdsift/signature_io.hpp"

namespace mdsift {

/// Corpus-level context emitted as the leading meta record of a profiles
/// table.
struct AnalysisMeta {
  std::size_t n_samples = 0;
  double range_resolution_m = 0.0;
  double velocity_resolution_mps = 0.0;
  double light_speed = 0.0;
  double normalization_max_energy = 0.0;
  double handedness_threshold = 0.0;
};

struct ProfileRecord {
  KinematicProfile profile;
  double normalized_energy = 0.0;  // total_energy / corpus max
};

/// All writers emit JSON Lines (one object per line, a leading meta record
/// where noted) and go through a temp file plus atomic rename.
void write_profiles_jsonl(const std::filesystem::path& path, const AnalysisMeta& meta,
                          const std::vector<ProfileRecord>& records);

void write_stats_jsonl(const std::filesystem::path& path, const std::vector<ClassStats>& stats);

void write_sift_report_jsonl(const std::filesystem::path& path, const SiftReport& report);

/// Plain-text dB grid for external plotting: '#' header lines describing the
/// axes, then one line per Doppler row. Values are 10*log10(power + 1e-12)
/// clipped to [peak - dynamic_range_db, peak].
void write_plot_grid(const std::filesystem::path& path, const SignatureFile& sig,
                     double dynamic_range_db = 60.0);

/// Serializes `text` via temp file + rename (shared by the text writers).
void atomic_write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mdsift
