#include "mdsift/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "mdsift/errors.hpp"

namespace mdsift {

namespace {

nlohmann::json opt_or_null(const std::optional<double>& v) {
  if (v.has_value()) return *v;
  return nullptr;
}

nlohmann::json profile_fields(const KinematicProfile& p) {
  nlohmann::json j;
  j["sample_id"] = p.sample_id;
  j["class"] = p.class_label;
  j["avg_speed_mps"] = p.avg_speed_mps;
  j["strokes"] = p.stroke_count;
  j["handedness"] = p.handedness;
  j["total_energy"] = p.total_energy;
  return j;
}

}  // namespace

void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ParseError(ParseError::Kind::io, "atomic_write_text: cannot open " + tmp.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw ParseError(ParseError::Kind::io,
                       "atomic_write_text: write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ParseError(ParseError::Kind::io,
                     "atomic_write_text: cannot rename into " + path.string());
  }
}

void write_profiles_jsonl(const std::filesystem::path& path, const AnalysisMeta& meta,
                          const std::vector<ProfileRecord>& records) {
  std::ostringstream out;
  nlohmann::json jm;
  jm["type"] = "meta";
  jm["n_samples"] = meta.n_samples;
  jm["range_resolution_m"] = meta.range_resolution_m;
  jm["velocity_resolution_mps"] = meta.velocity_resolution_mps;
  jm["light_speed"] = meta.light_speed;
  jm["normalization_max_energy"] = meta.normalization_max_energy;
  jm["handedness_threshold"] = meta.handedness_threshold;
  out << jm.dump() << '\n';

  for (const auto& rec : records) {
    nlohmann::json j = profile_fields(rec.profile);
    j["type"] = "profile";
    j["normalized_energy"] = rec.normalized_energy;
    out << j.dump() << '\n';
  }
  atomic_write_text(path, out.str());
}

void write_stats_jsonl(const std::filesystem::path& path, const std::vector<ClassStats>& stats) {
  std::ostringstream out;
  for (const auto& st : stats) {
    nlohmann::json j;
    j["type"] = "class_stats";
    j["class"] = st.class_label;
    j["n"] = st.sample_count;
    j["mean_total_energy"] = st.mean_total_energy;
    j["std_total_energy"] = opt_or_null(st.std_total_energy);
    j["mean_speed_mps"] = st.mean_speed_mps;
    j["std_speed_mps"] = opt_or_null(st.std_speed_mps);
    j["mean_dtw"] = opt_or_null(st.mean_dtw);
    j["std_dtw"] = opt_or_null(st.std_dtw);
    out << j.dump() << '\n';
  }
  atomic_write_text(path, out.str());
}

void write_sift_report_jsonl(const std::filesystem::path& path, const SiftReport& report) {
  std::ostringstream out;

  nlohmann::json js;
  js["type"] = "summary";
  js["n_candidates"] = report.n_candidates;
  js["n_sifted"] = report.n_sifted;
  js["error_speed_mean_mps"] = opt_or_null(report.error_speed_mean_mps);
  js["error_speed_std_mps"] = opt_or_null(report.error_speed_std_mps);
  js["pct_wrong_strokes"] = opt_or_null(report.pct_wrong_strokes);
  js["pct_wrong_handedness"] = opt_or_null(report.pct_wrong_handedness);
  js["handedness_threshold"] = report.handedness_threshold;
  js["reference_max_energy"] = report.reference_max_energy;
  out << js.dump() << '\n';

  for (const auto& [label, b] : report.per_class) {
    nlohmann::json j;
    j["type"] = "class_breakdown";
    j["class"] = label;
    j["n_candidates"] = b.n_candidates;
    j["n_accepted"] = b.n_accepted;
    j["n_sifted"] = b.n_sifted;
    j["rule_strokes_failures"] = b.rule_strokes_failures;
    j["rule_energy_failures"] = b.rule_energy_failures;
    j["rule_envelope_failures"] = b.rule_envelope_failures;
    j["n_errors"] = b.n_errors;
    out << j.dump() << '\n';
  }

  for (const auto& v : report.verdicts) {
    nlohmann::json j;
    j["type"] = "verdict";
    j["sample_id"] = v.sample_id;
    j["class"] = v.class_label;
    if (!v.error.empty()) {
      j["error"] = v.error;
    } else {
      j["rule_strokes"] = v.rule_strokes_pass;
      j["rule_energy"] = v.rule_energy_pass;
      j["rule_envelope"] = v.rule_envelope_pass;
      j["accepted"] = v.accepted;
      j["mean_dtw"] = v.mean_dtw_to_reference;
      j["avg_speed_mps"] = v.profile.avg_speed_mps;
      j["strokes"] = v.profile.stroke_count;
      j["handedness"] = v.profile.handedness;
      j["total_energy"] = v.profile.total_energy;
    }
    out << j.dump() << '\n';
  }
  atomic_write_text(path, out.str());
}

void write_plot_grid(const std::filesystem::path& path, const SignatureFile& sig,
                     double dynamic_range_db) {
  if (!std::isfinite(dynamic_range_db) || dynamic_range_db <= 0.0) {
    throw DomainError("write_plot_grid: dynamic range must be finite and positive");
  }
  if (sig.rows == 0 || sig.cols == 0 ||
      sig.power.size() != static_cast<std::size_t>(sig.rows) * sig.cols) {
    throw ShapeError("write_plot_grid: shape and payload disagree");
  }

  double peak = 0.0;
  for (float f : sig.power) peak = std::max(peak, static_cast<double>(f));
  const double peak_db = 10.0 * std::log10(peak + 1e-12);
  const double floor_db = peak_db - dynamic_range_db;

  std::ostringstream out;
  out << "# micro-Doppler power grid, dB relative to receiver units\n";
  out << "# sample_id: " << sig.sample_id << "\n";
  out << "# class: " << sig.class_label << "\n";
  out << "# rows: " << sig.rows << " Doppler bins, freq_hz = " << sig.freq_start_hz << " + r * "
      << sig.freq_step_hz << "\n";
  out << "# cols: " << sig.cols << " frames, time_s = " << sig.time_start_s << " + c * "
      << sig.time_step_s << "\n";
  out << "# clip: [" << floor_db << ", " << peak_db << "] dB\n";

  char cell[32];
  for (std::uint32_t r = 0; r < sig.rows; ++r) {
    for (std::uint32_t c = 0; c < sig.cols; ++c) {
      const double p = sig.power[static_cast<std::size_t>(r) * sig.cols + c];
      const double db = std::max(10.0 * std::log10(p + 1e-12), floor_db);
      std::snprintf(cell, sizeof(cell), "%.3f", db);
      if (c) out << ' ';
      out << cell;
    }
    out << '\n';
  }
  atomic_write_text(path, out.str());
}

}  // namespace mdsift
