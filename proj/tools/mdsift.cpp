// mdsift: simulate, analyze and sift micro-Doppler hand-sign signatures.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mdsift/dtw.hpp"
#include "mdsift/envelope.hpp"
#include "mdsift/errors.hpp"
#include "mdsift/kinematics.hpp"
#include "mdsift/lexicon.hpp"
#include "mdsift/radar.hpp"
#include "mdsift/report_io.hpp"
#include "mdsift/sifter.hpp"
#include "mdsift/signature_io.hpp"
#include "mdsift/stft.hpp"
#include "mdsift/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// shared option plumbing

struct AnalysisOptions {
  double alpha = 0.01;
  bool smooth = false;
  bool rounded_c = false;
  double min_height = -1.0;
  double min_prominence = -1.0;
  long long min_separation = 4;
  unsigned jobs = 0;  // 0 -> hardware concurrency
};

double light_speed_of(const AnalysisOptions& o) {
  return o.rounded_c ? mdsift::kRoundedSpeedOfLight : mdsift::kSpeedOfLight;
}

mdsift::AnalysisConfig to_analysis_config(const AnalysisOptions& o) {
  mdsift::AnalysisConfig cfg;
  cfg.envelope_scale_factor = o.alpha;
  cfg.smooth_envelopes = o.smooth;
  cfg.light_speed = light_speed_of(o);
  if (o.min_height >= 0.0) {
    mdsift::PeakConfig peaks;
    peaks.min_height_mps = o.min_height;
    peaks.min_prominence_mps = o.min_prominence;
    peaks.min_separation_frames = static_cast<std::size_t>(o.min_separation);
    cfg.peaks = peaks;
  }
  return cfg;
}

void add_analysis_options(CLI::App* cmd, AnalysisOptions& o) {
  cmd->add_option("--alpha", o.alpha,
                  "Envelope threshold as a fraction of per-column energy, in (0,1)")
      ->capture_default_str();
  cmd->add_flag("--smooth", o.smooth, "3-point median smoothing of the envelopes");
  cmd->add_flag("--rounded-c", o.rounded_c, "Use c = 3e8 m/s instead of the exact SI value");
  auto* height = cmd->add_option("--min-height", o.min_height,
                                 "Stroke peak gate in m/s (default: 2 velocity bins)");
  auto* prom = cmd->add_option("--min-prominence", o.min_prominence,
                               "Stroke prominence gate in m/s (default: 1 velocity bin)");
  height->needs(prom);
  prom->needs(height);
  cmd->add_option("--min-separation", o.min_separation,
                  "Minimum frames between stroke peaks")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("-j,--jobs", o.jobs, "Worker threads (default: hardware concurrency)");
}

// ---------------------------------------------------------------------------
// bounded worker pool; items are claimed through an atomic counter so output
// slots can be preallocated and stay in input order

unsigned resolve_jobs(unsigned requested, std::size_t n) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned want = requested == 0 ? hw : requested;
  return static_cast<unsigned>(std::min<std::size_t>(want, n));
}

template <typename Fn>
void run_parallel(std::size_t n, unsigned jobs_requested, Fn&& fn) {
  if (n == 0) return;
  const unsigned jobs = resolve_jobs(jobs_requested, n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      while (!stop.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          stop.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// scenario parsing

[[noreturn]] void scenario_fail(const std::string& message) {
  throw mdsift::ParseError(mdsift::ParseError::Kind::bad_record, "scenario: " + message);
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      scenario_fail("unknown key '" + key + "' in " + context);
    }
  }
}

double jnum(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) scenario_fail("'" + key + "' must be a number");
  return obj.at(key).get<double>();
}

double jnum_req(const json& obj, const std::string& key, const std::string& context) {
  if (!obj.contains(key)) scenario_fail("missing '" + key + "' in " + context);
  if (!obj.at(key).is_number()) scenario_fail("'" + key + "' must be a number");
  return obj.at(key).get<double>();
}

long long jint(const json& obj, const std::string& key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) scenario_fail("'" + key + "' must be an integer");
  return obj.at(key).get<long long>();
}

std::string jstr_req(const json& obj, const std::string& key, const std::string& context) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    scenario_fail("missing string '" + key + "' in " + context);
  }
  return obj.at(key).get<std::string>();
}

json merge_objects(const json& base, const json& overlay, const std::string& context) {
  if (!overlay.is_object()) scenario_fail(context + " must be an object");
  json merged = base.is_object() ? base : json::object();
  for (const auto& [key, value] : overlay.items()) merged[key] = value;
  return merged;
}

mdsift::WindowMeta stft_from_json(const json& obj) {
  static const std::set<std::string> keys{"window", "window_len", "hop", "fft_len"};
  require_keys(obj, keys, "stft");
  mdsift::WindowMeta meta;
  if (obj.contains("window")) {
    if (!obj.at("window").is_string()) scenario_fail("'window' must be a string");
    meta.kind = mdsift::window_kind_from_string(obj.at("window").get<std::string>());
  }
  meta.window_len = static_cast<std::size_t>(jint(obj, "window_len",
                                                  static_cast<long long>(meta.window_len)));
  meta.hop = static_cast<std::size_t>(jint(obj, "hop", static_cast<long long>(meta.hop)));
  meta.fft_len =
      static_cast<std::size_t>(jint(obj, "fft_len", static_cast<long long>(meta.fft_len)));
  return meta;
}

struct SimulateJob {
  std::string id;
  std::string label;
  mdsift::RadarConfig radar;
  mdsift::WindowMeta window;
  mdsift::SyntheticSignSpec spec;
  std::optional<mdsift::NoiseSpec> noise;
};

std::vector<SimulateJob> parse_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw mdsift::ParseError(mdsift::ParseError::Kind::io,
                             "cannot open scenario " + path.string());
  }
  json scenario;
  try {
    scenario = json::parse(in);
  } catch (const json::exception& e) {
    throw mdsift::ParseError(mdsift::ParseError::Kind::bad_record,
                             "scenario " + path.string() + ": " + e.what());
  }
  if (!scenario.is_object()) scenario_fail("top level must be an object");
  require_keys(scenario, {"radar", "stft", "samples"}, "the top level");
  if (!scenario.contains("samples") || !scenario.at("samples").is_array() ||
      scenario.at("samples").empty()) {
    scenario_fail("'samples' must be a non-empty array");
  }

  const json global_radar = scenario.value("radar", json::object());
  const json global_stft = scenario.value("stft", json::object());
  static const std::set<std::string> radar_keys{"center_frequency_hz", "bandwidth_hz",
                                                "chirp_duration_s"};
  static const std::set<std::string> sample_keys{
      "id",
      "class",
      "radar",
      "stft",
      "hands",
      "strokes",
      "peak_speed_mps",
      "duration_s",
      "active_span_s",
      "gap_fraction",
      "retraction_ratio",
      "second_hand_speed_scale",
      "stroke_speed_scales",
      "start_range_m",
      "hand_amplitude",
      "torso_amplitude",
      "noise_power",
      "noise_seed"};

  std::vector<SimulateJob> jobs;
  std::set<std::string> ids;
  for (const auto& sample : scenario.at("samples")) {
    if (!sample.is_object()) scenario_fail("each sample must be an object");
    require_keys(sample, sample_keys, "a sample");

    SimulateJob job;
    job.id = jstr_req(sample, "id", "a sample");
    if (job.id.find('/') != std::string::npos || job.id.find('\\') != std::string::npos) {
      scenario_fail("sample id '" + job.id + "' must not contain path separators");
    }
    if (!ids.insert(job.id).second) scenario_fail("duplicate sample id '" + job.id + "'");
    job.label = jstr_req(sample, "class", "sample '" + job.id + "'");

    const json radar = sample.contains("radar")
                           ? merge_objects(global_radar, sample.at("radar"), "sample radar")
                           : global_radar;
    require_keys(radar, radar_keys, "radar");
    const std::string rctx = "radar for sample '" + job.id + "'";
    const double fc = jnum_req(radar, "center_frequency_hz", rctx);
    const double bw = jnum_req(radar, "bandwidth_hz", rctx);
    const double tau = jnum_req(radar, "chirp_duration_s", rctx);

    const json stft = sample.contains("stft")
                          ? merge_objects(global_stft, sample.at("stft"), "sample stft")
                          : global_stft;
    job.window = stft_from_json(stft);

    mdsift::SyntheticSignSpec& spec = job.spec;
    spec.hands = static_cast<int>(jint(sample, "hands", spec.hands));
    spec.strokes = static_cast<int>(jint(sample, "strokes", spec.strokes));
    spec.peak_speed_mps = jnum(sample, "peak_speed_mps", spec.peak_speed_mps);
    spec.duration_s = jnum(sample, "duration_s", spec.duration_s);
    spec.active_span_s = jnum(sample, "active_span_s", spec.active_span_s);
    spec.gap_fraction = jnum(sample, "gap_fraction", spec.gap_fraction);
    spec.retraction_ratio = jnum(sample, "retraction_ratio", spec.retraction_ratio);
    spec.second_hand_speed_scale =
        jnum(sample, "second_hand_speed_scale", spec.second_hand_speed_scale);
    spec.start_range_m = jnum(sample, "start_range_m", spec.start_range_m);
    spec.hand_amplitude = jnum(sample, "hand_amplitude", spec.hand_amplitude);
    spec.torso_amplitude = jnum(sample, "torso_amplitude", spec.torso_amplitude);
    if (sample.contains("stroke_speed_scales")) {
      const auto& arr = sample.at("stroke_speed_scales");
      if (!arr.is_array()) scenario_fail("'stroke_speed_scales' must be an array");
      for (const auto& v : arr) {
        if (!v.is_number()) scenario_fail("'stroke_speed_scales' must hold numbers");
        spec.stroke_speed_scales.push_back(v.get<double>());
      }
    }

    const double noise_power = jnum(sample, "noise_power", 0.0);
    if (noise_power > 0.0) {
      mdsift::NoiseSpec noise;
      noise.power = noise_power;
      noise.seed = static_cast<std::uint64_t>(jint(sample, "noise_seed", 0));
      job.noise = noise;
    }

    const double pulses = std::llround(spec.duration_s / tau);
    if (pulses < 2) scenario_fail("sample '" + job.id + "' spans fewer than two pulses");
    job.radar = mdsift::RadarConfig::make(fc, bw, tau, static_cast<std::int64_t>(pulses));
    jobs.push_back(std::move(job));
  }
  return jobs;
}

// ---------------------------------------------------------------------------
// signature loading shared by analyze / stats / sift

std::vector<fs::path> collect_signatures(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".mdsg") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw mdsift::ParseError(mdsift::ParseError::Kind::io,
                               "no such file or directory: " + in);
    }
  }
  if (files.empty()) {
    throw mdsift::ParseError(mdsift::ParseError::Kind::io, "no signature files found");
  }
  return files;
}

struct LoadedSignature {
  mdsift::SignatureFile sig;
  mdsift::Spectrogram spec;
};

std::vector<LoadedSignature> load_signatures(const std::vector<fs::path>& paths,
                                             unsigned jobs) {
  std::vector<LoadedSignature> loaded(paths.size());
  run_parallel(paths.size(), jobs, [&](std::size_t i) {
    loaded[i].sig = mdsift::read_signature(paths[i]);
    loaded[i].spec = mdsift::to_spectrogram(loaded[i].sig);
  });
  return loaded;
}

std::string fmt_opt(const std::optional<double>& v, const char* format) {
  if (!v.has_value()) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, *v);
  return buf;
}

// ---------------------------------------------------------------------------
// subcommands

struct SimulateArgs {
  std::string scenario;
  std::string out_dir;
  AnalysisOptions opts;  // jobs + rounded_c are the relevant knobs
};

void run_simulate(const SimulateArgs& args) {
  const std::vector<SimulateJob> jobs = parse_scenario(args.scenario);
  fs::create_directories(args.out_dir);

  const double c = light_speed_of(args.opts);
  std::vector<std::string> lines(jobs.size());
  run_parallel(jobs.size(), args.opts.jobs, [&](std::size_t i) {
    const SimulateJob& job = jobs[i];
    const mdsift::SyntheticSign sign = mdsift::synth_sign_trajectory(job.radar, job.spec);
    const mdsift::IQSeries iq = mdsift::simulate_returns(job.radar, sign.scatterers,
                                                         job.noise, c);
    const mdsift::Spectrogram spec = mdsift::stft_spectrogram(iq, job.window);
    const mdsift::SignatureFile sig =
        mdsift::make_signature(spec, job.radar, job.id, job.label);
    const fs::path out = fs::path(args.out_dir) / (job.id + ".mdsg");
    mdsift::write_signature(out, sig);

    char buf[512];
    std::snprintf(buf, sizeof(buf), "wrote %s  %ux%u  class=%s strokes=%d hands=%d",
                  out.string().c_str(), sig.rows, sig.cols, job.label.c_str(),
                  sign.stroke_count, sign.hands);
    lines[i] = buf;
  });

  for (const auto& line : lines) std::cout << line << "\n";
  std::cout << jobs.size() << " signature(s) -> " << args.out_dir << "\n";
}

struct AnalyzeArgs {
  std::vector<std::string> inputs;
  std::string out_path;
  double handedness_threshold = 0.674;
  AnalysisOptions opts;
};

void run_analyze(const AnalyzeArgs& args) {
  const std::vector<fs::path> paths = collect_signatures(args.inputs);
  const std::vector<LoadedSignature> loaded = load_signatures(paths, args.opts.jobs);
  const mdsift::AnalysisConfig cfg = to_analysis_config(args.opts);

  std::vector<mdsift::KinematicProfile> profiles(loaded.size());
  run_parallel(loaded.size(), args.opts.jobs, [&](std::size_t i) {
    profiles[i] = mdsift::profile_spectrogram(loaded[i].spec, cfg, loaded[i].sig.sample_id,
                                              loaded[i].sig.class_label);
  });

  double max_energy = 0.0;
  for (const auto& p : profiles) max_energy = std::max(max_energy, p.total_energy);
  if (!(max_energy > 0.0)) {
    throw mdsift::ConfigError("analyze: corpus has no positive-energy sample");
  }

  std::vector<mdsift::ProfileRecord> records(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    records[i].profile = profiles[i];
    records[i].normalized_energy = profiles[i].total_energy / max_energy;
    records[i].profile.handedness = mdsift::classify_handedness(
        records[i].normalized_energy, args.handedness_threshold);
  }

  mdsift::AnalysisMeta meta;
  meta.n_samples = records.size();
  meta.light_speed = cfg.light_speed;
  meta.range_resolution_m = mdsift::range_resolution_m(loaded.front().sig.radar,
                                                       cfg.light_speed);
  meta.velocity_resolution_mps = mdsift::velocity_resolution_mps(loaded.front().sig.radar,
                                                                 cfg.light_speed);
  meta.normalization_max_energy = max_energy;
  meta.handedness_threshold = args.handedness_threshold;

  std::printf("%zu sample(s), range res %.4f m, velocity res %.4f m/s (first config)\n",
              meta.n_samples, meta.range_resolution_m, meta.velocity_resolution_mps);
  std::printf("%-20s %-14s %10s %8s %6s %14s %12s\n", "sample_id", "class", "speed_mps",
              "strokes", "hands", "total_energy", "norm_energy");
  for (const auto& rec : records) {
    std::printf("%-20s %-14s %10.4f %8d %6d %14.6e %12.4f\n",
                rec.profile.sample_id.c_str(), rec.profile.class_label.c_str(),
                rec.profile.avg_speed_mps, rec.profile.stroke_count, rec.profile.handedness,
                rec.profile.total_energy, rec.normalized_energy);
  }

  if (!args.out_path.empty()) {
    mdsift::write_profiles_jsonl(args.out_path, meta, records);
    std::cout << "profiles -> " << args.out_path << "\n";
  }
}

struct StatsArgs {
  std::vector<std::string> inputs;
  std::string out_path;
  AnalysisOptions opts;
};

void run_stats(const StatsArgs& args) {
  const std::vector<fs::path> paths = collect_signatures(args.inputs);
  const std::vector<LoadedSignature> loaded = load_signatures(paths, args.opts.jobs);
  const mdsift::AnalysisConfig cfg = to_analysis_config(args.opts);

  std::vector<mdsift::CorpusSample> samples(loaded.size());
  run_parallel(loaded.size(), args.opts.jobs, [&](std::size_t i) {
    samples[i] = mdsift::corpus_sample_from_spectrogram(
        loaded[i].spec, cfg, loaded[i].sig.sample_id, loaded[i].sig.class_label);
  });

  const std::vector<mdsift::ClassStats> stats = mdsift::corpus_kinematic_stats(samples);
  std::printf("%-14s %4s %14s %14s %10s %10s %12s %12s\n", "class", "n", "mean_energy",
              "std_energy", "mean_mps", "std_mps", "mean_dtw", "std_dtw");
  for (const auto& st : stats) {
    std::printf("%-14s %4zu %14.6e %14s %10.4f %10s %12s %12s\n", st.class_label.c_str(),
                st.sample_count, st.mean_total_energy,
                fmt_opt(st.std_total_energy, "%.6e").c_str(), st.mean_speed_mps,
                fmt_opt(st.std_speed_mps, "%.4f").c_str(),
                fmt_opt(st.mean_dtw, "%.4f").c_str(), fmt_opt(st.std_dtw, "%.4f").c_str());
  }

  if (!args.out_path.empty()) {
    mdsift::write_stats_jsonl(args.out_path, stats);
    std::cout << "stats -> " << args.out_path << "\n";
  }
}

struct SiftArgs {
  std::vector<std::string> candidates;
  std::vector<std::string> reference;
  std::string lexicon_path;
  std::string out_path;
  double handedness_threshold = 0.0;  // 0 -> calibrate on the reference corpus
  AnalysisOptions opts;
};

void run_sift(const SiftArgs& args) {
  const std::vector<mdsift::SignLexeme> lexicon = mdsift::read_lexicon(args.lexicon_path);

  const auto to_sift_samples = [&](const std::vector<std::string>& inputs) {
    const std::vector<fs::path> paths = collect_signatures(inputs);
    const std::vector<LoadedSignature> loaded = load_signatures(paths, args.opts.jobs);
    std::vector<mdsift::SiftSample> samples(loaded.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
      samples[i].sample_id = loaded[i].sig.sample_id;
      samples[i].class_label = loaded[i].sig.class_label;
      samples[i].spectrogram = loaded[i].spec;
    }
    return samples;
  };
  const std::vector<mdsift::SiftSample> candidates = to_sift_samples(args.candidates);
  const std::vector<mdsift::SiftSample> reference = to_sift_samples(args.reference);

  mdsift::SiftConfig cfg;
  cfg.analysis = to_analysis_config(args.opts);
  if (args.handedness_threshold > 0.0) cfg.handedness_threshold = args.handedness_threshold;

  const mdsift::SiftReport report = mdsift::sift_corpus(candidates, reference, lexicon, cfg);

  std::printf("reference: %zu sample(s), handedness threshold %.4f (normalized)\n",
              reference.size(), report.handedness_threshold);
  for (const auto& st : report.reference_stats) {
    std::printf("  %-14s n=%zu mean_energy=%.6e std=%s mean_dtw=%s std_dtw=%s\n",
                st.class_label.c_str(), st.sample_count, st.mean_total_energy,
                fmt_opt(st.std_total_energy, "%.6e").c_str(),
                fmt_opt(st.mean_dtw, "%.4f").c_str(), fmt_opt(st.std_dtw, "%.4f").c_str());
  }

  std::printf("%-20s %-14s %8s %7s %9s %9s\n", "sample_id", "class", "strokes", "energy",
              "envelope", "verdict");
  for (const auto& v : report.verdicts) {
    if (!v.error.empty()) {
      std::printf("%-20s %-14s %8s %7s %9s %9s  (%s)\n", v.sample_id.c_str(),
                  v.class_label.c_str(), "-", "-", "-", "error", v.error.c_str());
      continue;
    }
    std::printf("%-20s %-14s %8s %7s %9s %9s\n", v.sample_id.c_str(), v.class_label.c_str(),
                v.rule_strokes_pass ? "pass" : "FAIL", v.rule_energy_pass ? "pass" : "FAIL",
                v.rule_envelope_pass ? "pass" : "FAIL",
                v.accepted ? "accepted" : "sifted");
  }

  std::printf("candidates %zu, accepted %zu, sifted %zu\n", report.n_candidates,
              report.n_candidates - report.n_sifted, report.n_sifted);
  if (report.error_speed_mean_mps.has_value()) {
    std::printf("accepted set: speed error mean %.4f m/s", *report.error_speed_mean_mps);
    if (report.error_speed_std_mps.has_value()) {
      std::printf(" std %.4f m/s", *report.error_speed_std_mps);
    }
    std::printf(", wrong strokes %.1f%%, wrong handedness %.1f%%\n",
                *report.pct_wrong_strokes, *report.pct_wrong_handedness);
  }

  if (!args.out_path.empty()) {
    mdsift::write_sift_report_jsonl(args.out_path, report);
    std::cout << "report -> " << args.out_path << "\n";
  }
}

struct ExportArgs {
  std::string input;
  std::string out_path;
  double dynamic_range_db = 60.0;
};

void run_export_plot(const ExportArgs& args) {
  const mdsift::SignatureFile sig = mdsift::read_signature(args.input);
  mdsift::write_plot_grid(args.out_path, sig, args.dynamic_range_db);
  std::printf("wrote %s  %ux%u  clip %.1f dB\n", args.out_path.c_str(), sig.rows, sig.cols,
              args.dynamic_range_db);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"micro-Doppler kinematic signature toolkit"};
  app.set_version_flag("--version", "mdsift 0.1.0");
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Render scenario-described hand signs into signature files");
  simulate->add_option("scenario", sim.scenario, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("-o,--out-dir", sim.out_dir, "Output directory for .mdsg files")
      ->required();
  simulate->add_flag("--rounded-c", sim.opts.rounded_c,
                     "Use c = 3e8 m/s instead of the exact SI value");
  simulate->add_option("-j,--jobs", sim.opts.jobs,
                       "Worker threads (default: hardware concurrency)");

  AnalyzeArgs ana;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Estimate speed, strokes and handedness for each signature");
  analyze->add_option("inputs", ana.inputs, "Signature files or directories")->required();
  analyze->add_option("-o,--out", ana.out_path, "Write a JSONL profile table here");
  analyze
      ->add_option("--handedness-threshold", ana.handedness_threshold,
                   "Normalized energy above which a sample counts as two-handed; the "
                   "default was calibrated on the bundled demo corpus")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_analysis_options(analyze, ana.opts);

  StatsArgs sta;
  CLI::App* stats = app.add_subcommand(
      "stats", "Per-class energy, speed and envelope-DTW statistics of a corpus");
  stats->add_option("inputs", sta.inputs, "Signature files or directories")->required();
  stats->add_option("-o,--out", sta.out_path, "Write a JSONL stats table here");
  add_analysis_options(stats, sta.opts);

  SiftArgs sif;
  CLI::App* sift = app.add_subcommand(
      "sift", "Validate candidate signatures against a reference corpus");
  sift->add_option("-c,--candidates", sif.candidates, "Candidate files or directories")
      ->required();
  sift->add_option("-r,--reference", sif.reference, "Reference files or directories")
      ->required();
  sift->add_option("-l,--lexicon", sif.lexicon_path, "Lexicon JSONL file")
      ->required()
      ->check(CLI::ExistingFile);
  sift->add_option("-o,--out", sif.out_path, "Write the JSONL sift report here");
  sift->add_option("--handedness-threshold", sif.handedness_threshold,
                   "Normalized energy threshold; omit to calibrate on the reference corpus")
      ->check(CLI::PositiveNumber);
  add_analysis_options(sift, sif.opts);

  ExportArgs exp;
  CLI::App* export_plot =
      app.add_subcommand("export-plot", "Dump a signature as a plain-text dB grid");
  export_plot->add_option("input", exp.input, "Signature file")
      ->required()
      ->check(CLI::ExistingFile);
  export_plot->add_option("-o,--out", exp.out_path, "Output text file")->required();
  export_plot
      ->add_option("--dynamic-range-db", exp.dynamic_range_db,
                   "Clip the grid this far below the peak")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) run_simulate(sim);
    if (analyze->parsed()) run_analyze(ana);
    if (stats->parsed()) run_stats(sta);
    if (sift->parsed()) run_sift(sif);
    if (export_plot->parsed()) run_export_plot(exp);
    return 0;
  } catch (const mdsift::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
