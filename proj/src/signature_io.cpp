#include "mdsift/signature_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "mdsift/errors.hpp"

namespace mdsift {

namespace {

constexpr char kMagic[4] = {'M', 'D', 'S', 'G'};

void append_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t read_u32le(const std::string& buf, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
  }
  return v;
}

std::uint64_t read_u64le(const std::string& buf, std::size_t pos) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
  }
  return v;
}

nlohmann::json header_json(const SignatureFile& sig) {
  nlohmann::json j;
  j["sample_id"] = sig.sample_id;
  j["class"] = sig.class_label;
  j["radar"] = {{"center_frequency_hz", sig.radar.center_frequency_hz},
                {"bandwidth_hz", sig.radar.bandwidth_hz},
                {"chirp_duration_s", sig.radar.chirp_duration_s},
                {"pulses_per_cpi", sig.radar.pulses_per_cpi}};
  j["window"] = {{"kind", to_string(sig.window.kind)},
                 {"window_len", sig.window.window_len},
                 {"hop", sig.window.hop},
                 {"fft_len", sig.window.fft_len}};
  j["rows"] = sig.rows;
  j["cols"] = sig.cols;
  j["freq_start_hz"] = sig.freq_start_hz;
  j["freq_step_hz"] = sig.freq_step_hz;
  j["time_start_s"] = sig.time_start_s;
  j["time_step_s"] = sig.time_step_s;
  return j;
}

[[noreturn]] void fail(ParseError::Kind kind, const std::string& message) {
  throw ParseError(kind, message);
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    fail(ParseError::Kind::bad_header, std::string("signature header: missing number '") + key +
                                           "'");
  }
  return j[key].get<double>();
}

}  // namespace

SignatureFile make_signature(const Spectrogram& spec, const RadarConfig& radar,
                             const std::string& sample_id, const std::string& class_label) {
  radar.validate();
  if (spec.rows == 0 || spec.cols == 0 || spec.power.size() != spec.rows * spec.cols) {
    throw ShapeError("make_signature: spectrogram shape and payload disagree");
  }
  if (spec.freq_axis_hz.size() != spec.rows || spec.time_axis_s.size() != spec.cols) {
    throw ShapeError("make_signature: spectrogram axes do not match its shape");
  }
  const double rel_dt = std::abs(spec.sample_interval_s - radar.chirp_duration_s);
  if (rel_dt > 1e-9 * radar.chirp_duration_s ||
      std::abs(spec.carrier_hz - radar.center_frequency_hz) >
          1e-9 * radar.center_frequency_hz) {
    throw DomainError("make_signature: radar config disagrees with the spectrogram grid");
  }

  SignatureFile sig;
  sig.sample_id = sample_id;
  sig.class_label = class_label;
  sig.radar = radar;
  sig.window = spec.window;
  sig.rows = static_cast<std::uint32_t>(spec.rows);
  sig.cols = static_cast<std::uint32_t>(spec.cols);
  sig.freq_start_hz = spec.freq_axis_hz.front();
  sig.freq_step_hz = spec.rows >= 2 ? spec.freq_axis_hz[1] - spec.freq_axis_hz[0]
                                    : 1.0 / (spec.sample_interval_s * spec.rows);
  sig.time_start_s = spec.time_axis_s.front();
  sig.time_step_s = spec.cols >= 2
                        ? spec.time_axis_s[1] - spec.time_axis_s[0]
                        : static_cast<double>(spec.window.hop) * spec.sample_interval_s;

  sig.power.resize(spec.power.size());
  for (std::size_t i = 0; i < spec.power.size(); ++i) {
    const float f = static_cast<float>(spec.power[i]);
    if (!std::isfinite(f) || f < 0.0f) {
      throw DomainError("make_signature: power values must be finite, non-negative and within "
                        "float32 range");
    }
    sig.power[i] = f;
  }
  return sig;
}

Spectrogram to_spectrogram(const SignatureFile& sig) {
  Spectrogram spec;
  spec.rows = sig.rows;
  spec.cols = sig.cols;
  spec.window = sig.window;
  spec.sample_interval_s = sig.radar.chirp_duration_s;
  spec.carrier_hz = sig.radar.center_frequency_hz;
  spec.power.assign(sig.power.begin(), sig.power.end());
  spec.freq_axis_hz.resize(sig.rows);
  for (std::uint32_t r = 0; r < sig.rows; ++r) {
    spec.freq_axis_hz[r] = sig.freq_start_hz + static_cast<double>(r) * sig.freq_step_hz;
  }
  spec.time_axis_s.resize(sig.cols);
  for (std::uint32_t c = 0; c < sig.cols; ++c) {
    spec.time_axis_s[c] = sig.time_start_s + static_cast<double>(c) * sig.time_step_s;
  }
  return spec;
}

void write_signature(const std::filesystem::path& path, const SignatureFile& sig) {
  if (sig.rows == 0 || sig.cols == 0 ||
      sig.power.size() != static_cast<std::size_t>(sig.rows) * sig.cols) {
    throw ShapeError("write_signature: shape and payload disagree");
  }

  const std::string header = header_json(sig).dump();
  std::string buf;
  buf.reserve(4 + 4 + 4 + header.size() + 8 + sig.power.size() * 4);
  buf.append(kMagic, 4);
  append_u32le(buf, sig.version);
  append_u32le(buf, static_cast<std::uint32_t>(header.size()));
  buf.append(header);
  append_u64le(buf, static_cast<std::uint64_t>(sig.power.size()) * 4);
  for (float f : sig.power) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    append_u32le(buf, bits);
  }

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      fail(ParseError::Kind::io, "write_signature: cannot open " + tmp.string());
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      fail(ParseError::Kind::io, "write_signature: write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ParseError::Kind::io, "write_signature: cannot rename into " + path.string());
  }
}

SignatureFile read_signature(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ParseError::Kind::io, "read_signature: cannot open " + path.string());
  }
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    fail(ParseError::Kind::io, "read_signature: read failed for " + path.string());
  }

  if (buf.size() < 12) {
    fail(ParseError::Kind::truncated, "read_signature: file shorter than the preamble");
  }
  if (std::memcmp(buf.data(), kMagic, 4) != 0) {
    fail(ParseError::Kind::bad_header, "read_signature: bad magic, not a signature file");
  }
  SignatureFile sig;
  sig.version = read_u32le(buf, 4);
  if (sig.version != kSignatureFormatVersion) {
    fail(ParseError::Kind::unknown_version,
         "read_signature: unsupported version " + std::to_string(sig.version));
  }
  const std::uint32_t header_len = read_u32le(buf, 8);
  if (buf.size() < 12 + static_cast<std::size_t>(header_len) + 8) {
    fail(ParseError::Kind::truncated, "read_signature: file ends inside the header");
  }

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.substr(12, header_len));
  } catch (const nlohmann::json::exception& e) {
    fail(ParseError::Kind::bad_header, std::string("read_signature: header is not JSON: ") +
                                           e.what());
  }
  try {
    if (!j.contains("sample_id") || !j["sample_id"].is_string() || !j.contains("class") ||
        !j["class"].is_string()) {
      fail(ParseError::Kind::bad_header, "read_signature: missing id fields");
    }
    sig.sample_id = j["sample_id"].get<std::string>();
    sig.class_label = j["class"].get<std::string>();

    const auto& jr = j.at("radar");
    sig.radar = RadarConfig::make(
        require_number(jr, "center_frequency_hz"), require_number(jr, "bandwidth_hz"),
        require_number(jr, "chirp_duration_s"),
        static_cast<std::int64_t>(require_number(jr, "pulses_per_cpi")));

    const auto& jw = j.at("window");
    if (!jw.contains("kind") || !jw["kind"].is_string()) {
      fail(ParseError::Kind::bad_header, "read_signature: missing window kind");
    }
    sig.window.kind = window_kind_from_string(jw["kind"].get<std::string>());
    sig.window.window_len = static_cast<std::size_t>(require_number(jw, "window_len"));
    sig.window.hop = static_cast<std::size_t>(require_number(jw, "hop"));
    sig.window.fft_len = static_cast<std::size_t>(require_number(jw, "fft_len"));

    sig.rows = static_cast<std::uint32_t>(require_number(j, "rows"));
    sig.cols = static_cast<std::uint32_t>(require_number(j, "cols"));
    sig.freq_start_hz = require_number(j, "freq_start_hz");
    sig.freq_step_hz = require_number(j, "freq_step_hz");
    sig.time_start_s = require_number(j, "time_start_s");
    sig.time_step_s = require_number(j, "time_step_s");
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(ParseError::Kind::bad_header, std::string("read_signature: bad header: ") + e.what());
  }

  if (sig.rows == 0 || sig.cols == 0) {
    fail(ParseError::Kind::bad_header, "read_signature: grid must be non-empty");
  }

  const std::size_t payload_pos = 12 + header_len;
  const std::uint64_t payload_len = read_u64le(buf, payload_pos);
  const std::uint64_t expected = static_cast<std::uint64_t>(sig.rows) * sig.cols * 4;
  if (payload_len != expected) {
    fail(ParseError::Kind::size_mismatch,
         "read_signature: payload length " + std::to_string(payload_len) +
             " does not match rows*cols*4 = " + std::to_string(expected));
  }
  if (buf.size() < payload_pos + 8 + payload_len) {
    fail(ParseError::Kind::truncated, "read_signature: file ends inside the payload");
  }
  if (buf.size() > payload_pos + 8 + payload_len) {
    fail(ParseError::Kind::size_mismatch, "read_signature: trailing bytes after the payload");
  }

  sig.power.resize(static_cast<std::size_t>(sig.rows) * sig.cols);
  for (std::size_t i = 0; i < sig.power.size(); ++i) {
    const std::uint32_t bits = read_u32le(buf, payload_pos + 8 + i * 4);
    float f;
    std::memcpy(&f, &bits, 4);
    if (!std::isfinite(f) || f < 0.0f) {
      fail(ParseError::Kind::bad_record,
           "read_signature: payload value " + std::to_string(i) + " is not finite non-negative");
    }
    sig.power[i] = f;
  }
  return sig;
}

}  // namespace mdsift
