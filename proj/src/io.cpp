#include "ccmatch/io.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace fs = std::filesystem;

namespace ccmatch {

namespace {

std::string lowercase_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

[[noreturn]] void parse_fail(const fs::path& path, const std::string& what) {
  throw ParseError(path.string() + ": " + what);
}

std::uint16_t read_u16(const std::string& bytes, size_t offset) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[offset]) |
                                    (static_cast<unsigned char>(bytes[offset + 1]) << 8));
}

std::uint32_t read_u32(const std::string& bytes, size_t offset) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset])) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + 1])) << 8) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + 2])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + 3])) << 24);
}

void append_u16(std::string& bytes, std::uint16_t value) {
  bytes.push_back(static_cast<char>(value & 0xff));
  bytes.push_back(static_cast<char>((value >> 8) & 0xff));
}

void append_u32(std::string& bytes, std::uint32_t value) {
  bytes.push_back(static_cast<char>(value & 0xff));
  bytes.push_back(static_cast<char>((value >> 8) & 0xff));
  bytes.push_back(static_cast<char>((value >> 16) & 0xff));
  bytes.push_back(static_cast<char>((value >> 24) & 0xff));
}

TimeSeries read_wav(const fs::path& path) {
  const std::string bytes = read_file(path);
  auto need = [&](size_t offset, size_t count, const char* what) {
    if (bytes.size() < offset + count) {
      std::ostringstream os;
      os << "truncated at byte " << bytes.size() << ": expected " << what
         << " at byte " << offset;
      parse_fail(path, os.str());
    }
  };

  need(0, 12, "RIFF/WAVE header");
  if (bytes.compare(0, 4, "RIFF") != 0) parse_fail(path, "byte 0: missing RIFF magic");
  if (bytes.compare(8, 4, "WAVE") != 0) parse_fail(path, "byte 8: missing WAVE magic");

  bool have_fmt = false;
  std::uint32_t sample_rate = 0;
  Vector samples;
  bool have_data = false;

  size_t cursor = 12;
  while (cursor + 8 <= bytes.size()) {
    const std::string chunk_id = bytes.substr(cursor, 4);
    const std::uint32_t chunk_size = read_u32(bytes, cursor + 4);
    const size_t body = cursor + 8;
    need(body, chunk_size, (chunk_id + " chunk body").c_str());

    if (chunk_id == "fmt ") {
      if (chunk_size < 16) parse_fail(path, "fmt chunk shorter than 16 bytes");
      const std::uint16_t audio_format = read_u16(bytes, body);
      const std::uint16_t channels = read_u16(bytes, body + 2);
      sample_rate = read_u32(bytes, body + 4);
      const std::uint16_t bits = read_u16(bytes, body + 14);
      if (audio_format != 1) {
        std::ostringstream os;
        os << path.string() << ": unsupported WAV encoding (format tag "
           << audio_format << "); only PCM is supported";
        throw UnsupportedFormatError(os.str());
      }
      if (channels != 1) {
        std::ostringstream os;
        os << path.string() << ": multi-channel WAV not supported (channels="
           << channels << ")";
        throw UnsupportedFormatError(os.str());
      }
      if (bits != 16) {
        std::ostringstream os;
        os << path.string() << ": unsupported bit depth (" << bits
           << "); only 16-bit PCM is supported";
        throw UnsupportedFormatError(os.str());
      }
      have_fmt = true;
    } else if (chunk_id == "data") {
      if (!have_fmt) parse_fail(path, "data chunk appears before fmt chunk");
      if (chunk_size % 2 != 0) {
        std::ostringstream os;
        os << "data chunk at byte " << cursor << " has odd size " << chunk_size;
        parse_fail(path, os.str());
      }
      const size_t count = chunk_size / 2;
      samples.resize(static_cast<Index>(count));
      for (size_t i = 0; i < count; ++i) {
        const std::uint16_t raw = read_u16(bytes, body + 2 * i);
        const std::int16_t value = static_cast<std::int16_t>(raw);
        samples(static_cast<Index>(i)) = static_cast<double>(value) / 32768.0;
      }
      have_data = true;
    }
    // any other chunk (LIST, fact, ...) is metadata: skip it
    cursor = body + chunk_size + (chunk_size % 2);  // chunks are word-aligned
  }

  if (!have_fmt) parse_fail(path, "missing fmt chunk");
  if (!have_data) parse_fail(path, "missing data chunk");
  if (samples.size() == 0) {
    throw ContractError(path.string() + ": empty series (data chunk holds no samples)");
  }
  return TimeSeries(std::move(samples), static_cast<double>(sample_rate));
}

TimeSeries read_csv(const fs::path& path) {
  const std::string text = read_file(path);
  std::vector<double> values;
  size_t line_number = 0;
  size_t begin = 0;
  while (begin < text.size()) {
    size_t end = text.find('\n', begin);
    if (end == std::string::npos) end = text.size();
    size_t trimmed_end = end;
    if (trimmed_end > begin && text[trimmed_end - 1] == '\r') --trimmed_end;
    ++line_number;
    const std::string_view line(text.data() + begin, trimmed_end - begin);
    begin = end + 1;

    if (line.empty()) {
      if (begin >= text.size()) break;  // trailing newline
      std::ostringstream os;
      os << "line " << line_number << ": empty line";
      parse_fail(path, os.str());
    }
    if (line_number == 1 && line == "sample") continue;  // optional header

    double value = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      std::ostringstream os;
      os << "line " << line_number << ": invalid number '" << std::string(line) << "'";
      parse_fail(path, os.str());
    }
    values.push_back(value);
  }
  if (values.empty()) {
    throw ContractError(path.string() + ": empty series (no samples)");
  }
  return TimeSeries(Eigen::Map<const Vector>(values.data(),
                                             static_cast<Index>(values.size())));
}

TimeSeries read_json(const fs::path& path) {
  const std::string text = read_file(path);
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(path, e.what());  // nlohmann reports the byte position
  }
  if (!parsed.is_object() || !parsed.contains("samples") ||
      !parsed["samples"].is_array()) {
    parse_fail(path, "expected an object with a \"samples\" array");
  }
  const auto& array = parsed["samples"];
  Vector samples(static_cast<Index>(array.size()));
  Index i = 0;
  for (const auto& entry : array) {
    if (!entry.is_number()) {
      std::ostringstream os;
      os << "samples[" << i << "] is not a number";
      parse_fail(path, os.str());
    }
    samples(i++) = entry.get<double>();
  }
  if (samples.size() == 0) {
    throw ContractError(path.string() + ": empty series (no samples)");
  }
  std::optional<double> rate;
  if (parsed.contains("sample_rate")) {
    if (!parsed["sample_rate"].is_number()) {
      parse_fail(path, "\"sample_rate\" is not a number");
    }
    rate = parsed["sample_rate"].get<double>();
  }
  return TimeSeries(std::move(samples), rate);
}

void write_wav(const TimeSeries& series, const fs::path& path) {
  if (!series.sample_rate()) {
    throw ContractError(path.string() +
                        ": WAV output requires a sample rate on the series");
  }
  const auto rate = static_cast<std::uint32_t>(std::llround(*series.sample_rate()));
  const auto count = static_cast<std::uint32_t>(series.size());

  std::string bytes;
  bytes.reserve(44 + 2 * count);
  bytes += "RIFF";
  append_u32(bytes, 36 + 2 * count);
  bytes += "WAVE";
  bytes += "fmt ";
  append_u32(bytes, 16);
  append_u16(bytes, 1);  // PCM
  append_u16(bytes, 1);  // mono
  append_u32(bytes, rate);
  append_u32(bytes, rate * 2);  // byte rate
  append_u16(bytes, 2);         // block align
  append_u16(bytes, 16);        // bits per sample
  bytes += "data";
  append_u32(bytes, 2 * count);
  for (Index i = 0; i < series.size(); ++i) {
    const double scaled = std::round(series.samples()(i) * 32768.0);
    const double clipped = std::clamp(scaled, -32768.0, 32767.0);
    append_u16(bytes, static_cast<std::uint16_t>(static_cast<std::int16_t>(clipped)));
  }
  write_file_atomic(path, bytes);
}

void write_csv(const TimeSeries& series, const fs::path& path) {
  std::string text;
  text.reserve(static_cast<size_t>(series.size()) * 20);
  for (Index i = 0; i < series.size(); ++i) {
    text += format_double_full(series.samples()(i));
    text += '\n';
  }
  write_file_atomic(path, text);
}

void write_json(const TimeSeries& series, const fs::path& path) {
  nlohmann::json out;
  out["samples"] = std::vector<double>(
      series.samples().data(), series.samples().data() + series.size());
  if (series.sample_rate()) {
    out["sample_rate"] = *series.sample_rate();
  }
  write_file_atomic(path, out.dump(2) + "\n");
}

}  // namespace

SeriesFile::SeriesFile(fs::path file_path) : path(std::move(file_path)) {
  const std::string ext = lowercase_extension(path);
  if (ext == ".wav") {
    format = SeriesFormat::wav_pcm16_mono;
  } else if (ext == ".csv") {
    format = SeriesFormat::csv_scalar;
  } else if (ext == ".json") {
    format = SeriesFormat::json_series;
  } else {
    throw ContractError(path.string() +
                        ": cannot infer series format from extension '" + ext +
                        "' (expected .wav, .csv or .json)");
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path.string() + ": cannot open file for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError(path.string() + ": read failure");
  }
  return std::move(buffer).str();
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  fs::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  std::ostringstream name;
  name << (path.filename().string()) << ".tmp" << counter.fetch_add(1);
  const fs::path tmp = dir / name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError(tmp.string() + ": cannot open file for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError(tmp.string() + ": write failure");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(path.string() + ": cannot move temporary file into place");
  }
}

TimeSeries read_series(const SeriesFile& file) {
  switch (file.format) {
    case SeriesFormat::wav_pcm16_mono:
      return read_wav(file.path);
    case SeriesFormat::csv_scalar:
      return read_csv(file.path);
    case SeriesFormat::json_series:
      return read_json(file.path);
  }
  throw ContractError("read_series: unknown format");
}

void write_series(const TimeSeries& series, const SeriesFile& file) {
  switch (file.format) {
    case SeriesFormat::wav_pcm16_mono:
      write_wav(series, file.path);
      return;
    case SeriesFormat::csv_scalar:
      write_csv(series, file.path);
      return;
    case SeriesFormat::json_series:
      write_json(series, file.path);
      return;
  }
  throw ContractError("write_series: unknown format");
}

void write_curves(const std::vector<MatchCurve>& curves, const fs::path& path,
                  CurveFormat format) {
  if (format == CurveFormat::json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& curve : curves) {
      nlohmann::json entry;
      entry["source"] = curve.source_label;
      entry["data"] = curve.data_label;
      entry["threshold"] = curve.threshold;
      nlohmann::json points = nlohmann::json::array();
      for (const auto& point : curve.points) {
        points.push_back({point.length, point.count});
      }
      entry["points"] = std::move(points);
      out.push_back(std::move(entry));
    }
    write_file_atomic(path, out.dump(2) + "\n");
    return;
  }

  // CSV needs one shared length column.
  if (!curves.empty()) {
    const auto& reference = curves.front().points;
    for (const auto& curve : curves) {
      bool same = curve.points.size() == reference.size();
      for (size_t i = 0; same && i < reference.size(); ++i) {
        same = curve.points[i].length == reference[i].length;
      }
      if (!same) {
        throw ContractError(path.string() +
                            ": CSV curve output requires a shared length grid");
      }
    }
  }
  std::string text = "length";
  for (const auto& curve : curves) {
    text += ',';
    text += curve.source_label;
    text += "->";
    text += curve.data_label;
  }
  text += '\n';
  if (!curves.empty()) {
    for (size_t i = 0; i < curves.front().points.size(); ++i) {
      text += std::to_string(curves.front().points[i].length);
      for (const auto& curve : curves) {
        text += ',';
        text += std::to_string(curve.points[i].count);
      }
      text += '\n';
    }
  }
  write_file_atomic(path, text);
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string format_double_full(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

}  // namespace ccmatch
