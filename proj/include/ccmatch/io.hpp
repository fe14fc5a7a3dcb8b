#pragma once

// Series and curve I/O.
//
// Formats:
//   wav_pcm16_mono — RIFF/WAVE, 16-bit signed little-endian PCM, single
//                    channel. Samples map to [-1, 1) by division by 32768;
//                    chunks other than fmt/data are skipped.
//   csv_scalar     — one sample per line, LF endings, '.' decimal separator,
//                    optional leading header line "sample". Written with 17
//                    significant digits so reads reproduce doubles exactly.
//   json_series    — {"samples": [...], "sample_rate": <optional Hz>}.
//
// All writes go to a temporary file in the target directory and are renamed
// into place on success.

#include <filesystem>
#include <string>
#include <vector>

#include "ccmatch/matcher.hpp"
#include "ccmatch/series.hpp"

namespace ccmatch {

enum class SeriesFormat { wav_pcm16_mono, csv_scalar, json_series };

struct SeriesFile {
  std::filesystem::path path;
  SeriesFormat format;

  // Format inferred from the extension (.wav/.csv/.json).
  explicit SeriesFile(std::filesystem::path file_path);
  SeriesFile(std::filesystem::path file_path, SeriesFormat file_format)
      : path(std::move(file_path)), format(file_format) {}
};

enum class CurveFormat { csv, json };

TimeSeries read_series(const SeriesFile& file);
void write_series(const TimeSeries& series, const SeriesFile& file);

// CSV: column "length" then one count column per curve, labeled
// "<source_label>-><data_label>"; all curves must share a length grid.
// JSON: array of {source, data, threshold, points: [[length, count], ...]}.
void write_curves(const std::vector<MatchCurve>& curves,
                  const std::filesystem::path& path, CurveFormat format);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
// Fixed 17-significant-digit form used by the series writers.
std::string format_double_full(double value);

void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace ccmatch
