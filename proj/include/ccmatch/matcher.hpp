#pragma once

// Sliding-lag evaluation of the normalized similarity alpha_N: per-lag
// profiles of one template, and count-vs-template-length match curves for a
// growing template prefix.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccmatch/series.hpp"

namespace ccmatch {

// alpha_N per lag of a length-k template against length-l data: exactly
// l - k entries for lags 0 .. l-k-1. nullopt marks a zero-norm (silent)
// data window, which matches nothing.
struct AlphaProfile {
  std::vector<std::optional<double>> values;
  Index template_length = 0;
  Index data_length = 0;
};

struct CurvePoint {
  Index length = 0;
  std::int64_t count = 0;
  bool skipped = false;  // zero-norm template prefix; count recorded as 0
};

// Match count as a function of template length, for one template source
// evaluated against one data series.
struct MatchCurve {
  std::vector<CurvePoint> points;
  double threshold = 0.0;
  std::string source_label;
  std::string data_label;
};

// alpha_N at every lag 0 .. l-k-1. The lag loop parallelizes over `threads`;
// each lag's sums are independent, so results are identical for any thread
// count.
AlphaProfile alpha_profile(const Eigen::Ref<const Vector>& template_samples,
                           const TimeSeries& data, int threads = 1);

// Number of non-skipped entries with |alpha_N| >= threshold.
std::int64_t count_matches(const AlphaProfile& profile, double threshold);

// For k = min_len, min_len+step, ... <= max_len: evaluate the length-k
// prefix of template_source at every lag of data and record the match count.
// Dots and window energies are grown incrementally in k (one multiply-add
// per lag per unit length), so the full sweep costs O(l * max_len) instead
// of O(l * max_len^2 / 2).
MatchCurve match_curve(const Eigen::Ref<const Vector>& template_source,
                       const TimeSeries& data, Index min_len, Index max_len,
                       Index step, double threshold,
                       std::string source_label = "", std::string data_label = "",
                       int threads = 1);

}  // namespace ccmatch
