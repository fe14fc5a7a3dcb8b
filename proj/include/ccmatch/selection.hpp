#pragma once

// Partitioning of a labeled series into candidate template sources, scoring
// and selection of the most representative partition, and the minimal
// template length at which a class matches itself but no other class.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccmatch/matcher.hpp"
#include "ccmatch/series.hpp"

namespace ccmatch {

// Contiguous, non-overlapping, equal-length blocks taken from the front of
// a series; concatenating them reproduces the original sample order.
struct PartitionSet {
  std::vector<Vector> partitions;
  Index partition_len = 0;
  std::string source_label;
};

struct SelectedTemplate {
  Vector samples;  // the chosen partition, verbatim
  Index partition_index = 0;
  std::uint64_t score = 0;
  std::string source_label;
};

struct PartitionScore {
  Index partition_index = 0;
  std::uint64_t score = 0;  // sum of match counts across the length grid
  MatchCurve curve;
};

// Grid of template lengths shared by selection and discrimination.
struct LengthGrid {
  Index min_len = 10;
  Index max_len = 200;
  Index step = 1;
};

struct DiscriminationReport {
  MatchCurve self_curve;
  std::vector<MatchCurve> cross_curves;
  std::optional<Index> minimal_length;
  double threshold = 0.0;
  std::int64_t cross_tolerance = 0;
};

// First num_partitions contiguous blocks of partition_len samples, starting
// at sample 0.
PartitionSet partition(const TimeSeries& data, Index num_partitions,
                       Index partition_len, std::string source_label = "");

// Match curve and its area (sum of counts) for every partition against the
// full data.
std::vector<PartitionScore> score_partitions(const TimeSeries& data,
                                             const PartitionSet& partitions,
                                             const LengthGrid& grid,
                                             double threshold, int threads = 1);

// The partition whose curve accumulates the greatest number of matches as
// the template grows; ties break to the lowest partition index.
SelectedTemplate select_template(const TimeSeries& data,
                                 const PartitionSet& partitions,
                                 const LengthGrid& grid, double threshold,
                                 int threads = 1);

SelectedTemplate select_template(const PartitionSet& partitions,
                                 const std::vector<PartitionScore>& scores);

// Smallest grid length k* such that at every grid length >= k* the self
// count is at least 1 and every cross count is at most cross_tolerance;
// nullopt when no such length exists. All curves must share the same length
// grid and threshold.
std::optional<Index> minimal_discriminative_length(
    const MatchCurve& self_curve, const std::vector<MatchCurve>& cross_curves,
    std::int64_t cross_tolerance);

// One labeled class series for discrimination runs.
struct ClassSeries {
  std::string label;
  TimeSeries series;
};

struct ClassDiscrimination {
  std::string label;
  SelectedTemplate selected;
  DiscriminationReport report;
};

// Full pipeline over a set of classes: per class, partition + select a
// template, then curve it against every class's data and locate the minimal
// discriminative length.
std::vector<ClassDiscrimination> discriminate(
    const std::vector<ClassSeries>& classes, Index num_partitions,
    Index partition_len, const LengthGrid& grid, double threshold,
    std::int64_t cross_tolerance, int threads = 1);

}  // namespace ccmatch
