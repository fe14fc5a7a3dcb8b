#include "ccmatch/selection.hpp"

#include <sstream>
#include <utility>

namespace ccmatch {

PartitionSet partition(const TimeSeries& data, Index num_partitions,
                       Index partition_len, std::string source_label) {
  detail::require(num_partitions >= 1, "partition: num_partitions must be at least 1");
  detail::require(partition_len >= 1, "partition: partition_len must be at least 1");
  if (num_partitions * partition_len > data.size()) {
    std::ostringstream os;
    os << "partition: insufficient data: " << num_partitions << " x "
       << partition_len << " = " << num_partitions * partition_len
       << " samples requested, series has " << data.size();
    throw ContractError(os.str());
  }
  PartitionSet set;
  set.partition_len = partition_len;
  set.source_label = std::move(source_label);
  set.partitions.reserve(static_cast<size_t>(num_partitions));
  for (Index i = 0; i < num_partitions; ++i) {
    set.partitions.emplace_back(data.samples().segment(i * partition_len, partition_len));
  }
  return set;
}

std::vector<PartitionScore> score_partitions(const TimeSeries& data,
                                             const PartitionSet& partitions,
                                             const LengthGrid& grid,
                                             double threshold, int threads) {
  detail::require(!partitions.partitions.empty(),
                  "score_partitions: partition set must be non-empty");
  if (grid.max_len > partitions.partition_len) {
    std::ostringstream os;
    os << "score_partitions: max_len (" << grid.max_len
       << ") must not exceed partition length (" << partitions.partition_len << ")";
    throw ContractError(os.str());
  }
  std::vector<PartitionScore> scores;
  scores.reserve(partitions.partitions.size());
  for (size_t i = 0; i < partitions.partitions.size(); ++i) {
    std::ostringstream label;
    label << partitions.source_label << "[" << i << "]";
    PartitionScore entry;
    entry.partition_index = static_cast<Index>(i);
    entry.curve = match_curve(partitions.partitions[i], data, grid.min_len,
                              grid.max_len, grid.step, threshold, label.str(),
                              partitions.source_label, threads);
    entry.score = 0;
    for (const auto& point : entry.curve.points) {
      entry.score += static_cast<std::uint64_t>(point.count);
    }
    scores.push_back(std::move(entry));
  }
  return scores;
}

SelectedTemplate select_template(const PartitionSet& partitions,
                                 const std::vector<PartitionScore>& scores) {
  detail::require(!scores.empty(), "select_template: no partition scores");
  detail::require(scores.size() == partitions.partitions.size(),
                  "select_template: scores and partitions disagree in size");
  size_t best = 0;
  for (size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].score > scores[best].score) best = i;  // ties keep lowest index
  }
  SelectedTemplate selected;
  selected.samples = partitions.partitions[best];
  selected.partition_index = static_cast<Index>(best);
  selected.score = scores[best].score;
  selected.source_label = partitions.source_label;
  return selected;
}

SelectedTemplate select_template(const TimeSeries& data,
                                 const PartitionSet& partitions,
                                 const LengthGrid& grid, double threshold,
                                 int threads) {
  return select_template(partitions,
                         score_partitions(data, partitions, grid, threshold, threads));
}

std::optional<Index> minimal_discriminative_length(
    const MatchCurve& self_curve, const std::vector<MatchCurve>& cross_curves,
    std::int64_t cross_tolerance) {
  detail::require(cross_tolerance >= 0,
                  "minimal_discriminative_length: cross_tolerance must be non-negative");
  const size_t grid_size = self_curve.points.size();
  for (const auto& cross : cross_curves) {
    if (cross.points.size() != grid_size) {
      throw ContractError(
          "minimal_discriminative_length: curves have mismatched length grids");
    }
    for (size_t i = 0; i < grid_size; ++i) {
      if (cross.points[i].length != self_curve.points[i].length) {
        throw ContractError(
            "minimal_discriminative_length: curves have mismatched length grids");
      }
    }
    if (cross.threshold != self_curve.threshold) {
      throw ContractError(
          "minimal_discriminative_length: curves have mismatched thresholds");
    }
  }

  std::optional<Index> minimal;
  for (size_t i = grid_size; i-- > 0;) {
    bool ok = self_curve.points[i].count >= 1;
    for (const auto& cross : cross_curves) {
      ok = ok && cross.points[i].count <= cross_tolerance;
    }
    if (!ok) break;
    minimal = self_curve.points[i].length;
  }
  return minimal;
}

std::vector<ClassDiscrimination> discriminate(
    const std::vector<ClassSeries>& classes, Index num_partitions,
    Index partition_len, const LengthGrid& grid, double threshold,
    std::int64_t cross_tolerance, int threads) {
  detail::require(!classes.empty(), "discriminate: class list must be non-empty");

  std::vector<ClassDiscrimination> results;
  results.reserve(classes.size());
  for (const auto& cls : classes) {
    const PartitionSet parts =
        partition(cls.series, num_partitions, partition_len, cls.label);
    ClassDiscrimination entry;
    entry.label = cls.label;
    entry.selected = select_template(cls.series, parts, grid, threshold, threads);
    results.push_back(std::move(entry));
  }

  for (size_t i = 0; i < classes.size(); ++i) {
    DiscriminationReport& report = results[i].report;
    report.threshold = threshold;
    report.cross_tolerance = cross_tolerance;
    for (size_t j = 0; j < classes.size(); ++j) {
      MatchCurve curve = match_curve(results[i].selected.samples, classes[j].series,
                                     grid.min_len, grid.max_len, grid.step,
                                     threshold, classes[i].label, classes[j].label,
                                     threads);
      if (i == j) {
        report.self_curve = std::move(curve);
      } else {
        report.cross_curves.push_back(std::move(curve));
      }
    }
    report.minimal_length = minimal_discriminative_length(
        report.self_curve, report.cross_curves, cross_tolerance);
  }
  return results;
}

}  // namespace ccmatch
