#include "ccmatch/matcher.hpp"

#include <cmath>
#include <sstream>

#include "ccmatch/parallel.hpp"

namespace ccmatch {

AlphaProfile alpha_profile(const Eigen::Ref<const Vector>& template_samples,
                           const TimeSeries& data, int threads) {
  const Index k = template_samples.size();
  const Index l = data.size();
  detail::require(k >= 1, "alpha_profile: template must be non-empty");
  if (k >= l) {
    std::ostringstream os;
    os << "alpha_profile: template too long: template length (" << k
       << ") must be less than data length (" << l << ")";
    throw ContractError(os.str());
  }
  detail::require_finite(template_samples, "alpha_profile");
  const double template_sq = sum_of_squares(template_samples);
  if (!(template_sq > 0.0)) {
    throw DegenerateTemplateError("alpha_profile: template has zero norm");
  }
  const double template_norm = std::sqrt(template_sq);

  AlphaProfile profile;
  profile.template_length = k;
  profile.data_length = l;
  profile.values.assign(static_cast<size_t>(l - k), std::nullopt);

  const Vector& m = data.samples();
  parallel_chunks(0, l - k, threads, [&](int, Index begin, Index end) {
    for (Index lag = begin; lag < end; ++lag) {
      const auto window = m.segment(lag, k);
      const double window_sq = sum_of_squares(window);
      if (!(window_sq > 0.0)) continue;  // silent window matches nothing
      profile.values[static_cast<size_t>(lag)] =
          dot_product(template_samples, window) /
          (template_norm * std::sqrt(window_sq));
    }
  });
  return profile;
}

std::int64_t count_matches(const AlphaProfile& profile, double threshold) {
  detail::require(threshold > 0.0 && threshold <= 1.0,
                  "count_matches: threshold must lie in (0, 1]");
  std::int64_t count = 0;
  for (const auto& value : profile.values) {
    if (value && std::abs(*value) >= threshold) ++count;
  }
  return count;
}

namespace {

// Per-lag running state for the growing-template sweep. Each lag owns an
// independent Neumaier-compensated dot and window energy, accumulated in
// template order j = 0, 1, 2, ...; chunking over lags cannot change any
// value.
struct RunningWindow {
  double dot = 0.0;
  double dot_comp = 0.0;
  double energy = 0.0;
  double energy_comp = 0.0;

  static void add(double& sum, double& comp, double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }

  void push(double f, double m) {
    add(dot, dot_comp, f * m);
    add(energy, energy_comp, m * m);
  }
};

}  // namespace

MatchCurve match_curve(const Eigen::Ref<const Vector>& template_source,
                       const TimeSeries& data, Index min_len, Index max_len,
                       Index step, double threshold, std::string source_label,
                       std::string data_label, int threads) {
  const Index n = template_source.size();
  const Index l = data.size();
  detail::require(min_len >= 1, "match_curve: min_len must be at least 1");
  detail::require(min_len <= max_len, "match_curve: min_len must not exceed max_len");
  if (max_len > n) {
    std::ostringstream os;
    os << "match_curve: max_len (" << max_len
       << ") must not exceed template source length (" << n << ")";
    throw ContractError(os.str());
  }
  if (max_len >= l) {
    std::ostringstream os;
    os << "match_curve: max_len (" << max_len << ") must be less than data length ("
       << l << ")";
    throw ContractError(os.str());
  }
  detail::require(step >= 1, "match_curve: step must be at least 1");
  detail::require(threshold > 0.0 && threshold <= 1.0,
                  "match_curve: threshold must lie in (0, 1]");
  detail::require_finite(template_source, "match_curve");

  const Index grid_size = (max_len - min_len) / step + 1;
  const Index sweep_end = min_len + (grid_size - 1) * step;  // last grid length

  // Prefix energies of the template source, one per candidate length.
  std::vector<double> prefix_sq(static_cast<size_t>(sweep_end) + 1, 0.0);
  {
    CompensatedSum<double> acc;
    for (Index i = 0; i < sweep_end; ++i) {
      acc.add(template_source(i) * template_source(i));
      prefix_sq[static_cast<size_t>(i) + 1] = acc.value();
    }
  }

  const Vector& m = data.samples();
  const Index lag_count = l - min_len;  // lags valid at the shortest length
  std::vector<RunningWindow> lags(static_cast<size_t>(lag_count));

  int chunk_count = threads < 1 ? 1 : threads;
  if (static_cast<Index>(chunk_count) > lag_count) chunk_count = static_cast<int>(lag_count);
  std::vector<std::vector<std::int64_t>> chunk_counts(
      static_cast<size_t>(chunk_count),
      std::vector<std::int64_t>(static_cast<size_t>(grid_size), 0));

  const double threshold_sq = threshold * threshold;
  parallel_chunks(0, lag_count, chunk_count, [&](int chunk, Index begin, Index end) {
    auto& counts = chunk_counts[static_cast<size_t>(chunk)];
    for (Index lag = begin; lag < end; ++lag) {
      auto& state = lags[static_cast<size_t>(lag)];
      for (Index j = 0; j < min_len; ++j) {
        state.push(template_source(j), m(lag + j));
      }
    }
    for (Index k = min_len; k <= sweep_end; ++k) {
      if (k > min_len) {
        const Index j = k - 1;
        const double f = template_source(j);
        const Index lag_end = std::min(end, l - k);
        for (Index lag = begin; lag < lag_end; ++lag) {
          lags[static_cast<size_t>(lag)].push(f, m(lag + j));
        }
      }
      if ((k - min_len) % step == 0) {
        const double f_sq = prefix_sq[static_cast<size_t>(k)];
        if (!(f_sq > 0.0)) continue;  // zero-norm prefix: counts stay 0
        const Index grid_index = (k - min_len) / step;
        const Index lag_end = std::min(end, l - k);
        std::int64_t hits = 0;
        for (Index lag = begin; lag < lag_end; ++lag) {
          const auto& state = lags[static_cast<size_t>(lag)];
          const double window_sq = state.energy + state.energy_comp;
          if (!(window_sq > 0.0)) continue;
          const double dot = state.dot + state.dot_comp;
          if (dot * dot >= threshold_sq * f_sq * window_sq) ++hits;
        }
        counts[static_cast<size_t>(grid_index)] += hits;
      }
    }
  });

  MatchCurve curve;
  curve.threshold = threshold;
  curve.source_label = std::move(source_label);
  curve.data_label = std::move(data_label);
  curve.points.resize(static_cast<size_t>(grid_size));
  for (Index g = 0; g < grid_size; ++g) {
    const Index k = min_len + g * step;
    CurvePoint& point = curve.points[static_cast<size_t>(g)];
    point.length = k;
    point.skipped = !(prefix_sq[static_cast<size_t>(k)] > 0.0);
    point.count = 0;
    for (const auto& counts : chunk_counts) {
      point.count += counts[static_cast<size_t>(g)];
    }
  }
  return curve;
}

}  // namespace ccmatch
