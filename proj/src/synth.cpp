#include "ccmatch/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "ccmatch/parallel.hpp"

namespace ccmatch {

TimeSeries gaussian_noise(Index length, double sigma, std::uint64_t seed) {
  detail::require(length >= 1, "gaussian_noise: length must be at least 1");
  detail::require(std::isfinite(sigma) && sigma > 0.0,
                  "gaussian_noise: sigma must be positive and finite");
  GaussianSampler sampler(seed);
  Vector samples(length);
  for (Index i = 0; i < length; ++i) {
    samples(i) = sigma * sampler.next();
  }
  return TimeSeries(std::move(samples));
}

TimeSeries inject(const TimeSeries& noise,
                  const Eigen::Ref<const Vector>& template_samples, double alpha,
                  Index offset) {
  detail::require(offset >= 0, "inject: offset must be non-negative");
  detail::require(template_samples.size() >= 1, "inject: template must be non-empty");
  if (offset + template_samples.size() > noise.size()) {
    std::ostringstream os;
    os << "inject: offset (" << offset << ") + template length ("
       << template_samples.size() << ") exceeds noise length (" << noise.size()
       << ")";
    throw ContractError(os.str());
  }
  detail::require_finite(template_samples, "inject");
  detail::require(std::isfinite(alpha), "inject: alpha must be finite");
  Vector samples = noise.samples();
  samples.segment(offset, template_samples.size()) += alpha * template_samples;
  return TimeSeries(std::move(samples), noise.sample_rate());
}

TimeSeries synthesize(const SynthesisSpec& spec) {
  TimeSeries noise = gaussian_noise(spec.length, spec.noise_sigma, spec.seed);
  if (!spec.injection) return noise;
  return inject(noise, spec.injection->template_samples, spec.injection->alpha,
                spec.injection->offset);
}

namespace {

constexpr int kSurrogateClasses = 5;
constexpr int kSurrogateHarmonics = 5;
constexpr double kFundamentalBase = 100.0;
constexpr double kFundamentalStep = 30.0;
constexpr double kJitterFraction = 0.01;

// Harmonic amplitude tables, one row per class. Each class leads with a
// different harmonic and carries a distinct minor-harmonic mix, which keeps
// windows of different classes decorrelated even at short lengths.
constexpr std::array<std::array<double, kSurrogateHarmonics>, kSurrogateClasses>
    kHarmonicAmplitudes = {{
        {1.00, 0.05, 0.40, 0.02, 0.15},
        {0.25, 1.00, 0.05, 0.35, 0.02},
        {0.10, 0.30, 1.00, 0.05, 0.40},
        {0.35, 0.02, 0.20, 1.00, 0.08},
        {0.05, 0.40, 0.10, 0.25, 1.00},
    }};

// Fixed per-class phase offsets (radians) so classes do not share a common
// zero crossing at t = 0.
constexpr std::array<std::array<double, kSurrogateHarmonics>, kSurrogateClasses>
    kHarmonicPhases = {{
        {0.00, 1.10, 2.30, 0.70, 1.90},
        {0.90, 0.20, 1.50, 2.70, 0.40},
        {1.70, 2.50, 0.60, 1.30, 2.10},
        {2.40, 0.80, 1.90, 0.30, 1.10},
        {0.50, 1.60, 2.80, 1.00, 0.20},
    }};

}  // namespace

TimeSeries periodic_surrogate(int class_id, Index length, double sample_rate,
                              std::uint64_t seed) {
  if (class_id < 1 || class_id > kSurrogateClasses) {
    std::ostringstream os;
    os << "periodic_surrogate: class_id must lie in 1.." << kSurrogateClasses
       << ", got " << class_id;
    throw ContractError(os.str());
  }
  detail::require(length >= 1, "periodic_surrogate: length must be at least 1");
  detail::require(std::isfinite(sample_rate) && sample_rate > 0.0,
                  "periodic_surrogate: sample_rate must be positive and finite");

  const auto& amplitudes = kHarmonicAmplitudes[static_cast<size_t>(class_id - 1)];
  const auto& phases = kHarmonicPhases[static_cast<size_t>(class_id - 1)];
  const double fundamental = kFundamentalBase + kFundamentalStep * class_id;

  double power = 0.0;
  for (double a : amplitudes) power += a * a / 2.0;
  const double jitter_sigma = kJitterFraction * std::sqrt(power);

  GaussianSampler sampler(seed);
  Vector samples(length);
  for (Index i = 0; i < length; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double value = 0.0;
    for (int h = 0; h < kSurrogateHarmonics; ++h) {
      const double w = 2.0 * std::numbers::pi * fundamental * (h + 1);
      value += amplitudes[static_cast<size_t>(h)] *
               std::sin(w * t + phases[static_cast<size_t>(h)]);
    }
    samples(i) = value + jitter_sigma * sampler.next();
  }
  return TimeSeries(std::move(samples), sample_rate);
}

Template probe_template(Index length, double target_delta_alpha, double sigma) {
  detail::require(length >= 4, "probe_template: length must be at least 4");
  detail::require(std::isfinite(target_delta_alpha) && target_delta_alpha > 0.0,
                  "probe_template: target_delta_alpha must be positive and finite");
  detail::require(std::isfinite(sigma) && sigma > 0.0,
                  "probe_template: sigma must be positive and finite");
  Vector base(length);
  for (Index i = 0; i < length; ++i) {
    base(i) = std::sin(2.0 * std::numbers::pi * 3.0 * (static_cast<double>(i) + 0.5) /
                       static_cast<double>(length));
  }
  const double base_sq = sum_of_squares(base);
  const double target_sq = (sigma * sigma) / (target_delta_alpha * target_delta_alpha);
  base *= std::sqrt(target_sq / base_sq);
  return Template(std::move(base), Vector::Constant(length, sigma));
}

DetectionLimitResult detection_limit_experiment(const Template& probe,
                                                double injected_alpha,
                                                Index noise_length,
                                                double noise_sigma,
                                                std::uint64_t seed, int trials,
                                                int threads) {
  detail::require(trials >= 1, "detection_limit_experiment: trials must be at least 1");
  detail::require(noise_length >= probe.size(),
                  "detection_limit_experiment: noise_length must cover the probe");
  detail::require(std::isfinite(injected_alpha),
                  "detection_limit_experiment: injected_alpha must be finite");

  const Index offset = (noise_length - probe.size()) / 2;
  std::vector<double> estimates(static_cast<size_t>(trials), 0.0);
  parallel_chunks(0, trials, threads, [&](int, Index begin, Index end) {
    for (Index t = begin; t < end; ++t) {
      const TimeSeries noise =
          gaussian_noise(noise_length, noise_sigma, seed + static_cast<std::uint64_t>(t));
      const TimeSeries data = inject(noise, probe.samples(), injected_alpha, offset);
      estimates[static_cast<size_t>(t)] = alpha_estimate(probe, data, offset).alpha;
    }
  });

  DetectionLimitResult result;
  result.delta_alpha = probe.delta_alpha();
  result.threshold = detection_threshold(probe);
  result.injected_alpha = injected_alpha;
  result.trials = trials;

  CompensatedSum<double> mean_acc;
  int within_1 = 0;
  int within_3 = 0;
  for (double estimate : estimates) {
    mean_acc.add(estimate);
    const double deviation = std::abs(estimate - injected_alpha);
    if (deviation <= result.delta_alpha) ++within_1;
    if (deviation <= 3.0 * result.delta_alpha) ++within_3;
  }
  result.mean_alpha_hat = mean_acc.value() / trials;
  result.coverage_1sigma = static_cast<double>(within_1) / trials;
  result.coverage_3sigma = static_cast<double>(within_3) / trials;
  return result;
}

}  // namespace ccmatch
