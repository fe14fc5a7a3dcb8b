#pragma once

// Deterministic signal synthesis: seeded Gaussian noise, template injection,
// quasi-periodic class surrogates, and the Monte-Carlo detection-limit
// experiment (recoverability of an injected amplitude at alpha >= 3 * delta_alpha).

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>

#include "ccmatch/series.hpp"

namespace ccmatch {

// Portable seeded standard-normal stream: std::mt19937_64 (bit-exact by
// the standard) feeding the Marsaglia polar transform, with uniforms built
// from the top 53 bits of each draw. std::normal_distribution is avoided
// because its algorithm is implementation-defined.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double x = 0.0, y = 0.0, s = 0.0;
    do {
      x = symmetric_uniform();
      y = symmetric_uniform();
      s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = y * factor;
    have_spare_ = true;
    return x * factor;
  }

 private:
  double symmetric_uniform() {
    const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
    return 2.0 * unit - 1.0;
  }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// length i.i.d. draws from Normal(0, sigma^2), deterministic per seed.
// Samples are sigma times a seed-determined standard-normal stream, so
// rescaling sigma rescales the sequence exactly.
TimeSeries gaussian_noise(Index length, double sigma, std::uint64_t seed);

// noise + alpha * template placed at `offset`; noise elsewhere.
TimeSeries inject(const TimeSeries& noise, const Eigen::Ref<const Vector>& template_samples,
                  double alpha, Index offset);

struct Injection {
  Vector template_samples;
  double alpha = 0.0;
  Index offset = 0;
};

// Recipe for one synthetic background: Gaussian noise plus an optional
// scaled template. The injection must fit: offset + template length <= length.
struct SynthesisSpec {
  Index length = 0;
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
  std::optional<Injection> injection;
};

TimeSeries synthesize(const SynthesisSpec& spec);

// Deterministic quasi-periodic waveform for class_id in 1..5: fundamental
// 100 + 30 * class_id Hz with a class-specific harmonic amplitude/phase
// table, plus Normal(0, 0.01 * rms) jitter from the seed. Tables are tuned
// so 64-sample windows of different classes stay below |alpha_N| = 0.9.
TimeSeries periodic_surrogate(int class_id, Index length, double sample_rate,
                              std::uint64_t seed);

// Few-cycle sine probe scaled so that sum f^2 / sigma^2 = 1 / target_delta_alpha^2,
// i.e. the template's delta_alpha equals target_delta_alpha under uniform
// noise sigma.
Template probe_template(Index length, double target_delta_alpha, double sigma = 1.0);

struct DetectionLimitResult {
  double delta_alpha = 0.0;      // half-width of the probe's confidence interval
  double threshold = 0.0;        // detection limit 3 * delta_alpha
  double injected_alpha = 0.0;
  double mean_alpha_hat = 0.0;
  double coverage_1sigma = 0.0;  // fraction of trials with |alpha_hat - alpha| <= delta_alpha
  double coverage_3sigma = 0.0;  // ... <= 3 * delta_alpha
  int trials = 0;
};

// Monte-Carlo coverage of the amplitude estimator: per trial t, inject
// injected_alpha * probe into fresh Normal(0, noise_sigma^2) noise (seed + t)
// and re-estimate the amplitude at the known offset. Trials are independent
// and parallelizable; reductions run in trial order, so results do not
// depend on the thread count.
DetectionLimitResult detection_limit_experiment(const Template& probe,
                                                double injected_alpha,
                                                Index noise_length,
                                                double noise_sigma,
                                                std::uint64_t seed, int trials,
                                                int threads = 1);

}  // namespace ccmatch
