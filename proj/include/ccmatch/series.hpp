#pragma once

// Closed-form amplitude estimation for template matching in time series.
//
// Given a known template f and measured data m with per-sample Gaussian
// noise sigma_j, the intensity with which f appears in m is estimated by
// the weighted least-squares amplitude
//
//     alpha = sum_j m_j f_j / sigma_j^2  /  sum_j f_j^2 / sigma_j^2
//
// with one-sigma half-width delta_alpha = 1 / sqrt(sum_j f_j^2 / sigma_j^2).
// Applied to unit-normalized sequences this collapses to a plain dot
// product, alpha_N in [-1, 1]: the cosine between template and data window.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include "ccmatch/accumulate.hpp"
#include "ccmatch/errors.hpp"

namespace ccmatch {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractError(what);
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& v, const char* who) {
  if (!v.allFinite()) {
    std::ostringstream os;
    os << who << ": samples must be finite (no NaN/infinity)";
    throw ContractError(os.str());
  }
}

}  // namespace detail

// A finite sequence of real-valued samples plus optional sample rate in Hz.
// Immutable after construction; NaN/infinite samples are rejected here so
// the estimation loops stay branch-light.
class TimeSeries {
 public:
  explicit TimeSeries(Vector samples,
                      std::optional<double> sample_rate = std::nullopt)
      : samples_(std::move(samples)), sample_rate_(sample_rate) {
    detail::require(samples_.size() >= 1, "TimeSeries: samples must be non-empty");
    detail::require_finite(samples_, "TimeSeries");
    if (sample_rate_) {
      detail::require(std::isfinite(*sample_rate_) && *sample_rate_ > 0.0,
                      "TimeSeries: sample_rate must be positive and finite");
    }
  }

  const Vector& samples() const { return samples_; }
  std::optional<double> sample_rate() const { return sample_rate_; }
  Index size() const { return samples_.size(); }

 private:
  Vector samples_;
  std::optional<double> sample_rate_;
};

// The sought pattern: samples plus per-sample noise standard deviations.
// The weighted energy sum f_j^2 / sigma_j^2 is fixed at construction; it is
// the estimator denominator and the only quantity delta_alpha depends on.
class Template {
 public:
  // Uniform unit noise; alpha becomes the classical least-squares amplitude.
  explicit Template(Vector samples)
      : Template(std::move(samples), Vector()) {}

  Template(Vector samples, Vector sigmas)
      : samples_(std::move(samples)), sigmas_(std::move(sigmas)) {
    detail::require(samples_.size() >= 1, "Template: samples must be non-empty");
    detail::require_finite(samples_, "Template");
    if (sigmas_.size() == 0) {
      sigmas_ = Vector::Ones(samples_.size());
    }
    detail::require(sigmas_.size() == samples_.size(),
                    "Template: samples and sigmas must have identical length");
    for (Index i = 0; i < sigmas_.size(); ++i) {
      detail::require(std::isfinite(sigmas_(i)) && sigmas_(i) > 0.0,
                      "Template: every sigma must be strictly positive and finite");
    }
    CompensatedSum<double> acc;
    for (Index i = 0; i < samples_.size(); ++i) {
      const double w = samples_(i) / sigmas_(i);
      acc.add(w * w);
    }
    weighted_energy_ = acc.value();
    if (!(weighted_energy_ > 0.0) || !std::isfinite(weighted_energy_)) {
      throw DegenerateTemplateError(
          "Template: zero template (all samples vanish against their sigmas); "
          "the estimator denominator would be zero");
    }
  }

  const Vector& samples() const { return samples_; }
  const Vector& sigmas() const { return sigmas_; }
  Index size() const { return samples_.size(); }

  // sum f_j^2 / sigma_j^2
  double weighted_energy() const { return weighted_energy_; }

  // One-sigma half-width of the amplitude estimate. Data-independent.
  double delta_alpha() const { return 1.0 / std::sqrt(weighted_energy_); }

 private:
  Vector samples_;
  Vector sigmas_;
  double weighted_energy_ = 0.0;
};

// Amplitude estimate at one lag: alpha +/- delta_alpha.
struct AlphaEstimate {
  double alpha = 0.0;
  double delta_alpha = 0.0;
  Index lag = 0;
};

// Euclidean norm of a sequence; 0 for a zero vector (rejection happens in
// normalize, not here).
template <typename Derived>
typename Derived::Scalar normalization_factor(const Eigen::MatrixBase<Derived>& samples) {
  detail::require(samples.size() >= 1, "normalization_factor: sequence must be non-empty");
  detail::require_finite(samples, "normalization_factor");
  return std::sqrt(sum_of_squares(samples));
}

// A unit-norm sequence together with the divisor that produced it.
class NormalizedSequence {
 public:
  template <typename Derived>
  explicit NormalizedSequence(const Eigen::MatrixBase<Derived>& samples) {
    const double zeta = normalization_factor(samples);
    if (!(zeta > 0.0)) {
      throw DegenerateSequenceError(
          "normalize: zero-norm sequence cannot be normalized");
    }
    if (!std::isfinite(zeta)) {
      throw ContractError("normalize: sequence norm overflows");
    }
    samples_ = samples.derived().template cast<double>() / zeta;
    original_norm_ = zeta;
  }

  const Vector& samples() const { return samples_; }
  double original_norm() const { return original_norm_; }

 private:
  Vector samples_;
  double original_norm_ = 0.0;
};

template <typename Derived>
NormalizedSequence normalize(const Eigen::MatrixBase<Derived>& samples) {
  return NormalizedSequence(samples);
}

// Weighted least-squares amplitude of `tpl` inside `data` at the given lag.
// The template is held fixed and the data window is offset by `lag`, so
// delta_alpha is constant across lags.
inline AlphaEstimate alpha_estimate(const Template& tpl, const TimeSeries& data,
                                    Index lag = 0) {
  detail::require(lag >= 0, "alpha_estimate: lag must be non-negative");
  if (data.size() < tpl.size() + lag) {
    std::ostringstream os;
    os << "alpha_estimate: data window too short: need template length ("
       << tpl.size() << ") + lag (" << lag << ") <= data length ("
       << data.size() << ")";
    throw ContractError(os.str());
  }
  const Vector& f = tpl.samples();
  const Vector& s = tpl.sigmas();
  const Vector& m = data.samples();
  CompensatedSum<double> numerator;
  for (Index j = 0; j < f.size(); ++j) {
    numerator.add(m(lag + j) * f(j) / (s(j) * s(j)));
  }
  AlphaEstimate estimate;
  estimate.alpha = numerator.value() / tpl.weighted_energy();
  estimate.delta_alpha = tpl.delta_alpha();
  estimate.lag = lag;
  return estimate;
}

// Normalized similarity of two equal-length windows: the dot product of the
// unit-normalized sequences, in [-1, 1] up to floating-point tolerance.
template <typename DerivedF, typename DerivedM>
typename DerivedF::Scalar alpha_normalized(const Eigen::MatrixBase<DerivedF>& template_window,
                                           const Eigen::MatrixBase<DerivedM>& data_window) {
  if (template_window.size() != data_window.size()) {
    std::ostringstream os;
    os << "alpha_normalized: window lengths differ (" << template_window.size()
       << " vs " << data_window.size() << ")";
    throw ContractError(os.str());
  }
  detail::require(template_window.size() >= 1,
                  "alpha_normalized: windows must be non-empty");
  detail::require_finite(template_window, "alpha_normalized");
  detail::require_finite(data_window, "alpha_normalized");
  const auto zf = std::sqrt(sum_of_squares(template_window));
  const auto zm = std::sqrt(sum_of_squares(data_window));
  if (!(zf > 0.0) || !(zm > 0.0)) {
    throw DegenerateSequenceError(
        "alpha_normalized: zero-norm window cannot be normalized");
  }
  return dot_product(template_window, data_window) / (zf * zm);
}

// Smallest reliably detectable intensity: three times delta_alpha.
inline double detection_threshold(const Template& tpl) {
  return 3.0 * tpl.delta_alpha();
}

// Brute-force discrete cross-correlation sum f_j * g_{j+lag}; out-of-range
// indices contribute zero. Reference definition kept for oracle checks of
// the un-normalized estimator; not used on any hot path.
template <typename DerivedF, typename DerivedG>
typename DerivedF::Scalar cross_correlation_oracle(const Eigen::MatrixBase<DerivedF>& f,
                                                   const Eigen::MatrixBase<DerivedG>& g,
                                                   std::ptrdiff_t lag) {
  detail::require_finite(f, "cross_correlation_oracle");
  detail::require_finite(g, "cross_correlation_oracle");
  CompensatedSum<typename DerivedF::Scalar> acc;
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    const std::ptrdiff_t gj = static_cast<std::ptrdiff_t>(j) + lag;
    if (gj < 0 || gj >= static_cast<std::ptrdiff_t>(g.size())) continue;
    acc.add(f(j) * g(static_cast<Eigen::Index>(gj)));
  }
  return acc.value();
}

}  // namespace ccmatch
