#pragma once

// Independent reference implementations used to cross-check the library.
// Plain std::vector loops on purpose: no Eigen, no shared kernels with the
// code under test.

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

inline double norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

// Normalized dot product evaluated exactly as written: divide each element
// by its sequence norm, then sum the products.
inline double alpha_normalized(const std::vector<double>& f,
                               const std::vector<double>& m) {
  const double zf = norm(f);
  const double zm = norm(m);
  double sum = 0.0;
  for (size_t i = 0; i < f.size(); ++i) sum += (f[i] / zf) * (m[i] / zm);
  return sum;
}

// Discrete cross-correlation sum f_j * g_{j+lag}, zeros outside range.
inline double cross_correlation(const std::vector<double>& f,
                                const std::vector<double>& g, long lag) {
  double sum = 0.0;
  for (size_t j = 0; j < f.size(); ++j) {
    const long gj = static_cast<long>(j) + lag;
    if (gj < 0 || gj >= static_cast<long>(g.size())) continue;
    sum += f[j] * g[static_cast<size_t>(gj)];
  }
  return sum;
}

// Per-lag profile over lags 0 .. l-k-1; nullopt for zero-norm data windows.
inline std::vector<std::optional<double>> profile(const std::vector<double>& f,
                                                  const std::vector<double>& m) {
  std::vector<std::optional<double>> out;
  const size_t k = f.size();
  for (size_t lag = 0; lag + k < m.size(); ++lag) {
    const std::vector<double> window(m.begin() + static_cast<long>(lag),
                                     m.begin() + static_cast<long>(lag + k));
    if (norm(window) == 0.0) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(alpha_normalized(f, window));
    }
  }
  return out;
}

// Weighted least-squares amplitude by scalar grid search: minimize
// sum (m_j - a * f_j)^2 / sigma_j^2 over a, refining the bracket around the
// best grid point until the step is below 1e-12.
inline double wls_alpha_grid(const std::vector<double>& f,
                             const std::vector<double>& sigma,
                             const std::vector<double>& m) {
  auto objective = [&](double a) {
    double sum = 0.0;
    for (size_t j = 0; j < f.size(); ++j) {
      const double r = (m[j] - a * f[j]) / sigma[j];
      sum += r * r;
    }
    return sum;
  };
  double lo = -1e3, hi = 1e3;
  double best = 0.0;
  for (int pass = 0; pass < 12; ++pass) {
    const int points = 1000;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= points; ++i) {
      const double a = lo + (hi - lo) * i / points;
      const double value = objective(a);
      if (value < best_value) {
        best_value = value;
        best = a;
      }
    }
    const double step = (hi - lo) / points;
    lo = best - 2 * step;
    hi = best + 2 * step;
    if (step < 1e-12) break;
  }
  return best;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, size_t n,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

inline std::vector<double> from_eigen(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace oracle
