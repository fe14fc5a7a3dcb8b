#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace ccmatch {

// Neumaier-compensated accumulator. Keeps the rounding error of a running
// sum at O(eps) independent of the term count, which is at least as tight
// as pairwise summation for windows up to 1e6 elements.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar value) {
    const Scalar t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      comp_ += (sum_ - t) + value;
    } else {
      comp_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

template <typename Derived>
typename Derived::Scalar sum_of_squares(const Eigen::MatrixBase<Derived>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Derived)
  CompensatedSum<typename Derived::Scalar> acc;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc.add(v(i) * v(i));
  }
  return acc.value();
}

// Compensated dot product; sizes must already agree.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dot_product(const Eigen::MatrixBase<DerivedA>& a,
                                      const Eigen::MatrixBase<DerivedB>& b) {
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(DerivedA)
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(DerivedB)
  CompensatedSum<typename DerivedA::Scalar> acc;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    acc.add(a(i) * b(i));
  }
  return acc.value();
}

}  // namespace ccmatch
