#pragma once

#include <cmath>
#include <cstddef>

#include "permmoments/types.hpp"

namespace pm {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

inline constexpr std::size_t kPairwiseLeaf = 128;

template <typename Term>
CompensatedSum pairwise(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo <= kPairwiseLeaf) {
    CompensatedSum acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  CompensatedSum left = pairwise(lo, mid, term);
  left.add(pairwise(mid, hi, term));
  return left;
}

}  // namespace detail

/// Sums term(0) + ... + term(count-1). Floating point uses pairwise
/// reduction over compensated leaves; exact scalars sum directly.
template <typename Scalar, typename Term>
Scalar accurate_sum(std::size_t count, const Term& term) {
  if constexpr (is_floating_v<Scalar>) {
    return count == 0 ? 0.0 : detail::pairwise(0, count, term).value();
  } else {
    Scalar acc = 0;
    for (std::size_t i = 0; i < count; ++i) acc += term(i);
    return acc;
  }
}

template <typename Derived>
typename Derived::Scalar accurate_sum(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  return accurate_sum<Scalar>(static_cast<std::size_t>(v.size()),
                              [&](std::size_t i) -> Scalar { return v(Eigen::Index(i)); });
}

}  // namespace pm
