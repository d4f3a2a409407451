#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "permmoments/summation.hpp"
#include "permmoments/types.hpp"

namespace pm {

/// Paired sample {(x_i, y_i)}. Validated on construction: equal lengths,
/// n >= 2 and (for floating point) every value finite.
template <typename Scalar>
class Dataset {
 public:
  Dataset(Vector<Scalar> xs, Vector<Scalar> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size())
      throw InvalidDataset("x and y columns differ in length (" + std::to_string(xs_.size()) +
                           " vs " + std::to_string(ys_.size()) + ")");
    if (xs_.size() < 2)
      throw InvalidDataset("dataset needs at least 2 rows, got " + std::to_string(xs_.size()));
    if constexpr (is_floating_v<Scalar>) {
      for (Eigen::Index i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_(i)) || !std::isfinite(ys_(i)))
          throw InvalidDataset("non-finite value in row " + std::to_string(i));
      }
    }
  }

  Dataset(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys)
      : Dataset(to_vector(xs), to_vector(ys)) {}

  const Vector<Scalar>& xs() const { return xs_; }
  const Vector<Scalar>& ys() const { return ys_; }
  Eigen::Index size() const { return xs_.size(); }

  Dataset swapped() const { return Dataset(ys_, xs_); }

 private:
  static Vector<Scalar> to_vector(const std::vector<Scalar>& v) {
    Vector<Scalar> out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(Eigen::Index(i)) = v[i];
    return out;
  }

  Vector<Scalar> xs_;
  Vector<Scalar> ys_;
};

/// Mean-centered columns. var_x/var_y are the 1/n variances of the centered
/// (pre-standardization) columns; when `standardized` is set the stored
/// columns have been divided by sigma_x/sigma_y.
template <typename Scalar>
struct CenteredData {
  Vector<Scalar> x_hat;
  Vector<Scalar> y_hat;
  Scalar var_x;
  Scalar var_y;
  bool standardized = false;

  Eigen::Index size() const { return x_hat.size(); }
  double sigma_x() const { return std::sqrt(to_double(var_x)); }
  double sigma_y() const { return std::sqrt(to_double(var_y)); }
};

/// Central moments chi_j = <x_hat^j>, nu_j = <y_hat^j> for j = 0..k_max
/// (index 0 holds 1).
template <typename Scalar>
struct MomentTable {
  std::vector<Scalar> chi;
  std::vector<Scalar> nu;
  int k_max = 0;
  Eigen::Index n = 0;
};

template <typename Scalar>
Scalar ipow(const Scalar& base, int exponent) {
  Scalar out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

template <typename Derived>
typename Derived::Scalar mean(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  return accurate_sum(v) / Scalar(v.size());
}

/// (1/n) sum_i v_i^j with compensated summation.
template <typename Derived>
typename Derived::Scalar power_mean(const Eigen::MatrixBase<Derived>& v, int j) {
  using Scalar = typename Derived::Scalar;
  const auto count = static_cast<std::size_t>(v.size());
  return accurate_sum<Scalar>(count,
                              [&](std::size_t i) { return ipow<Scalar>(v(Eigen::Index(i)), j); }) /
         Scalar(v.size());
}

namespace detail {

template <typename Scalar>
void center_column(const Vector<Scalar>& in, Vector<Scalar>& out, Scalar& var) {
  const Scalar mu = mean(in);
  out = in.array() - mu;
  if constexpr (is_floating_v<Scalar>) {
    // second pass removes the rounding residue of the first mean
    out.array() -= mean(out);
  }
  var = power_mean(out, 2);
}

}  // namespace detail

/// Centers both columns and optionally standardizes them to unit 1/n
/// variance. Standardization needs sqrt and is only available in floating
/// point. Throws ZeroVariance when standardizing a constant column.
template <typename Scalar>
CenteredData<Scalar> center(const Dataset<Scalar>& d, bool standardize) {
  CenteredData<Scalar> c;
  detail::center_column(d.xs(), c.x_hat, c.var_x);
  detail::center_column(d.ys(), c.y_hat, c.var_y);
  if (standardize) {
    if constexpr (!is_floating_v<Scalar>) {
      throw std::logic_error("standardization is not available in exact arithmetic");
    } else {
      if (c.var_x == 0) throw ZeroVariance("x column has zero variance");
      if (c.var_y == 0) throw ZeroVariance("y column has zero variance");
      c.x_hat /= std::sqrt(c.var_x);
      c.y_hat /= std::sqrt(c.var_y);
      c.standardized = true;
    }
  }
  return c;
}

template <typename Scalar>
MomentTable<Scalar> central_moments(const CenteredData<Scalar>& c, int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  MomentTable<Scalar> t;
  t.k_max = k_max;
  t.n = c.size();
  t.chi.assign(std::size_t(k_max) + 1, Scalar(1));
  t.nu.assign(std::size_t(k_max) + 1, Scalar(1));
  for (int j = 1; j <= k_max; ++j) {
    t.chi[std::size_t(j)] = power_mean(c.x_hat, j);
    t.nu[std::size_t(j)] = power_mean(c.y_hat, j);
  }
  return t;
}

/// Cross and marginal sums of squares of the centered columns.
template <typename Scalar>
struct CorrelationParts {
  Scalar sxy;
  Scalar sxx;
  Scalar syy;
};

template <typename Scalar>
CorrelationParts<Scalar> correlation_parts(const Dataset<Scalar>& d) {
  const CenteredData<Scalar> c = center(d, false);
  const auto n = static_cast<std::size_t>(c.size());
  CorrelationParts<Scalar> p;
  p.sxy = accurate_sum<Scalar>(n, [&](std::size_t i) {
    return Scalar(c.x_hat(Eigen::Index(i)) * c.y_hat(Eigen::Index(i)));
  });
  p.sxx = c.var_x * Scalar(c.size());
  p.syy = c.var_y * Scalar(c.size());
  return p;
}

/// Pearson's sample correlation. Overshoot past +-1 of at most 4 eps is
/// clamped; anything larger raises NumericalError.
template <typename Scalar>
double pearson_r(const Dataset<Scalar>& d) {
  const CorrelationParts<Scalar> p = correlation_parts(d);
  if (p.sxx == 0) throw ZeroVariance("x column has zero variance");
  if (p.syy == 0) throw ZeroVariance("y column has zero variance");
  double r;
  if constexpr (is_floating_v<Scalar>) {
    r = p.sxy / std::sqrt(p.sxx * p.syy);
  } else {
    const Scalar r2 = p.sxy * p.sxy / (p.sxx * p.syy);
    r = std::sqrt(to_double(r2));
    if (p.sxy < 0) r = -r;
  }
  const double overshoot = std::abs(r) - 1.0;
  if (overshoot > 4 * std::numeric_limits<double>::epsilon())
    throw NumericalError("correlation overshoots [-1, 1] by " + std::to_string(overshoot));
  if (overshoot > 0) r = r > 0 ? 1.0 : -1.0;
  return r;
}

}  // namespace pm
