#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permmoments/core_stats.hpp"
#include "permmoments/partition.hpp"
#include "permmoments/summation.hpp"

namespace pm {

enum class Method { Induction, ClosedForm, BruteForce, MonteCarlo };

std::string to_string(Method m);

/// One step of the branching recursion for a canonical partition
/// (n_1..n_m): Z = S_{n_m} * Z(rest) - sum_partitions count * Z(merged).
/// For m = 1 `rest` is empty and the value is the power sum S_k.
struct Reduction {
  int peeled = 0;
  std::optional<Partition> rest;
  std::map<Partition, int> subtracted;
};

/// Evaluates Z_(n_1..n_m) = sum over pairwise-distinct i_1..i_m of
/// z_{i_1}^{n_1} ... z_{i_m}^{n_m} from the power sums S_j = sum_i z_i^j.
/// Values are memoized under the canonical (sorted) partition; the cache
/// lives as long as the evaluator. Not thread-safe.
template <typename Scalar>
class ZTermEvaluator {
 public:
  /// power_sums[j] = S_j for j = 0..k_max; S_0 is the sample size.
  explicit ZTermEvaluator(std::vector<Scalar> power_sums, bool record_trace = false)
      : sums_(std::move(power_sums)), record_trace_(record_trace) {
    if (sums_.size() < 2) throw std::invalid_argument("need power sums up to order >= 1");
  }

  template <typename Derived>
  static ZTermEvaluator from_values(const Eigen::MatrixBase<Derived>& z, int k_max,
                                    bool record_trace = false) {
    std::vector<Scalar> sums(std::size_t(k_max) + 1);
    sums[0] = Scalar(z.size());
    for (int j = 1; j <= k_max; ++j) sums[std::size_t(j)] = power_mean(z, j) * Scalar(z.size());
    return ZTermEvaluator(std::move(sums), record_trace);
  }

  int max_order() const { return static_cast<int>(sums_.size()) - 1; }
  const Scalar& power_sum(int j) const { return sums_.at(std::size_t(j)); }

  const Scalar& operator()(const Partition& p) {
    if (p.k() > max_order())
      throw std::out_of_range("partition " + p.str() + " exceeds available power sums");
    if (auto it = memo_.find(p); it != memo_.end()) return it->second;

    const auto& parts = p.parts();
    const int last = parts.back();
    Scalar value;
    Reduction red;
    red.peeled = last;
    if (p.m() == 1) {
      value = sums_[std::size_t(last)];
    } else {
      std::vector<int> rest(parts.begin(), parts.end() - 1);
      Partition rest_p(rest);
      value = sums_[std::size_t(last)] * (*this)(rest_p);
      for (std::size_t j = 0; j < rest.size(); ++j) {
        std::vector<int> merged = rest;
        merged[j] += last;
        ++red.subtracted[Partition(std::move(merged))];
      }
      for (const auto& [merged, count] : red.subtracted) value -= Scalar(count) * (*this)(merged);
      red.rest = std::move(rest_p);
    }
    if (record_trace_) trace_.emplace(p, std::move(red));
    return memo_.emplace(p, std::move(value)).first->second;
  }

  /// Runs the recursion on the exponents exactly as given: peels the last
  /// entry, never sorts, never consults the cache. Used to check that the
  /// result does not depend on exponent order.
  Scalar evaluate_unsorted(std::span<const int> exponents) const {
    const int last = exponents.back();
    if (exponents.size() == 1) return sums_.at(std::size_t(last));
    std::vector<int> rest(exponents.begin(), exponents.end() - 1);
    Scalar value = sums_.at(std::size_t(last)) * evaluate_unsorted(rest);
    for (std::size_t j = 0; j < rest.size(); ++j) {
      std::vector<int> merged = rest;
      merged[j] += last;
      value -= evaluate_unsorted(merged);
    }
    return value;
  }

  const std::map<Partition, Reduction>& trace() const { return trace_; }
  std::size_t cache_size() const { return memo_.size(); }

 private:
  std::vector<Scalar> sums_;
  std::map<Partition, Scalar> memo_;
  std::map<Partition, Reduction> trace_;
  bool record_trace_;
};

/// Free-function spelling of ZTermEvaluator::operator().
template <typename Scalar>
const Scalar& z_term(const Partition& p, ZTermEvaluator<Scalar>& session) {
  return session(p);
}

template <typename Scalar>
struct PartitionTerm {
  Partition partition;
  BigInt star;
  Scalar x_term;
  Scalar y_term;
  /// h_{n,m} / (n (n-1) ... (n-m+1))
  Scalar multiplicity_factor;
  Scalar contribution;
};

namespace detail {

template <typename Scalar>
Scalar from_bigint(const BigInt& v) {
  if constexpr (is_floating_v<Scalar>)
    return v.convert_to<double>();
  else
    return Scalar(v.str());
}

template <typename Scalar>
Scalar inverse_falling_factorial(long long n, int m) {
  if constexpr (is_floating_v<Scalar>) {
    Scalar f = 1;
    for (int i = 0; i < m; ++i) f /= Scalar(n - i);
    return f;
  } else {
    return Scalar(1) / from_bigint<Scalar>(falling_factorial(n, m));
  }
}

}  // namespace detail

/// (1/n!) sum over permutations pi of (sum_i a_i b_{pi(i)})^k, assembled from
/// the Z-terms of both vectors. Holds for arbitrary (not only centered)
/// vectors. Partitions with more parts than n are dropped (h_{n,m} = 0).
template <typename Scalar>
Scalar permutation_power_mean(ZTermEvaluator<Scalar>& a, ZTermEvaluator<Scalar>& b, int k,
                              int order_cap = kDefaultOrderCap,
                              std::vector<PartitionTerm<Scalar>>* breakdown = nullptr) {
  if (k == 0) return Scalar(1);
  if (k < 0) throw std::invalid_argument("moment order must be >= 0");
  const auto partitions = enumerate_partitions(k, order_cap);
  const long long n = static_cast<long long>(to_double(a.power_sum(0)));

  std::vector<Scalar> contributions;
  contributions.reserve(partitions.size());
  for (const Partition& p : partitions) {
    if (h_indicator(n, p.m()) == 0) {
      if (breakdown) breakdown->push_back({p, star_multinomial(p), 0, 0, 0, 0});
      continue;
    }
    const BigInt star = star_multinomial(p);
    const Scalar factor = detail::inverse_falling_factorial<Scalar>(n, p.m());
    const Scalar& xa = a(p);
    const Scalar& yb = b(p);
    Scalar c = detail::from_bigint<Scalar>(star) * xa * yb * factor;
    if (breakdown) breakdown->push_back({p, star, xa, yb, factor, c});
    contributions.push_back(std::move(c));
  }
  return accurate_sum<Scalar>(contributions.size(),
                              [&](std::size_t i) -> Scalar { return contributions[i]; });
}

struct MomentResult {
  int k = 0;
  double value = 0;
  Method method = Method::Induction;
  std::vector<PartitionTerm<double>> breakdown;
};

/// Floating-point evaluation session for one dataset. The data are
/// standardized and scaled by 1/sqrt(n), so r_pi = sum_i u_i v_{pi(i)} and no
/// n^k or sigma^k factors appear. Z-term caches are shared across orders.
class InductionSession {
 public:
  InductionSession(const Dataset<double>& d, int k_max, int order_cap = kDefaultOrderCap);

  MomentResult moment(int k, bool with_breakdown = false);
  long long n() const { return n_; }
  int k_max() const { return k_max_; }
  double sigma_x() const { return sigma_x_; }
  double sigma_y() const { return sigma_y_; }
  ZTermEvaluator<double>& x_terms() { return x_; }
  ZTermEvaluator<double>& y_terms() { return y_; }

 private:
  long long n_;
  int k_max_;
  int order_cap_;
  double sigma_x_;
  double sigma_y_;
  ZTermEvaluator<double> x_;
  ZTermEvaluator<double> y_;
};

/// <r_pi^k> over all permutations of the y column. Throws ZeroVariance or
/// KTooLarge.
MomentResult moment(const Dataset<double>& d, int k, bool with_breakdown = false,
                    int order_cap = kDefaultOrderCap);

/// Orders 1..k_max from one session.
std::vector<MomentResult> moments(const Dataset<double>& d, int k_max,
                                  int order_cap = kDefaultOrderCap);

/// Exact-arithmetic moment: numerator = <(sum_i x_hat_i y_hat_{pi(i)})^k>
/// and denominator base Sxx * Syy, so <r^k> = numerator / (Sxx Syy)^{k/2}.
struct ExactMoment {
  int k = 0;
  Rational numerator;
  Rational sxx_syy;

  /// Exact rational value; present only for even k.
  std::optional<Rational> exact_value() const;
  double value() const;
};

std::vector<ExactMoment> moments_exact(const Dataset<Rational>& d, int k_max,
                                       int order_cap = kDefaultOrderCap);

}  // namespace pm
