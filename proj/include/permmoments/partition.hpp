#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

#include "permmoments/types.hpp"

namespace pm {

/// Default upper bound on the moment order accepted by the enumerator and
/// the induction path. p(16) = 231 partitions.
inline constexpr int kDefaultOrderCap = 16;

/// A partition of k: positive parts stored non-increasing.
class Partition {
 public:
  Partition() = default;
  /// Sorts the parts into canonical order. Throws std::invalid_argument on a
  /// non-positive part or an empty list.
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  const std::vector<int>& parts() const { return parts_; }
  int m() const { return static_cast<int>(parts_.size()); }
  int k() const { return k_; }
  int operator[](std::size_t i) const { return parts_[i]; }

  /// "(3,1,1)"
  std::string str() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

 private:
  std::vector<int> parts_;
  int k_ = 0;
};

/// Every partition of k exactly once, ordered by length m descending and then
/// lexicographically ascending within a length. Throws KTooLarge above cap.
std::vector<Partition> enumerate_partitions(int k, int cap = kDefaultOrderCap);

/// k! / (n_1! ... n_m! d_1! ... d_r!) where d_i are the multiplicities of
/// equal parts: the number of set partitions of k labelled items into blocks
/// with the given sizes.
BigInt star_multinomial(const Partition& p);

/// 1 if m <= n else 0.
inline int h_indicator(long long n, long long m) { return n - m < 0 ? 0 : 1; }

/// n (n-1) ... (n-m+1); zero when m > n.
BigInt falling_factorial(long long n, int m);

}  // namespace pm
