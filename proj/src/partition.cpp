#include "permmoments/partition.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace pm {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("partition needs at least one part");
  for (int p : parts_) {
    if (p < 1) throw std::invalid_argument("partition parts must be positive");
    k_ += p;
  }
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

std::string Partition::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts_[i]);
  }
  return s + ")";
}

namespace {

void extend(int remaining, int max_part, std::vector<int>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    extend(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

BigInt factorial(int v) {
  BigInt f = 1;
  for (int i = 2; i <= v; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<Partition> enumerate_partitions(int k, int cap) {
  if (k < 1) throw std::invalid_argument("partition order must be >= 1");
  if (k > cap)
    throw KTooLarge("order " + std::to_string(k) + " exceeds cap " + std::to_string(cap));
  std::vector<Partition> out;
  std::vector<int> prefix;
  extend(k, k, prefix, out);
  std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
    if (a.m() != b.m()) return a.m() > b.m();
    return a < b;
  });
  return out;
}

BigInt star_multinomial(const Partition& p) {
  BigInt denom = 1;
  const auto& parts = p.parts();
  std::size_t i = 0;
  while (i < parts.size()) {
    std::size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) {
      denom *= factorial(parts[j]);
      ++j;
    }
    denom *= factorial(static_cast<int>(j - i));
    i = j;
  }
  BigInt num = factorial(p.k());
  if (num % denom != 0) throw std::logic_error("star multinomial is not integral");
  return num / denom;
}

BigInt falling_factorial(long long n, int m) {
  BigInt f = 1;
  for (int i = 0; i < m; ++i) {
    if (n - i <= 0) return 0;
    f *= n - i;
  }
  return f;
}

}  // namespace pm
