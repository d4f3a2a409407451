#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "permmoments/core_stats.hpp"
#include "permmoments/summation.hpp"

namespace pm {

/// Largest n accepted for full enumeration (10! = 3628800).
inline constexpr int kDefaultBruteForceCap = 10;

struct PermutationStats {
  int k_max = 0;
  /// moments[k] = mean of r_pi^k, k = 0..k_max.
  std::vector<double> moments;
  /// Standard error of each mean; all zero for exact enumeration.
  std::vector<double> standard_errors;
  std::uint64_t count = 0;
  bool exact = false;
};

std::uint64_t factorial_u64(int n);

/// Lexicographic rank -> permutation of 0..n-1.
std::vector<int> unrank_permutation(int n, std::uint64_t rank);

/// Enumerates all n! permutations in lexicographic order, split into fixed
/// chunks (permutations sharing their first two entries). Each chunk gets its
/// own accumulator; chunks are distributed over `threads` workers and
/// returned in chunk order, so any in-order reduction is independent of the
/// thread count.
template <typename Acc, typename Visit>
std::vector<Acc> enumerate_permutation_chunks(int n, unsigned threads, const Acc& init,
                                              const Visit& visit) {
  const int fixed = n >= 3 ? 2 : 0;
  std::uint64_t chunks = 1;
  for (int i = 0; i < fixed; ++i) chunks *= std::uint64_t(n - i);
  const std::uint64_t chunk_size = factorial_u64(n) / chunks;

  std::vector<Acc> out(chunks, init);
  auto work = [&](unsigned worker) {
    for (std::uint64_t c = worker; c < chunks; c += threads) {
      std::vector<int> perm = unrank_permutation(n, c * chunk_size);
      for (std::uint64_t i = 0; i < chunk_size; ++i) {
        visit(std::span<const int>(perm), out[c]);
        std::next_permutation(perm.begin(), perm.end());
      }
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return out;
}

/// Exact (1/n!) sum_pi (sum_i a_i b_{pi(i)})^k for k = 0..k_max by full
/// enumeration. Floating point accumulates each chunk with compensation.
template <typename Scalar>
std::vector<Scalar> brute_force_power_means(const Vector<Scalar>& a, const Vector<Scalar>& b,
                                            int k_max, unsigned threads = 1) {
  const int n = static_cast<int>(a.size());
  using Acc = std::conditional_t<is_floating_v<Scalar>, CompensatedSum, Scalar>;
  const std::vector<Acc> init(std::size_t(k_max) + 1, Acc{});
  auto chunks = enumerate_permutation_chunks(n, threads, init,
                                             [&](std::span<const int> perm, std::vector<Acc>& acc) {
    Scalar r = 0;
    for (int i = 0; i < n; ++i) r += a(i) * b(perm[std::size_t(i)]);
    Scalar power = 1;
    for (int k = 0; k <= k_max; ++k) {
      if constexpr (is_floating_v<Scalar>)
        acc[std::size_t(k)].add(power);
      else
        acc[std::size_t(k)] += power;
      power *= r;
    }
  });
  std::vector<Acc> total(std::size_t(k_max) + 1, Acc{});
  for (const auto& chunk : chunks)
    for (std::size_t k = 0; k < total.size(); ++k) {
      if constexpr (is_floating_v<Scalar>)
        total[k].add(chunk[k]);
      else
        total[k] += chunk[k];
    }
  std::vector<Scalar> means(total.size());
  const Scalar count = Scalar(static_cast<long long>(factorial_u64(n)));
  for (std::size_t k = 0; k < total.size(); ++k) {
    if constexpr (is_floating_v<Scalar>)
      means[k] = total[k].value() / count;
    else
      means[k] = total[k] / count;
  }
  return means;
}

/// Mean of r_pi^k over all n! permutations of the y column. Throws NTooLarge
/// above `n_cap` and ZeroVariance for a constant column.
PermutationStats brute_force_moments(const Dataset<double>& d, int k_max, unsigned threads = 1,
                                     int n_cap = kDefaultBruteForceCap);

/// Exact-arithmetic numerators <(sum_i x_hat_i y_hat_{pi(i)})^k>, k = 0..k_max.
std::vector<Rational> brute_force_numerators_exact(const Dataset<Rational>& d, int k_max,
                                                   unsigned threads = 1,
                                                   int n_cap = kDefaultBruteForceCap);

/// Empirical moments from `samples` uniform permutations (seeded
/// Fisher-Yates). Samples are drawn in fixed blocks, each with its own RNG
/// stream derived from (seed, block), so the output depends only on the
/// arguments and not on the thread count.
PermutationStats monte_carlo_moments(const Dataset<double>& d, int k_max, std::uint64_t samples,
                                     std::uint64_t seed, unsigned threads = 1);

struct PValueResult {
  double p_value = 1;
  double r_observed = 0;
  bool exact = false;
  /// Permutations enumerated (exact) or sampled.
  std::uint64_t count = 0;
  /// How many of those satisfied |r_pi| >= |r_observed|.
  std::uint64_t extreme = 0;
};

/// |r_pi| within this distance below |r_observed| counts as a tie.
inline constexpr double kPValueTieTolerance = 1e-12;

/// Two-sided permutation p-value. `samples == nullopt` enumerates all n!
/// permutations (fraction with |r_pi| >= |r_obs|); otherwise returns
/// (1 + hits) / (1 + samples).
PValueResult permutation_pvalue(const Dataset<double>& d, std::optional<std::uint64_t> samples,
                                std::uint64_t seed, unsigned threads = 1,
                                int n_cap = kDefaultBruteForceCap);

enum class Generator { Normal, Uniform, HeavyTailed };

std::string to_string(Generator g);
Generator parse_generator(const std::string& name);

/// Random dataset of n rows, independent coordinates from `g`.
Dataset<double> random_dataset(int n, Generator g, std::mt19937_64& rng);

struct ValidationConfig {
  int trials = 100;
  std::vector<int> n_set{3, 4, 5, 6, 7, 8};
  int k_max = 5;
  std::uint64_t seed = 20240601;
  Generator generator = Generator::Normal;
  unsigned threads = 1;
};

struct ValidationCell {
  int n = 0;
  int k = 0;
  double mse = 0;
  double max_abs_error = 0;
};

struct ValidationReport {
  ValidationConfig config;
  std::vector<ValidationCell> cells;
};

/// For each n, `trials` random datasets; MSE between the induction moments
/// and brute-force moments for k = 2..k_max.
ValidationReport run_validation(const ValidationConfig& config);

}  // namespace pm
