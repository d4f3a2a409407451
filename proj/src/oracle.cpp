#include "permmoments/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "permmoments/induction.hpp"

namespace pm {

std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= std::uint64_t(i);
  return f;
}

std::vector<int> unrank_permutation(int n, std::uint64_t rank) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> perm;
  perm.reserve(std::size_t(n));
  for (int i = n; i >= 1; --i) {
    const std::uint64_t block = factorial_u64(i - 1);
    const auto idx = static_cast<std::size_t>(rank / block);
    rank %= block;
    perm.push_back(pool[idx]);
    pool.erase(pool.begin() + std::ptrdiff_t(idx));
  }
  return perm;
}

namespace {

void check_cap(Eigen::Index n, int n_cap) {
  if (n > n_cap)
    throw NTooLarge("full enumeration needs n <= " + std::to_string(n_cap) + ", got n = " +
                    std::to_string(n));
}

// Standardized columns scaled by 1/sqrt(n): r_pi = sum_i u_i v_{pi(i)}.
std::pair<Vector<double>, Vector<double>> unit_columns(const Dataset<double>& d) {
  CenteredData<double> c = center(d, true);
  const double s = 1.0 / std::sqrt(double(d.size()));
  return {c.x_hat * s, c.y_hat * s};
}

double permuted_r(const Vector<double>& u, const Vector<double>& v, std::span<const int> perm) {
  double r = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) r += u(Eigen::Index(i)) * v(perm[i]);
  return r;
}

constexpr std::uint64_t kBlockSize = 4096;

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(block),
                    std::uint32_t(block >> 32)};
  return std::mt19937_64(seq);
}

void shuffle_into(std::vector<int>& perm, std::mt19937_64& rng) {
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
}

// Runs visit(perm, block_index) over `samples` permutations in fixed blocks.
template <typename Visit>
void sample_blocks(int n, std::uint64_t samples, std::uint64_t seed, unsigned threads,
                   const Visit& visit) {
  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  auto work = [&](unsigned worker) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (std::uint64_t b = worker; b < blocks; b += threads) {
      std::mt19937_64 rng = block_rng(seed, b);
      const std::uint64_t end = std::min(samples, (b + 1) * kBlockSize);
      for (std::uint64_t s = b * kBlockSize; s < end; ++s) {
        shuffle_into(perm, rng);
        visit(std::span<const int>(perm), b);
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
}

// Welford accumulator, merged with Chan's pairwise update.
struct RunningMoments {
  double count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double v) {
    count += 1;
    const double delta = v - mean;
    mean += delta / count;
    m2 += delta * (v - mean);
  }
  void merge(const RunningMoments& o) {
    if (o.count == 0) return;
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }
};

}  // namespace

PermutationStats brute_force_moments(const Dataset<double>& d, int k_max, unsigned threads,
                                     int n_cap) {
  check_cap(d.size(), n_cap);
  const auto [u, v] = unit_columns(d);
  PermutationStats s;
  s.k_max = k_max;
  s.moments = brute_force_power_means(u, v, k_max, threads);
  s.standard_errors.assign(std::size_t(k_max) + 1, 0.0);
  s.count = factorial_u64(int(d.size()));
  s.exact = true;
  return s;
}

std::vector<Rational> brute_force_numerators_exact(const Dataset<Rational>& d, int k_max,
                                                   unsigned threads, int n_cap) {
  check_cap(d.size(), n_cap);
  const CenteredData<Rational> c = center(d, false);
  if (c.var_x == 0) throw ZeroVariance("x column has zero variance");
  if (c.var_y == 0) throw ZeroVariance("y column has zero variance");
  return brute_force_power_means(c.x_hat, c.y_hat, k_max, threads);
}

PermutationStats monte_carlo_moments(const Dataset<double>& d, int k_max, std::uint64_t samples,
                                     std::uint64_t seed, unsigned threads) {
  if (samples < 1) throw std::invalid_argument("monte-carlo needs at least one sample");
  const auto [u, v] = unit_columns(d);
  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<std::vector<RunningMoments>> per_block(
      blocks, std::vector<RunningMoments>(std::size_t(k_max) + 1));

  sample_blocks(int(d.size()), samples, seed, threads,
                [&](std::span<const int> perm, std::uint64_t b) {
                  const double r = permuted_r(u, v, perm);
                  double power = 1;
                  for (auto& acc : per_block[b]) {
                    acc.add(power);
                    power *= r;
                  }
                });

  std::vector<RunningMoments> total(std::size_t(k_max) + 1);
  for (const auto& block : per_block)
    for (std::size_t k = 0; k < total.size(); ++k) total[k].merge(block[k]);

  PermutationStats s;
  s.k_max = k_max;
  s.count = samples;
  s.exact = false;
  for (const auto& acc : total) {
    s.moments.push_back(acc.mean);
    s.standard_errors.push_back(
        acc.count > 1 ? std::sqrt(acc.m2 / (acc.count - 1) / acc.count) : 0.0);
  }
  return s;
}

PValueResult permutation_pvalue(const Dataset<double>& d, std::optional<std::uint64_t> samples,
                                std::uint64_t seed, unsigned threads, int n_cap) {
  const auto [u, v] = unit_columns(d);
  const int n = int(d.size());
  PValueResult out;
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  out.r_observed = permuted_r(u, v, identity);
  const double threshold = std::abs(out.r_observed) - kPValueTieTolerance;

  if (!samples) {
    check_cap(n, n_cap);
    auto chunks = enumerate_permutation_chunks(
        n, threads, std::uint64_t{0}, [&](std::span<const int> perm, std::uint64_t& hits) {
          if (std::abs(permuted_r(u, v, perm)) >= threshold) ++hits;
        });
    out.exact = true;
    out.count = factorial_u64(n);
    out.extreme = std::accumulate(chunks.begin(), chunks.end(), std::uint64_t{0});
    out.p_value = double(out.extreme) / double(out.count);
    return out;
  }

  if (*samples < 1) throw std::invalid_argument("sampled p-value needs at least one sample");
  const std::uint64_t blocks = (*samples + kBlockSize - 1) / kBlockSize;
  std::vector<std::uint64_t> hits(blocks, 0);
  sample_blocks(n, *samples, seed, threads, [&](std::span<const int> perm, std::uint64_t b) {
    if (std::abs(permuted_r(u, v, perm)) >= threshold) ++hits[b];
  });
  out.exact = false;
  out.count = *samples;
  out.extreme = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  out.p_value = double(1 + out.extreme) / double(1 + out.count);
  return out;
}

std::string to_string(Generator g) {
  switch (g) {
    case Generator::Normal: return "normal";
    case Generator::Uniform: return "uniform";
    case Generator::HeavyTailed: return "heavy-tailed";
  }
  return "unknown";
}

Generator parse_generator(const std::string& name) {
  if (name == "normal") return Generator::Normal;
  if (name == "uniform") return Generator::Uniform;
  if (name == "heavy-tailed" || name == "heavy") return Generator::HeavyTailed;
  throw std::invalid_argument("unknown generator '" + name + "'");
}

Dataset<double> random_dataset(int n, Generator g, std::mt19937_64& rng) {
  Vector<double> xs(n), ys(n);
  auto fill = [&](auto dist) {
    for (int i = 0; i < n; ++i) {
      xs(i) = dist(rng);
      ys(i) = dist(rng);
    }
  };
  switch (g) {
    case Generator::Normal: fill(std::normal_distribution<double>(0.0, 1.0)); break;
    case Generator::Uniform: fill(std::uniform_real_distribution<double>(0.0, 1.0)); break;
    case Generator::HeavyTailed: fill(std::student_t_distribution<double>(3.0)); break;
  }
  return Dataset<double>(std::move(xs), std::move(ys));
}

ValidationReport run_validation(const ValidationConfig& config) {
  if (config.k_max < 2) throw std::invalid_argument("validation needs k_max >= 2");
  if (config.trials < 1) throw std::invalid_argument("validation needs at least one trial");
  ValidationReport report;
  report.config = config;
  for (int n : config.n_set) {
    check_cap(n, kDefaultBruteForceCap);
    if (n < 2) throw InvalidDataset("validation sizes must be >= 2");
    std::vector<CompensatedSum> sq(std::size_t(config.k_max) + 1);
    std::vector<double> worst(std::size_t(config.k_max) + 1, 0.0);
    for (int trial = 0; trial < config.trials; ++trial) {
      std::seed_seq seq{std::uint32_t(config.seed), std::uint32_t(config.seed >> 32),
                        std::uint32_t(n), std::uint32_t(trial)};
      std::mt19937_64 rng(seq);
      const Dataset<double> d = random_dataset(n, config.generator, rng);
      const PermutationStats brute = brute_force_moments(d, config.k_max, config.threads);
      InductionSession session(d, config.k_max);
      for (int k = 2; k <= config.k_max; ++k) {
        const double err = session.moment(k).value - brute.moments[std::size_t(k)];
        sq[std::size_t(k)].add(err * err);
        worst[std::size_t(k)] = std::max(worst[std::size_t(k)], std::abs(err));
      }
    }
    for (int k = 2; k <= config.k_max; ++k)
      report.cells.push_back(
          {n, k, sq[std::size_t(k)].value() / config.trials, worst[std::size_t(k)]});
  }
  return report;
}

}  // namespace pm
