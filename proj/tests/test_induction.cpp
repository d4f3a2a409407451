#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "permmoments/induction.hpp"
#include "permmoments/oracle.hpp"

using namespace pm;

namespace {

Vector<double> to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Vector<double>>(v.data(), Eigen::Index(v.size()));
}

Dataset<double> make_dataset(std::size_t n, std::mt19937_64& rng) {
  return {oracle::normal_sample(n, rng), oracle::normal_sample(n, rng)};
}

std::vector<double> abs_values(std::vector<double> v) {
  for (auto& x : v) x = std::abs(x);
  return v;
}

}  // namespace

TEST_CASE("z_term base case is the power sum") {
  std::mt19937_64 rng(1);
  const auto z = oracle::normal_sample(6, rng);
  auto eval = ZTermEvaluator<double>::from_values(to_eigen(z), 7);
  for (int k = 1; k <= 7; ++k) {
    double s = 0;
    for (double v : z) s += std::pow(v, k);
    CHECK(z_term(Partition{k}, eval) == doctest::Approx(s).epsilon(1e-13));
  }
}

TEST_CASE("k = 5 reductions on centered data") {
  std::mt19937_64 rng(2);
  const auto c = center(make_dataset(9, rng), false);
  auto eval = ZTermEvaluator<double>::from_values(c.x_hat, 5, true);
  const double n = 9;
  const double m2 = power_mean(c.x_hat, 2), m3 = power_mean(c.x_hat, 3), m5 = power_mean(c.x_hat, 5);
  const double scale = n * n * std::abs(m2 * m3) + n * std::abs(m5);

  CHECK(std::abs(eval(Partition{4, 1}) + n * m5) <= 1e-12 * scale);
  CHECK(std::abs(eval(Partition{3, 2}) - (n * n * m2 * m3 - n * m5)) <= 1e-12 * scale);

  const Reduction& r41 = eval.trace().at(Partition{4, 1});
  CHECK(r41.peeled == 1);
  CHECK(*r41.rest == Partition{4});
  CHECK(r41.subtracted == std::map<Partition, int>{{Partition{5}, 1}});
}

TEST_CASE("Z_(1,1) equals -n<z^2> for centered data") {
  std::mt19937_64 rng(3);
  const auto c = center(make_dataset(6, rng), false);
  std::vector<double> z(c.x_hat.data(), c.x_hat.data() + 6);
  const double direct = oracle::distinct_tuple_sum(z, {1, 1});
  auto eval = ZTermEvaluator<double>::from_values(c.x_hat, 2);
  CHECK(eval(Partition{1, 1}) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(eval(Partition{1, 1}) == doctest::Approx(-6 * power_mean(c.x_hat, 2)).epsilon(1e-12));
}

TEST_CASE("z_term matches the direct sum over distinct index tuples") {
  std::mt19937_64 rng(4);
  for (std::size_t n = 1; n <= 7; ++n) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto z = oracle::normal_sample(n, rng);  // deliberately not centered
      auto eval = ZTermEvaluator<double>::from_values(to_eigen(z), 5);
      for (int k = 1; k <= 5; ++k) {
        for (const auto& p : enumerate_partitions(k)) {
          if (std::size_t(p.m()) > n) continue;
          const double direct = oracle::distinct_tuple_sum(z, p.parts());
          const double scale = oracle::distinct_tuple_sum(abs_values(z), p.parts());
          CHECK(std::abs(eval(p) - direct) <= 1e-12 * scale);
        }
      }
    }
  }
}

TEST_CASE("z_term is exact in rational arithmetic") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(-9, 9);
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<Rational> z(n);
    for (auto& v : z) v = Rational(num(rng)) / Rational(4);
    Vector<Rational> ez(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) ez(Eigen::Index(i)) = z[i];
    auto eval = ZTermEvaluator<Rational>::from_values(ez, 6);
    for (int k = 1; k <= 6; ++k)
      for (const auto& p : enumerate_partitions(k))
        CHECK(eval(p) == oracle::distinct_tuple_sum(z, p.parts()));
  }
}

TEST_CASE("z_term does not depend on the order of exponents") {
  std::mt19937_64 rng(6);
  const auto z = oracle::normal_sample(8, rng);
  auto eval = ZTermEvaluator<double>::from_values(to_eigen(z), 6);
  for (int k = 2; k <= 6; ++k) {
    for (const auto& p : enumerate_partitions(k)) {
      std::vector<int> order = p.parts();
      std::sort(order.begin(), order.end());
      const double canonical = eval(p);
      const double scale = oracle::distinct_tuple_sum(abs_values(z), p.parts());
      do {
        CHECK(std::abs(eval.evaluate_unsorted(order) - canonical) <= 1e-12 * scale);
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }
}

TEST_CASE("low-order moments") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {2u, 3u, 5u, 10u, 100u, 1000u}) {
    const auto d = make_dataset(n, rng);
    CHECK(std::abs(moment(d, 1).value) <= 1e-14);
    CHECK(std::abs(moment(d, 2).value - 1.0 / double(n - 1)) <= 1e-12);
    CHECK(moment(d, 0).value == 1.0);
  }
  const Dataset<double> diag(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3});
  CHECK(std::abs(moment(diag, 3).value) <= 1e-15);
  CHECK(moment(diag, 2).value == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("n = 7, k = 5 equals the mean over all 5040 permutations") {
  std::mt19937_64 rng(8);
  const auto x = oracle::normal_sample(7, rng), y = oracle::normal_sample(7, rng);
  const auto brute = oracle::permutation_moments(x, y, 5);
  CHECK(std::abs(moment(Dataset<double>(x, y), 5).value - brute[5]) <= 1e-12);
}

TEST_CASE("induction equals full enumeration for n = 3..8, k = 1..5") {
  std::mt19937_64 rng(9);
  for (std::size_t n = 3; n <= 8; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      const auto x = oracle::normal_sample(n, rng), y = oracle::normal_sample(n, rng);
      const auto brute = oracle::permutation_moments(x, y, 5);
      const auto analytic = moments(Dataset<double>(x, y), 5);
      for (int k = 1; k <= 5; ++k)
        CHECK(std::abs(analytic[std::size_t(k - 1)].value - brute[std::size_t(k)]) <= 1e-12);
    }
  }
}

TEST_CASE("exact mode: induction and enumeration agree exactly") {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> num(-20, 20);
  for (int n = 2; n <= 6; ++n) {
    Vector<Rational> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs(i) = Rational(num(rng)) / Rational(5);
      ys(i) = Rational(num(rng) * 3 + (i == 0 ? 1 : 0));
    }
    if (xs.maxCoeff() == xs.minCoeff()) xs(0) += 1;
    const Dataset<Rational> d(xs, ys);
    const auto analytic = moments_exact(d, 7);
    const auto brute = brute_force_numerators_exact(d, 7);
    for (int k = 1; k <= 7; ++k) CHECK(analytic[std::size_t(k - 1)].numerator == brute[std::size_t(k)]);
    CHECK(analytic[0].numerator == 0);
    CHECK(*analytic[1].exact_value() == Rational(1) / Rational(n - 1));
    CHECK_FALSE(analytic[2].exact_value().has_value());
  }
}

TEST_CASE("invariance properties") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(0.2, 5.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + std::size_t(trial) * 3;
    const auto d = make_dataset(n, rng);
    const auto base = moments(d, 8);
    const double a = coef(rng), b = coef(rng) - 2.5;

    const auto pos = moments(Dataset<double>(d.xs().array() * a + b, d.ys()), 8);
    const auto neg = moments(Dataset<double>(d.xs(), d.ys().array() * -a + b), 8);
    const auto swapped = moments(d.swapped(), 8);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Vector<double> px(static_cast<Eigen::Index>(n)), py(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      px(Eigen::Index(i)) = d.xs()(order[i]);
      py(Eigen::Index(i)) = d.ys()(order[i]);
    }
    const auto shuffled = moments(Dataset<double>(px, py), 8);

    for (std::size_t i = 0; i < base.size(); ++i) {
      const int k = base[i].k;
      const double sign = k % 2 ? -1.0 : 1.0;
      CHECK(std::abs(pos[i].value - base[i].value) <= 1e-12);
      CHECK(std::abs(neg[i].value - sign * base[i].value) <= 1e-12);
      CHECK(std::abs(swapped[i].value - base[i].value) <= 1e-12);
      CHECK(std::abs(shuffled[i].value - base[i].value) <= 1e-13);
      CHECK(std::abs(base[i].value) <= 1 + 1e-9);
    }
    // 1 >= <r^2> >= <r^4> >= ... >= 0
    double prev = 1;
    for (std::size_t i = 1; i < base.size(); i += 2) {
      CHECK(base[i].value >= -1e-12);
      CHECK(base[i].value <= prev + 1e-12);
      prev = base[i].value;
    }
  }
}

TEST_CASE("duplicate rows and small n") {
  const Dataset<double> d(std::vector<double>{1, 1, 2, 2, 3}, std::vector<double>{0, 0, 1, 1, 5});
  const auto x = std::vector<double>{1, 1, 2, 2, 3}, y = std::vector<double>{0, 0, 1, 1, 5};
  const auto brute = oracle::permutation_moments(x, y, 8);
  const auto analytic = moments(d, 8);
  for (int k = 1; k <= 8; ++k) CHECK(std::abs(analytic[std::size_t(k - 1)].value - brute[std::size_t(k)]) <= 1e-12);

  // n = 2: r is +-1 with equal weight.
  const Dataset<double> two(std::vector<double>{0, 1}, std::vector<double>{3, 7});
  for (int k = 1; k <= 10; ++k)
    CHECK(moment(two, k).value == doctest::Approx(k % 2 ? 0.0 : 1.0).epsilon(1e-13));
}

TEST_CASE("errors") {
  const Dataset<double> flat(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4});
  CHECK_THROWS_AS(moment(flat, 2), ZeroVariance);
  std::mt19937_64 rng(12);
  const auto d = make_dataset(5, rng);
  CHECK_THROWS_AS(moment(d, 17), KTooLarge);
  CHECK_NOTHROW(moment(d, 17, false, 20));
  CHECK_NOTHROW(moment(d, 16));
}

TEST_CASE("breakdown sums to the value and carries stars") {
  std::mt19937_64 rng(13);
  const auto d = make_dataset(4, rng);
  const auto r = moment(d, 5, true);
  REQUIRE(r.breakdown.size() == 7);
  double sum = 0;
  for (const auto& t : r.breakdown) {
    sum += t.contribution;
    CHECK(t.star == star_multinomial(t.partition));
    if (t.partition.m() > 4) CHECK(t.multiplicity_factor == 0);
  }
  CHECK(sum == doctest::Approx(r.value).epsilon(1e-14));
}

TEST_CASE("large n stays finite and keeps the known constants") {
  std::mt19937_64 rng(14);
  for (std::size_t n : {10000u, 1000000u}) {
    const auto d = make_dataset(n, rng);
    InductionSession s(d, 16);
    CHECK(std::abs(s.moment(1).value) <= 1e-14);
    CHECK(std::abs(s.moment(2).value - 1.0 / double(n - 1)) <= 1e-12);
    for (int k = 3; k <= 16; ++k) CHECK(std::isfinite(s.moment(k).value));
  }
}
