#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "permmoments/partition.hpp"

using namespace pm;

TEST_CASE("partition canonicalizes and validates") {
  const Partition p{1, 3, 1};
  CHECK(p.parts() == std::vector<int>{3, 1, 1});
  CHECK(p.k() == 5);
  CHECK(p.m() == 3);
  CHECK(p.str() == "(3,1,1)");
  CHECK_THROWS_AS(Partition({2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Partition(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("partitions of 1 and 5") {
  CHECK(enumerate_partitions(1) == std::vector<Partition>{Partition{1}});
  const std::vector<Partition> five{{1, 1, 1, 1, 1}, {2, 1, 1, 1}, {2, 2, 1}, {3, 1, 1},
                                    {3, 2},          {4, 1},       {5}};
  CHECK(enumerate_partitions(5) == five);
}

TEST_CASE("partition counts match an independent recursive counter") {
  CHECK(enumerate_partitions(4).size() == 5);
  for (int k = 1; k <= kDefaultOrderCap; ++k) {
    const auto parts = enumerate_partitions(k);
    CHECK(parts.size() == std::size_t(oracle::count_partitions(k, k)));
    std::set<Partition> unique(parts.begin(), parts.end());
    CHECK(unique.size() == parts.size());
    for (std::size_t i = 1; i < parts.size(); ++i) {
      CHECK(parts[i - 1].m() >= parts[i].m());
      if (parts[i - 1].m() == parts[i].m()) CHECK(parts[i - 1] < parts[i]);
    }
    for (const auto& p : parts) CHECK(p.k() == k);
  }
  CHECK(enumerate_partitions(16).size() == 231);
}

TEST_CASE("order cap") {
  CHECK_THROWS_AS(enumerate_partitions(17), KTooLarge);
  CHECK(enumerate_partitions(17, 20).size() == 297);
  CHECK_THROWS_AS(enumerate_partitions(0), std::invalid_argument);
}

TEST_CASE("starred multinomial") {
  CHECK(star_multinomial({2, 2}) == 3);
  CHECK(star_multinomial({2, 2, 1}) == 15);
  CHECK(star_multinomial({3, 1, 1}) == 10);
  CHECK(star_multinomial({2, 1, 1, 1}) == 10);
  CHECK(star_multinomial({1, 1, 1, 1, 1}) == 1);
  for (int k = 1; k <= 30; ++k) CHECK(star_multinomial(Partition{k}) == 1);
  // Sum over partitions of k of star = Bell number.
  const std::vector<long long> bell{1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
  for (int k = 1; k <= 10; ++k) {
    BigInt total = 0;
    for (const auto& p : enumerate_partitions(k)) total += star_multinomial(p);
    CHECK(total == bell[std::size_t(k)]);
  }
}

TEST_CASE("h indicator") {
  CHECK(h_indicator(3, 4) == 0);
  CHECK(h_indicator(3, 3) == 1);
  CHECK(h_indicator(8, 1) == 1);
}

TEST_CASE("partition sum tiles all index tuples") {
  for (int k = 1; k <= 10; ++k) {
    const auto parts = enumerate_partitions(k);
    for (long long n = 1; n <= 12; ++n) {
      BigInt total = 0;
      for (const auto& p : parts) total += star_multinomial(p) * falling_factorial(n, p.m());
      BigInt expected = 1;
      for (int i = 0; i < k; ++i) expected *= n;
      CHECK(total == expected);
    }
  }
}
