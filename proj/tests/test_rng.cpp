#include <doctest.h>

#include <cmath>
#include <vector>

#include "kinex/rng.hpp"

using namespace kinex;

namespace {

struct Moments {
  double mean;
  double variance;
};

template <class Draw>
Moments sample_moments(int n, Draw draw) {
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  return {mean, sum2 / n - mean * mean};
}

}  // namespace

TEST_CASE("equal seed and stream reproduce the sequence bit-exactly") {
  SeededRng a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a.next_u64() == b.next_u64());
    REQUIRE(a.gamma(0.7) == b.gamma(0.7));
    REQUIRE(a.beta(2.5, 1.5) == b.beta(2.5, 1.5));
  }
}

TEST_CASE("different streams give different sequences") {
  SeededRng a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("uniform stays in the open unit interval") {
  SeededRng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("uniform_index covers the range evenly") {
  SeededRng rng(3);
  std::vector<int> counts(7, 0);
  const int n = 700000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_index(7)];
  for (int c : counts) CHECK(std::abs(c - n / 7) < 5 * std::sqrt(n / 7.0));
  CHECK_THROWS(rng.uniform_index(0));
}

TEST_CASE("gamma variates have mean and variance equal to the shape") {
  SeededRng rng(11);
  const int n = 400000;
  for (double shape : {0.1, 0.5, 1.0, 2.5, 9.0}) {
    CAPTURE(shape);
    const Moments m = sample_moments(n, [&] { return rng.gamma(shape); });
    // sd of the sample mean is sqrt(shape / n)
    CHECK(std::fabs(m.mean - shape) < 5.0 * std::sqrt(shape / n));
    CHECK(std::fabs(m.variance - shape) < 0.05 * shape + 0.01);
  }
  CHECK_THROWS(rng.gamma(0.0));
}

TEST_CASE("beta variates have the Beta moments") {
  SeededRng rng(12);
  const int n = 400000;
  for (auto [a, b] : {std::pair{0.5, 0.5}, std::pair{2.0, 2.0}, std::pair{3.5, 2.5}}) {
    const double mean = a / (a + b);
    const double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    const Moments m = sample_moments(n, [&] { return rng.beta(a, b); });
    CHECK(std::fabs(m.mean - mean) < 5.0 * std::sqrt(var / n));
    CHECK(std::fabs(m.variance - var) < 0.02 * var);
  }
}

TEST_CASE("standard normal moments") {
  SeededRng rng(5);
  const Moments m = sample_moments(400000, [&] { return rng.standard_normal(); });
  CHECK(std::fabs(m.mean) < 0.01);
  CHECK(std::fabs(m.variance - 1.0) < 0.01);
}
