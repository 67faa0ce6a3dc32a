#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kinex/criterion.hpp"
#include "kinex/special.hpp"

using namespace kinex;

namespace {

std::vector<FractionLaw> paired_laws() {
  std::vector<FractionLaw> out{Uniform01{}, DiracHalf{}};
  for (double a : {0.1, 0.5, 1.0, 2.0, 10.0}) out.push_back(SymmetricBeta{a});
  for (double a : {1.01, 1.5, 2.0, 5.0, 20.0}) out.push_back(InverseBetaQuarter{a});
  return out;
}

}  // namespace

TEST_CASE("G examples") {
  CHECK(g_value(Uniform01{}, 2.0).value == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
  CHECK(std::fabs(g_value(InverseBetaQuarter{3.0}, 1.0).value) < 1e-12);
  CHECK(std::isinf(g_value(InverseBetaQuarter{1.5}, 2.0).value));
  CHECK(std::isinf(g_value(InverseBetaQuarter{1.5}, 2.5).value));
  CHECK(g_value(DiracHalf{}, 3.0).value == doctest::Approx(-0.75).epsilon(1e-15));
  // p^s + q^s - 1 for the deterministic mixing
  CHECK(g_value(SlaninaPQ{0.25, 0.25}, 0.5).value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g_value(SlaninaPQ{0.25, 0.25}, 1.0).value == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("G'(1) examples") {
  CHECK(g_prime_at_one(Uniform01{}) == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(g_prime_at_one(DiracHalf{}) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  // 2 <eps ln eps> = psi(a + 1) - psi(2a + 1), from mpmath
  const struct {
    double a, value;
  } refs[] = {{0.1, -0.134715043818888316}, {0.5, -0.386294361119890619}, {1.0, -0.5},
              {2.0, -0.583333333333333333}, {10.0, -0.668771403175427943}};
  for (const auto& r : refs) {
    CAPTURE(r.a);
    CHECK(std::fabs(g_prime_at_one(SymmetricBeta{r.a}) - r.value) < 1e-10);
  }
  // a -> 1+ limit is 0 from below
  const double near_one = g_prime_at_one(InverseBetaQuarter{1.0 + 1e-6});
  CHECK(near_one < 0.0);
  CHECK(near_one > -1e-5);
}

TEST_CASE("Q examples") {
  CHECK(std::fabs(q_value(1.0)) < 1e-13);
  CHECK(q_value(1.5) == doctest::Approx(4.0 * kLn2 - 2.0).epsilon(1e-12));
  CHECK(q_value(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(q_value(0.99), std::domain_error);
}

TEST_CASE("G(1) = 0 for conservative laws and G(0) = 1 for paired laws") {
  for (const auto& law : paired_laws()) {
    CAPTURE(to_string(law));
    CHECK(std::fabs(g_value(law, 1.0).value) < 1e-10);
    CHECK(g_value(law, 0.0).value == 1.0);
  }
}

TEST_CASE("G'(1) is negative for every paired law") {
  for (const auto& law : paired_laws()) {
    CAPTURE(to_string(law));
    CHECK(g_prime_at_one(law) < 0.0);
  }
}

TEST_CASE("G'(1) agrees with central differences of G") {
  for (const auto& law : paired_laws()) {
    CAPTURE(to_string(law));
    CHECK(std::fabs(g_prime_at_one(law) - g_prime_finite_difference(law, 1.0, 1e-5)) < 1e-6);
  }
}

TEST_CASE("Q is strictly increasing on [1, 20]") {
  double prev = q_value(1.0);
  for (int i = 1; i <= 1900; ++i) {
    const double q = q_value(1.0 + 0.01 * i);
    REQUIRE(q > prev);
    prev = q;
  }
}

TEST_CASE("closed-form G agrees with quadrature of the defining expectation") {
  for (const auto& law : paired_laws()) {
    for (double s : {0.0, 0.3, 0.5, 1.5, 2.0, 3.7}) {
      const double closed = g_value(law, s).value;
      if (!std::isfinite(closed)) continue;
      CAPTURE(to_string(law));
      CAPTURE(s);
      CHECK(std::fabs(closed - g_value_by_quadrature(law, s)) < 1e-8);
    }
  }
}

TEST_CASE("closed-form G agrees with Monte Carlo") {
  const int n = 1000000;
  std::uint64_t stream = 0;
  for (const auto& law : paired_laws()) {
    for (double s : {0.5, 1.0, 1.5}) {
      const double closed = g_value(law, s).value;
      // The standard error needs a finite second moment of eps^s, i.e. finite G(2s).
      if (!std::isfinite(g_value(law, 2.0 * s).value)) continue;
      CAPTURE(to_string(law));
      CAPTURE(s);
      SeededRng rng(17, stream++);
      double sum = 0.0, sum2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto e = sample_fraction_pair(law, rng);
        const double x = std::pow(e.first, s) + std::pow(e.second, s) - 1.0;
        sum += x;
        sum2 += x * x;
      }
      const double mean = sum / n;
      const double se = std::sqrt(std::max(sum2 / n - mean * mean, 0.0) / n);
      CHECK(std::fabs(mean - closed) <= 5.0 * se + 1e-9);
    }
  }
}

TEST_CASE("trigamma series brackets the derivative of digamma") {
  for (double x : {1.0, 2.5}) {
    const double h = 1e-4;
    const double fd = (digamma(x + h) - digamma(x - h)) / (2.0 * h);
    // Partial sum S_K of 1/(x+k)^2 is below the limit; S_K + 1/(x+K) is above it.
    double partial = 0.0;
    const int terms = 2000000;
    for (int k = 0; k < terms; ++k) partial += 1.0 / ((x + k) * (x + k));
    const double upper = partial + 1.0 / (x + terms - 1);
    CHECK(partial < fd + 1e-6);
    CHECK(fd < upper + 1e-6);
    CHECK(upper - partial < 1e-6);
  }
}
