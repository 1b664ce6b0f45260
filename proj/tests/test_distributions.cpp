#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "gwtw/distributions.hpp"
#include "gwtw/rng.hpp"
#include "gwtw/validate.hpp"

using namespace gwtw;

namespace {

// Exact rational sum 1 + 1/2 + ... + 1/n as (numerator, denominator).
std::pair<long long, long long> harmonic_fraction(long long n) {
  long long num = 0, den = 1;
  for (long long k = 1; k <= n; ++k) {
    num = num * k + den;
    den *= k;
    const long long g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::vector<double> frequencies(const ZipfSampler& sampler, std::size_t draws,
                                RngStream& rng) {
  std::vector<double> freq(sampler.n_c(), 0.0);
  for (std::size_t i = 0; i < draws; ++i) freq[sampler.sample(rng) - 1] += 1.0;
  for (auto& f : freq) f /= static_cast<double>(draws);
  return freq;
}

}  // namespace

TEST_CASE("harmonic matches exact rational sums") {
  const auto [num, den] = harmonic_fraction(3);
  CHECK(num == 11);
  CHECK(den == 6);
  CHECK(harmonic(3, 1.0) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));

  const auto [num10, den10] = harmonic_fraction(10);
  CHECK(harmonic(10, 1.0) ==
        doctest::Approx(static_cast<double>(num10) / static_cast<double>(den10)).epsilon(1e-14));

  CHECK(harmonic(7, 0.0) == 7.0);
  CHECK(harmonic(1, 0.65) == 1.0);
  CHECK_THROWS_AS(harmonic(0, 1.0), std::domain_error);
  CHECK_THROWS_AS(harmonic(3, -0.5), std::domain_error);
}

TEST_CASE("zipf_pmf") {
  CHECK(zipf_pmf(1, 3, 1.0) == doctest::Approx(6.0 / 11.0).epsilon(1e-15));
  for (std::size_t k = 1; k <= 8; ++k) CHECK(zipf_pmf(k, 8, 0.0) == doctest::Approx(0.125));
  CHECK(zipf_pmf(1, 1, 0.65) == 1.0);
  CHECK_THROWS_AS(zipf_pmf(0, 3, 1.0), std::domain_error);
  CHECK_THROWS_AS(zipf_pmf(4, 3, 1.0), std::domain_error);
}

TEST_CASE("pmf normalizes and the cdf table agrees with it") {
  for (std::size_t n_c : {1u, 2u, 10u, 1000u, 100000u, 1000000u}) {
    for (double alpha : {0.0, 0.5, 0.65, 1.0, 1.5, 2.0}) {
      const ZipfSampler s(n_c, alpha);
      double total = 0.0;
      for (std::size_t k = n_c; k >= 1; --k) total += s.pmf(k);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

      const auto cdf = s.cdf();
      CHECK(cdf.back() == 1.0);
      if (n_c > 100000) continue;
      const double h = harmonic(n_c, alpha);
      double prev = 0.0;
      for (std::size_t k = 1; k <= n_c; ++k) {
        const double diff = cdf[k - 1] - prev;
        const double exact = 1.0 / (std::pow(static_cast<double>(k), alpha) * h);
        CHECK_MESSAGE(cdf[k - 1] > prev, "cdf not increasing at k=", k);
        // Differences near cdf = 1 carry rounding of both entries; allow 2 ulps of 1.
        CHECK_MESSAGE(std::abs(diff - exact) <= 1e-12 * exact + 4e-16, "n_c=", n_c, " alpha=", alpha, " k=", k, " cdf=", cdf[k - 1]);
        CHECK(s.pmf(k) == doctest::Approx(exact).epsilon(1e-12));
        prev = cdf[k - 1];
      }
    }
  }
}

TEST_CASE("sample_content frequencies") {
  RngStream rng(7, 0);
  SUBCASE("single item") {
    const ZipfSampler s(1, 0.65);
    for (int i = 0; i < 100; ++i) CHECK(s.sample(rng) == 1);
  }
  SUBCASE("uniform over four") {
    const auto freq = frequencies(ZipfSampler(4, 0.0), 100000, rng);
    for (double f : freq) CHECK(std::abs(f - 0.25) <= 0.01);
  }
  SUBCASE("harmonic over three") {
    const auto freq = frequencies(ZipfSampler(3, 1.0), 100000, rng);
    CHECK(std::abs(freq[0] - 6.0 / 11.0) <= 0.01);
  }
}

TEST_CASE("zipf sampler passes chi-square at 0.001") {
  CHECK(check_zipf_chi_square(10, 0.0, 100000, 11).passed);
  CHECK(check_zipf_chi_square(100, 0.65, 100000, 11).passed);
  CHECK(check_zipf_chi_square(1000, 1.5, 100000, 11).passed);
}

TEST_CASE("chi-square detects a wrong distribution") {
  // Draws from alpha = 1 scored against an alpha = 0.8 sampler.
  const ZipfSampler truth(100, 1.0);
  const ZipfSampler claimed(100, 0.8);
  RngStream rng(3, 0);
  std::vector<std::size_t> counts(100, 0);
  for (int i = 0; i < 100000; ++i) ++counts[truth.sample(rng) - 1];
  double stat = 0.0;
  for (std::size_t k = 1; k <= 100; ++k) {
    const double e = claimed.pmf(k) * 100000.0;
    stat += (static_cast<double>(counts[k - 1]) - e) * (static_cast<double>(counts[k - 1]) - e) / e;
  }
  CHECK(stat > 1000.0);
}

TEST_CASE("sample_exponential") {
  RngStream rng(5, 1);
  double sum1 = 0.0, sum2 = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = sample_exponential(1.0, rng);
    CHECK_UNARY(x > 0.0);
    sum1 += x;
    sum2 += sample_exponential(2.0, rng);
  }
  CHECK(std::abs(sum1 / 100000.0 - 1.0) <= 0.02);
  CHECK(std::abs(sum2 / 100000.0 - 0.5) <= 0.01);
  CHECK_THROWS_AS(sample_exponential(0.0, rng), std::domain_error);
  CHECK_THROWS_AS(sample_exponential(-1.0, rng), std::domain_error);
}

TEST_CASE("sample_servers") {
  RngStream rng(9, 2);
  CHECK(sample_servers(5, 5, rng) == std::vector<ServerId>{0, 1, 2, 3, 4});
  CHECK(sample_servers(40, 40, rng).size() == 40);

  for (int i = 0; i < 1000; ++i) {
    const auto pick = sample_servers(1000, 2, rng);
    REQUIRE(pick.size() == 2);
    CHECK(pick[0] < pick[1]);
    CHECK(pick[1] < 1000);
  }

  std::vector<double> freq(3, 0.0);
  for (int i = 0; i < 90000; ++i) freq[sample_servers(3, 1, rng)[0]] += 1.0;
  for (double f : freq) CHECK(std::abs(f / 90000.0 - 1.0 / 3.0) <= 0.01);

  CHECK_THROWS_AS(sample_servers(3, 4, rng), std::domain_error);
  CHECK_THROWS_AS(sample_servers(3, 0, rng), std::domain_error);
}

TEST_CASE("sample_servers never repeats and stays in range") {
  RngStream gen(21, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n_s = 1 + gen.below(60);
    const std::size_t sigma = 1 + gen.below(n_s);
    const auto pick = sample_servers(n_s, sigma, gen);
    const std::set<ServerId> unique(pick.begin(), pick.end());
    CHECK(unique.size() == sigma);
    CHECK(*unique.rbegin() < n_s);
    CHECK(std::is_sorted(pick.begin(), pick.end()));
  }
}

TEST_CASE("RngStream determinism and stream separation") {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs_c = differs_c || x != c();
    differs_d = differs_d || x != d();
  }
  CHECK(differs_c);
  CHECK(differs_d);

  // Pinned first outputs; a change here breaks reproducibility of old runs.
  RngStream pinned(0, 0);
  CHECK(pinned() == 310008705479550841ULL);
  CHECK(pinned() == 4142510330926838284ULL);

  RngStream u(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform_open_closed();
    CHECK_UNARY(x > 0.0);
    CHECK_UNARY(x <= 1.0);
    const auto k = u.below(7);
    CHECK(k < 7);
  }
}
