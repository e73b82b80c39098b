#include <doctest/doctest.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <boost/integer/common_factor.hpp>

#include "ehm/contfrac.hpp"
#include "ehm/errors.hpp"
#include "ehm/verify/oracles.hpp"

using namespace ehm;
namespace oracle = ehm::verify::oracle;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

std::vector<long> denominators(const FrequencyCF& cf, int from, int to) {
  std::vector<long> q;
  for (int m = from; m <= to; ++m) q.push_back(static_cast<long>(cf.q(m)));
  return q;
}

// Random doubles are occasionally too close to a rational to expand.
std::optional<FrequencyCF> try_expand(double x, int terms) {
  try {
    return cf_expand(x, terms);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

TEST_CASE("golden mean expands to ones with Fibonacci denominators") {
  const FrequencyCF cf = cf_expand(kGolden, 8);
  REQUIRE(cf.depth() == 8);
  for (const BigInt& a : cf.terms()) CHECK(a == 1);
  CHECK(denominators(cf, 1, 8) == std::vector<long>{1, 2, 3, 5, 8, 13, 21, 34});
  CHECK(cf.source() == CfSource::numeric);
}

TEST_CASE("sqrt(2) - 1 expands to twos") {
  const FrequencyCF cf = cf_expand(std::numbers::sqrt2 - 1.0, 5);
  for (const BigInt& a : cf.terms()) CHECK(a == 2);
  CHECK(denominators(cf, 1, 5) == std::vector<long>{2, 5, 12, 29, 70});
}

TEST_CASE("invalid expansions are rejected") {
  CHECK_THROWS_AS(cf_expand(0.5, 10), DomainError);
  CHECK_THROWS_AS(cf_expand(0.375, 10), DomainError);
  CHECK_THROWS_AS(cf_expand(kGolden, 0), DomainError);
  CHECK_THROWS_AS(cf_expand(1.5, 10), DomainError);
  const std::vector<std::int64_t> bad = {1, 0, 2};
  CHECK_THROWS_AS(cf_from_terms(bad), DomainError);
}

TEST_CASE("near-rational input stops before the expansion turns into noise") {
  // 3/7 + 1e-13: the exact value of the double still has a long expansion, but
  // only terms whose convergents obey the two-sided law may be emitted.
  const double x = 3.0 / 7.0 + 1e-13;
  try {
    const FrequencyCF cf = cf_expand(x, 60);
    const auto exact = oracle::exact_value(x);
    const auto terms = oracle::euclid_terms(exact.num, exact.den);
    REQUIRE(cf.terms().size() <= terms.size());
    for (std::size_t i = 0; i < cf.terms().size(); ++i) CHECK(cf.terms()[i] == terms[i]);
    CHECK(cf.terms().size() < 20);
    for (int m = 1; m < cf.depth(); ++m) {
      const auto law = oracle::convergent_law(exact.num, exact.den, cf.q(m), cf.q(m + 1));
      CHECK(law.lower);
      CHECK(law.upper);
    }
  } catch (const DomainError&) {
    // refusing the input is also acceptable
  }
}

TEST_CASE("convergents satisfy the recurrence, coprimality and the determinant identity") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto expanded = try_expand(u(g), 30);
    if (!expanded) continue;
    const FrequencyCF& cf = *expanded;
    for (int m = 1; m <= cf.depth(); ++m) {
      const BigInt& a = cf.terms()[static_cast<std::size_t>(m - 1)];
      const BigInt q_prev2 = m >= 2 ? cf.q(m - 2) : BigInt(0);
      const BigInt p_prev2 = m >= 2 ? cf.p(m - 2) : BigInt(1);
      CHECK(cf.q(m) == a * cf.q(m - 1) + q_prev2);
      CHECK(cf.p(m) == a * cf.p(m - 1) + p_prev2);
      CHECK(boost::integer::gcd(cf.p(m), cf.q(m)) == 1);
      const BigInt det = cf.p(m) * cf.q(m - 1) - cf.p(m - 1) * cf.q(m);
      CHECK(abs(det) == 1);
    }
  }
}

TEST_CASE("two-sided convergent bound on random frequencies") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = u(g);
    const auto expanded = try_expand(x, 25);
    if (!expanded) continue;
    const FrequencyCF& cf = *expanded;
    const auto exact = oracle::exact_value(x);
    for (int m = 1; m < cf.depth(); ++m) {
      const auto law = oracle::convergent_law(exact.num, exact.den, cf.q(m), cf.q(m + 1));
      CHECK(law.lower);
      CHECK(law.upper);
      const double d = cf.q_alpha_distance(m);
      CHECK(d <= 1.0 / cf.q_double(m + 1) * (1 + 1e-12));
      CHECK(d >= 0.5 / cf.q_double(m + 1) * (1 - 1e-12));
      ++checked;
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("distance to the integers") {
  CHECK(dist_to_z(3 * 0.6180339887) == doctest::Approx(0.145898).epsilon(1e-5));
  CHECK(dist_to_z(0.5) == 0.5);
  CHECK(dist_to_z(7.0) == 0.0);
  CHECK(dist_to_z(-0.25) == 0.25);
  CHECK(dist_to_z(-3.9) == doctest::Approx(0.1));
}

TEST_CASE("beta of the golden mean tends to zero") {
  const FrequencyCF cf = cf_from_terms(std::vector<std::int64_t>(40, 1));
  double previous = estimate_beta(cf, 1).beta;
  for (int start = 2; start <= 10; ++start) {
    const double b = estimate_beta(cf, start).beta;
    CHECK(b <= previous);
    previous = b;
  }
  // q_5 = 8, q_6 = 13; the tail max sits at its first term
  CHECK(estimate_beta(cf, 5).beta == doctest::Approx(std::log(13.0) / 8.0).epsilon(1e-14));
  CHECK(estimate_beta(cf, 7).beta < 0.2);
  CHECK(estimate_beta(cf, 35).beta < 1e-5);
}

TEST_CASE("bounded partial quotients give beta near zero") {
  const FrequencyCF cf = cf_from_terms(std::vector<std::int64_t>(30, 10));
  CHECK(estimate_beta(cf, 10).beta < 1e-8);
}

TEST_CASE("Liouville schedule has beta >= 1") {
  const std::vector<BigInt> terms = liouville_terms(2, 6);
  REQUIRE(terms.size() >= 3);
  const FrequencyCF cf = cf_from_terms(terms);
  CHECK(cf.source() == CfSource::explicit_terms);
  // by construction ln q_{m+1} >= q_m
  for (int m = 1; m < cf.depth(); ++m) CHECK(std::log(cf.q_double(m + 1)) >= cf.q_double(m));
  const BetaEstimate est = estimate_beta(cf, 1);
  CHECK(est.beta >= 1.0);
  CHECK(est.samples.size() == static_cast<std::size_t>(cf.depth() - 1));
}

TEST_CASE("beta needs enough convergents") {
  const FrequencyCF cf = cf_from_terms(std::vector<std::int64_t>{1, 1, 1});
  CHECK_THROWS(estimate_beta(cf, 5));
}

TEST_CASE("subsequence selection") {
  SUBCASE("beta zero keeps every index") {
    const FrequencyCF cf = cf_from_terms(std::vector<std::int64_t>(12, 1));
    const DenominatorSubsequence sub = select_subsequence(cf, 0.0);
    CHECK(sub.rule == SubsequenceRule::all);
    CHECK(sub.indices.size() >= 11);
    for (std::size_t i = 1; i < sub.indices.size(); ++i) CHECK(sub.indices[i] == sub.indices[i - 1] + 1);
  }
  SUBCASE("Liouville schedule selects each constructed step") {
    const FrequencyCF cf = cf_from_terms(liouville_terms(2, 6));
    const DenominatorSubsequence sub = select_subsequence(cf, 1.0, 1);
    CHECK(sub.rule == SubsequenceRule::exponential_gap);
    std::vector<int> expected;
    for (int m = 1; m < cf.depth(); ++m)
      if (std::log(cf.q_double(m + 1)) >= 0.5 * cf.q_double(m)) expected.push_back(m);
    CHECK(sub.indices == expected);
    CHECK(sub.indices.size() == static_cast<std::size_t>(cf.depth() - 1));
  }
  SUBCASE("bounded quotients stop meeting a wrong gap") {
    // q = 2, 5, 12, 29, 70, ...: e^{q/4} overtakes 2.4 q once q reaches 29
    const FrequencyCF cf = cf_expand(std::numbers::sqrt2 - 1.0, 15);
    CHECK(select_subsequence(cf, 0.5, 1).indices == std::vector<int>{1, 2, 3});
    CHECK_THROWS_AS(select_subsequence(cf, 0.5, 4), NumericalError);
  }
}
