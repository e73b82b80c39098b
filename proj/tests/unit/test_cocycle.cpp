#include <doctest/doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/LU>

#include "ehm/cocycle.hpp"
#include "ehm/errors.hpp"
#include "ehm/verify/oracles.hpp"
#include "ehm/winding.hpp"

using namespace ehm;
namespace oracle = ehm::verify::oracle;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

double rel(const Mat2& a, const Mat2& b) { return (a - b).norm() / std::max(a.norm(), b.norm()); }

double arg_gap(double a, double b) { return std::fabs(std::remainder(a - b, kTwoPi)); }

}  // namespace

TEST_CASE("AMO transfer matrix") {
  // sigma(0, 0.5, 0) = (0, 2, 0): c = c~ = 2, so A = [[E - cos 2 pi x, -1], [1, 0]]
  for (double E : {-1.3, 0.0, 2.5}) {
    for (double x : {0.0, 0.17, 0.5}) {
      Mat2 hand;
      hand << E - std::cos(kTwoPi * x), -1.0, 1.0, 0.0;
      CHECK(rel(transfer_matrix({0, 0.5, 0}, E, kGolden, x), hand) < 1e-15);
    }
  }
}

TEST_CASE("determinant of the transfer matrix") {
  std::mt19937_64 g(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double l1 = 2 * u(g), l2 = 0.1 + 2 * u(g), l3 = 2 * u(g);
    const double x = u(g);
    const cd c = oracle::dual_c(l1, l2, l3, kGolden, x);
    if (std::abs(c) < 0.1) continue;
    const cd expected = oracle::dual_c_tilde(l1, l2, l3, kGolden, x - kGolden) / c;
    const Mat2 a = transfer_matrix({l1, l2, l3}, 4 * u(g) - 2, kGolden, x);
    const double scale = (l1 + 1 + l3) / l2 / std::abs(c);
    CHECK(std::abs(a.determinant() - expected) < 1e-13 * scale);
    // bottom row is (c, 0) / c
    CHECK(std::abs(a(1, 0) - 1.0) < 1e-15);
    CHECK(a(1, 1) == cd(0.0));
  }
}

TEST_CASE("symbol zero is refused") {
  // sigma(1,1,1) = (1,1,1) vanishes where x + a/2 = 1/3
  const double x = 1.0 / 3.0 - kGolden / 2.0;
  CHECK_THROWS_AS(transfer_matrix({1, 1, 1}, 0.3, kGolden, x), NumericalError);
  // the orbit reports it too, at the step that lands on the zero
  CHECK_THROWS_AS(iterate({1, 1, 1}, 0.3, kGolden, x - 3 * kGolden, 10), NumericalError);
  CHECK_NOTHROW(transfer_matrix({1, 1, 1}, 0.3, kGolden, x + 1e-3));
}

TEST_CASE("short orbits") {
  const CouplingTriple l(0.1, 0.4, 0.2);
  const double E = 0.7, x = 0.3;
  CHECK(rel(iterate(l, E, kGolden, x, 0).product(), Mat2::Identity()) == 0.0);
  CHECK(rel(iterate(l, E, kGolden, x, 1).product(), transfer_matrix(l, E, kGolden, x)) < 1e-15);
  Mat2 p = Mat2::Identity();
  for (int j = 0; j < 7; ++j) p = transfer_matrix(l, E, kGolden, x + j * kGolden) * p;
  CHECK(rel(iterate(l, E, kGolden, x, 7).product(), p) < 1e-14);
}

TEST_CASE("cocycle law") {
  std::mt19937_64 g(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const CouplingTriple l(0.3 * u(g), 0.4 + u(g), 0.3 * u(g));  // dual symbol stays away from zero
    const double x = u(g), E = 4 * u(g) - 2;
    const auto n = static_cast<std::int64_t>(10 + 100 * u(g));
    const auto m = static_cast<std::int64_t>(10 + 100 * u(g));
    const Mat2 whole = iterate(l, E, kGolden, x, n + m).product();
    const Mat2 split = iterate(l, E, kGolden, x + static_cast<double>(n) * kGolden, m).product() *
                       iterate(l, E, kGolden, x, n).product();
    CHECK(rel(whole, split) < 1e-10);
  }
}

TEST_CASE("determinant bookkeeping matches the telescoping ratio") {
  const CouplingTriple l(0.3, 0.7, 0.5);
  for (std::int64_t n : {1, 33, 1000, 10000}) {
    const CocycleOrbit o = iterate(l, 0.4, kGolden, 0.21, n);
    const LogPolar r = cascade_ratio(l, kGolden, 0.21, n);
    CHECK(std::fabs(static_cast<double>(o.det_log_abs) - r.log_abs) < 1e-9 * std::max(1.0, std::fabs(r.log_abs)));
    CHECK(arg_gap(o.det_arg, r.arg) < 1e-9);
  }
  // against a direct product of the dual symbols
  cd direct = 1.0;
  for (int j = 0; j < 20; ++j) {
    const double x = 0.21 + j * kGolden;
    direct *= oracle::dual_c_tilde(0.3, 0.7, 0.5, kGolden, x - kGolden) / oracle::dual_c(0.3, 0.7, 0.5, kGolden, x);
  }
  CHECK(std::abs(cascade_ratio(l, kGolden, 0.21, 20).value() - direct) < 1e-12 * std::abs(direct));
}

TEST_CASE("one-step orbit and the k-step ratio agree") {
  const CouplingTriple l(0.3, 0.5, 0.3);
  const cd g0(0.7, -0.2);
  const auto orbit = one_step_orbit(l, kGolden, 0.13, g0, 987);
  REQUIRE(orbit.size() == 988);
  CHECK(orbit[0] == g0);
  for (std::int64_t k : {1, 2, 55, 987}) {
    const cd predicted = cascade_ratio(l, kGolden, 0.13, k).value() * g0;
    CHECK(std::abs(orbit[static_cast<std::size_t>(k)] - predicted) < 1e-10 * std::abs(predicted));
  }
}

TEST_CASE("Lyapunov exponents") {
  SUBCASE("supercritical AMO") {
    const LyapunovEstimate e = lyapunov({0, 0.5, 0}, 0.0, kGolden, 100000, 4);
    CHECK(e.le_regularized == doctest::Approx(std::log(2.0)).epsilon(0.01 / std::log(2.0)));
    CHECK(e.le_regularized == doctest::Approx(e.le_raw - e.log_mean_abs_c));
    CHECK(std::fabs(e.log_mean_abs_c - e.log_mean_abs_c_quadrature) < 1e-8);
    CHECK(std::fabs(e.le_regularized - oracle::amo_lyapunov(2.0, 0.0, kGolden, 100000, 4)) < 1e-3);
  }
  SUBCASE("subcritical AMO") {
    const LyapunovEstimate e = lyapunov({0, 2, 0}, 0.0, kGolden, 100000, 4);
    CHECK(std::fabs(e.le_regularized) < 0.01);
  }
  SUBCASE("far outside the spectrum") {
    const LyapunovEstimate e = lyapunov({0.3, 0.7, 0.2}, 1000.0, kGolden, 1000, 2);
    CHECK(e.le_regularized > 5.0);
  }
  SUBCASE("singular symbol is regularized") {
    const LyapunovEstimate e = lyapunov({1, 1, 1}, 0.5, kGolden, 20000, 4);
    CHECK(std::isfinite(e.le_regularized));
    CHECK(e.le_regularized > -1e-3);
    CHECK(std::fabs(e.log_mean_abs_c - e.log_mean_abs_c_quadrature) < 1e-8);
  }
  SUBCASE("too few steps") { CHECK_THROWS_AS(lyapunov({0, 0.5, 0}, 0.0, kGolden, 999, 4), DomainError); }
}

TEST_CASE("unimodular part of the cascade") {
  const WindingFactorization w = factorize({0.2, 1, 1}, kGolden, 4096);
  for (std::int64_t q : {89, 377, 987}) CHECK(cascade_unimodular_residual(w, q, 512) < 1e-6);

  double previous = 1e300;
  for (std::int64_t q : {34, 89, 233, 610, 987}) {
    const double d = convergence_factor_deviation(w, q, 512);
    CHECK(d < previous);
    previous = d;
  }
  CHECK(previous < 1e-2);
}
