#include <doctest/doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ehm/errors.hpp"
#include "ehm/winding.hpp"

using namespace ehm;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

// c_s / |c_s| with s = sigma(l), straight from the couplings.
cd dual_phase(const CouplingTriple& l, double x) {
  const cd e = std::polar(1.0, kTwoPi * (x + kGolden / 2));
  const cd c = (l.l3() / e + 1.0 + l.l1() * e) / l.l2();
  return c / std::abs(c);
}

}  // namespace

TEST_CASE("closed form for a linear dual symbol") {
  const WindingFactorization w = factorize({0, 1, 2}, kGolden, 1024);
  CHECK(w.winding == -1);
  CHECK(w.convention == ReflectionConvention::direct);
  CHECK(w.f(0.25 - kGolden / 2) == doctest::Approx(std::arg(cd(1.0, 0.5))).epsilon(1e-14));
  CHECK(w.f(0.25 - kGolden / 2) == doctest::Approx(0.4636476).epsilon(1e-7));
  CHECK(std::fabs(w.f(-kGolden / 2)) < 1e-15);
}

TEST_CASE("factorization residuals on both root regimes") {
  for (const CouplingTriple& l : {CouplingTriple(0.2, 1, 1), CouplingTriple(0.5, 1, 0.6)}) {
    const WindingFactorization w = factorize(l, kGolden, 4096);
    const FactorizationCheck c = verify_factorization(w, 4096);
    CHECK(c.max_residual < 1e-12);
    CHECK(c.conj_residual < 1e-12);
    CHECK(std::fabs(c.mean_f) < 1e-12);
    CHECK(c.unimodularity_defect < 1e-12);
    CHECK(c.winding_number == -1);
    CHECK(w.delta0 > 0.0);
  }
}

TEST_CASE("display checked against an independent evaluation") {
  const CouplingTriple l(0.2, 1, 1);
  const WindingFactorization w = factorize(l, kGolden, 256);
  for (int j = 0; j < 256; ++j) {
    const double x = j / 256.0;
    const cd rhs = std::polar(1.0, -kTwoPi * (x + kGolden / 2) + w.f_samples[static_cast<std::size_t>(j)]);
    CHECK(std::abs(dual_phase(l, x) - rhs) < 1e-13);
  }
}

TEST_CASE("a corrupted sample is caught") {
  WindingFactorization w = factorize({0.2, 1, 1}, kGolden, 4096);
  w.f_samples[100] += 0.01;
  const FactorizationCheck c = verify_factorization(w, 4096);
  CHECK(c.max_residual >= std::abs(std::polar(1.0, 0.01) - 1.0) * 0.999);
}

TEST_CASE("mirror case winds the other way") {
  const CouplingTriple l(1.0, 1, 0.2);
  const WindingFactorization w = factorize(l, kGolden, 2048);
  CHECK(w.convention == ReflectionConvention::reflected);
  CHECK(w.winding == 1);
  const FactorizationCheck c = verify_factorization(w, 2048);
  CHECK(c.winding_number == 1);
  CHECK(c.max_residual < 1e-12);
  for (int j = 0; j < 64; ++j) {
    const double x = j / 64.0;
    const cd rhs = std::polar(1.0, kTwoPi * (x + kGolden / 2) + w.f(x));
    CHECK(std::abs(dual_phase(l, x) - rhs) < 1e-13);
  }
}

TEST_CASE("outside the anisotropic regime the factorization is refused") {
  CHECK_THROWS_AS(factorize({1, 1, 1}, kGolden, 1024), DomainError);   // isotropic
  CHECK_THROWS_AS(factorize({0.3, 1, 0.7}, kGolden, 1024), DomainError);  // l1 + l3 = 1
  CHECK_THROWS_AS(factorize({0.3, 0.5, 0.2}, kGolden, 1024), DomainError);  // region I
  CHECK_THROWS_AS(factorize({0.2, 1, 1}, kGolden, 1000), DomainError);  // grid not a power of two
  CHECK_THROWS_AS(factorize({0.2, 1, 1}, kGolden, 32), DomainError);
}

TEST_CASE("random anisotropic couplings") {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  while (tested < 100) {
    const double l2 = 0.2 + 2 * u(g);
    const double s = std::max(1.0, l2) * (1.05 + u(g));
    const double t = u(g);
    if (std::fabs(t - 0.5) < 0.02) continue;
    const CouplingTriple l(s * t, l2, s * (1 - t));
    const DualRoots roots = dual_symbol_roots(l);
    double predicted = 1e300;
    for (const cd& y : roots.roots) predicted = std::min(predicted, std::fabs(std::log(std::abs(y))) / kTwoPi);
    if (predicted < 0.01) continue;
    ++tested;

    const WindingFactorization w = factorize(l, kGolden, 4096);
    const FactorizationCheck c = verify_factorization(w, 4096);
    CHECK(c.max_residual < 1e-10);
    CHECK(std::fabs(c.mean_f) < 1e-10);
    CHECK(c.winding_number == (l.l3() > l.l1() ? -1 : 1));
    CHECK(w.delta0 > 0.0);
    CHECK(w.delta0 == doctest::Approx(predicted).epsilon(0.2));

    // f is real: the series reconstructs it without an imaginary part
    for (int j = 0; j < 16; ++j) {
      const cd v = w.f_fourier(j / 16.0 + 0.01);
      CHECK(std::fabs(std::imag(v)) < 1e-12);
      CHECK(std::real(v) == doctest::Approx(w.f(j / 16.0 + 0.01)).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("strip width fit on a known geometric decay") {
  std::vector<cd> coeffs(81);
  for (int n = -40; n <= 40; ++n) coeffs[static_cast<std::size_t>(n + 40)] = std::exp(-kTwoPi * 0.1 * std::abs(n));
  coeffs[40] = 0.0;
  CHECK(fit_strip_width(TrigSeries(-40, coeffs)) == doctest::Approx(0.1).epsilon(1e-6));
}
