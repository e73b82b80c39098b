#include <doctest/doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "ehm/errors.hpp"
#include "ehm/model.hpp"

using namespace ehm;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

// c at the point where theta + a/2 = s.
cd c_at_shifted(const CouplingTriple& l, double s) {
  return Symbol(l, kGolden).c(s - kGolden / 2.0);
}

double wrap(double t) { return t - std::floor(t); }

double torus_gap(double a, double b) {
  const double d = std::fabs(wrap(a) - wrap(b));
  return std::min(d, 1.0 - d);
}

}  // namespace

TEST_CASE("coupling domain") {
  CHECK_THROWS_AS(CouplingTriple(-0.1, 1, 1), DomainError);
  CHECK_THROWS_AS(CouplingTriple(0.1, 0, 1), DomainError);
  CHECK_THROWS_AS(CouplingTriple(0.1, -1, 1), DomainError);
  CHECK_THROWS_AS(CouplingTriple(0.1, 1, -1e-9), DomainError);
  CHECK_THROWS_AS(CouplingTriple(0.1, NAN, 1), DomainError);
  CHECK_NOTHROW(CouplingTriple(0, 1e-6, 0));
}

TEST_CASE("classification examples") {
  const RegionLabel a = classify({0.3, 0.5, 0.2});
  CHECK(a.region == Region::I);
  CHECK(a.flags.empty());
  CHECK(a.interior);

  const RegionLabel b = classify({0.4, 1.0, 0.8});
  CHECK(b.region == Region::III_anisotropic);
  CHECK(b.flags.empty());
  CHECK(b.interior);

  const RegionLabel c = classify({0.5, 1.0, 0.5});
  CHECK(c.flags.has(BoundaryLine::L_I));
  CHECK(c.flags.has(BoundaryLine::L_II));
  CHECK(c.flags.has(BoundaryLine::L_III));
  CHECK_FALSE(c.interior);
  CHECK(c.region == Region::III_isotropic);

  CHECK(classify({0.2, 2.0, 0.3}).region == Region::II);
  CHECK(classify({1.0, 1.5, 1.0}).region == Region::III_isotropic);
  CHECK(to_string(Region::III_anisotropic) == "III_anisotropic");
}

TEST_CASE("sigma examples") {
  const CouplingTriple s = sigma({0.3, 0.5, 0.2});
  CHECK(s.l1() == doctest::Approx(0.4));
  CHECK(s.l2() == doctest::Approx(2.0));
  CHECK(s.l3() == doctest::Approx(0.6));

  const CouplingTriple back = sigma(s);
  CHECK(back.l1() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(back.l2() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(back.l3() == doctest::Approx(0.2).epsilon(1e-15));

  const CouplingTriple on_li{0.4, 0.5, 0.6};
  CHECK(on_line(on_li, BoundaryLine::L_I));
  const CouplingTriple image = sigma(on_li);
  CHECK(image.l1() == doctest::Approx(1.2));
  CHECK(image.l3() == doctest::Approx(0.8));
  CHECK(on_line(image, BoundaryLine::L_III));
  CHECK(classify(image).flags.has(BoundaryLine::L_III));
}

TEST_CASE("sigma is an involution and maps regions as expected") {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int interior = 0;
  for (int i = 0; i < 10000; ++i) {
    const CouplingTriple l(3 * u(g), 0.05 + 3 * u(g), 3 * u(g));
    const CouplingTriple back = sigma(sigma(l));
    CHECK(std::fabs(back.l1() - l.l1()) <= 1e-14 * std::max(1.0, l.l1()));
    CHECK(std::fabs(back.l2() - l.l2()) <= 1e-14 * l.l2());
    CHECK(std::fabs(back.l3() - l.l3()) <= 1e-14 * std::max(1.0, l.l3()));

    const RegionLabel a = classify(l);
    if (!a.interior) continue;
    ++interior;
    const RegionLabel b = classify(sigma(l));
    CHECK(b.interior);
    if (a.region == Region::I) CHECK(b.region == Region::II);
    if (a.region == Region::II) CHECK(b.region == Region::I);
    if (a.region == Region::III_anisotropic) CHECK(b.region == Region::III_anisotropic);
  }
  CHECK(interior > 9000);
}

TEST_CASE("boundary lines map onto each other") {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double t = u(g);
    const CouplingTriple li(t, 0.05 + 0.95 * u(g), 1.0 - t);
    CHECK(classify(sigma(li)).flags.has(BoundaryLine::L_III));

    const double s = u(g), w = u(g);
    const CouplingTriple lii(s * w, 1.0, s * (1 - w));
    const CouplingTriple image = sigma(lii);
    CHECK(classify(image).flags.has(BoundaryLine::L_II));
    CHECK(image.l1() == lii.l3());
    CHECK(image.l3() == lii.l1());

    const double l2 = 1.0 + 2 * u(g);
    const CouplingTriple liii(l2 * t, l2, l2 * (1 - t));
    CHECK(classify(sigma(liii)).flags.has(BoundaryLine::L_I));
  }
}

TEST_CASE("symbol evaluation examples") {
  CHECK(std::abs(c_at_shifted({0, 1, 2}, 0.0) - cd(3.0)) < 1e-15);
  CHECK(std::abs(c_at_shifted({1, 1, 1}, 1.0 / 3.0)) < 1e-15);

  const Symbol s({0.2, 1.0, 1.0}, kGolden);
  const double theta = 0.1 - kGolden / 2.0;
  const cd c = s.c(theta);
  const double direct = std::sqrt(std::real(c * s.c_tilde(theta)));
  CHECK(s.abs_c(theta) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(std::real(s.abs_c(cd(theta, 0.0))) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(std::abs(std::imag(s.abs_c(cd(theta, 0.0)))) < 1e-15);
}

TEST_CASE("c tilde is the conjugate of c on the real line") {
  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Symbol s({2 * u(g), 0.1 + 2 * u(g), 2 * u(g)}, u(g));
    for (int j = 0; j < 512; ++j) {
      const double x = j / 512.0;
      const cd c = s.c(x);
      CHECK(std::abs(s.c_tilde(x) - std::conj(c)) < 1e-14);
      CHECK(std::abs(std::norm(c) - std::real(c * s.c_tilde(x))) < 1e-13);
      CHECK(std::abs(s.c(cd(x, 0.0)) - c) < 1e-14);
      CHECK(std::abs(s.v(x)) <= 2.0);
      CHECK(s.v(x) == doctest::Approx(2 * std::cos(kTwoPi * x)));
    }
  }
}

TEST_CASE("abs_c continues off the axis") {
  const Symbol s({0.2, 1.0, 1.0}, kGolden);
  const cd z(0.3, 0.02);
  const cd a = s.abs_c(z);
  CHECK(std::abs(a * a - s.c(z) * s.c_tilde(z)) < 1e-13);
  // continuity from the real axis fixes the branch
  CHECK(std::real(a) > 0.0);
  CHECK(std::abs(a - s.abs_c(0.3)) < 0.1);
}

TEST_CASE("dual symbol roots") {
  SUBCASE("real pair") {
    const DualRoots r = dual_symbol_roots({0.2, 1.0, 1.0});
    REQUIRE(r.roots.size() == 2);
    CHECK_FALSE(r.degenerate);
    CHECK(std::abs(r.small() - cd(-1.3819660112501051)) < 1e-12);
    CHECK(std::abs(r.big() - cd(-3.6180339887498949)) < 1e-12);
    CHECK(std::abs(r.small() * r.big() - cd(5.0)) < 1e-12);
  }
  SUBCASE("complex pair") {
    const DualRoots r = dual_symbol_roots({0.5, 1.0, 0.6});
    REQUIRE(r.roots.size() == 2);
    CHECK(std::real(r.small()) == doctest::Approx(-1.0));
    CHECK(std::fabs(std::imag(r.small())) == doctest::Approx(0.4472136).epsilon(1e-7));
    CHECK(std::abs(r.small()) == doctest::Approx(std::sqrt(1.2)));
    CHECK(std::abs(r.big()) == doctest::Approx(std::sqrt(1.2)));
  }
  SUBCASE("linear case") {
    const DualRoots r = dual_symbol_roots({0.0, 1.0, 2.0});
    REQUIRE(r.roots.size() == 1);
    CHECK(r.degenerate);
    CHECK(std::abs(r.small() - cd(-2.0)) < 1e-15);
  }
  SUBCASE("constant symbol") { CHECK_THROWS_AS(dual_symbol_roots({0.0, 1.0, 0.0}), DomainError); }
  SUBCASE("random roots solve the quadratic, product law") {
    std::mt19937_64 g(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double l1 = 0.01 + 2 * u(g), l3 = 2 * u(g);
      const DualRoots r = dual_symbol_roots({l1, 1.0, l3});
      for (const cd& y : r.roots) CHECK(std::abs(l1 * y * y + y + l3) < 1e-12 * (1 + std::norm(y)));
      CHECK(std::abs(r.small()) <= std::abs(r.big()));
      CHECK(std::abs(r.small()) * std::abs(r.big()) == doctest::Approx(l3 / l1).epsilon(1e-12));
      if (l3 > l1 && l1 + l3 > 1) CHECK(std::abs(r.small()) > 1.0);
    }
  }
}

TEST_CASE("real zeros of the symbol") {
  SUBCASE("isotropic (1,1,1)") {
    const auto roots = real_roots_on_torus({1, 1, 1}, kGolden);
    REQUIRE(roots.size() == 2);
    const double a = wrap(1.0 / 3.0 - kGolden / 2), b = wrap(2.0 / 3.0 - kGolden / 2);
    for (const auto& r : roots) {
      CHECK(std::min(torus_gap(r.theta, a), torus_gap(r.theta, b)) < 1e-14);
      CHECK(r.multiplicity == 1);
    }
  }
  SUBCASE("isotropic (0.6,1,0.6)") {
    const auto roots = real_roots_on_torus({0.6, 1, 0.6}, kGolden);
    REQUIRE(roots.size() == 2);
    const double s = std::acos(-1.0 / 1.2) / kTwoPi;
    for (const auto& r : roots) {
      const double shifted = wrap(r.theta + kGolden / 2);
      CHECK(std::min(torus_gap(shifted, s), torus_gap(shifted, 1 - s)) < 1e-12);
    }
    CHECK(s == doctest::Approx(0.40678).epsilon(1e-5));
  }
  SUBCASE("anisotropic on the line") {
    const auto roots = real_roots_on_torus({0.4, 1.2, 0.8}, kGolden);
    REQUIRE(roots.size() == 1);
    CHECK(torus_gap(roots[0].theta, 0.5 - kGolden / 2) < 1e-14);
  }
  SUBCASE("isotropic double root") {
    const auto roots = real_roots_on_torus({0.5, 1.0, 0.5}, kGolden);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].multiplicity == 2);
    CHECK(torus_gap(roots[0].theta, 0.5 - kGolden / 2) < 1e-12);
  }
  SUBCASE("no zeros") {
    CHECK(real_roots_on_torus({0.3, 0.7, 0.2}, kGolden).empty());
    CHECK(real_roots_on_torus({0.2, 1.0, 1.0}, kGolden).empty());
    CHECK(real_roots_on_torus({0.3, 1.0, 0.3}, kGolden).empty());
  }
  SUBCASE("returned zeros are zeros") {
    std::mt19937_64 g(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      const double l3 = 0.1 + 2 * u(g);
      const CouplingTriple l(l3, 2 * l3 * u(g) + 1e-3, l3);
      for (const auto& r : real_roots_on_torus(l, kGolden)) CHECK(std::abs(Symbol(l, kGolden).c(r.theta)) < 1e-12);
    }
  }
}

TEST_CASE("dual singularity") {
  CHECK(dual_has_singularity({1, 1, 1}));
  CHECK(dual_has_singularity({0.3, 1, 0.7}));
  CHECK_FALSE(dual_has_singularity({0.2, 1, 1.0}));
  CHECK_FALSE(dual_has_singularity({0.3, 0.5, 0.2}));

  // Within region III it agrees with the zeros of the dual symbol, including
  // points placed on l1 + l3 = 1 and on the isotropic plane.
  std::mt19937_64 g(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int singular = 0, tested = 0;
  for (int i = 0; i < 10000; ++i) {
    const double t = u(g);
    CouplingTriple l(3 * u(g), 0.1 + 2.5 * u(g), 3 * u(g));
    if (i % 4 == 1) l = CouplingTriple(t, 0.05 + 0.95 * u(g), 1 - t);
    if (i % 4 == 2) l = CouplingTriple(0.5 + t, 0.1 + 2 * t * u(g) + 0.9 * u(g), 0.5 + t);
    const Region r = classify(l).region;
    if (r != Region::III_isotropic && r != Region::III_anisotropic) continue;
    ++tested;
    const bool zeros = !real_roots_on_torus(sigma(l), kGolden).empty();
    CHECK(dual_has_singularity(l) == zeros);
    singular += zeros;
  }
  CHECK(tested > 5000);
  CHECK(singular > 2000);
}

TEST_CASE("dual zeros outside region III are not flagged") {
  // region II on l1 + l3 = 1: sigma lands on l1 + l3 = l2, where c vanishes
  const CouplingTriple l(0.3, 1.5, 0.7);
  CHECK(classify(l).region == Region::II);
  CHECK(real_roots_on_torus(sigma(l), kGolden).size() == 1);
  CHECK_FALSE(dual_has_singularity(l));
}

TEST_CASE("alpha-rational phases are constructed exactly") {
  const Phase p = Phase::alpha_rational(1, 0, kGolden);
  CHECK(p.is_alpha_rational());
  CHECK(p.theta() == doctest::Approx(kGolden / 2));
  const double d = 2 * p.theta() - kGolden;
  CHECK(std::fabs(d - std::round(d)) < 1e-15);

  const Phase q = Phase::alpha_rational(3, 1, kGolden);
  CHECK(q.theta() >= 0.0);
  CHECK(q.theta() < 1.0);
  const double e = 2 * q.theta() - 3 * kGolden;
  CHECK(std::fabs(e - std::round(e)) < 1e-14);

  CHECK_FALSE(Phase::generic(0.1234).is_alpha_rational());
  const auto found = detect_alpha_rational(p.theta(), kGolden, 5, 1e-12);
  REQUIRE(found.has_value());
  CHECK(found->first == 1);
}

TEST_CASE("mean of log|c| by Jensen") {
  for (const CouplingTriple& l : {CouplingTriple(0.2, 1, 1), CouplingTriple(0.3, 0.7, 0.2), CouplingTriple(0, 2, 0),
                                  CouplingTriple(1.5, 0.4, 0.3)}) {
    const Symbol s(l, kGolden);
    // midpoint rule converges geometrically for a zero-free trigonometric polynomial
    constexpr int n = 1 << 14;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += std::log(s.abs_c((j + 0.5) / n));
    CHECK(mean_log_abs_symbol(l) == doctest::Approx(sum / n).epsilon(1e-10));
  }
}
