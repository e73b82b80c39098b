#include <doctest/doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ehm/cocycle.hpp"
#include "ehm/errors.hpp"
#include "ehm/spectral.hpp"
#include "ehm/verify/oracles.hpp"

using namespace ehm;
namespace oracle = ehm::verify::oracle;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

cd symbol_direct(const CouplingTriple& l, double alpha, double t) {
  const cd e = std::polar(1.0, kTwoPi * (t + alpha / 2));
  return l.l1() / e + l.l2() + l.l3() * e;
}

}  // namespace

TEST_CASE("two-site Bloch matrix") {
  const Eigen::MatrixXcd h = bloch_matrix({0, 1, 0}, 1, 2, 0.0, 0.0);
  REQUIRE(h.rows() == 2);
  Eigen::Matrix2cd expected;
  expected << 2.0, 2.0, 2.0, -2.0;
  CHECK((h - expected).norm() < 1e-15);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-2 * std::sqrt(2.0)));
  CHECK(es.eigenvalues()(1) == doctest::Approx(2 * std::sqrt(2.0)));
}

TEST_CASE("Bloch matrices are Hermitian with the expected entries") {
  std::mt19937_64 g(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const CouplingTriple l(2 * u(g), 0.1 + 2 * u(g), 2 * u(g));
    const Eigen::MatrixXcd h = bloch_matrix(l, 5, 13, u(g), u(g));
    CHECK((h - h.adjoint()).norm() < 1e-15);
  }
  const CouplingTriple l(0.4, 1.2, 0.8);
  const double theta = 0.123;
  const Eigen::MatrixXcd h = bloch_matrix(l, 2, 5, theta, 0.3);
  for (int n = 0; n < 4; ++n) {
    CHECK(std::abs(h(n, n + 1) - symbol_direct(l, 0.4, theta + 0.4 * n)) < 1e-15);
    CHECK(std::real(h(n, n)) == doctest::Approx(2 * std::cos(kTwoPi * (theta + 0.4 * n))));
  }
  CHECK(std::abs(h(0, 1) - Symbol(l, 0.4).c(theta)) < 1e-15);
  CHECK_THROWS_AS(bloch_matrix(l, 2, 4, theta, 0.0), DomainError);
  CHECK_THROWS_AS(bloch_matrix(l, 1, 0, theta, 0.0), DomainError);
}

TEST_CASE("Bloch eigenvalues against an entry-by-entry construction") {
  const CouplingTriple l(0.3, 0.8, 0.6);
  for (double k : {0.0, 0.25, 0.5}) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(bloch_matrix(l, 3, 8, 0.05, k));
    const auto ref = oracle::bloch_eigenvalues(0.3, 0.8, 0.6, 3, 8, 0.05, k);
    for (int i = 0; i < 8; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
}

TEST_CASE("approximant spectra") {
  SUBCASE("critical AMO at 1/2 is one band") {
    const auto s = approximant_spectrum({0, 1, 0}, 1, 2, 16, 8);
    REQUIRE(s.bands.size() == 1);
    CHECK(s.bands[0].lo == doctest::Approx(-2 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(s.bands[0].hi == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(s.total_measure == doctest::Approx(4 * std::sqrt(2.0)).epsilon(1e-10));
  }
  SUBCASE("critical AMO bandwidth shrinks") {
    const double m8 = approximant_spectrum({0, 1, 0}, 5, 8, 16, 8).total_measure;
    const double m13 = approximant_spectrum({0, 1, 0}, 8, 13, 16, 8).total_measure;
    const double m21 = approximant_spectrum({0, 1, 0}, 13, 21, 16, 8).total_measure;
    CHECK(m13 < m8);
    CHECK(m21 < m13);
    CHECK(m21 < 1.0);
  }
  SUBCASE("bands are sorted and disjoint") {
    const auto s = approximant_spectrum({0.3, 0.7, 0.5}, 8, 13, 16, 8);
    double total = 0.0;
    for (std::size_t i = 0; i < s.bands.size(); ++i) {
      CHECK(s.bands[i].lo <= s.bands[i].hi);
      if (i > 0) CHECK(s.bands[i - 1].hi < s.bands[i].lo);
      total += s.bands[i].width();
    }
    CHECK(s.total_measure == doctest::Approx(total));
  }
  SUBCASE("sampled union sits inside the computed bands") {
    const CouplingTriple l(0.3, 0.7, 0.5);
    const auto s = approximant_spectrum(l, 5, 8, 16, 8);
    const auto sampled = sampled_spectrum(l, 5, 8, 16, 8);
    for (const Band& b : sampled.bands) {
      bool inside = false;
      for (const Band& c : s.bands) inside = inside || (b.lo >= c.lo - 1e-9 && b.hi <= c.hi + 1e-9);
      CHECK(inside);
    }
    CHECK(sampled.total_measure <= s.total_measure * (1 + 1e-9));
  }
  SUBCASE("AMO symmetry E -> -E") {
    const auto s = approximant_spectrum({0, 0.7, 0}, 5, 8, 16, 8);
    for (std::size_t i = 0; i < s.bands.size(); ++i) {
      const Band& b = s.bands[i];
      const Band& m = s.bands[s.bands.size() - 1 - i];
      CHECK(b.lo == doctest::Approx(-m.hi).epsilon(1e-9));
    }
  }
}

TEST_CASE("duality of approximant spectra") {
  const auto a = approximant_spectrum({0, 0.5, 0}, 5, 8, 32, 8);
  const auto b = approximant_spectrum({0, 2, 0}, 5, 8, 32, 8);
  CHECK(hausdorff_distance(a.bands, scale_bands(b.bands, 0.5)) < 1e-6);

  CHECK(duality_spectrum_check({0, 1, 0}, 5, 8, 16, 8) < 1e-10);
  CHECK(duality_spectrum_check({0.3, 0.5, 0.2}, 8, 13, 32, 8) < 1e-4);
  CHECK(duality_spectrum_check({0.5, 1, 0.3}, 8, 13, 32, 8) < 1e-4);
}

TEST_CASE("spectra vary continuously in the frequency") {
  const auto s8 = approximant_spectrum({0, 1, 0}, 5, 8, 16, 8);
  const auto s13 = approximant_spectrum({0, 1, 0}, 8, 13, 16, 8);
  const auto s21 = approximant_spectrum({0, 1, 0}, 13, 21, 16, 8);
  const double c = hausdorff_distance(s8.bands, s13.bands) / std::sqrt(1.0 / (8 * 13));
  CHECK(hausdorff_distance(s13.bands, s21.bands) <= 10 * c * std::sqrt(1.0 / (13 * 21)));
}

TEST_CASE("band utilities") {
  const auto merged = merge_bands({{3, 4}, {0, 1}, {0.5, 2}});
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].lo == 0);
  CHECK(merged[0].hi == 2);
  CHECK(merged[1].lo == 3);
  CHECK(hausdorff_distance({{0, 1}}, {{0, 1.5}}) == doctest::Approx(0.5));
  CHECK(hausdorff_distance({{0, 1}, {3, 4}}, {{0, 4}}) == doctest::Approx(1.0));
  CHECK(hausdorff_distance(merged, merged) == 0.0);
  const auto scaled = scale_bands({{-1, 2}}, -2.0);
  CHECK(scaled[0].lo == -4);
  CHECK(scaled[0].hi == 2);
}

TEST_CASE("small truncation against a hand-built matrix") {
  const int N = 5;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * N + 1, 2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    h(n + N, n + N) = 2 * std::cos(kTwoPi * n * kGolden);
    if (n < N) h(n + N, n + N + 1) = h(n + N + 1, n + N) = 1.0;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(h);
  const TruncatedEigensystem es = truncated_eigensystem({0, 1, 0}, kGolden, Phase::generic(0.0), N);
  REQUIRE(es.size() == 11);
  for (int i = 0; i < 11; ++i) CHECK(es.eigenvalues[static_cast<std::size_t>(i)] == doctest::Approx(ref.eigenvalues()(i)).epsilon(1e-13));
  CHECK((truncated_matrix({0, 1, 0}, kGolden, 0.0, N) - h.cast<cd>()).norm() < 1e-14);
}

TEST_CASE("truncated eigensystem contract") {
  const CouplingTriple l(0.3, 0.7, 0.5);
  const TruncatedEigensystem es = truncated_eigensystem(l, kGolden, Phase::generic(0.37), 200);
  CHECK(es.max_residual < 1e-10);
  CHECK(std::is_sorted(es.eigenvalues.begin(), es.eigenvalues.end()));
  const Eigen::MatrixXcd h = truncated_matrix(l, kGolden, 0.37, 200);
  for (std::size_t i = 0; i < es.size(); i += 37) {
    const Eigen::VectorXcd u = es.eigenvector(i);
    CHECK(u.norm() == doctest::Approx(1.0));
    CHECK((h * u - es.eigenvalues[i] * u).norm() < 1e-10);
    const LocalizationDiagnostics d = diagnose(es, i);
    CHECK(d.ipr >= 1.0 / es.dimension() * (1 - 1e-12));
    CHECK(d.ipr <= 1.0);
    CHECK(d.edge_mass >= 0.0);
    CHECK(d.edge_mass <= 1.0);
  }

  EigenSelection by_index;
  by_index.index = std::make_pair(100, 110);
  const TruncatedEigensystem part = truncated_eigensystem(l, kGolden, Phase::generic(0.37), 200, by_index);
  REQUIRE(part.size() == 11);
  for (std::size_t i = 0; i < 11; ++i) CHECK(part.eigenvalues[i] == doctest::Approx(es.eigenvalues[100 + i]).epsilon(1e-12));

  EigenSelection by_energy;
  by_energy.energy = std::make_pair(-0.5, 0.5);
  const TruncatedEigensystem window = truncated_eigensystem(l, kGolden, Phase::generic(0.37), 200, by_energy);
  const auto expected = std::count_if(es.eigenvalues.begin(), es.eigenvalues.end(), [](double e) { return e > -0.5 && e <= 0.5; });
  CHECK(static_cast<long>(window.size()) == expected);
}

TEST_CASE("region I eigenvectors decay at the Lyapunov rate") {
  const CouplingTriple l(0, 0.4, 0);
  const TruncatedEigensystem es = truncated_eigensystem(l, kGolden, Phase::generic(0.1234), 2000);
  int compared = 0;
  for (std::size_t i = es.size() * 2 / 5; i < es.size() * 3 / 5 && compared < 6; i += 97) {
    const LocalizationDiagnostics d = diagnose(es, i);
    if (d.edge_mass > 1e-12) continue;
    const double le = lyapunov(l, es.eigenvalues[i], kGolden, 100000, 4).le_regularized;
    CHECK(le == doctest::Approx(std::log(2.5)).epsilon(0.02));
    CHECK(d.decay_rate == doctest::Approx(le).epsilon(0.15));
    ++compared;
  }
  CHECK(compared >= 4);
}

TEST_CASE("localization probes") {
  CHECK_THROWS_AS(point_spectrum_probe({0.3, 0.5, 0.2}, kGolden, {Phase::generic(0.1)}, {100}), DomainError);

  const ProbeRow a = probe_row({0, 0.4, 0}, kGolden, Phase::generic(0.1234), 500);
  const ProbeRow b = probe_row({0, 0.4, 0}, kGolden, Phase::generic(0.1234), 1000);
  CHECK(a.states > 0);
  CHECK(b.max_ipr == doctest::Approx(a.max_ipr).epsilon(0.5));

  const PointSpectrumReport r =
      point_spectrum_probe({0.2, 1, 1}, kGolden, {Phase::generic(0.1234)}, {500, 1000, 2000});
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[1].max_ipr < r.rows[0].max_ipr);
  CHECK(r.rows[2].max_ipr < r.rows[1].max_ipr);
  for (const ProbeRow& row : r.rows) CHECK(row.states <= row.examined);
}
