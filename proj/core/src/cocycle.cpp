#include "ehm/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ehm/birkhoff.hpp"
#include "ehm/errors.hpp"
#include "ehm/parallel.hpp"
#include "ehm/winding.hpp"

namespace ehm {
namespace {

double wrap(double t) {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

// x + j a on the circle, with j a reduced before the addition.
double orbit_point(double x, std::int64_t j, double alpha) { return wrap(x + frac_mul(static_cast<double>(j), alpha)); }

double symbol_scale(const CouplingTriple& l) { return std::max({l.l1(), l.l2(), l.l3()}); }

// Frobenius norm of a 2x2 held as four complex numbers.
double frob(const cd& a, const cd& b, const cd& c, const cd& d) {
  return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
}

}  // namespace

Mat2 symbol_transfer_matrix(const Symbol& s, double e, double x) {
  const cd c = s.c(x);
  if (std::abs(c) < kSymbolZeroCutoff) throw NumericalError("symbol zero at x");
  Mat2 a;
  a << (e - s.v(x)) / c, -s.c_tilde(x - s.alpha()) / c, 1.0, 0.0;
  return a;
}

Mat2 transfer_matrix(const CouplingTriple& lambda, double E, double alpha, double x) {
  return symbol_transfer_matrix(Symbol(sigma(lambda), alpha), E / lambda.l2(), x);
}

Mat2 operator_transfer_matrix(const CouplingTriple& lambda, double E, double alpha, double x) {
  return symbol_transfer_matrix(Symbol(lambda, alpha), E, x);
}

long double CocycleOrbit::log_norm() const { return log_scale + std::log(static_cast<long double>(normalized.norm())); }

Mat2 CocycleOrbit::product() const { return normalized * static_cast<double>(std::exp(log_scale)); }

CocycleOrbit iterate(const CouplingTriple& lambda, double E, double alpha, double x, std::int64_t n) {
  if (n < 0) throw DomainError("iterate: n must be >= 0");
  const Symbol s(sigma(lambda), alpha);
  const double e = E / lambda.l2();
  CocycleOrbit orbit;
  orbit.x = x;
  orbit.n = n;
  long double det_arg = 0.0L;
  for (std::int64_t j = 0; j < n; ++j) {
    const double xj = orbit_point(x, j, alpha);
    const cd c = s.c(xj);
    if (std::abs(c) < kSymbolZeroCutoff) {
      throw NumericalError("symbol zero at step " + std::to_string(j));
    }
    const cd ct = s.c_tilde(orbit_point(x, j - 1, alpha));
    Mat2 a;
    a << (e - s.v(xj)) / c, -ct / c, 1.0, 0.0;
    orbit.normalized = a * orbit.normalized;
    orbit.det_log_abs += std::log(static_cast<long double>(std::abs(ct))) - std::log(static_cast<long double>(std::abs(c)));
    det_arg = std::remainder(det_arg + std::arg(ct) - std::arg(c), static_cast<long double>(kTwoPi));
    if ((j + 1) % kRenormalizeEvery == 0) {
      const double nrm = orbit.normalized.norm();
      orbit.normalized /= nrm;
      orbit.log_scale += std::log(static_cast<long double>(nrm));
      orbit.log_norm_trace.push_back(static_cast<double>(orbit.log_scale));
    }
  }
  orbit.det_arg = static_cast<double>(det_arg);
  return orbit;
}

double mean_log_abs_symbol_quadrature(const CouplingTriple& lambda, double alpha) {
  const Symbol s(lambda, alpha);
  if (lambda.l1() == 0.0 && lambda.l3() == 0.0) return std::log(lambda.l2());
  std::vector<double> cuts{0.0};
  for (const auto& r : real_roots_on_torus(lambda, alpha)) {
    if (r.theta > 0.0) cuts.push_back(r.theta);
  }
  cuts.push_back(1.0);
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto integrand = [&](double t) {
    const double a = std::abs(s.c(t));
    return a > 0.0 ? std::log(a) : -745.0;
  };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0.0) continue;
    acc += integrator.integrate(integrand, cuts[i], cuts[i + 1], 1e-13);
  }
  return acc;
}

double numerator_growth_rate(const CouplingTriple& lambda, double E, double alpha, double x, std::int64_t n) {
  const Symbol s(lambda, alpha);
  // P = [[a, b], [c, d]]; step B = [[E - v, -conj c(x - a)], [c(x), 0]].
  cd a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  cd prev = s.c(orbit_point(x, -1, alpha));
  long double log_scale = 0.0L;
  for (std::int64_t j = 0; j < n; ++j) {
    const double xj = orbit_point(x, j, alpha);
    const cd cj = s.c(xj);
    const double diag = E - s.v(xj);
    const cd off = -std::conj(prev);
    const cd na = diag * a + off * c;
    const cd nb = diag * b + off * d;
    c = cj * a;
    d = cj * b;
    a = na;
    b = nb;
    prev = cj;
    if ((j + 1) % kRenormalizeEvery == 0 || j + 1 == n) {
      const double nrm = frob(a, b, c, d);
      if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("numerator cocycle degenerated");
      a /= nrm;
      b /= nrm;
      c /= nrm;
      d /= nrm;
      log_scale += std::log(static_cast<long double>(nrm));
    }
  }
  return static_cast<double>(log_scale / static_cast<long double>(n));
}

LyapunovEstimate lyapunov(const CouplingTriple& lambda, double E, double alpha, std::int64_t n, std::size_t samples) {
  if (n < 1000) throw DomainError("lyapunov: n must be >= 1000");
  if (samples == 0) throw DomainError("lyapunov: samples must be >= 1");
  const double jensen = mean_log_abs_symbol(lambda);
  const double quad = mean_log_abs_symbol_quadrature(lambda, alpha);
  if (std::fabs(jensen - quad) > 1e-8 * std::max(1.0, std::fabs(jensen))) {
    throw NumericalError("lyapunov: mean log|c| quadrature and root formula disagree");
  }
  std::vector<double> rates(samples);
  parallel_for(samples, [&](std::size_t i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
    rates[i] = numerator_growth_rate(lambda, E, alpha, x, n);
  });
  const double mean = std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(samples);
  double var = 0.0;
  for (double r : rates) var += (r - mean) * (r - mean);
  const double sd = samples > 1 ? std::sqrt(var / static_cast<double>(samples - 1)) : 0.0;
  return {E, n, samples, mean, mean - jensen, jensen, quad, sd / std::sqrt(static_cast<double>(samples))};
}

LogPolar cascade_ratio(const CouplingTriple& lambda, double alpha, double x, std::int64_t k) {
  if (k < 1) throw DomainError("cascade_ratio: k must be >= 1");
  const Symbol s(sigma(lambda), alpha);
  const double cutoff = kSymbolZeroCutoff * symbol_scale(s.couplings());
  double log_abs = 0.0;
  double arg = 0.0;
  for (std::int64_t j = 0; j < k; ++j) {
    const cd num = s.c_tilde(orbit_point(x, j - 1, alpha));
    const cd den = s.c(orbit_point(x, j, alpha));
    if (std::abs(num) < cutoff || std::abs(den) < cutoff) throw NumericalError("symbol zero in product window");
    log_abs += std::log(std::abs(num)) - std::log(std::abs(den));
    arg = std::remainder(arg + std::arg(num) - std::arg(den), kTwoPi);
  }
  return {log_abs, arg};
}

double det_cascade_check(const CouplingTriple& lambda, double alpha, double x, std::int64_t k,
                         const std::function<cd(double)>& g) {
  const LogPolar r = cascade_ratio(lambda, alpha, x, k);
  const cd lhs = g(orbit_point(x, k, alpha));
  const cd rhs = r.value() * g(x);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

std::vector<cd> one_step_orbit(const CouplingTriple& lambda, double alpha, double x, cd g0, std::int64_t k) {
  if (k < 0) throw DomainError("one_step_orbit: k must be >= 0");
  const Symbol s(sigma(lambda), alpha);
  std::vector<cd> out(static_cast<std::size_t>(k) + 1);
  out[0] = g0;
  for (std::int64_t j = 0; j < k; ++j) {
    const cd den = s.c(orbit_point(x, j, alpha));
    if (std::abs(den) < kSymbolZeroCutoff) throw NumericalError("symbol zero at step " + std::to_string(j));
    out[static_cast<std::size_t>(j) + 1] = s.c_tilde(orbit_point(x, j - 1, alpha)) / den * out[static_cast<std::size_t>(j)];
  }
  return out;
}

double cascade_unimodular_residual(const WindingFactorization& w, std::int64_t q, std::size_t grid) {
  if (grid == 0) throw DomainError("cascade_unimodular_residual: empty grid");
  const double alpha = w.alpha;
  const TrigSeries sq = birkhoff_series(make_analytic(w), alpha, q);
  const double qq1 = frac_mul(static_cast<double>(q) * static_cast<double>(q - 1), alpha);
  std::vector<double> res(grid);
  parallel_for(grid, [&](std::size_t j) {
    const double x = static_cast<double>(j) / static_cast<double>(grid);
    const LogPolar r = cascade_ratio(w.couplings, alpha, x, q);
    const double lin = frac_mul(2.0 * static_cast<double>(q), x) + qq1;
    const double sums = (sq(x - alpha) + sq(x)).real();
    const double expected = -w.winding * kTwoPi * lin - sums;
    res[j] = std::abs(std::polar(1.0, r.arg) - std::polar(1.0, expected));
  });
  return *std::max_element(res.begin(), res.end());
}

double convergence_factor_deviation(const WindingFactorization& w, std::int64_t q, std::size_t grid) {
  if (grid == 0) throw DomainError("convergence_factor_deviation: empty grid");
  const double alpha = w.alpha;
  const double qq = frac_mul(static_cast<double>(q) * static_cast<double>(q), alpha);
  std::vector<double> res(grid);
  parallel_for(grid, [&](std::size_t j) {
    const double x = static_cast<double>(j) / static_cast<double>(grid);
    const LogPolar r = cascade_ratio(w.couplings, alpha, x, q);
    const double lin = frac_mul(2.0 * static_cast<double>(q), x) + qq;
    const cd factor = std::polar(std::exp(r.log_abs), r.arg + w.winding * kTwoPi * lin);
    res[j] = std::abs(factor - 1.0);
  });
  return *std::max_element(res.begin(), res.end());
}

}  // namespace ehm
