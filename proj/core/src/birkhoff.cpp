#include "ehm/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ehm/errors.hpp"
#include "ehm/model.hpp"
#include "ehm/parallel.hpp"
#include "ehm/winding.hpp"

namespace ehm {
namespace {

constexpr double kPi = 3.141592653589793238462643383279;

// 1 - e^{2 pi i s} for s in [-1/2, 1/2), without cancellation near s = 0.
cd one_minus_phase(double s) { return cd(0.0, -2.0 * std::sin(kPi * s)) * std::polar(1.0, kPi * s); }

// (1 - e^{2 pi i n q a}) / (1 - e^{2 pi i n a}); tq = q a mod 1.
cd dirichlet_ratio(int n, double alpha, double tq, std::int64_t q) {
  const cd den = one_minus_phase(frac_mul(n, alpha));
  if (std::abs(den) == 0.0) return static_cast<double>(q);
  return one_minus_phase(frac_mul(n, tq)) / den;
}

double dirichlet_modulus(std::int64_t n, double alpha, double tq, std::int64_t q) {
  const double den = std::fabs(std::sin(kPi * frac_mul(static_cast<double>(n), alpha)));
  if (den == 0.0) return static_cast<double>(q);
  return std::fabs(std::sin(kPi * frac_mul(static_cast<double>(n), tq))) / den;
}

struct KahanComplex {
  cd sum{};
  cd carry{};
  void add(cd v) {
    const cd y = v - carry;
    const cd t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

std::size_t default_grid(std::int64_t q) {
  constexpr std::size_t cap = std::size_t{1} << 22;
  const std::size_t want = std::max<std::size_t>(4096, 8 * static_cast<std::size_t>(std::max<std::int64_t>(q, 1)));
  return std::min(cap, next_power_of_two(want));
}

std::int64_t to_int64(const BigInt& q) {
  if (q > BigInt(std::numeric_limits<std::int64_t>::max() / 16)) {
    throw NumericalError("denominator too large for Birkhoff summation");
  }
  return q.convert_to<std::int64_t>();
}

}  // namespace

double AnalyticTorusFunction::lipschitz() const {
  double acc = 0.0;
  for (int n = fourier.nmin(); n <= fourier.nmax(); ++n) acc += kTwoPi * std::abs(n) * std::abs(fourier.coeff(n));
  return acc;
}

AnalyticTorusFunction make_analytic(TrigSeries fourier) {
  AnalyticTorusFunction f;
  f.delta0 = fit_strip_width(fourier);
  for (int n = fourier.nmin(); n <= fourier.nmax(); ++n) {
    if (n == 0) continue;
    f.c_bound = std::max(f.c_bound, std::abs(fourier.coeff(n)) * std::exp(kTwoPi * f.delta0 * std::abs(n)));
  }
  f.fourier = std::move(fourier);
  return f;
}

AnalyticTorusFunction make_analytic(const WindingFactorization& w) {
  return AnalyticTorusFunction{w.f_fourier, w.delta0, w.c_bound};
}

AnalyticTorusFunction sine_series(const std::vector<std::pair<int, double>>& terms) {
  int top = 0;
  for (const auto& [n, a] : terms) {
    if (n <= 0) throw DomainError("sine_series: mode must be positive");
    top = std::max(top, n);
  }
  std::vector<cd> c(static_cast<std::size_t>(2 * top + 1));
  for (const auto& [n, a] : terms) {
    // a sin(2 pi n x) = (a / 2i) e^{2 pi i n x} - (a / 2i) e^{-2 pi i n x}
    c[static_cast<std::size_t>(top + n)] += cd(0.0, -0.5 * a);
    c[static_cast<std::size_t>(top - n)] += cd(0.0, 0.5 * a);
  }
  return make_analytic(TrigSeries(-top, std::move(c)));
}

double frac_mul(double n, double alpha) {
  const double p = n * alpha;
  const double err = std::fma(n, alpha, -p);
  double r = (p - std::nearbyint(p)) + err;
  r -= std::nearbyint(r);
  if (r >= 0.5) r -= 1.0;
  return r;
}

TrigSeries birkhoff_series(const AnalyticTorusFunction& f, double alpha, std::int64_t q) {
  if (q < 1) throw DomainError("birkhoff_sum: q must be >= 1");
  const double tq = frac_mul(static_cast<double>(q), alpha);
  std::vector<cd> out(f.fourier.size());
  for (int n = f.fourier.nmin(); n <= f.fourier.nmax(); ++n) {
    const cd a = f.fourier.coeff(n);
    const cd r = n == 0 ? cd(static_cast<double>(q)) : dirichlet_ratio(n, alpha, tq, q);
    out[static_cast<std::size_t>(n - f.fourier.nmin())] = a * r;
  }
  return TrigSeries(f.fourier.nmin(), std::move(out));
}

cd birkhoff_sum(const AnalyticTorusFunction& f, double alpha, double x, std::int64_t q, SumMethod method) {
  if (q < 1) throw DomainError("birkhoff_sum: q must be >= 1");
  if (method == SumMethod::geometric) return birkhoff_series(f, alpha, q)(x);
  KahanComplex acc;
  for (std::int64_t j = 0; j < q; ++j) acc.add(f(x + frac_mul(static_cast<double>(j), alpha)));
  return acc.sum;
}

SupEstimate birkhoff_sup(const AnalyticTorusFunction& f, double alpha, std::int64_t q, std::size_t grid) {
  const TrigSeries s = birkhoff_series(f, alpha, q);
  const std::size_t g = grid == 0 ? default_grid(q) : grid;
  const std::vector<cd> v = s.sample(g);
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  const AnalyticTorusFunction sf{s, f.delta0, f.c_bound};
  return {m, m + sf.lipschitz() * 0.5 / static_cast<double>(g), g};
}

AnalyticTorusFunction cohomological_solve(const AnalyticTorusFunction& f, double alpha, double threshold) {
  if (f.mean_abs() > 1e-12) throw DomainError("cohomological_solve: f must have zero mean");
  const TrigSeries& a = f.fourier;
  std::vector<cd> h(a.size());
  for (int n = a.nmin(); n <= a.nmax(); ++n) {
    if (n == 0) continue;
    // e^{2 pi i n a} - 1 = -(1 - e^{2 pi i n a})
    const cd den = -one_minus_phase(frac_mul(n, alpha));
    if (std::abs(den) < threshold) throw NumericalError("small divisor");
    h[static_cast<std::size_t>(n - a.nmin())] = a.coeff(n) / den;
  }
  return make_analytic(TrigSeries(a.nmin(), std::move(h)));
}

double mid_proof_bound(const AnalyticTorusFunction& f, double alpha, std::int64_t q) {
  if (q < 1) throw DomainError("mid_proof_bound: q must be >= 1");
  const double c = f.c_bound;
  const double decay = std::exp(-kTwoPi * f.delta0);
  const double tq = frac_mul(static_cast<double>(q), alpha);
  const double qd = static_cast<double>(q);
  double sum = 0.0, carry = 0.0;
  double weight = c;
  for (std::int64_t n = 1; n < q; ++n) {
    weight *= decay;
    // each remaining term is at most 2 weight q; bound the rest geometrically
    const double rest = 2.0 * weight * qd / (1.0 - decay);
    if (rest <= 1e-17 * sum) {
      sum += rest;
      break;
    }
    const double y = 2.0 * weight * dirichlet_modulus(n, alpha, tq, q) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  const double tail = 2.0 * c * qd * std::exp(-kTwoPi * f.delta0 * qd) / (1.0 - decay);
  return sum + tail;
}

Case2Bound case2_bound(const AnalyticTorusFunction& f, const FrequencyCF& cf, int m) {
  if (m < 1 || m + 1 > cf.depth()) throw DomainError("case2_bound: m + 1 outside the stored expansion");
  const double q = cf.q_double(m);
  const double qn = cf.q_double(m + 1);
  const double c = f.c_bound;
  Case2Bound out{};
  out.stylized = c * q * q * q / qn + c * q * std::exp(-kTwoPi * f.delta0 * q);
  out.mid_proof = mid_proof_bound(f, cf.value(), to_int64(cf.q(m)));
  return out;
}

BirkhoffReport verify_uniform_lemma(const AnalyticTorusFunction& f, const FrequencyCF& cf,
                                    const DenominatorSubsequence& sub, std::size_t x_grid) {
  if (f.mean_abs() > 1e-12) throw DomainError("verify_uniform_lemma: f must have zero mean");
  if (sub.indices.empty()) throw DomainError("verify_uniform_lemma: subsequence empty");
  BirkhoffReport report;
  report.rows.resize(sub.indices.size());
  parallel_for(sub.indices.size(), [&](std::size_t i) {
    const int m = sub.indices[i];
    const std::int64_t q = to_int64(cf.q(m));
    const SupEstimate s = birkhoff_sup(f, cf.value(), q, x_grid);
    BirkhoffRow row{m, static_cast<double>(q), s.grid_max, s.certified, 0.0, std::numeric_limits<double>::quiet_NaN()};
    if (m >= 1 && m + 1 <= cf.depth()) {
      const Case2Bound b = case2_bound(f, cf, m);
      row.mid_proof_bound = b.mid_proof;
      row.stylized_bound = b.stylized;
    } else {
      row.mid_proof_bound = mid_proof_bound(f, cf.value(), q);
    }
    report.rows[i] = row;
  });
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    if (i > 0 && !(r.sup < report.rows[i - 1].sup)) report.decreasing = false;
    if (!(r.sup <= r.mid_proof_bound * (1.0 + 1e-12) + 1e-15)) report.within_bound = false;
  }
  return report;
}

}  // namespace ehm
