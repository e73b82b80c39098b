#include "ehm/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace ehm::verify::oracle {
namespace {

constexpr double kPi = std::numbers::pi;

cd unit(double t) { return std::polar(1.0, 2.0 * kPi * t); }

cd symbol_c(double l1, double l2, double l3, double alpha, double t) {
  const cd z = unit(t + 0.5 * alpha);
  return l1 * std::conj(z) + l2 + l3 * z;
}

long double direct_sum(const std::vector<std::pair<int, double>>& sines, long double alpha, long double x,
                       std::int64_t q) {
  long double acc = 0.0L;
  for (std::int64_t j = 0; j < q; ++j) {
    long double t = x + static_cast<long double>(j) * alpha;
    t -= std::floor(t);
    for (const auto& [n, a] : sines) acc += a * std::sin(2.0L * std::numbers::pi_v<long double> * n * t);
  }
  return acc;
}

}  // namespace

Dyadic exact_value(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m 2^e, 0.5 <= m < 1
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  BigInt num = mant;
  BigInt den = 1;
  const int shift = 53 - e;
  if (shift >= 0) {
    den <<= shift;
  } else {
    num <<= -shift;
  }
  while (num != 0 && (num & 1) == 0 && den > 1) {
    num >>= 1;
    den >>= 1;
  }
  return {num, den};
}

std::vector<BigInt> euclid_terms(BigInt num, BigInt den) {
  std::vector<BigInt> out;
  // a = num/den in (0, 1): 1/a = den/num
  while (num != 0) {
    BigInt a = den / num;
    BigInt r = den % num;
    out.push_back(a);
    den = num;
    num = r;
  }
  return out;
}

LawCheck convergent_law(const BigInt& num, const BigInt& den, const BigInt& q, const BigInt& q_next) {
  // ||q a|| = min(r, den - r) / den with r = q num mod den
  const BigInt r = (q * num) % den;
  const BigInt d = std::min<BigInt>(r, den - r);
  return {2 * q_next * d >= den, q_next * d <= den};
}

Zone strict_zone(double l1, double l2, double l3, double margin) {
  const double s = l1 + l3;
  const bool near = std::fabs(s - 1.0) < margin || std::fabs(l2 - 1.0) < margin || std::fabs(s - l2) < margin;
  if (near) return Zone::boundary;
  if (s < 1.0 && l2 < 1.0) return Zone::I;
  if (l2 > 1.0 && s < l2) return Zone::II;
  return Zone::III;
}

bool on_line_I(double l1, double l2, double l3, double tol) {
  return std::fabs(l1 + l3 - 1.0) <= tol && l2 <= 1.0 + tol;
}

bool on_line_II(double l1, double l2, double l3, double tol) {
  return std::fabs(l2 - 1.0) <= tol && l1 + l3 <= 1.0 + tol;
}

bool on_line_III(double l1, double l2, double l3, double tol) {
  const double s = l1 + l3;
  return std::fabs(s - l2) <= tol * std::max(1.0, l2) && s >= 1.0 - tol;
}

cd dual_c(double l1, double l2, double l3, double alpha, double x) {
  const cd z = unit(x + 0.5 * alpha);
  return (l3 * std::conj(z) + 1.0 + l1 * z) / l2;
}

cd dual_c_tilde(double l1, double l2, double l3, double alpha, double x) {
  const cd z = unit(x + 0.5 * alpha);
  return (l3 * z + 1.0 + l1 * std::conj(z)) / l2;
}

double predicted_strip_width(double l1, double l2, double l3) {
  (void)l2;  // c_s is proportional to e^{-i phi} (l1 z^2 + z + l3) whatever l2 is
  if (l1 == 0.0) return std::fabs(std::log(l3)) / (2.0 * kPi);
  const cd disc = std::sqrt(cd(1.0 - 4.0 * l1 * l3));
  const cd y1 = (-1.0 + disc) / (2.0 * l1);
  const cd y2 = (-1.0 - disc) / (2.0 * l1);
  return std::min(std::fabs(std::log(std::abs(y1))), std::fabs(std::log(std::abs(y2)))) / (2.0 * kPi);
}

double direct_birkhoff_sup(const std::vector<std::pair<int, double>>& sines, double alpha, std::int64_t q,
                           std::size_t grid) {
  const long double a = alpha;
  std::vector<std::pair<long double, long double>> vals(grid);  // (|S|, x)
  for (std::size_t j = 0; j < grid; ++j) {
    const long double x = static_cast<long double>(j) / static_cast<long double>(grid);
    vals[j] = {std::fabs(direct_sum(sines, a, x, q)), x};
  }
  std::sort(vals.begin(), vals.end(), [](const auto& u, const auto& v) { return u.first > v.first; });
  long double best = vals.front().first;
  const long double h = 1.0L / static_cast<long double>(grid);
  const std::size_t candidates = std::min<std::size_t>(8, grid);
  for (std::size_t c = 0; c < candidates; ++c) {
    // golden-section search for the max of |S| on [x - h, x + h]
    long double lo = vals[c].second - h, hi = vals[c].second + h;
    const long double g = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    long double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    long double f1 = std::fabs(direct_sum(sines, a, m1, q)), f2 = std::fabs(direct_sum(sines, a, m2, q));
    for (int it = 0; it < 60; ++it) {
      if (f1 > f2) {
        hi = m2;
        m2 = m1;
        f2 = f1;
        m1 = hi - g * (hi - lo);
        f1 = std::fabs(direct_sum(sines, a, m1, q));
      } else {
        lo = m1;
        m1 = m2;
        f1 = f2;
        m2 = lo + g * (hi - lo);
        f2 = std::fabs(direct_sum(sines, a, m2, q));
      }
    }
    best = std::max({best, f1, f2});
  }
  return static_cast<double>(best);
}

double amo_lyapunov(double coupling, double energy, double alpha, std::int64_t n, int samples) {
  double total = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double x = (s + 0.5) / samples;
    // (u_{n+1}, u_n) = [[e - v, -1], [1, 0]] (u_n, u_{n-1}) on a unit vector
    double a = 1.0, b = 0.0;
    double log_growth = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      double t = x + static_cast<double>(j) * alpha;
      t -= std::floor(t);
      const double next = (energy - 2.0 * coupling * std::cos(2.0 * kPi * t)) * a - b;
      b = a;
      a = next;
      if ((j & 15) == 15) {
        const double r = std::hypot(a, b);
        log_growth += std::log(r);
        a /= r;
        b /= r;
      }
    }
    log_growth += std::log(std::hypot(a, b));
    total += log_growth / static_cast<double>(n);
  }
  return total / samples;
}

Extrapolation amo_lyapunov_extrapolated(double coupling, double energy, double alpha,
                                        const std::vector<std::int64_t>& ns, int samples) {
  Extrapolation out;
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto n : ns) {
    const double l = amo_lyapunov(coupling, energy, alpha, n, samples);
    out.points.emplace_back(static_cast<double>(n), l);
    const double x = 1.0 / static_cast<double>(n);
    sw += 1.0;
    sx += x;
    sy += l;
    sxx += x * x;
    sxy += x * l;
  }
  const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
  out.limit = (sy - slope * sx) / sw;
  return out;
}

SingularRate singular_rate(double l1, double l2, double l3, double alpha) {
  constexpr int kGrid = 1 << 16;
  SingularRate out{{}, 0.0};
  auto mag = [&](double x) { return std::abs(dual_c(l1, l2, l3, alpha, x)); };
  for (int j = 0; j < kGrid; ++j) {
    const double x0 = static_cast<double>(j) / kGrid;
    const double h = 1.0 / kGrid;
    const double m = mag(x0);
    if (!(m <= mag(x0 - h) && m < mag(x0 + h))) continue;
    double lo = x0 - h, hi = x0 + h;
    for (int it = 0; it < 80; ++it) {
      const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
      if (mag(a) < mag(b)) {
        hi = b;
      } else {
        lo = a;
      }
    }
    const double z = 0.5 * (lo + hi);
    if (mag(z) > 1e-7) continue;
    const double d = 1e-6;
    const double deriv = std::abs(dual_c(l1, l2, l3, alpha, z + d) - dual_c(l1, l2, l3, alpha, z - d)) / (2.0 * d);
    out.zeros.push_back(z - std::floor(z));
    out.slope += 2.0 / deriv;
  }
  return out;
}

std::vector<double> bloch_eigenvalues(double l1, double l2, double l3, std::int64_t p, std::int64_t q, double theta,
                                      double k) {
  const double alpha = static_cast<double>(p) / static_cast<double>(q);
  const long n = static_cast<long>(q);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (long j = 0; j < n; ++j) {
    const double t = theta + static_cast<double>(j) * alpha;
    h(j, j) += 2.0 * std::cos(2.0 * kPi * t);
    const cd hop = symbol_c(l1, l2, l3, alpha, t) * (j == n - 1 ? unit(k) : cd(1.0));
    h(j, (j + 1) % n) += hop;
    h((j + 1) % n, j) += std::conj(hop);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

}  // namespace ehm::verify::oracle
