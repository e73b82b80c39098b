#include "ehm/duality.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ehm/cocycle.hpp"
#include "ehm/errors.hpp"
#include "ehm/spectral.hpp"

namespace ehm {
namespace {

struct ShiftedSamples {
  std::vector<cd> u, u_plus, u_minus;     // u(x), u(x + a), u(x - a)
  std::vector<cd> r, r_plus, r_minus;     // u(-x), u(-x - a), u(-x + a)
};

ShiftedSamples shifted_samples(const TorusFunctionGrid& u, double alpha) {
  const std::size_t g = u.grid();
  const TrigSeries r = u.coeffs.reflected();
  return {u.samples,
          u.coeffs.shifted(alpha).sample(g),
          u.coeffs.shifted(-alpha).sample(g),
          r.sample(g),
          r.shifted(alpha).sample(g),
          r.shifted(-alpha).sample(g)};
}

double grid_point(std::size_t j, std::size_t g) { return static_cast<double>(j) / static_cast<double>(g); }

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double TorusFunctionGrid::parseval_defect() const {
  double grid_mean = 0.0;
  for (const auto& z : samples) grid_mean += std::norm(z);
  grid_mean /= static_cast<double>(samples.size());
  return std::fabs(coeffs.l2_norm_squared() - grid_mean);
}

TorusFunctionGrid series_to_torus(const TrigSeries& u, std::size_t G) {
  if (!is_power_of_two(G)) throw DomainError("sequence_to_torus: grid size must be a power of two");
  if (G < 2 * std::max<std::size_t>(u.size(), 1)) throw DomainError("sequence_to_torus: aliasing (grid too small)");
  return {u, u.sample(G)};
}

TorusFunctionGrid sequence_to_torus(std::span<const cd> u, int nmin, std::size_t G) {
  return series_to_torus(TrigSeries(nmin, std::vector<cd>(u.begin(), u.end())), G);
}

DualResidual dual_equation_residual(const CouplingTriple& lambda, double alpha, double theta, double E,
                                    const TorusFunctionGrid& u) {
  const std::size_t g = u.grid();
  const Symbol s(sigma(lambda), alpha);
  const double e = E / lambda.l2();
  const cd rot = std::polar(1.0, kTwoPi * theta);
  const ShiftedSamples sh = shifted_samples(u, alpha);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < g; ++j) {
    const double x = grid_point(j, g);
    const cd c = s.c(x);
    const cd ct = s.c_tilde(x - alpha);
    const double v = s.v(x);
    const cd e1 = rot * c * sh.u_plus[j] + std::conj(rot) * ct * sh.u_minus[j] + (v - e) * sh.u[j];
    const cd e2 = std::conj(rot) * c * sh.r_plus[j] + rot * ct * sh.r_minus[j] + (v - e) * sh.r[j];
    s1 += std::norm(e1);
    s2 += std::norm(e2);
  }
  return {std::sqrt(s1 / static_cast<double>(g)), std::sqrt(s2 / static_cast<double>(g))};
}

ConjugacyResidual conjugacy_residual(const CouplingTriple& lambda, double alpha, double theta, double E,
                                     const TorusFunctionGrid& u, double cutoff) {
  const std::size_t g = u.grid();
  const Symbol s(sigma(lambda), alpha);
  const double e = E / lambda.l2();
  const cd rot = std::polar(1.0, kTwoPi * theta);
  const ShiftedSamples sh = shifted_samples(u, alpha);
  Mat2 r;
  r << rot, 0.0, 0.0, std::conj(rot);
  ConjugacyResidual out{0.0, 0};
  for (std::size_t j = 0; j < g; ++j) {
    const double x = grid_point(j, g);
    if (std::abs(s.c(x)) <= std::max(cutoff, kSymbolZeroCutoff)) {
      ++out.excluded;
      continue;
    }
    const Mat2 a = symbol_transfer_matrix(s, e, x);
    Mat2 m, m_next;
    m << sh.u[j], sh.r[j], std::conj(rot) * sh.u_minus[j], rot * sh.r_minus[j];
    m_next << sh.u_plus[j], sh.r_plus[j], std::conj(rot) * sh.u[j], rot * sh.r[j];
    out.residual = std::max(out.residual, (a * m - m_next * r).norm());
  }
  return out;
}

cd det_m(const TorusFunctionGrid& u, double alpha, double theta, double x) {
  const cd rot = std::polar(1.0, kTwoPi * theta);
  return rot * u(x) * u(alpha - x) - std::conj(rot) * u(-x) * u(x - alpha);
}

DetIdentityReport det_identity_check(const CouplingTriple& lambda, double alpha, const Phase& theta,
                                     const TorusFunctionGrid& u) {
  const std::size_t g = u.grid();
  const Symbol s(sigma(lambda), alpha);
  const cd rot = std::polar(1.0, kTwoPi * theta.theta());
  const ShiftedSamples sh = shifted_samples(u, alpha);
  std::vector<std::pair<double, double>> pts(g);  // (|c|_s(x - a), |det M| |c|_s(x - a))
  for (std::size_t j = 0; j < g; ++j) {
    const double x = grid_point(j, g);
    const double a = std::abs(s.c(x - alpha));
    const cd det = rot * sh.u[j] * sh.r_minus[j] - std::conj(rot) * sh.r[j] * sh.u_minus[j];
    pts[j] = {a, std::abs(det) * a};
  }
  std::sort(pts.begin(), pts.end());
  const std::size_t drop = g / 20;
  std::vector<double> vals;
  vals.reserve(g - drop);
  for (std::size_t j = drop; j < g; ++j) vals.push_back(pts[j].second);
  DetIdentityReport out{0.0, 0.0, g, vals.size(), theta.is_alpha_rational()};
  if (vals.empty()) return out;
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  const double vmin = *lo, vmax = *hi;
  auto mid = vals.begin() + static_cast<long>(vals.size() / 2);
  std::nth_element(vals.begin(), mid, vals.end());
  out.b_estimate = *mid;
  out.relative_variation = out.b_estimate > 0.0 ? (vmax - vmin) / out.b_estimate : INFINITY;
  return out;
}

SingularProbeReport singular_contradiction_probe(const CouplingTriple& lambda, double alpha,
                                                 const TorusFunctionGrid* u, int k_min, int k_max) {
  if (!dual_has_singularity(lambda)) throw DomainError("not in singular regime");
  if (k_min < 2 || k_max < k_min + 2 || k_max > 26) throw DomainError("singular probe: need 2 <= k_min, k_min + 2 <= k_max <= 26");
  const Symbol s(sigma(lambda), alpha);
  SingularProbeReport out;
  for (const auto& z : real_roots_on_torus(s.couplings(), alpha)) out.zeros.push_back(z.theta);
  constexpr double kShifts[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> logs, means, log_means;
  for (int k = k_min; k <= k_max; ++k) {
    const std::size_t g = std::size_t{1} << k;
    std::vector<double> per_shift;
    for (double sh : kShifts) {
      double acc = 0.0;
      for (std::size_t j = 0; j < g; ++j) {
        const double a = std::abs(s.c((static_cast<double>(j) + sh) / static_cast<double>(g)));
        acc += a > 0.0 ? 1.0 / a : 1e300 / static_cast<double>(g);
      }
      per_shift.push_back(acc / static_cast<double>(g));
    }
    std::sort(per_shift.begin(), per_shift.end());
    const double med = per_shift[per_shift.size() / 2];
    out.rows.push_back({g, med});
    logs.push_back(std::log(static_cast<double>(g)));
    means.push_back(med);
    log_means.push_back(std::log(med));
  }
  out.log_slope = least_squares_slope(logs, means);
  out.power_exponent = least_squares_slope(logs, log_means);
  if (u != nullptr) {
    const double norm2 = u->coeffs.l2_norm_squared();
    out.u_norm_squared = norm2;
    out.b_upper_bound = 2.0 * norm2 / out.rows.back().mean_inverse_abs_c;
  }
  return out;
}

ExactSolution exact_rational_eigenfunction(const CouplingTriple& lambda, std::int64_t p, std::int64_t q,
                                           std::optional<int> level) {
  if (q < 1) throw DomainError("exact_rational_eigenfunction: q must be >= 1");
  const double alpha = static_cast<double>(p) / static_cast<double>(q);
  const auto roots = real_roots_on_torus(lambda, alpha);
  if (roots.empty()) throw DomainError("exact_rational_eigenfunction: c_lambda has no zero on the circle");
  const double theta = roots.front().theta;
  const Symbol s(lambda, alpha);
  const long n = static_cast<long>(q);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (long i = 0; i < n; ++i) {
    const double t = theta + static_cast<double>(i + 1) * alpha;
    h(i, i) = s.v(t);
    if (i + 1 < n) {
      h(i, i + 1) = s.c(t);
      h(i + 1, i) = std::conj(s.c(t));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const int pick = level.value_or(static_cast<int>(n / 2));
  if (pick < 0 || pick >= n) throw DomainError("exact_rational_eigenfunction: level out of range");
  const Eigen::VectorXcd v = es.eigenvectors().col(pick);
  return {lambda, p, q, alpha, theta, es.eigenvalues()(pick), std::vector<cd>(v.data(), v.data() + n), 1};
}

TruncatedTestVector central_eigenvector(const CouplingTriple& lambda, double alpha, const Phase& theta, int N) {
  const int dim = 2 * N + 1;
  constexpr int kBatch = 2048;
  const int window = std::min(10, N);
  int best = -1;
  double best_weight = -1.0;
  for (int start = 0; start < dim; start += kBatch) {
    const int stop = std::min(dim - 1, start + kBatch - 1);
    const auto es = truncated_eigensystem(lambda, alpha, theta, N, EigenSelection{std::pair{start, stop}, {}});
    for (std::size_t i = 0; i < es.size(); ++i) {
      const double w = es.gauged_vectors.col(static_cast<long>(i)).segment(N - window, 2 * window + 1).squaredNorm();
      if (w > best_weight) {
        best_weight = w;
        best = start + static_cast<int>(i);
      }
    }
  }
  const auto es = truncated_eigensystem(lambda, alpha, theta, N, EigenSelection{std::pair{best, best}, {}});
  const Eigen::VectorXcd u = es.eigenvector(0);
  return {es.eigenvalues.front(), std::vector<cd>(u.data(), u.data() + u.size()), -N, diagnose(es, 0).edge_mass};
}

}  // namespace ehm
