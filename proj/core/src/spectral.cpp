#include "ehm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>
#include <lapacke.h>

#include "ehm/birkhoff.hpp"
#include "ehm/errors.hpp"
#include "ehm/parallel.hpp"

namespace ehm {
namespace {

// Site data of the q-periodic operator at a = p/q: v_n, c_n for n = 0..q-1.
struct PeriodicSites {
  std::vector<double> v;
  std::vector<cd> c;
};

PeriodicSites periodic_sites(const Symbol& s, std::int64_t p, std::int64_t q, double theta) {
  PeriodicSites out;
  out.v.resize(static_cast<std::size_t>(q));
  out.c.resize(static_cast<std::size_t>(q));
  for (std::int64_t n = 0; n < q; ++n) {
    const std::int64_t r = ((n * p) % q + q) % q;
    const double t = theta + static_cast<double>(r) / static_cast<double>(q);
    out.v[static_cast<std::size_t>(n)] = s.v(t);
    out.c[static_cast<std::size_t>(n)] = s.c(t);
  }
  return out;
}

void check_rational(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw DomainError("rational frequency needs q >= 1");
  if (std::gcd(p, q) != 1) throw DomainError("p and q must be coprime");
}

// Sorted eigenvalues of the gauged real matrix with corner +|c_{q-1}| (sign = 1)
// or -|c_{q-1}| (sign = -1).
std::vector<double> edge_eigenvalues(const PeriodicSites& st, int sign) {
  const std::size_t q = st.v.size();
  if (q == 1) return {st.v[0] + 2.0 * sign * std::abs(st.c[0])};
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<long>(q), static_cast<long>(q));
  for (std::size_t n = 0; n < q; ++n) t(static_cast<long>(n), static_cast<long>(n)) = st.v[n];
  for (std::size_t n = 0; n + 1 < q; ++n) {
    const double a = std::abs(st.c[n]);
    t(static_cast<long>(n), static_cast<long>(n + 1)) = a;
    t(static_cast<long>(n + 1), static_cast<long>(n)) = a;
  }
  const double corner = sign * std::abs(st.c[q - 1]);
  t(0, static_cast<long>(q - 1)) += corner;
  t(static_cast<long>(q - 1), 0) += corner;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

struct EdgePair {
  std::vector<double> lo;
  std::vector<double> hi;
};

EdgePair band_edges_at(const Symbol& s, std::int64_t p, std::int64_t q, double theta) {
  const PeriodicSites st = periodic_sites(s, p, q, theta);
  const auto plus = edge_eigenvalues(st, 1);
  const auto minus = edge_eigenvalues(st, -1);
  EdgePair out{plus, plus};
  for (std::size_t j = 0; j < plus.size(); ++j) {
    out.lo[j] = std::min(plus[j], minus[j]);
    out.hi[j] = std::max(plus[j], minus[j]);
  }
  return out;
}

// Directed Hausdorff distance sup_{x in a} dist(x, b).
double directed_hausdorff(const std::vector<Band>& a, const std::vector<Band>& b) {
  auto dist = [&](double x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& band : b) {
      if (x >= band.lo && x <= band.hi) return 0.0;
      d = std::min({d, std::fabs(x - band.lo), std::fabs(x - band.hi)});
    }
    return d;
  };
  double out = 0.0;
  for (const auto& band : a) {
    out = std::max({out, dist(band.lo), dist(band.hi)});
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      const double mid = 0.5 * (b[i].hi + b[i + 1].lo);
      if (mid >= band.lo && mid <= band.hi) out = std::max(out, dist(mid));
    }
  }
  return out;
}

PeriodicApproximantSpectrum finish(std::int64_t p, std::int64_t q, const CouplingTriple& lambda,
                                   std::vector<Band> raw) {
  PeriodicApproximantSpectrum out{p, q, lambda, merge_bands(std::move(raw)), 0.0};
  for (const auto& b : out.bands) out.total_measure += b.width();
  return out;
}

// Site data of the truncation to [-N, N]: diagonal and the hopping between
// sites i and i + 1.
struct ChainData {
  std::vector<double> diag;
  std::vector<cd> hop;
};

ChainData chain(const CouplingTriple& lambda, double alpha, double theta, int N) {
  const Symbol s(lambda, alpha);
  const std::size_t dim = static_cast<std::size_t>(2 * N + 1);
  ChainData out{std::vector<double>(dim), std::vector<cd>(dim > 0 ? dim - 1 : 0)};
  for (std::size_t i = 0; i < dim; ++i) {
    const double t = theta + frac_mul(static_cast<double>(static_cast<long>(i) - N), alpha);
    out.diag[i] = s.v(t);
    if (i + 1 < dim) out.hop[i] = s.c(t);
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd bloch_matrix(const CouplingTriple& lambda, std::int64_t p, std::int64_t q, double theta, double k) {
  check_rational(p, q);
  const Symbol s(lambda, static_cast<double>(p) / static_cast<double>(q));
  const PeriodicSites st = periodic_sites(s, p, q, theta);
  const long n = static_cast<long>(q);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (long i = 0; i < n; ++i) h(i, i) = st.v[static_cast<std::size_t>(i)];
  for (long i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = st.c[static_cast<std::size_t>(i)];
    h(i + 1, i) = std::conj(st.c[static_cast<std::size_t>(i)]);
  }
  const cd wrap = st.c[static_cast<std::size_t>(n - 1)] * std::polar(1.0, kTwoPi * k);
  h(n - 1, 0) += wrap;
  h(0, n - 1) += std::conj(wrap);
  return h;
}

std::vector<Band> merge_bands(std::vector<Band> bands, double rel_gap) {
  if (bands.empty()) return bands;
  std::sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) { return a.lo < b.lo; });
  double top = bands.front().hi;
  for (const auto& b : bands) top = std::max(top, b.hi);
  const double threshold = rel_gap * (top - bands.front().lo);
  std::vector<Band> out{bands.front()};
  for (std::size_t i = 1; i < bands.size(); ++i) {
    if (bands[i].lo - out.back().hi <= threshold) {
      out.back().hi = std::max(out.back().hi, bands[i].hi);
    } else {
      out.push_back(bands[i]);
    }
  }
  return out;
}

std::vector<Band> scale_bands(const std::vector<Band>& bands, double factor) {
  std::vector<Band> out;
  out.reserve(bands.size());
  for (const auto& b : bands) {
    const double x = factor * b.lo;
    const double y = factor * b.hi;
    out.push_back({std::min(x, y), std::max(x, y)});
  }
  std::sort(out.begin(), out.end(), [](const Band& a, const Band& b) { return a.lo < b.lo; });
  return out;
}

double hausdorff_distance(const std::vector<Band>& a, const std::vector<Band>& b) {
  if (a.empty() || b.empty()) {
    if (a.empty() && b.empty()) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

PeriodicApproximantSpectrum approximant_spectrum(const CouplingTriple& lambda, std::int64_t p, std::int64_t q,
                                                 int theta_grid, int k_grid) {
  check_rational(p, q);
  if (theta_grid < 8 || k_grid < 8) throw DomainError("approximant_spectrum: grids must be >= 8");
  const Symbol s(lambda, static_cast<double>(p) / static_cast<double>(q));
  const double period = 1.0 / static_cast<double>(q);
  const std::size_t g = static_cast<std::size_t>(theta_grid);
  std::vector<EdgePair> grid(g);
  parallel_for(g, [&](std::size_t i) {
    grid[i] = band_edges_at(s, p, q, period * static_cast<double>(i) / static_cast<double>(g));
  });

  const std::size_t nb = static_cast<std::size_t>(q);
  std::vector<Band> raw(nb);
  const bool refine = q <= kRefineMaxQ;
  parallel_for(nb, [&](std::size_t j) {
    std::size_t imin = 0, imax = 0;
    for (std::size_t i = 1; i < g; ++i) {
      if (grid[i].lo[j] < grid[imin].lo[j]) imin = i;
      if (grid[i].hi[j] > grid[imax].hi[j]) imax = i;
    }
    Band b{grid[imin].lo[j], grid[imax].hi[j]};
    if (refine) {
      const double h = period / static_cast<double>(g);
      std::uintmax_t iters = 100;
      auto lo_fn = [&](double t) { return band_edges_at(s, p, q, t).lo[j]; };
      auto hi_fn = [&](double t) { return -band_edges_at(s, p, q, t).hi[j]; };
      const double t0 = h * static_cast<double>(imin);
      const auto rlo = boost::math::tools::brent_find_minima(lo_fn, t0 - h, t0 + h, 52, iters);
      iters = 100;
      const double t1 = h * static_cast<double>(imax);
      const auto rhi = boost::math::tools::brent_find_minima(hi_fn, t1 - h, t1 + h, 52, iters);
      b.lo = std::min(b.lo, rlo.second);
      b.hi = std::max(b.hi, -rhi.second);
    }
    raw[j] = b;
  });
  return finish(p, q, lambda, std::move(raw));
}

PeriodicApproximantSpectrum sampled_spectrum(const CouplingTriple& lambda, std::int64_t p, std::int64_t q,
                                             int theta_grid, int k_grid) {
  check_rational(p, q);
  if (theta_grid < 1 || k_grid < 1) throw DomainError("sampled_spectrum: empty grid");
  const double period = 1.0 / static_cast<double>(q);
  const std::size_t nb = static_cast<std::size_t>(q);
  const std::size_t cells = static_cast<std::size_t>(theta_grid) * static_cast<std::size_t>(k_grid);
  std::vector<std::vector<double>> eig(cells);
  parallel_for(cells, [&](std::size_t c) {
    const double theta = period * static_cast<double>(c / static_cast<std::size_t>(k_grid)) / theta_grid;
    const double k = static_cast<double>(c % static_cast<std::size_t>(k_grid)) / k_grid;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(bloch_matrix(lambda, p, q, theta, k), Eigen::EigenvaluesOnly);
    eig[c].assign(es.eigenvalues().data(), es.eigenvalues().data() + nb);
  });
  std::vector<Band> raw(nb, Band{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
  for (const auto& e : eig) {
    for (std::size_t j = 0; j < nb; ++j) {
      raw[j].lo = std::min(raw[j].lo, e[j]);
      raw[j].hi = std::max(raw[j].hi, e[j]);
    }
  }
  return finish(p, q, lambda, std::move(raw));
}

double duality_spectrum_check(const CouplingTriple& lambda, std::int64_t p, std::int64_t q, int theta_grid,
                              int k_grid) {
  const auto direct = approximant_spectrum(lambda, p, q, theta_grid, k_grid);
  const auto dual = approximant_spectrum(sigma(lambda), p, q, theta_grid, k_grid);
  return hausdorff_distance(direct.bands, scale_bands(dual.bands, lambda.l2()));
}

Eigen::VectorXcd TruncatedEigensystem::eigenvector(std::size_t i) const {
  return gauge.cwiseProduct(gauged_vectors.col(static_cast<long>(i)).cast<cd>());
}

Eigen::MatrixXcd truncated_matrix(const CouplingTriple& lambda, double alpha, double theta, int N) {
  if (N < 0) throw DomainError("truncated_matrix: N must be >= 0");
  const ChainData ch = chain(lambda, alpha, theta, N);
  const long dim = 2L * N + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (long i = 0; i < dim; ++i) h(i, i) = ch.diag[static_cast<std::size_t>(i)];
  for (long i = 0; i + 1 < dim; ++i) {
    h(i, i + 1) = ch.hop[static_cast<std::size_t>(i)];
    h(i + 1, i) = std::conj(ch.hop[static_cast<std::size_t>(i)]);
  }
  return h;
}

TruncatedEigensystem truncated_eigensystem(const CouplingTriple& lambda, double alpha, const Phase& theta, int N,
                                           const EigenSelection& selection, bool vectors) {
  if (N < 0 || N > 10000) throw DomainError("truncated_eigensystem: need 0 <= N <= 10^4");
  const ChainData ch = chain(lambda, alpha, theta.theta(), N);
  const int dim = 2 * N + 1;
  TruncatedEigensystem out{lambda, alpha, theta, N, {}, {}, Eigen::VectorXcd(dim), 0.0};

  // H = D T D^* with T real symmetric, D unimodular diagonal.
  std::vector<double> off(static_cast<std::size_t>(dim), 0.0);
  out.gauge(0) = 1.0;
  for (int i = 0; i + 1 < dim; ++i) {
    const cd c = ch.hop[static_cast<std::size_t>(i)];
    const double a = std::abs(c);
    off[static_cast<std::size_t>(i)] = a;
    out.gauge(i + 1) = a > 0.0 ? out.gauge(i) * std::conj(c) / a : out.gauge(i);
  }

  int il = 1, iu = dim;
  if (selection.index) {
    il = selection.index->first + 1;
    iu = selection.index->second + 1;
    if (il < 1 || iu > dim || il > iu) throw DomainError("truncated_eigensystem: index range outside [0, 2N]");
  } else if (selection.energy) {
    std::vector<double> d = ch.diag, e = off;
    if (LAPACKE_dsterf(dim, d.data(), e.data()) != 0) throw NumericalError("dsterf failed");
    const auto first = std::upper_bound(d.begin(), d.end(), selection.energy->first);
    const auto last = std::upper_bound(d.begin(), d.end(), selection.energy->second);
    if (first == last) return out;
    il = static_cast<int>(first - d.begin()) + 1;
    iu = static_cast<int>(last - d.begin());
  }

  const int m_expected = iu - il + 1;
  std::vector<double> d = ch.diag, e = off;
  std::vector<double> w(static_cast<std::size_t>(dim));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(1, m_expected)));
  lapack_int m = 0;
  lapack_logical tryrac = 1;
  if (vectors) out.gauged_vectors.resize(dim, m_expected);
  const char range = (il == 1 && iu == dim) ? 'A' : 'I';
  // MRRR keeps index subsets at O(n k); dstevr would fall back to inverse iteration.
  const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', range, dim, d.data(), e.data(), 0.0,
                                         0.0, il, iu, &m, w.data(), vectors ? out.gauged_vectors.data() : nullptr, dim,
                                         vectors ? m_expected : 1, isuppz.data(), &tryrac);
  if (info != 0) throw NumericalError("dstemr failed");
  out.eigenvalues.assign(w.begin(), w.begin() + m);
  if (!vectors) return out;
  out.gauged_vectors.conservativeResize(dim, m);

  // residual in the original complex basis
  for (lapack_int j = 0; j < m; ++j) {
    const Eigen::VectorXcd u = out.eigenvector(static_cast<std::size_t>(j));
    const double energy = out.eigenvalues[static_cast<std::size_t>(j)];
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      cd hu = (ch.diag[static_cast<std::size_t>(i)] - energy) * u(i);
      if (i + 1 < dim) hu += ch.hop[static_cast<std::size_t>(i)] * u(i + 1);
      if (i > 0) hu += std::conj(ch.hop[static_cast<std::size_t>(i - 1)]) * u(i - 1);
      r2 += std::norm(hu);
    }
    out.max_residual = std::max(out.max_residual, std::sqrt(r2));
  }
  if (out.max_residual > 1e-10) throw NumericalError("truncated_eigensystem: eigenpair residual above 1e-10");
  return out;
}

LocalizationDiagnostics diagnose(const Eigen::Ref<const Eigen::VectorXd>& abs_u, int N) {
  const long dim = abs_u.size();
  double s2 = 0.0, s4 = 0.0, edge = 0.0;
  for (long i = 0; i < dim; ++i) {
    const double a2 = abs_u(i) * abs_u(i);
    s2 += a2;
    s4 += a2 * a2;
    if (std::abs(i - N) > 0.9 * N) edge += a2;
  }
  if (s2 == 0.0) return {0.0, 0.0, 0.0};
  LocalizationDiagnostics out{s4 / (s2 * s2), edge / s2, 0.0};

  // Upper envelope of |u| against the distance from the peak, fitted on the
  // range where it stays above the eigensolver noise floor.
  long peak = 0;
  abs_u.maxCoeff(&peak);
  const double top = abs_u(peak);
  const long reach = std::max(peak, dim - 1 - peak);
  std::vector<double> env(static_cast<std::size_t>(reach) + 1, 0.0);
  for (long d = reach; d >= 0; --d) {
    double v = 0.0;
    if (peak - d >= 0) v = std::max(v, abs_u(peak - d));
    if (peak + d < dim) v = std::max(v, abs_u(peak + d));
    env[static_cast<std::size_t>(d)] = d == reach ? v : std::max(v, env[static_cast<std::size_t>(d) + 1]);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (long d = 1; d <= reach; ++d) {
    const double v = env[static_cast<std::size_t>(d)];
    if (!(v > 1e-12 * top)) break;
    const double y = std::log(v / top);
    sx += static_cast<double>(d);
    sy += y;
    sxx += static_cast<double>(d) * static_cast<double>(d);
    sxy += static_cast<double>(d) * y;
    ++count;
  }
  if (count >= 5) {
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    out.decay_rate = std::max(0.0, -slope);
  }
  return out;
}

LocalizationDiagnostics diagnose(const TruncatedEigensystem& es, std::size_t i) {
  return diagnose(es.gauged_vectors.col(static_cast<long>(i)).cwiseAbs(), es.N);
}

ProbeRow probe_row(const CouplingTriple& lambda, double alpha, const Phase& theta, int N) {
  const int dim = 2 * N + 1;
  const int lo = static_cast<int>(std::floor(0.2 * dim));
  const int hi = static_cast<int>(std::ceil(0.8 * dim)) - 1;
  constexpr int kBatch = 2048;
  std::vector<double> iprs;
  std::size_t examined = 0;
  for (int start = lo; start <= hi; start += kBatch) {
    const int stop = std::min(hi, start + kBatch - 1);
    const auto es = truncated_eigensystem(lambda, alpha, theta, N, EigenSelection{std::pair{start, stop}, {}});
    for (std::size_t i = 0; i < es.size(); ++i) {
      ++examined;
      const auto dg = diagnose(es, i);
      if (dg.edge_mass < 0.01) iprs.push_back(dg.ipr);
    }
  }
  ProbeRow row{theta.theta(), theta.is_alpha_rational(), N, 0.0, 0.0, iprs.size(), examined};
  if (!iprs.empty()) {
    row.max_ipr = *std::max_element(iprs.begin(), iprs.end());
    auto mid = iprs.begin() + static_cast<long>(iprs.size() / 2);
    std::nth_element(iprs.begin(), mid, iprs.end());
    row.median_ipr = *mid;
  }
  return row;
}

PointSpectrumReport point_spectrum_probe(const CouplingTriple& lambda, double alpha, const std::vector<Phase>& thetas,
                                         const std::vector<int>& Ns) {
  const Region r = classify(lambda).region;
  if (r != Region::III_isotropic && r != Region::III_anisotropic) {
    throw DomainError("point_spectrum_probe: lambda must lie in region III");
  }
  PointSpectrumReport report{lambda, alpha, {}};
  const std::size_t cells = thetas.size() * Ns.size();
  report.rows.resize(cells);
  parallel_for(cells, [&](std::size_t c) {
    report.rows[c] = probe_row(lambda, alpha, thetas[c / Ns.size()], Ns[c % Ns.size()]);
  });
  return report;
}

}  // namespace ehm
