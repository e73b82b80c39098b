#pragma once

// Finite-volume spectra: periodic approximants at a = p/q (band spectra) and
// Dirichlet truncations to [-N, N] with localization diagnostics.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ehm/model.hpp"

namespace ehm {

struct Band {
  double lo;
  double hi;
  double width() const { return hi - lo; }
};

/// q x q Bloch matrix at a = p/q: diagonal v(theta + n a), H_{n,n+1} = c(theta + n a),
/// and the wraparound hopping c(theta + (q-1) a) carrying e^{2 pi i k} into H_{q-1,0}.
Eigen::MatrixXcd bloch_matrix(const CouplingTriple& lambda, std::int64_t p, std::int64_t q, double theta, double k);

struct PeriodicApproximantSpectrum {
  std::int64_t p;
  std::int64_t q;
  CouplingTriple couplings;
  std::vector<Band> bands;  // sorted, disjoint
  double total_measure;
};

/// Gaps narrower than this fraction of the total extent are closed.
inline constexpr double kBandMergeGap = 1e-9;

/// Union over theta in [0, 1/q) and all Bloch phases. For each theta band j is
/// bounded by the j-th periodic and antiperiodic eigenvalues, so k needs no
/// grid; the theta extrema are located on theta_grid points and refined by
/// Brent's method when q <= kRefineMaxQ. Requires grids >= 8.
PeriodicApproximantSpectrum approximant_spectrum(const CouplingTriple& lambda, std::int64_t p, std::int64_t q,
                                                 int theta_grid, int k_grid);

inline constexpr std::int64_t kRefineMaxQ = 256;

/// Brute-force union of Bloch eigenvalues over a (theta, k) grid.
PeriodicApproximantSpectrum sampled_spectrum(const CouplingTriple& lambda, std::int64_t p, std::int64_t q,
                                             int theta_grid, int k_grid);

/// Sorts and merges intervals whose gap is at most rel_gap * (max - min).
std::vector<Band> merge_bands(std::vector<Band> bands, double rel_gap = kBandMergeGap);

std::vector<Band> scale_bands(const std::vector<Band>& bands, double factor);

/// Hausdorff distance between two finite unions of closed intervals.
double hausdorff_distance(const std::vector<Band>& a, const std::vector<Band>& b);

/// Hausdorff distance between spec(H_lambda) and l2 * spec(H_sigma(lambda)) at p/q.
double duality_spectrum_check(const CouplingTriple& lambda, std::int64_t p, std::int64_t q, int theta_grid,
                              int k_grid);

struct EigenSelection {
  std::optional<std::pair<int, int>> index;        // inclusive, 0-based, ascending order
  std::optional<std::pair<double, double>> energy;  // half-open (lo, hi]
};

struct TruncatedEigensystem {
  CouplingTriple couplings;
  double alpha;
  Phase theta;
  int N;
  std::vector<double> eigenvalues;
  /// Real eigenvectors of the gauged matrix, one per column; the eigenvector
  /// of H is gauge .* column.
  Eigen::MatrixXd gauged_vectors;
  Eigen::VectorXcd gauge;
  double max_residual = 0.0;  // max ||H u - E u|| over the returned pairs

  std::size_t size() const { return eigenvalues.size(); }
  int dimension() const { return 2 * N + 1; }
  /// u_n for n = -N..N (unit norm).
  Eigen::VectorXcd eigenvector(std::size_t i) const;
};

/// Hermitian tridiagonal restriction of H to [-N, N] with Dirichlet boundary.
/// Pairs with residual above 1e-10 raise NumericalError. N <= 10^4.
TruncatedEigensystem truncated_eigensystem(const CouplingTriple& lambda, double alpha, const Phase& theta, int N,
                                           const EigenSelection& selection = {}, bool vectors = true);

/// Dense copy of the truncated matrix (small N only; used by oracles).
Eigen::MatrixXcd truncated_matrix(const CouplingTriple& lambda, double alpha, double theta, int N);

struct LocalizationDiagnostics {
  double ipr;
  double edge_mass;   // weight on |n| > 0.9 N
  double decay_rate;  // fitted exponential rate of the envelope, 0 if none
};

/// Diagnostics of a vector indexed n = -N..N.
LocalizationDiagnostics diagnose(const Eigen::Ref<const Eigen::VectorXd>& abs_u, int N);
LocalizationDiagnostics diagnose(const TruncatedEigensystem& es, std::size_t i);

struct ProbeRow {
  double theta;
  bool alpha_rational;
  int N;
  double max_ipr;      // over mid-spectrum pairs with edge mass < 0.01
  double median_ipr;
  std::size_t states;  // pairs passing the filter
  std::size_t examined;
};

struct PointSpectrumReport {
  CouplingTriple couplings;
  double alpha;
  std::vector<ProbeRow> rows;
};

/// Max filtered IPR per (theta, N) over the central 60% of the eigenvalue
/// index range. Qualitative: finite truncations only indicate point spectrum.
/// Requires lambda in region III.
PointSpectrumReport point_spectrum_probe(const CouplingTriple& lambda, double alpha, const std::vector<Phase>& thetas,
                                         const std::vector<int>& Ns);

/// Same statistics without the region precondition (control runs).
ProbeRow probe_row(const CouplingTriple& lambda, double alpha, const Phase& theta, int N);

}  // namespace ehm
