#pragma once

// Fourier duality: a sequence u_n becomes u(x) = sum u_n e^{2 pi i n x} and an
// eigen-equation of H_lambda at energy E becomes the pair of dual equations
//   e^{2 pi i th} c_s(x) u(x + a) + e^{-2 pi i th} c~_s(x - a) u(x - a) + 2 cos 2 pi x u(x) = (E/l2) u(x)
// and its mirror in u(-x), s = sigma(lambda). In matrix form
//   A_{s, E/l2}(x) M(x) = M(x + a) R,   R = diag(e^{2 pi i th}, e^{-2 pi i th}),
//   M(x) = [[u(x), u(-x)], [e^{-2 pi i th} u(x - a), e^{2 pi i th} u(a - x)]].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ehm/model.hpp"
#include "ehm/torus.hpp"

namespace ehm {

/// u sampled on x_j = j / G, carried with its Fourier coefficients so shifts
/// by a are exact.
struct TorusFunctionGrid {
  TrigSeries coeffs;
  std::vector<cd> samples;

  std::size_t grid() const { return samples.size(); }
  cd operator()(double x) const { return coeffs(x); }
  /// | sum |u_n|^2 - mean_j |u(x_j)|^2 |
  double parseval_defect() const;
};

/// u_n for n = nmin .. nmin + size - 1. G must be a power of two with
/// G >= 2 * size (else DomainError "aliasing").
TorusFunctionGrid sequence_to_torus(std::span<const cd> u, int nmin, std::size_t G);
TorusFunctionGrid series_to_torus(const TrigSeries& u, std::size_t G);

struct DualResidual {
  double r1;  // grid L^2 norm of the first dual equation's residual
  double r2;  // same for the mirrored equation
};

DualResidual dual_equation_residual(const CouplingTriple& lambda, double alpha, double theta, double E,
                                    const TorusFunctionGrid& u);

struct ConjugacyResidual {
  double residual;        // sup over kept grid points of ||A M(x) - M(x + a) R||
  std::size_t excluded;   // grid points with |c_s(x)| <= cutoff
};

ConjugacyResidual conjugacy_residual(const CouplingTriple& lambda, double alpha, double theta, double E,
                                     const TorusFunctionGrid& u, double cutoff = 1e-8);

/// det M(x) = e^{2 pi i th} u(x) u(a - x) - e^{-2 pi i th} u(-x) u(x - a).
cd det_m(const TorusFunctionGrid& u, double alpha, double theta, double x);

struct DetIdentityReport {
  double b_estimate;
  double relative_variation;
  std::size_t grid;
  std::size_t kept;
  bool hypothesis_violated;  // theta was constructed alpha-rational
};

/// |det M(x)| |c|_s(x - a) over the grid, dropping the 5% of points with the
/// smallest |c|_s(x - a); b is the median of the rest.
DetIdentityReport det_identity_check(const CouplingTriple& lambda, double alpha, const Phase& theta,
                                     const TorusFunctionGrid& u);

struct SingularProbeRow {
  std::size_t grid;
  double mean_inverse_abs_c;  // median over shifted grids of mean_j 1/|c|_s(x_j)
};

struct SingularProbeReport {
  std::vector<SingularProbeRow> rows;
  std::vector<double> zeros;  // zeros of c_s on the circle
  double log_slope;           // d mean / d log G (least squares)
  double power_exponent;      // d log mean / d log G
  /// When u is supplied: ||u||^2 and the largest b compatible with
  /// int |det M| <= 2 ||u||^2 at the finest grid.
  std::optional<double> u_norm_squared;
  std::optional<double> b_upper_bound;
};

/// Throws DomainError("not in singular regime") unless c_sigma(lambda) vanishes
/// on the circle. Grids run over G = 2^k_min .. 2^k_max.
SingularProbeReport singular_contradiction_probe(const CouplingTriple& lambda, double alpha,
                                                 const TorusFunctionGrid* u = nullptr, int k_min = 8,
                                                 int k_max = 20);

/// An eigenfunction with finite support at a = p/q: theta is placed on a real
/// zero of c_lambda, which cuts the chain at sites 0|1 and q|q+1, and u is an
/// eigenvector of the open block on sites 1..q.
struct ExactSolution {
  CouplingTriple couplings;
  std::int64_t p;
  std::int64_t q;
  double alpha;
  double theta;
  double energy;
  std::vector<cd> sequence;  // u_1 .. u_q
  int nmin = 1;
};

/// Throws DomainError when c_lambda has no zero on the circle. `level` picks
/// the eigenpair of the block (ascending, default middle).
ExactSolution exact_rational_eigenfunction(const CouplingTriple& lambda, std::int64_t p, std::int64_t q,
                                           std::optional<int> level = std::nullopt);

/// Eigenvector of the truncation to [-N, N] with the most weight on |n| <= 10,
/// a localized test vector whose tails stay clear of the boundary.
struct TruncatedTestVector {
  double energy;
  std::vector<cd> sequence;  // n = -N .. N
  int nmin;
  double edge_mass;
};

TruncatedTestVector central_eigenvector(const CouplingTriple& lambda, double alpha, const Phase& theta, int N);

}  // namespace ehm
