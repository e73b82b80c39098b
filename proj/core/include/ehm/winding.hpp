#pragma once

// Unimodular factorization of the dual symbol in the anisotropic self-dual
// region with l1 + l3 > 1:
//   c_s(t) / |c|_s(t) = e^{w 2 pi i (t + a/2) + i f(t)},   s = sigma(lambda),
// with f real analytic and of zero mean. w = -1 when l3 > l1; the mirror case
// l1 > l3 is reduced to it by t -> -t - a and has w = +1.

#include <vector>

#include "ehm/model.hpp"
#include "ehm/torus.hpp"

namespace ehm {

enum class ReflectionConvention { direct, reflected };

struct WindingFactorization {
  CouplingTriple couplings;
  double alpha;
  /// Roots of the dual polynomial actually used for f (those of the mirrored
  /// triple in the reflected convention), ordered by modulus.
  DualRoots roots;
  ReflectionConvention convention;
  int winding;
  std::vector<double> f_samples;  // f(j / G), j = 0..G-1
  TrigSeries f_fourier;           // |n| <= cutoff with |f^(n)| above 1e-16
  double delta0;                  // |f^(n)| <= c_bound e^{-2 pi delta0 |n|}
  double c_bound;

  /// f(t) from the root product, independent of the stored samples.
  double f(double theta) const;
};

/// Throws DomainError("factorization not defined") unless lambda lies in
/// III_anisotropic with l1 + l3 > 1. grid_size must be a power of two >= 64.
WindingFactorization factorize(const CouplingTriple& lambda, double alpha, std::size_t grid_size);

struct FactorizationCheck {
  double max_residual;        // sup |c/|c| - e^{i(w phi + f)}|
  double conj_residual;       // sup |c~/|c| - e^{-i(w phi + f)}|
  double mean_f;
  double unimodularity_defect;  // sup | |ratio| - 1 |
  int winding_number;         // total winding of c/|c| around T
};

/// Evaluates both displays on a grid. When grid_size matches the stored
/// samples those samples are used as-is (so corrupted samples are caught);
/// otherwise f comes from the Fourier series.
FactorizationCheck verify_factorization(const WindingFactorization& w, std::size_t grid_size);

/// Least-squares decay rate of a coefficient sequence: fits log of the upper
/// envelope max_{m >= n} |a_m| on the upper half of the range where it
/// exceeds floor, and converts the slope to a strip width delta0.
double fit_strip_width(const TrigSeries& series, double floor = 1e-13);

}  // namespace ehm
