#pragma once

// Birkhoff sums S_q f(x) = f(x) + f(x + a) + ... + f(x + (q-1) a) of analytic
// torus functions, the coboundary solve for Diophantine-type frequencies and
// the Dirichlet-kernel bound used along fast-growing denominators.

#include <cstddef>
#include <utility>
#include <vector>

#include "ehm/contfrac.hpp"
#include "ehm/torus.hpp"

namespace ehm {

struct WindingFactorization;

struct AnalyticTorusFunction {
  TrigSeries fourier;
  double delta0 = 1.0;
  double c_bound = 0.0;  // |f^(n)| <= c_bound e^{-2 pi delta0 |n|} for all n != 0

  cd operator()(double x) const { return fourier(x); }
  double mean_abs() const { return std::abs(fourier.coeff(0)); }
  /// Upper bound for sup |f'| from the coefficients.
  double lipschitz() const;
};

/// Wraps a coefficient set, fitting delta0 on its decay (1 when fewer than two
/// modes are present) and taking the smallest admissible c_bound.
AnalyticTorusFunction make_analytic(TrigSeries fourier);
AnalyticTorusFunction make_analytic(const WindingFactorization& w);

/// sum_k a_k sin(2 pi n_k x) as an analytic torus function.
AnalyticTorusFunction sine_series(const std::vector<std::pair<int, double>>& terms);

/// n * alpha reduced to [-1/2, 1/2), with the product rounding error recovered
/// by fma so large n keep full absolute accuracy.
double frac_mul(double n, double alpha);

enum class SumMethod { direct, geometric };

/// S_q f(x). The direct path sums in index order with Kahan compensation; the
/// geometric path uses f^(n) (1 - e^{2 pi i n q a}) / (1 - e^{2 pi i n a}).
cd birkhoff_sum(const AnalyticTorusFunction& f, double alpha, double x, std::int64_t q,
                SumMethod method = SumMethod::geometric);

/// Coefficients of S_q f (same index range as f).
TrigSeries birkhoff_series(const AnalyticTorusFunction& f, double alpha, std::int64_t q);

struct SupEstimate {
  double grid_max;   // max over the grid of |S_q f|
  double certified;  // grid_max + Lipschitz(S_q f) h / 2, a true upper bound
  std::size_t grid;
};

/// sup_x |S_q f(x)| on a grid of max(4096, 8q) points (capped at 2^22) unless
/// grid is given.
SupEstimate birkhoff_sup(const AnalyticTorusFunction& f, double alpha, std::int64_t q, std::size_t grid = 0);

inline constexpr double kSmallDivisorThreshold = 1e-8;

/// h with h(x + a) - h(x) = f(x). Throws DomainError on a nonzero mean and
/// NumericalError("small divisor") when some stored |1 - e^{2 pi i n a}| falls
/// below the threshold.
AnalyticTorusFunction cohomological_solve(const AnalyticTorusFunction& f, double alpha,
                                          double threshold = kSmallDivisorThreshold);

struct Case2Bound {
  double stylized;   // c q^3 / q_{m+1} + c q e^{-2 pi delta0 q}
  double mid_proof;  // sum_{1<=|n|<q} c e^{-2 pi delta0 |n|} |Dirichlet ratio| + tail
};

/// Requires 1 <= m < cf.depth().
Case2Bound case2_bound(const AnalyticTorusFunction& f, const FrequencyCF& cf, int m);

/// Mid-proof bound alone; needs only q (no next denominator).
double mid_proof_bound(const AnalyticTorusFunction& f, double alpha, std::int64_t q);

struct BirkhoffRow {
  int m;
  double q;
  double sup;            // grid max
  double certified_sup;  // grid max plus Lipschitz margin
  double mid_proof_bound;
  double stylized_bound;  // NaN when q_{m+1} is not stored
};

struct BirkhoffReport {
  std::vector<BirkhoffRow> rows;
  bool decreasing = true;  // sup strictly decreasing along the rows
  bool within_bound = true;  // sup <= mid_proof_bound on every row
};

/// x_grid = 0 selects the default grid per q. Throws DomainError for a
/// nonzero mean or an empty subsequence.
BirkhoffReport verify_uniform_lemma(const AnalyticTorusFunction& f, const FrequencyCF& cf,
                                    const DenominatorSubsequence& sub, std::size_t x_grid = 0);

}  // namespace ehm
