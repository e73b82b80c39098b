#pragma once

// Transfer-matrix cocycles over the rotation x -> x + a.
//
// transfer_matrix builds the dual matrix A_{s, E/l2}(x), s = sigma(lambda):
//   A(x) = (1 / c_s(x)) [[E/l2 - 2 cos 2 pi x, -c~_s(x - a)], [c_s(x), 0]],
// operator_transfer_matrix the same display for H_lambda's own symbol at E.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "ehm/model.hpp"

namespace ehm {

struct WindingFactorization;

using Mat2 = Eigen::Matrix2cd;

inline constexpr double kSymbolZeroCutoff = 1e-12;
inline constexpr int kRenormalizeEvery = 32;

/// Throws NumericalError("symbol zero at x") when |c_s(x)| < 1e-12.
Mat2 transfer_matrix(const CouplingTriple& lambda, double E, double alpha, double x);
Mat2 operator_transfer_matrix(const CouplingTriple& lambda, double E, double alpha, double x);

/// The same display for an arbitrary symbol at energy parameter e.
Mat2 symbol_transfer_matrix(const Symbol& s, double e, double x);

struct CocycleOrbit {
  double x = 0.0;
  std::int64_t n = 0;
  /// P_n = e^{log_scale} * normalized.
  Mat2 normalized = Mat2::Identity();
  long double log_scale = 0.0L;
  /// log ||P_k|| at every renormalization step k = 32, 64, ...
  std::vector<double> log_norm_trace;
  /// det P_n accumulated factor by factor, in log-polar form.
  long double det_log_abs = 0.0L;
  double det_arg = 0.0;

  long double log_norm() const;
  /// The unscaled product; only meaningful while it stays in range.
  Mat2 product() const;
};

/// P_n(x) = A(x + (n-1) a) ... A(x) of the dual cocycle. Throws
/// NumericalError naming the step at which a symbol zero is met.
CocycleOrbit iterate(const CouplingTriple& lambda, double E, double alpha, double x, std::int64_t n);

struct LyapunovEstimate {
  double energy;
  std::int64_t n_steps;
  std::size_t samples;
  double le_raw;             // growth rate of the polynomial (numerator) cocycle
  double le_regularized;     // le_raw - log_mean_abs_c
  double log_mean_abs_c;     // root formula
  double log_mean_abs_c_quadrature;
  double std_error;          // spread of per-sample rates / sqrt(samples)
};

/// Mean of log|c_lambda| over the circle by tanh-sinh quadrature split at the
/// real zeros of the symbol.
double mean_log_abs_symbol_quadrature(const CouplingTriple& lambda, double alpha);

/// Lyapunov exponent of H_lambda's cocycle at energy E, averaged over
/// `samples` phases x_s = (s + 1/2) / samples. The numerator cocycle
/// c(x) A(x) is iterated and the mean of log|c| subtracted; the two ways of
/// computing that mean must agree to 1e-8 (else NumericalError).
/// Requires n >= 1000.
LyapunovEstimate lyapunov(const CouplingTriple& lambda, double E, double alpha, std::int64_t n,
                          std::size_t samples);

/// log ||P_n|| / n for the numerator cocycle of H_lambda at a single phase.
double numerator_growth_rate(const CouplingTriple& lambda, double E, double alpha, double x, std::int64_t n);

struct LogPolar {
  double log_abs = 0.0;
  double arg = 0.0;  // in (-pi, pi]
  cd value() const { return std::polar(std::exp(log_abs), arg); }
};

/// prod_{j=-1}^{k-2} c~_s(x + j a) / prod_{j=0}^{k-1} c_s(x + j a), s = sigma(lambda),
/// the k-step multiplier of the one-step law g(x + a) = c~_s(x - a)/c_s(x) g(x).
LogPolar cascade_ratio(const CouplingTriple& lambda, double alpha, double x, std::int64_t k);

/// |g(x + k a) - ratio g(x)| / max(|g(x + k a)|, |ratio g(x)|).
double det_cascade_check(const CouplingTriple& lambda, double alpha, double x, std::int64_t k,
                         const std::function<cd(double)>& g);

/// Values g(x + j a), j = 0..k, generated from g(x) = g0 by the one-step law
/// with plain complex multiplication (no log-polar bookkeeping).
std::vector<cd> one_step_orbit(const CouplingTriple& lambda, double alpha, double x, cd g0, std::int64_t k);

/// sup over x_j = j / grid of the distance between the unimodular part of the
/// q-step ratio and e^{-i w 2 pi (2 q x + q (q-1) a) - i (S_q f(x - a) + S_q f(x))}.
double cascade_unimodular_residual(const WindingFactorization& w, std::int64_t q, std::size_t grid);

/// sup over the grid of | |c|(x - a)/|c|(x + (q-1) a) e^{-i(S_q f(x - a) + S_q f(x))} e^{i w 2 pi q a} - 1 |,
/// the factor that tends to 1 along good denominators; evaluated as
/// | ratio_q(x) e^{i w 2 pi (2 q x + q^2 a)} - 1 |.
double convergence_factor_deviation(const WindingFactorization& w, std::int64_t q, std::size_t grid);

}  // namespace ehm
