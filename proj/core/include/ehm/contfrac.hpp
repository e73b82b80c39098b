#pragma once

// Continued fractions of rotation numbers: convergents p_m/q_m, the distance
// ||q_m alpha||, the growth exponent beta(alpha) = limsup ln(q_{m+1}) / q_m and
// the denominator subsequences used to make Birkhoff sums uniformly small.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ehm {

using BigInt = boost::multiprecision::cpp_int;

enum class CfSource { numeric, explicit_terms };

struct Convergent {
  BigInt p;
  BigInt q;
};

/// Continued fraction [0; a_1, a_2, ..., a_M] of a frequency in (0, 1).
///
/// Convergents are stored for m = 0..M with p_0/q_0 = 0/1, so
/// convergent(m) pairs with the partial quotient a_m (terms()[m-1]).
class FrequencyCF {
 public:
  FrequencyCF(double value, std::vector<BigInt> terms, CfSource source);

  double value() const { return value_; }
  CfSource source() const { return source_; }
  const std::vector<BigInt>& terms() const { return terms_; }
  const std::vector<Convergent>& convergents() const { return convergents_; }

  /// Index of the last convergent (= number of partial quotients).
  int depth() const { return static_cast<int>(terms_.size()); }

  const BigInt& p(int m) const { return convergents_.at(static_cast<std::size_t>(m)).p; }
  const BigInt& q(int m) const { return convergents_.at(static_cast<std::size_t>(m)).q; }
  double q_double(int m) const;

  /// ||q_m alpha||_T. Computed exactly from the stored rationals for explicit
  /// terms and with a single rounding (fma) for numeric expansions.
  double q_alpha_distance(int m) const;

 private:
  double value_;
  std::vector<BigInt> terms_;
  std::vector<Convergent> convergents_;
  CfSource source_;
};

/// Expands x in (0, 1) by the Gauss map applied exactly to the binary value
/// of x. The expansion stops once a further partial quotient would need
/// q_m * q_{m+1} > 1/eps, i.e. when 1/x_m > 1/(q_m^2 eps).
///
/// Throws DomainError("rational input") when x terminates exactly or the
/// precision floor is reached with q_m <= eps^(-1/4).
FrequencyCF cf_expand(double x, int max_terms);

/// Builds a frequency from explicit partial quotients a_1..a_M (all >= 1).
/// The value is the last convergent rounded to double.
FrequencyCF cf_from_terms(std::span<const BigInt> terms);
FrequencyCF cf_from_terms(std::span<const std::int64_t> terms);

/// Partial quotients a_1 = first, a_{m+1} = ceil(exp(q_m)), continued while
/// exp(q_m) stays representable. By construction ln q_{m+1} >= q_m.
std::vector<BigInt> liouville_terms(std::int64_t first, int max_terms);

/// Distance to the nearest integer, in [0, 1/2].
double dist_to_z(double x);

struct BetaEstimate {
  /// (q_m, ln(q_{m+1}) / q_m) for m >= tail_start.
  std::vector<std::pair<double, double>> samples;
  double beta = 0.0;
  int tail_start = 0;
};

/// Max of ln(q_{m+1})/q_m over the stored tail m >= tail_start.
BetaEstimate estimate_beta(const FrequencyCF& cf, int tail_start);

enum class SubsequenceRule { all, exponential_gap };

struct DenominatorSubsequence {
  std::vector<int> indices;
  SubsequenceRule rule = SubsequenceRule::all;
};

/// beta == 0 selects every stored m >= tail_start (the coboundary case).
/// beta > 0 selects exactly the m >= tail_start with q_{m+1} >= exp(beta/2 q_m)
/// and throws NumericalError("extend expansion") if none is stored.
DenominatorSubsequence select_subsequence(const FrequencyCF& cf, double beta, int tail_start = 0);

}  // namespace ehm
