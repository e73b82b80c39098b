#include "ehm/contfrac.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ehm/errors.hpp"

namespace ehm {
namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// eps^(-1/4) for IEEE double: a precision stop below this denominator means
// the input was a low-height rational.
const BigInt kRationalHeight = BigInt(1) << 13;

double log_big(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  const auto bits = boost::multiprecision::msb(x);
  if (bits < 1000) return std::log(static_cast<double>(x));
  const auto shift = bits - 60;
  const BigInt top = x >> shift;
  return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::log(2.0);
}

std::vector<Convergent> build_convergents(const std::vector<BigInt>& terms) {
  std::vector<Convergent> out;
  out.reserve(terms.size() + 1);
  BigInt p_prev = 1, q_prev = 0;
  BigInt p_cur = 0, q_cur = 1;
  out.push_back({p_cur, q_cur});
  for (const auto& a : terms) {
    BigInt p_next = a * p_cur + p_prev;
    BigInt q_next = a * q_cur + q_prev;
    p_prev = std::move(p_cur);
    q_prev = std::move(q_cur);
    p_cur = std::move(p_next);
    q_cur = std::move(q_next);
    out.push_back({p_cur, q_cur});
  }
  return out;
}

}  // namespace

FrequencyCF::FrequencyCF(double value, std::vector<BigInt> terms, CfSource source)
    : value_(value), terms_(std::move(terms)), source_(source) {
  convergents_ = build_convergents(terms_);
}

double FrequencyCF::q_double(int m) const { return static_cast<double>(q(m)); }

double FrequencyCF::q_alpha_distance(int m) const {
  double d = 0.0;
  if (source_ == CfSource::explicit_terms) {
    const auto& last = convergents_.back();
    const BigInt num = abs(q(m) * last.p - p(m) * last.q);
    d = static_cast<double>(BigFloat(num) / BigFloat(last.q));
  } else {
    d = std::fabs(std::fma(q_double(m), value_, -static_cast<double>(p(m))));
  }
  d = std::fmod(d, 1.0);
  return std::min(d, 1.0 - d);
}

FrequencyCF cf_expand(double x, int max_terms) {
  if (max_terms < 1) throw DomainError("cf_expand: max_terms must be >= 1");
  if (!(x > 0.0 && x < 1.0)) throw DomainError("cf_expand: x must lie in (0, 1)");

  // x = mantissa * 2^(exp - 53) exactly.
  int exponent = 0;
  const double frac = std::frexp(x, &exponent);
  BigInt num = static_cast<std::int64_t>(std::ldexp(frac, 53));
  BigInt den = BigInt(1) << (53 - exponent);
  const BigInt inv_eps = BigInt(1) << 52;

  std::vector<BigInt> terms;
  BigInt q_prev = 0, q_cur = 1;
  bool rational = false;
  while (true) {
    if (num == 0) {
      rational = true;
      break;
    }
    // 1/x_m > 1/(q_m^2 eps)  <=>  den * q_m^2 > num / eps
    if (den * q_cur * q_cur > num * inv_eps) {
      rational = q_cur <= kRationalHeight;
      break;
    }
    BigInt a = den / num;
    BigInt r = den % num;
    den = std::move(num);
    num = std::move(r);
    BigInt q_next = a * q_cur + q_prev;
    q_prev = std::move(q_cur);
    q_cur = std::move(q_next);
    terms.push_back(std::move(a));
  }
  if (rational || terms.empty()) throw DomainError("cf_expand: rational input");
  if (static_cast<int>(terms.size()) > max_terms) terms.resize(static_cast<std::size_t>(max_terms));
  return FrequencyCF(x, std::move(terms), CfSource::numeric);
}

FrequencyCF cf_from_terms(std::span<const BigInt> terms) {
  if (terms.empty()) throw DomainError("cf_from_terms: need at least one partial quotient");
  for (const auto& a : terms) {
    if (a < 1) throw DomainError("cf_from_terms: partial quotients must be >= 1");
  }
  std::vector<BigInt> owned(terms.begin(), terms.end());
  const auto conv = build_convergents(owned);
  const double value = static_cast<double>(BigFloat(conv.back().p) / BigFloat(conv.back().q));
  return FrequencyCF(value, std::move(owned), CfSource::explicit_terms);
}

FrequencyCF cf_from_terms(std::span<const std::int64_t> terms) {
  std::vector<BigInt> big(terms.begin(), terms.end());
  return cf_from_terms(std::span<const BigInt>(big));
}

std::vector<BigInt> liouville_terms(std::int64_t first, int max_terms) {
  if (first < 1 || max_terms < 1) throw DomainError("liouville_terms: need first >= 1, max_terms >= 1");
  std::vector<BigInt> terms{BigInt(first)};
  BigInt q_prev = 1, q_cur = first;
  while (static_cast<int>(terms.size()) < max_terms && q_cur <= 700) {
    const double e = std::exp(static_cast<double>(q_cur)) * (1.0 + 4.0 * kEps);
    BigInt a(std::ceil(e));
    BigInt q_next = a * q_cur + q_prev;
    q_prev = std::move(q_cur);
    q_cur = std::move(q_next);
    terms.push_back(std::move(a));
  }
  return terms;
}

double dist_to_z(double x) {
  const double r = x - std::nearbyint(x);
  return std::fabs(r);
}

BetaEstimate estimate_beta(const FrequencyCF& cf, int tail_start) {
  if (tail_start < 0) throw DomainError("estimate_beta: tail_start must be >= 0");
  if (cf.depth() < tail_start + 1) throw DomainError("estimate_beta: too few convergents");
  BetaEstimate est;
  est.tail_start = tail_start;
  for (int m = tail_start; m < cf.depth(); ++m) {
    const double q = cf.q_double(m);
    const double s = log_big(cf.q(m + 1)) / q;
    est.samples.emplace_back(q, s);
    est.beta = std::max(est.beta, s);
  }
  return est;
}

DenominatorSubsequence select_subsequence(const FrequencyCF& cf, double beta, int tail_start) {
  if (!(beta >= 0.0)) throw DomainError("select_subsequence: beta must be >= 0");
  if (tail_start < 0) throw DomainError("select_subsequence: tail_start must be >= 0");
  DenominatorSubsequence sub;
  if (beta == 0.0) {
    sub.rule = SubsequenceRule::all;
    for (int m = tail_start; m <= cf.depth(); ++m) sub.indices.push_back(m);
    return sub;
  }
  sub.rule = SubsequenceRule::exponential_gap;
  for (int m = tail_start; m < cf.depth(); ++m) {
    if (log_big(cf.q(m + 1)) >= 0.5 * beta * cf.q_double(m)) sub.indices.push_back(m);
  }
  if (sub.indices.empty()) throw NumericalError("select_subsequence: extend expansion");
  return sub;
}

}  // namespace ehm
