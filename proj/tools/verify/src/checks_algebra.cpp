#include <algorithm>
#include <climits>
#include <cmath>

#include "checks.hpp"
#include "ehm/contfrac.hpp"
#include "ehm/errors.hpp"
#include "ehm/model.hpp"
#include "ehm/verify/oracles.hpp"
#include "ehm/winding.hpp"

namespace ehm::verify::detail {
namespace {

using nlohmann::json;

struct LawTally {
  std::size_t pairs = 0;
  std::size_t exact_failures = 0;
  std::size_t float_failures = 0;
  std::size_t term_mismatches = 0;
  json first_failure;
};

// m = 1 .. top against the exact value num/den.
void tally_law(const FrequencyCF& cf, const oracle::BigInt& num, const oracle::BigInt& den, int top, LawTally& t) {
  for (int m = 1; m <= top; ++m) {
    const auto law = oracle::convergent_law(num, den, cf.q(m), cf.q(m + 1));
    const double d = cf.q_alpha_distance(m);
    const double qn = cf.q_double(m + 1);
    const bool float_ok = d >= 1.0 / (2.0 * qn) && d <= 1.0 / qn;
    ++t.pairs;
    if (!law.lower || !law.upper) ++t.exact_failures;
    if (!float_ok) ++t.float_failures;
    if ((!law.lower || !law.upper || !float_ok) && t.first_failure.is_null()) {
      t.first_failure = {{"alpha", cf.value()}, {"m", m}, {"q_m", cf.q(m).str()}, {"distance", d}};
    }
  }
}

json tally_json(const LawTally& t) {
  return {{"pairs", t.pairs},
          {"exact_failures", t.exact_failures},
          {"float_failures", t.float_failures},
          {"term_mismatches", t.term_mismatches},
          {"first_failure", t.first_failure}};
}

}  // namespace

CriterionResult check_continued_fractions(const SuiteOptions& o) {
  auto g = rng_for(o, 1);
  constexpr int kSamples = 1000;
  constexpr int kMaxM = 20;

  // Random doubles, checked against their exact binary values.
  LawTally numeric;
  int resampled = 0, min_depth = INT_MAX, max_top = 0;
  double mean_top = 0.0;
  for (int i = 0; i < kSamples;) {
    const double a = uniform(g, 0.0, 1.0);
    std::optional<FrequencyCF> cf;
    try {
      cf = cf_expand(a, 25);
    } catch (const DomainError&) {
      ++resampled;
      continue;
    }
    const auto exact = oracle::exact_value(a);
    const auto terms = oracle::euclid_terms(exact.num, exact.den);
    for (int m = 0; m < cf->depth(); ++m) {
      if (m >= static_cast<int>(terms.size()) || cf->terms()[static_cast<std::size_t>(m)] != terms[static_cast<std::size_t>(m)]) {
        ++numeric.term_mismatches;
        break;
      }
    }
    const int top = std::min(kMaxM, cf->depth() - 1);
    tally_law(*cf, exact.num, exact.den, top, numeric);
    min_depth = std::min(min_depth, cf->depth());
    max_top = std::max(max_top, top);
    mean_top += top;
    ++i;
  }
  mean_top /= kSamples;

  // Random partial quotients: the value is the rational p_M/q_M, so every
  // m <= 20 < M has an exact next denominator.
  LawTally explicit_terms;
  for (int i = 0; i < kSamples; ++i) {
    std::vector<std::int64_t> terms(kMaxM + 2);
    for (auto& t : terms) {
      // Gauss-Kuzmin-like draw, capped
      const double u = uniform(g, 1e-6, 1.0);
      t = std::min<std::int64_t>(static_cast<std::int64_t>(1.0 / u), 1000000);
    }
    const FrequencyCF cf = cf_from_terms(std::span<const std::int64_t>(terms));
    tally_law(cf, cf.p(cf.depth()), cf.q(cf.depth()), kMaxM, explicit_terms);
  }

  CriterionResult r;
  const std::size_t failures = numeric.exact_failures + numeric.float_failures + numeric.term_mismatches +
                               explicit_terms.exact_failures + explicit_terms.float_failures;
  r.status = verdict(failures == 0);
  r.summary = std::to_string(numeric.pairs + explicit_terms.pairs) + " (alpha, m) pairs, " + std::to_string(failures) +
              " failures (numeric m <= " + std::to_string(max_top) + ", explicit m <= 20)";
  r.data = {{"numeric", tally_json(numeric)},
            {"explicit", tally_json(explicit_terms)},
            {"resampled_rational", resampled},
            {"numeric_min_depth", min_depth},
            {"numeric_mean_m_max", mean_top}};
  return r;
}

CriterionResult check_duality_algebra(const SuiteOptions& o) {
  auto g = rng_for(o, 2);
  constexpr int kInvolution = 10000;
  constexpr int kInterior = 4000;
  constexpr int kPerLine = 2000;
  constexpr double kTol = 1e-12;

  double worst = 0.0;
  for (int i = 0; i < kInvolution; ++i) {
    const CouplingTriple l(uniform(g, 0.0, 3.0), uniform(g, 0.05, 4.0), uniform(g, 0.0, 3.0));
    const CouplingTriple b = sigma(sigma(l));
    const double scale = std::max({1.0, l.l1(), l.l2(), l.l3()});
    worst = std::max({worst, std::fabs(b.l1() - l.l1()) / scale, std::fabs(b.l2() - l.l2()) / scale,
                      std::fabs(b.l3() - l.l3()) / scale});
  }

  std::size_t failures = 0;
  json examples = json::array();
  auto fail = [&](const CouplingTriple& l, const char* what) {
    ++failures;
    if (examples.size() < 5) examples.push_back({{"lambda", {l.l1(), l.l2(), l.l3()}}, {"check", what}});
  };

  std::size_t counts[3] = {0, 0, 0};
  for (int i = 0; i < kInterior;) {
    const double l1 = uniform(g, 0.0, 2.0), l2 = uniform(g, 0.05, 3.0), l3 = uniform(g, 0.0, 2.0);
    const auto zone = oracle::strict_zone(l1, l2, l3, 1e-6);
    if (zone == oracle::Zone::boundary) continue;
    ++i;
    const CouplingTriple l(l1, l2, l3);
    const CouplingTriple s = sigma(l);
    const auto zs = oracle::strict_zone(s.l1(), s.l2(), s.l3(), 0.0);
    const RegionLabel a = classify(l), b = classify(s);
    if (!a.interior || !b.interior) fail(l, "interior flag");
    switch (zone) {
      case oracle::Zone::I:
        ++counts[0];
        if (a.region != Region::I || b.region != Region::II || zs != oracle::Zone::II) fail(l, "I -> II");
        break;
      case oracle::Zone::II:
        ++counts[1];
        if (a.region != Region::II || b.region != Region::I || zs != oracle::Zone::I) fail(l, "II -> I");
        break;
      default: {
        ++counts[2];
        const bool third = a.region == Region::III_isotropic || a.region == Region::III_anisotropic;
        if (!third || b.region != a.region || zs != oracle::Zone::III) fail(l, "III -> III");
      }
    }
  }

  for (int i = 0; i < kPerLine; ++i) {
    // L_I: l1 + l3 = 1, l2 <= 1, mapped onto L_III
    const double t = uniform(g, 0.0, 1.0);
    const CouplingTriple l(t, uniform(g, 0.05, 1.0), 1.0 - t);
    const CouplingTriple s = sigma(l);
    if (!classify(l).flags.has(BoundaryLine::L_I)) fail(l, "L_I flag");
    if (!classify(s).flags.has(BoundaryLine::L_III) || !oracle::on_line_III(s.l1(), s.l2(), s.l3(), kTol)) {
      fail(l, "L_I -> L_III");
    }
  }
  for (int i = 0; i < kPerLine; ++i) {
    // L_II: l2 = 1, l1 + l3 <= 1, mapped onto itself
    const double sum = uniform(g, 0.0, 1.0), t = uniform(g, 0.0, 1.0);
    const CouplingTriple l(t * sum, 1.0, (1.0 - t) * sum);
    const CouplingTriple s = sigma(l);
    if (!classify(l).flags.has(BoundaryLine::L_II)) fail(l, "L_II flag");
    if (!classify(s).flags.has(BoundaryLine::L_II) || !oracle::on_line_II(s.l1(), s.l2(), s.l3(), kTol)) {
      fail(l, "L_II -> L_II");
    }
  }
  for (int i = 0; i < kPerLine; ++i) {
    // L_III: 1 <= l1 + l3 = l2, mapped onto L_I
    const double l2 = uniform(g, 1.0, 4.0), t = uniform(g, 0.0, 1.0);
    const CouplingTriple l(t * l2, l2, l2 - t * l2);
    const CouplingTriple s = sigma(l);
    if (!classify(l).flags.has(BoundaryLine::L_III)) fail(l, "L_III flag");
    if (!classify(s).flags.has(BoundaryLine::L_I) || !oracle::on_line_I(s.l1(), s.l2(), s.l3(), kTol)) {
      fail(l, "L_III -> L_I");
    }
  }

  CriterionResult r;
  r.status = verdict(worst <= 1e-14 && failures == 0);
  r.summary = "involution defect " + sci(worst) + ", " + std::to_string(kInterior + 3 * kPerLine) +
              " region/line samples, " + std::to_string(failures) + " failures";
  r.data = {{"involution_max_relative_defect", worst},
            {"interior_counts", {{"I", counts[0]}, {"II", counts[1]}, {"III", counts[2]}}},
            {"line_samples_each", kPerLine},
            {"failures", failures},
            {"failure_examples", examples}};
  return r;
}

CriterionResult check_winding(const SuiteOptions& o) {
  auto g = rng_for(o, 3);
  constexpr int kSamples = 100;
  constexpr std::size_t kGrid = 4096;
  // Roots closer to the circle than this give coefficient decay too slow for
  // a 4096-point grid to resolve; such draws are redrawn and counted.
  constexpr double kMinStrip = 0.01;
  const double alpha = kGolden;

  int rejected = 0;
  std::size_t bad_residual = 0, bad_mean = 0, bad_strip = 0, bad_winding = 0;
  double worst_residual = 0.0, worst_oracle_residual = 0.0, worst_mean = 0.0, worst_strip_ratio = 0.0;
  json rows = json::array();
  for (int i = 0; i < kSamples;) {
    const double l2 = uniform(g, 0.2, 3.0);
    const double floor = std::max(1.0, l2);
    const double s = uniform(g, floor, 2.5 * floor);
    double t = uniform(g, 0.0, 1.0);
    if (std::fabs(t - 0.5) < 0.02 || s <= 1.0) continue;
    const double l1 = t * s, l3 = s - l1;
    const double predicted = oracle::predicted_strip_width(l1, l2, l3);
    if (predicted < kMinStrip) {
      ++rejected;
      continue;
    }
    ++i;
    const CouplingTriple lambda(l1, l2, l3);
    const WindingFactorization w = factorize(lambda, alpha, kGrid);
    const FactorizationCheck ck = verify_factorization(w, kGrid);

    // Same display with the dual symbol written out independently.
    double res = 0.0, mean = 0.0, turn = 0.0;
    cd prev = oracle::dual_c(l1, l2, l3, alpha, 0.0);
    for (std::size_t j = 0; j < kGrid; ++j) {
      const double x = static_cast<double>(j) / kGrid;
      const cd c = oracle::dual_c(l1, l2, l3, alpha, x);
      const double phase = w.winding * kTwoPi * (x + 0.5 * alpha) + w.f_samples[j];
      res = std::max(res, std::abs(c / std::abs(c) - std::polar(1.0, phase)));
      mean += w.f_samples[j];
      const cd next = oracle::dual_c(l1, l2, l3, alpha, static_cast<double>(j + 1) / kGrid);
      turn += std::arg(next / prev);
      prev = next;
    }
    mean /= kGrid;
    const int winding = static_cast<int>(std::lround(turn / kTwoPi));
    const int expected_winding = l3 > l1 ? -1 : 1;
    const double ratio = w.delta0 / predicted;

    if (std::max(ck.max_residual, res) >= 1e-10) ++bad_residual;
    if (std::max(std::fabs(ck.mean_f), std::fabs(mean)) >= 1e-10) ++bad_mean;
    if (!(w.delta0 > 0.0) || std::fabs(ratio - 1.0) > 0.2) ++bad_strip;
    if (winding != expected_winding || w.winding != expected_winding || ck.winding_number != w.winding) ++bad_winding;

    worst_residual = std::max(worst_residual, ck.max_residual);
    worst_oracle_residual = std::max(worst_oracle_residual, res);
    worst_mean = std::max({worst_mean, std::fabs(ck.mean_f), std::fabs(mean)});
    worst_strip_ratio = std::max(worst_strip_ratio, std::fabs(ratio - 1.0));
    rows.push_back({{"lambda", {l1, l2, l3}}, {"delta0", w.delta0}, {"predicted", predicted}, {"residual", res}});
  }

  CriterionResult r;
  const std::size_t failures = bad_residual + bad_mean + bad_strip + bad_winding;
  r.status = verdict(failures == 0);
  r.summary = "max residual " + sci(std::max(worst_residual, worst_oracle_residual)) + ", max |mean f| " +
              sci(worst_mean) + ", max |delta0/predicted - 1| " + sci(worst_strip_ratio) + ", " +
              std::to_string(failures) + " failures";
  r.data = {{"samples", rows},
            {"rejected_near_circle", rejected},
            {"min_predicted_strip", kMinStrip},
            {"failures",
             {{"residual", bad_residual}, {"mean", bad_mean}, {"strip", bad_strip}, {"winding", bad_winding}}}};
  return r;
}

}  // namespace ehm::verify::detail
