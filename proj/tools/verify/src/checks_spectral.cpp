#include <algorithm>
#include <cmath>

#include "checks.hpp"
#include "ehm/cocycle.hpp"
#include "ehm/duality.hpp"
#include "ehm/model.hpp"
#include "ehm/spectral.hpp"
#include "ehm/verify/oracles.hpp"

namespace ehm::verify::detail {
namespace {

using nlohmann::json;

constexpr int kThetaGrid = 32;
constexpr int kKGrid = 8;

double distance_to_bands(double e, const std::vector<Band>& bands) {
  double d = INFINITY;
  for (const auto& b : bands) d = std::min(d, e < b.lo ? b.lo - e : (e > b.hi ? e - b.hi : 0.0));
  return d;
}

// Union over a theta grid of [min_k, max_k] of each ordered eigenvalue, the
// k-sweep done on a grid too. Converges to the measure from below.
double sampled_measure(const CouplingTriple& l, std::int64_t p, std::int64_t q, int theta_grid, int k_grid) {
  std::vector<Band> pieces;
  for (int i = 0; i < theta_grid; ++i) {
    const double theta = (i + 0.5) / (theta_grid * static_cast<double>(q));
    std::vector<double> lo(static_cast<std::size_t>(q), INFINITY), hi(static_cast<std::size_t>(q), -INFINITY);
    for (int j = 0; j < k_grid; ++j) {
      const auto ev = oracle::bloch_eigenvalues(l.l1(), l.l2(), l.l3(), p, q, theta, static_cast<double>(j) / k_grid);
      for (std::size_t b = 0; b < ev.size(); ++b) {
        lo[b] = std::min(lo[b], ev[b]);
        hi[b] = std::max(hi[b], ev[b]);
      }
    }
    for (std::size_t b = 0; b < lo.size(); ++b) pieces.push_back({lo[b], hi[b]});
  }
  std::sort(pieces.begin(), pieces.end(), [](const Band& a, const Band& b) { return a.lo < b.lo; });
  double total = 0.0, cur_lo = pieces.front().lo, cur_hi = pieces.front().hi;
  for (const auto& b : pieces) {
    if (b.lo > cur_hi) {
      total += cur_hi - cur_lo;
      cur_lo = b.lo;
      cur_hi = b.hi;
    } else {
      cur_hi = std::max(cur_hi, b.hi);
    }
  }
  return total + (cur_hi - cur_lo);
}

}  // namespace

CriterionResult check_spectral_duality(const SuiteOptions& o) {
  auto g = rng_for(o, 7);
  const std::pair<std::int64_t, std::int64_t> fractions[] = {{5, 8}, {8, 13}, {13, 21}};

  double worst = 0.0, containment = 0.0;
  std::size_t empty_bands = 0;
  json rows = json::array();
  for (int i = 0; i < 20; ++i) {
    const CouplingTriple l(uniform(g, 0.0, 2.0), uniform(g, 0.2, 3.0), uniform(g, 0.0, 2.0));
    json d = json::array();
    for (auto [p, q] : fractions) {
      const double h = duality_spectrum_check(l, p, q, kThetaGrid, kKGrid);
      worst = std::max(worst, h);
      d.push_back(h);
      if (i < 3) {
        // every eigenvalue of an independently built Bloch matrix lies in a
        // band, and every band holds one
        const auto spec = approximant_spectrum(l, p, q, kThetaGrid, kKGrid);
        std::vector<int> hit(spec.bands.size(), 0);
        for (int a = 0; a < 8; ++a) {
          for (int b = 0; b < 8; ++b) {
            const double theta = (a + 0.25) / (8.0 * static_cast<double>(q));
            for (double e : oracle::bloch_eigenvalues(l.l1(), l.l2(), l.l3(), p, q, theta, b / 8.0)) {
              containment = std::max(containment, distance_to_bands(e, spec.bands));
              for (std::size_t k = 0; k < spec.bands.size(); ++k) {
                if (e >= spec.bands[k].lo - 1e-9 && e <= spec.bands[k].hi + 1e-9) hit[k] = 1;
              }
            }
          }
        }
        empty_bands += static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 0));
      }
    }
    rows.push_back({{"lambda", {l.l1(), l.l2(), l.l3()}}, {"hausdorff", d}});
  }

  double self_dual = 0.0;
  for (auto [p, q] : fractions) self_dual = std::max(self_dual, duality_spectrum_check(CouplingTriple(0, 1, 0), p, q, kThetaGrid, kKGrid));

  CriterionResult r;
  r.status = verdict(worst < 1e-4 && self_dual < 1e-10 && containment < 1e-9 && empty_bands == 0);
  r.summary = "max Hausdorff distance " + sci(worst) + " over 20 couplings x {5/8, 8/13, 13/21}, self-dual " +
              sci(self_dual) + ", oracle containment " + sci(containment);
  r.data = {{"rows", rows},
            {"self_dual_distance", self_dual},
            {"oracle_containment", containment},
            {"bands_without_oracle_eigenvalue", empty_bands}};
  return r;
}

CriterionResult check_amo_lyapunov(const SuiteOptions&) {
  const double alpha = kGolden;
  constexpr std::int64_t kSteps = 1000000;
  constexpr std::size_t kSamples = 4;
  bool ok = true;
  double worst = 0.0;
  json cases = json::array();
  for (double l2 : {0.5, 2.0}) {
    const CouplingTriple lambda(0.0, l2, 0.0);
    const double target = std::log(std::max(1.0, 1.0 / l2));
    // energies at the centres of the three widest bands of the 610/987 approximant
    auto bands = approximant_spectrum(lambda, 610, 987, 16, 8).bands;
    std::sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) { return a.width() > b.width(); });
    json rows = json::array();
    for (std::size_t i = 0; i < 3 && i < bands.size(); ++i) {
      const double e = 0.5 * (bands[i].lo + bands[i].hi);
      const LyapunovEstimate le = lyapunov(lambda, e, alpha, kSteps, kSamples);
      const auto ref = oracle::amo_lyapunov_extrapolated(1.0 / l2, e / l2, alpha, {10000, 100000, 1000000}, 4);
      const double err = std::fabs(le.le_regularized - target);
      const bool row_ok = err <= 0.01 && std::fabs(ref.limit - target) <= 0.01 &&
                          std::fabs(le.le_regularized - ref.limit) <= 0.01;
      ok = ok && row_ok;
      worst = std::max(worst, err);
      rows.push_back({{"energy", e},
                      {"le_regularized", le.le_regularized},
                      {"le_raw", le.le_raw},
                      {"std_error", le.std_error},
                      {"oracle_limit", ref.limit},
                      {"oracle_points", ref.points}});
    }
    cases.push_back({{"lambda", {0.0, l2, 0.0}}, {"target", target}, {"rows", rows}});
  }
  CriterionResult r;
  r.status = verdict(ok);
  r.summary = "max |LE - target| " + sci(worst) + " at n = 1e6 (targets log 2 and 0), oracle extrapolation agrees";
  if (!ok) r.summary = "max |LE - target| " + sci(worst) + " at n = 1e6; tolerance 0.01 missed";
  r.data = {{"n", kSteps}, {"samples", kSamples}, {"cases", cases}};
  return r;
}

CriterionResult check_bandwidth_scaling(const SuiteOptions&) {
  const CouplingTriple lambda(0.0, 1.0, 0.0);
  const std::pair<std::int64_t, std::int64_t> fractions[] = {{5, 8}, {8, 13}, {13, 21}, {21, 34}, {34, 55}};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  json rows = json::array();
  double oracle_worst = 0.0;
  bool oracle_below = true;
  for (auto [p, q] : fractions) {
    const double m = approximant_spectrum(lambda, p, q, kThetaGrid, kKGrid).total_measure;
    const double x = std::log(static_cast<double>(q)), y = std::log(m);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    json row = {{"p", p}, {"q", q}, {"measure", m}};
    if (q <= 13) {
      const double ref = sampled_measure(lambda, p, q, 256, 16);
      oracle_below = oracle_below && ref <= m + 1e-9;
      oracle_worst = std::max(oracle_worst, 1.0 - ref / m);
      row["oracle_measure_lower"] = ref;
    }
    rows.push_back(row);
  }
  const double n = 5.0;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CriterionResult r;
  r.status = verdict(std::fabs(slope + 1.0) <= 0.2 && oracle_below && oracle_worst < 0.02);
  r.summary = "slope of log(measure) vs log q = " + sci(slope, 4) + " (need -1 +- 0.2), oracle shortfall " +
              sci(oracle_worst);
  r.data = {{"rows", rows}, {"slope", slope}};
  return r;
}

CriterionResult check_det_identity(const SuiteOptions&) {
  const double alpha = kGolden;
  const CouplingTriple lambda(0.1, 0.4, 0.2);
  const Phase theta = Phase::generic(0.1234);
  const TruncatedTestVector tv = central_eigenvector(lambda, alpha, theta, 3000);
  const TorusFunctionGrid u = sequence_to_torus(tv.sequence, tv.nmin, 16384);
  const DetIdentityReport rep = det_identity_check(lambda, alpha, theta, u);
  const DualResidual res = dual_equation_residual(lambda, alpha, theta.theta(), tv.energy, u);

  // u(x) = e^{2 pi i x} is no eigenfunction: det M must not be constant
  const std::vector<cd> plane = {cd(1.0)};
  const DetIdentityReport control = det_identity_check(lambda, alpha, theta, sequence_to_torus(plane, 1, 1024));

  bool singular_ok = true;
  json probes = json::array();
  for (const CouplingTriple& l : {CouplingTriple(0.3, 1.0, 0.7), CouplingTriple(1.0, 1.0, 1.0)}) {
    const SingularProbeReport p = singular_contradiction_probe(l, alpha);
    const auto ref = oracle::singular_rate(l.l1(), l.l2(), l.l3(), alpha);
    // The grid node nearest the zero jumps around as G doubles, so single
    // steps can dip; growth is required across every 16x refinement.
    bool growing = p.rows.size() > 4;
    for (std::size_t i = 4; i < p.rows.size(); ++i) growing = growing && p.rows[i].mean_inverse_abs_c > p.rows[i - 4].mean_inverse_abs_c;
    const bool ok = p.log_slope > 0.0 && growing && std::fabs(p.log_slope / ref.slope - 1.0) < 0.25;
    singular_ok = singular_ok && ok;
    json rows = json::array();
    for (const auto& row : p.rows) rows.push_back({row.grid, row.mean_inverse_abs_c});
    probes.push_back({{"lambda", {l.l1(), l.l2(), l.l3()}},
                      {"log_slope", p.log_slope},
                      {"oracle_slope", ref.slope},
                      {"oracle_zeros", ref.zeros},
                      {"grows_per_16x", growing},
                      {"rows", rows}});
  }

  CriterionResult r;
  r.status = verdict(rep.relative_variation < 0.05 && control.relative_variation > 0.5 && singular_ok);
  r.summary = "relative variation " + sci(rep.relative_variation) + " (control " + sci(control.relative_variation) +
              "), singular log-slopes " + sci(probes[0]["log_slope"].get<double>()) + ", " +
              sci(probes[1]["log_slope"].get<double>());
  r.data = {{"test_vector", {{"energy", tv.energy}, {"edge_mass", tv.edge_mass}, {"r1", res.r1}, {"r2", res.r2}}},
            {"b_estimate", rep.b_estimate},
            {"relative_variation", rep.relative_variation},
            {"control_relative_variation", control.relative_variation},
            {"singular_probes", probes}};
  return r;
}

CriterionResult check_point_spectrum(const SuiteOptions&) {
  const double alpha = kGolden;
  const CouplingTriple iso(1.0, 1.0, 1.0);
  const ProbeRow rational = probe_row(iso, alpha, Phase::alpha_rational(1, 0, alpha), 4000);
  const ProbeRow generic = probe_row(iso, alpha, Phase::generic(0.1234), 4000);
  const double contrast = rational.max_ipr / generic.max_ipr;

  const CouplingTriple aniso(0.2, 1.0, 1.0);
  json decay = json::array();
  std::vector<double> iprs;
  for (int n : {1000, 2000, 4000}) {
    const ProbeRow row = probe_row(aniso, alpha, Phase::generic(0.1234), n);
    iprs.push_back(row.max_ipr);
    decay.push_back({{"N", n}, {"max_ipr", row.max_ipr}, {"median_ipr", row.median_ipr}, {"states", row.states}});
  }
  const bool decaying = iprs[1] < iprs[0] && iprs[2] < iprs[1];

  auto row_json = [](const ProbeRow& p) {
    return json{{"theta", p.theta}, {"alpha_rational", p.alpha_rational}, {"N", p.N}, {"max_ipr", p.max_ipr},
                {"median_ipr", p.median_ipr}, {"states", p.states}, {"examined", p.examined}};
  };
  CriterionResult r;
  // Finite truncations cannot settle the spectral type, so a missing contrast
  // is reported as indeterminate rather than as a failure.
  r.status = contrast > 5.0 && decaying ? Status::pass : Status::indeterminate;
  r.summary = "IPR contrast (theta = a/2 vs 0.1234) " + sci(contrast) + " (expected > 5), anisotropic max IPR " +
              (decaying ? "decays" : "does not decay") + " over N = 1000, 2000, 4000";
  r.data = {{"isotropic", {{"rational", row_json(rational)}, {"generic", row_json(generic)}, {"contrast", contrast}}},
            {"anisotropic_decay", decay},
            {"decaying", decaying}};
  return r;
}

}  // namespace ehm::verify::detail
