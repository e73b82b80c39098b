#include "ehm/winding.hpp"

#include <algorithm>
#include <cmath>

#include "ehm/errors.hpp"

namespace ehm {
namespace {

double root_phase_sum(const DualRoots& roots, double phi) {
  const cd z = std::polar(1.0, phi);
  double acc = 0.0;
  // |z / y| < 1, so 1 - z/y has positive real part and a principal argument
  // in (-pi/2, pi/2): no unwrapping is needed and the mean is zero.
  for (const auto& y : roots.roots) acc += std::arg(1.0 - z / y);
  return acc;
}

// Ratio [(z - y+)(z - y-)] / [(1/z - y+)(1/z - y-)] for |z| = 1.
cd root_ratio(const DualRoots& roots, double phi) {
  const cd z = std::polar(1.0, phi);
  cd num = 1.0, den = 1.0;
  for (const auto& y : roots.roots) {
    num *= (z - y);
    den *= (1.0 / z - y);
  }
  return num / den;
}

}  // namespace

double WindingFactorization::f(double theta) const {
  const double t = theta + 0.5 * alpha;
  const double phi = kTwoPi * (t - std::floor(t));
  return convention == ReflectionConvention::direct ? root_phase_sum(roots, phi) : root_phase_sum(roots, -phi);
}

double fit_strip_width(const TrigSeries& series, double floor) {
  const int nmax = std::max(std::abs(series.nmin()), std::abs(series.nmax()));
  std::vector<double> amp(static_cast<std::size_t>(nmax) + 1, 0.0);
  for (int n = 1; n <= nmax; ++n) {
    amp[static_cast<std::size_t>(n)] = std::max(std::abs(series.coeff(n)), std::abs(series.coeff(-n)));
  }
  int last = 0;
  for (int n = 1; n <= nmax; ++n) {
    if (amp[static_cast<std::size_t>(n)] > floor) last = n;
  }
  if (last < 2) return 1.0;
  // upper envelope, monotone non-increasing
  std::vector<double> env(static_cast<std::size_t>(last) + 1, 0.0);
  double running = 0.0;
  for (int n = last; n >= 1; --n) {
    running = std::max(running, amp[static_cast<std::size_t>(n)]);
    env[static_cast<std::size_t>(n)] = running;
  }
  const int lo = std::max(1, (last + 1) / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = lo; n <= last; ++n) {
    const double x = n;
    const double y = std::log(env[static_cast<std::size_t>(n)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return 1.0;
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return std::max(-slope / kTwoPi, 1e-6);
}

WindingFactorization factorize(const CouplingTriple& lambda, double alpha, std::size_t grid_size) {
  const auto label = classify(lambda);
  const double s = lambda.hopping_sum();
  if (label.region != Region::III_anisotropic || !(s > 1.0 + kLineTolerance * std::max(1.0, s))) {
    throw DomainError("factorize: factorization not defined");
  }
  if (grid_size < 64 || !is_power_of_two(grid_size)) {
    throw DomainError("factorize: grid_size must be a power of two >= 64");
  }
  const bool direct = lambda.l3() > lambda.l1();
  const CouplingTriple used = direct ? lambda : CouplingTriple(lambda.l3(), lambda.l2(), lambda.l1());
  DualRoots roots = dual_symbol_roots(used);
  for (const auto& y : roots.roots) {
    if (!(std::abs(y) > 1.0)) throw NumericalError("factorize: dual root on or inside the unit circle");
  }

  WindingFactorization w{lambda,
                         alpha,
                         std::move(roots),
                         direct ? ReflectionConvention::direct : ReflectionConvention::reflected,
                         direct ? -1 : 1,
                         {},
                         {},
                         0.0,
                         0.0};
  w.f_samples.resize(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    w.f_samples[j] = w.f(static_cast<double>(j) / static_cast<double>(grid_size));
  }

  const TrigSeries full = fourier_coefficients(std::span<const double>(w.f_samples));
  int cutoff = 0;
  const int half = static_cast<int>(grid_size / 2) - 1;
  for (int n = 1; n <= half; ++n) {
    if (std::max(std::abs(full.coeff(n)), std::abs(full.coeff(-n))) > 1e-13) cutoff = n;
  }
  std::vector<cd> kept(static_cast<std::size_t>(2 * cutoff + 1));
  for (int n = -cutoff; n <= cutoff; ++n) {
    kept[static_cast<std::size_t>(n + cutoff)] = n == 0 ? cd{} : full.coeff(n);
  }
  w.f_fourier = TrigSeries(-cutoff, std::move(kept));
  w.delta0 = fit_strip_width(w.f_fourier);
  for (int n = -cutoff; n <= cutoff; ++n) {
    if (n == 0) continue;
    w.c_bound = std::max(w.c_bound, std::abs(w.f_fourier.coeff(n)) * std::exp(kTwoPi * w.delta0 * std::abs(n)));
  }
  return w;
}

FactorizationCheck verify_factorization(const WindingFactorization& w, std::size_t grid_size) {
  if (grid_size == 0) throw DomainError("verify_factorization: empty grid");
  const Symbol dual(sigma(w.couplings), w.alpha);
  const bool use_samples = grid_size == w.f_samples.size();
  FactorizationCheck out{0.0, 0.0, 0.0, 0.0, 0};
  double f_sum = 0.0;
  double arg_increments = 0.0;
  cd prev_ratio{};
  cd first_ratio{};
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double theta = static_cast<double>(j) / static_cast<double>(grid_size);
    const double f = use_samples ? w.f_samples[j] : w.f_fourier(theta).real();
    f_sum += f;
    const double t = theta + 0.5 * w.alpha;
    const double phi = kTwoPi * (t - std::floor(t));
    const cd c = dual.c(theta);
    const double mod = std::abs(c);
    const cd ratio = c / mod;
    const cd ratio_tilde = dual.c_tilde(theta) / mod;
    const cd expected = std::polar(1.0, w.winding * phi + f);
    out.max_residual = std::max(out.max_residual, std::abs(ratio - expected));
    out.conj_residual = std::max(out.conj_residual, std::abs(ratio_tilde - std::conj(expected)));
    const DualRoots& r = w.roots;
    const double mirrored_phi = w.convention == ReflectionConvention::direct ? phi : -phi;
    out.unimodularity_defect = std::max(out.unimodularity_defect, std::fabs(std::abs(root_ratio(r, mirrored_phi)) - 1.0));
    if (j == 0) {
      first_ratio = ratio;
    } else {
      arg_increments += std::arg(ratio / prev_ratio);
    }
    prev_ratio = ratio;
  }
  arg_increments += std::arg(first_ratio / prev_ratio);
  out.mean_f = f_sum / static_cast<double>(grid_size);
  out.winding_number = static_cast<int>(std::lround(arg_increments / kTwoPi));
  return out;
}

}  // namespace ehm
