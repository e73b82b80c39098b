#include "ehm/torus.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

#include "ehm/errors.hpp"
#include "ehm/model.hpp"

namespace ehm {

TrigSeries::TrigSeries(int nmin, std::vector<cd> coeffs) : nmin_(nmin), coeffs_(std::move(coeffs)) {}

cd TrigSeries::coeff(int n) const {
  const long idx = static_cast<long>(n) - nmin_;
  if (idx < 0 || idx >= static_cast<long>(coeffs_.size())) return {};
  return coeffs_[static_cast<std::size_t>(idx)];
}

cd TrigSeries::operator()(double x) const {
  if (coeffs_.empty()) return {};
  x -= std::floor(x);
  const cd step = std::polar(1.0, kTwoPi * x);
  // Horner in e^{2 pi i x}, then shift by e^{2 pi i nmin x}.
  cd acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * step + *it;
  return acc * std::polar(1.0, kTwoPi * std::fmod(static_cast<double>(nmin_) * x, 1.0));
}

TrigSeries TrigSeries::shifted(double s) const {
  std::vector<cd> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double n = static_cast<double>(nmin_ + static_cast<int>(i));
    const double t = std::fmod(n * s, 1.0);
    out[i] = coeffs_[i] * std::polar(1.0, kTwoPi * t);
  }
  return {nmin_, std::move(out)};
}

TrigSeries TrigSeries::reflected() const {
  std::vector<cd> out(coeffs_.rbegin(), coeffs_.rend());
  return {-nmax(), std::move(out)};
}

TrigSeries TrigSeries::scaled(cd factor) const {
  std::vector<cd> out(coeffs_);
  for (auto& c : out) c *= factor;
  return {nmin_, std::move(out)};
}

TrigSeries operator*(const TrigSeries& a, const TrigSeries& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cd> out(a.size() + b.size() - 1, cd{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return {a.nmin_ + b.nmin_, std::move(out)};
}

TrigSeries operator+(const TrigSeries& a, const TrigSeries& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const int lo = std::min(a.nmin(), b.nmin());
  const int hi = std::max(a.nmax(), b.nmax());
  std::vector<cd> out(static_cast<std::size_t>(hi - lo + 1));
  for (int n = lo; n <= hi; ++n) out[static_cast<std::size_t>(n - lo)] = a.coeff(n) + b.coeff(n);
  return {lo, std::move(out)};
}

std::vector<cd> TrigSeries::sample(std::size_t grid) const {
  if (grid == 0) throw DomainError("TrigSeries::sample: empty grid");
  std::vector<cd> spectrum(grid, cd{});
  const long g = static_cast<long>(grid);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    long n = static_cast<long>(nmin_) + static_cast<long>(i);
    n %= g;
    if (n < 0) n += g;
    spectrum[static_cast<std::size_t>(n)] += coeffs_[i];
  }
  return inverse_dft(spectrum);
}

double TrigSeries::l2_norm_squared() const {
  double acc = 0.0;
  for (const auto& c : coeffs_) acc += std::norm(c);
  return acc;
}

std::vector<cd> inverse_dft(std::span<const cd> spectrum) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cd> in(spectrum.begin(), spectrum.end());
  std::vector<cd> out;
  fft.inv(out, in);
  return out;
}

TrigSeries fourier_coefficients(std::span<const cd> samples) {
  const std::size_t g = samples.size();
  if (g == 0) throw DomainError("fourier_coefficients: empty sample set");
  Eigen::FFT<double> fft;
  std::vector<cd> in(samples.begin(), samples.end());
  std::vector<cd> spec;
  fft.fwd(spec, in);
  const long half = static_cast<long>(g / 2);
  std::vector<cd> out(g);
  for (long n = -half; n < static_cast<long>(g) - half; ++n) {
    long idx = n < 0 ? n + static_cast<long>(g) : n;
    out[static_cast<std::size_t>(n + half)] = spec[static_cast<std::size_t>(idx)] / static_cast<double>(g);
  }
  return {static_cast<int>(-half), std::move(out)};
}

TrigSeries fourier_coefficients(std::span<const double> samples) {
  std::vector<cd> c(samples.begin(), samples.end());
  return fourier_coefficients(std::span<const cd>(c));
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace ehm
