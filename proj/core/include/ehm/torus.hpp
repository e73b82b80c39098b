#pragma once

// Finite Fourier series on the circle T = R/Z and their uniform-grid samples.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ehm {

using cd = std::complex<double>;

/// f(x) = sum_{n = nmin}^{nmin + size - 1} coeff_n e^{2 pi i n x}.
class TrigSeries {
 public:
  TrigSeries() = default;
  TrigSeries(int nmin, std::vector<cd> coeffs);

  int nmin() const { return nmin_; }
  int nmax() const { return nmin_ + static_cast<int>(coeffs_.size()) - 1; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  const std::vector<cd>& coeffs() const { return coeffs_; }

  /// Coefficient of e^{2 pi i n x}; zero outside the stored range.
  cd coeff(int n) const;

  cd operator()(double x) const;

  /// x -> f(x + s), exact on the coefficients.
  TrigSeries shifted(double s) const;
  /// x -> f(-x).
  TrigSeries reflected() const;
  TrigSeries scaled(cd factor) const;

  friend TrigSeries operator*(const TrigSeries& a, const TrigSeries& b);
  friend TrigSeries operator+(const TrigSeries& a, const TrigSeries& b);

  /// Samples at x_j = j / G. Exact for any G: coefficients are folded mod G.
  std::vector<cd> sample(std::size_t grid) const;

  double l2_norm_squared() const;

 private:
  int nmin_ = 0;
  std::vector<cd> coeffs_;
};

/// Coefficients f^(n), n in [-G/2, G/2), of the trigonometric interpolant of
/// samples on x_j = j / G.
TrigSeries fourier_coefficients(std::span<const cd> samples);
TrigSeries fourier_coefficients(std::span<const double> samples);

/// Unnormalised inverse DFT: out_j = sum_k in_k e^{2 pi i j k / G}.
std::vector<cd> inverse_dft(std::span<const cd> spectrum);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace ehm
