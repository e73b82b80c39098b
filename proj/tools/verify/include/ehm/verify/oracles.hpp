#pragma once

// Reference computations for the acceptance checks. Each one rederives its
// quantity from the defining formula, without calling into the library path
// it is meant to check.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ehm::verify::oracle {

using BigInt = boost::multiprecision::cpp_int;
using cd = std::complex<double>;

/// num / den == x exactly, den a power of two.
struct Dyadic {
  BigInt num;
  BigInt den;
};

Dyadic exact_value(double x);

/// Partial quotients of num/den in (0, 1) by Euclid's algorithm.
std::vector<BigInt> euclid_terms(BigInt num, BigInt den);

struct LawCheck {
  bool lower;  // ||q a|| >= 1 / (2 q_next)
  bool upper;  // ||q a|| <= 1 / q_next
};

/// The convergent inequalities for a = num/den, decided in integers.
LawCheck convergent_law(const BigInt& num, const BigInt& den, const BigInt& q, const BigInt& q_next);

enum class Zone { I, II, III, boundary };

/// Open regions straight from the inequalities, boundary when any of them is
/// within margin of equality.
Zone strict_zone(double l1, double l2, double l3, double margin);

bool on_line_I(double l1, double l2, double l3, double tol);
bool on_line_II(double l1, double l2, double l3, double tol);
bool on_line_III(double l1, double l2, double l3, double tol);

/// c and c~ of sigma(l) written out in the original couplings:
/// c_s(x) = (l3 e^{-i phi} + 1 + l1 e^{i phi}) / l2, phi = 2 pi (x + a/2).
cd dual_c(double l1, double l2, double l3, double alpha, double x);
cd dual_c_tilde(double l1, double l2, double l3, double alpha, double x);

/// min |log|y|| / (2 pi) over the roots of l1 z^2 + z + l3, the zeros of c_s.
double predicted_strip_width(double l1, double l2, double l3);

/// sup_x |sum_{j<q} sum_k a_k sin(2 pi n_k (x + j a))| by direct summation in
/// long double on `grid` points, refined around the best candidates.
double direct_birkhoff_sup(const std::vector<std::pair<int, double>>& sines, double alpha, std::int64_t q,
                           std::size_t grid);

/// Lyapunov exponent of u_{n+1} + u_{n-1} + 2 k cos 2 pi (x + n a) u_n = e u_n,
/// averaged over `samples` phases, real arithmetic.
double amo_lyapunov(double coupling, double energy, double alpha, std::int64_t n, int samples);

struct Extrapolation {
  std::vector<std::pair<double, double>> points;  // (n, L(n))
  double limit;                                   // L(inf) from L(n) = L + a / n
};

Extrapolation amo_lyapunov_extrapolated(double coupling, double energy, double alpha,
                                        const std::vector<std::int64_t>& ns, int samples);

/// Zeros of c_s on the circle located on a fine grid and polished, with the
/// predicted growth rate sum 2 / |c_s'(x0)| of the grid mean of 1 / |c_s|
/// against log G.
struct SingularRate {
  std::vector<double> zeros;
  double slope;
};

SingularRate singular_rate(double l1, double l2, double l3, double alpha);

/// Eigenvalues of the q x q Bloch matrix at a = p / q, built entry by entry.
std::vector<double> bloch_eigenvalues(double l1, double l2, double l3, std::int64_t p, std::int64_t q, double theta,
                                      double k);

}  // namespace ehm::verify::oracle
