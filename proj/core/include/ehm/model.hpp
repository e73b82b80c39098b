#pragma once

// Couplings lambda = (l1, l2, l3) of the extended Harper's model
//   (H u)_n = c(theta + n a) u_{n+1} + conj c(theta + (n-1) a) u_{n-1} + v(theta + n a) u_n
// with c(t) = l1 e^{-2 pi i (t + a/2)} + l2 + l3 e^{2 pi i (t + a/2)} and
// v(t) = 2 cos 2 pi t; their region taxonomy, the duality map and the symbols.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ehm {

using cd = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Relative tolerance for the boundary-line equalities (l1+l3 = 1, l2 = 1,
/// l1+l3 = l2). Isotropy l1 == l3 is always exact.
inline constexpr double kLineTolerance = 1e-12;

class CouplingTriple {
 public:
  /// Throws DomainError unless l1 >= 0, l3 >= 0, l2 > 0 (all finite).
  CouplingTriple(double l1, double l2, double l3);

  double l1() const { return l1_; }
  double l2() const { return l2_; }
  double l3() const { return l3_; }
  double hopping_sum() const { return l1_ + l3_; }
  bool isotropic() const { return l1_ == l3_; }

  friend bool operator==(const CouplingTriple&, const CouplingTriple&) = default;

 private:
  double l1_;
  double l2_;
  double l3_;
};

enum class Region { I, II, III_isotropic, III_anisotropic };

enum class BoundaryLine : std::uint8_t { L_I = 1, L_II = 2, L_III = 4 };

class LineFlags {
 public:
  LineFlags() = default;
  void set(BoundaryLine l) { bits_ |= static_cast<std::uint8_t>(l); }
  bool has(BoundaryLine l) const { return (bits_ & static_cast<std::uint8_t>(l)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::vector<std::string> names() const;
  friend bool operator==(const LineFlags&, const LineFlags&) = default;

 private:
  std::uint8_t bits_ = 0;
};

struct RegionLabel {
  Region region;
  LineFlags flags;
  bool interior;
};

std::string to_string(Region r);

/// Closed regions overlap on the lines, so one label is picked with precedence
/// III, then II, then I; every line the point lies on is flagged.
RegionLabel classify(const CouplingTriple& lambda);

/// sigma(l1, l2, l3) = (l3/l2, 1/l2, l1/l2).
CouplingTriple sigma(const CouplingTriple& lambda);

bool on_line(const CouplingTriple& lambda, BoundaryLine line);

/// Phase theta in [0, 1). An alpha-rational phase (2 theta = j alpha + k) is
/// only ever constructed, never inferred from a float.
class Phase {
 public:
  enum class Kind { generic, alpha_rational };

  static Phase generic(double theta);
  static Phase alpha_rational(int j, int k, double alpha);

  double theta() const { return theta_; }
  Kind kind() const { return kind_; }
  bool is_alpha_rational() const { return kind_ == Kind::alpha_rational; }
  int j() const { return j_; }
  int k() const { return k_; }

 private:
  Phase(double theta, Kind kind, int j, int k) : theta_(theta), kind_(kind), j_(j), k_(k) {}
  double theta_;
  Kind kind_;
  int j_ = 0;
  int k_ = 0;
};

/// Advisory search for |j|, |k| <= bound with dist(2 theta - j alpha) <= tol.
std::optional<std::pair<int, int>> detect_alpha_rational(double theta, double alpha, int bound, double tol);

enum class SymbolKind { c, c_tilde, abs_c, potential_v };

/// c, c~, |c| and v for one coupling triple and frequency. Arguments may be
/// complex; c~ is the analytic continuation of conj(c) off the real axis.
class Symbol {
 public:
  Symbol(CouplingTriple lambda, double alpha) : lambda_(lambda), alpha_(alpha) {}

  const CouplingTriple& couplings() const { return lambda_; }
  double alpha() const { return alpha_; }

  cd c(cd theta) const;
  cd c_tilde(cd theta) const;
  /// sqrt(c c~), positive on the real axis and continued vertically off it.
  /// Throws NumericalError("branch undefined") when c c~ vanishes off-axis.
  cd abs_c(cd theta) const;
  cd v(cd theta) const;

  cd c(double theta) const;
  cd c_tilde(double theta) const;
  double abs_c(double theta) const { return std::abs(c(theta)); }
  double v(double theta) const;

  cd eval(SymbolKind kind, cd theta) const;

 private:
  CouplingTriple lambda_;
  double alpha_;
};

/// Roots of l1 z^2 + z + l3 (the dual symbol is (1/l2) e^{-i phi} times this
/// polynomial at z = e^{i phi}), ordered by modulus. For l1 = 0 the single
/// root -l3 is returned with degenerate = true.
struct DualRoots {
  std::vector<cd> roots;
  bool degenerate = false;

  const cd& small() const { return roots.front(); }
  const cd& big() const { return roots.back(); }
};

DualRoots dual_symbol_roots(const CouplingTriple& lambda);

struct TorusRoot {
  double theta;
  int multiplicity;
};

/// All theta in [0, 1) with c_lambda(theta) = 0, solved from the symbol's
/// real/imaginary parts: isotropic triples give 2 l3 cos 2 pi (theta + a/2) = -l2,
/// anisotropic ones a single root theta = 1/2 - a/2 on l1 + l3 = l2.
std::vector<TorusRoot> real_roots_on_torus(const CouplingTriple& lambda, double alpha);

/// True iff lambda is in III_isotropic or in III_anisotropic with l1 + l3 = 1.
/// Within region III this is exactly when c_{sigma(lambda)} vanishes on the
/// circle. Outside it the dual symbol can still vanish (l1 + l3 = 1 with
/// l2 > 1, say), but those points are not reported here.
bool dual_has_singularity(const CouplingTriple& lambda);

/// Mean of log|c_lambda| over the circle from the root data (Jensen).
double mean_log_abs_symbol(const CouplingTriple& lambda);

}  // namespace ehm
