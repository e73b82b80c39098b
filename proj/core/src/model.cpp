#include "ehm/model.hpp"

#include <algorithm>
#include <cmath>

#include "ehm/contfrac.hpp"
#include "ehm/errors.hpp"

namespace ehm {
namespace {

double scale(double a, double b) { return std::max({1.0, std::fabs(a), std::fabs(b)}); }
bool approx_eq(double a, double b) { return std::fabs(a - b) <= kLineTolerance * scale(a, b); }
// a >= b up to the line tolerance
bool approx_ge(double a, double b) { return a >= b - kLineTolerance * scale(a, b); }

double wrap_unit(double t) {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

// e^{2 pi i t} with the argument reduced mod 1 first.
cd unit_phase(double t) {
  const double r = kTwoPi * wrap_unit(t);
  return {std::cos(r), std::sin(r)};
}

}  // namespace

CouplingTriple::CouplingTriple(double l1, double l2, double l3) : l1_(l1), l2_(l2), l3_(l3) {
  if (!std::isfinite(l1) || !std::isfinite(l2) || !std::isfinite(l3)) {
    throw DomainError("couplings must be finite");
  }
  if (l1 < 0.0 || l3 < 0.0) throw DomainError("couplings l1, l3 must be >= 0");
  if (!(l2 > 0.0)) throw DomainError("coupling l2 must be > 0");
}

std::vector<std::string> LineFlags::names() const {
  std::vector<std::string> out;
  if (has(BoundaryLine::L_I)) out.emplace_back("L_I");
  if (has(BoundaryLine::L_II)) out.emplace_back("L_II");
  if (has(BoundaryLine::L_III)) out.emplace_back("L_III");
  return out;
}

std::string to_string(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III_isotropic: return "III_isotropic";
    case Region::III_anisotropic: return "III_anisotropic";
  }
  return "?";
}

bool on_line(const CouplingTriple& lambda, BoundaryLine line) {
  const double s = lambda.hopping_sum();
  const double l2 = lambda.l2();
  switch (line) {
    case BoundaryLine::L_I: return approx_eq(s, 1.0) && approx_ge(1.0, l2);
    case BoundaryLine::L_II: return approx_ge(1.0, s) && approx_eq(l2, 1.0);
    case BoundaryLine::L_III: return approx_ge(s, 1.0) && approx_eq(s, l2);
  }
  return false;
}

RegionLabel classify(const CouplingTriple& lambda) {
  const double s = lambda.hopping_sum();
  const double l2 = lambda.l2();
  RegionLabel label{Region::I, {}, false};
  for (auto line : {BoundaryLine::L_I, BoundaryLine::L_II, BoundaryLine::L_III}) {
    if (on_line(lambda, line)) label.flags.set(line);
  }
  if (approx_ge(s, std::max(1.0, l2))) {
    label.region = lambda.isotropic() ? Region::III_isotropic : Region::III_anisotropic;
  } else if (approx_ge(l2, 1.0) && approx_ge(l2, s)) {
    label.region = Region::II;
  } else {
    label.region = Region::I;
  }
  label.interior = label.flags.empty();
  return label;
}

CouplingTriple sigma(const CouplingTriple& lambda) {
  const double l2 = lambda.l2();
  return CouplingTriple(lambda.l3() / l2, 1.0 / l2, lambda.l1() / l2);
}

Phase Phase::generic(double theta) {
  if (!std::isfinite(theta)) throw DomainError("phase must be finite");
  return Phase(wrap_unit(theta), Kind::generic, 0, 0);
}

Phase Phase::alpha_rational(int j, int k, double alpha) {
  const double theta = 0.5 * (static_cast<double>(j) * alpha + static_cast<double>(k));
  return Phase(wrap_unit(theta), Kind::alpha_rational, j, k);
}

std::optional<std::pair<int, int>> detect_alpha_rational(double theta, double alpha, int bound, double tol) {
  for (int a = 0; a <= bound; ++a) {
    for (int j : {a, -a}) {
      const double r = 2.0 * theta - static_cast<double>(j) * alpha;
      if (dist_to_z(r) <= tol) return std::pair{j, static_cast<int>(std::nearbyint(r))};
      if (a == 0) break;
    }
  }
  return std::nullopt;
}

cd Symbol::c(cd theta) const {
  const cd z = std::exp(cd(0.0, kTwoPi) * (theta + 0.5 * alpha_));
  return lambda_.l1() / z + lambda_.l2() + lambda_.l3() * z;
}

cd Symbol::c_tilde(cd theta) const {
  const cd z = std::exp(cd(0.0, kTwoPi) * (theta + 0.5 * alpha_));
  return lambda_.l1() * z + lambda_.l2() + lambda_.l3() / z;
}

cd Symbol::v(cd theta) const { return 2.0 * std::cos(kTwoPi * theta); }

cd Symbol::c(double theta) const {
  const cd z = unit_phase(theta + 0.5 * alpha_);
  const double s = lambda_.hopping_sum();
  return {s * z.real() + lambda_.l2(), (lambda_.l3() - lambda_.l1()) * z.imag()};
}

cd Symbol::c_tilde(double theta) const { return std::conj(c(theta)); }

double Symbol::v(double theta) const { return 2.0 * unit_phase(theta).real(); }

cd Symbol::abs_c(cd theta) const {
  const double a = theta.real();
  const double b = theta.imag();
  if (b == 0.0) return abs_c(a);
  const cd start = c(a);
  const double ref = std::max(1.0, std::abs(lambda_.l1()) + lambda_.l2() + lambda_.l3());
  if (std::abs(start) <= 1e-14 * ref) throw NumericalError("abs_c: branch undefined");
  // Continue sqrt(c c~) along a -> a + i b, keeping the branch continuous.
  const int steps = std::max(64, static_cast<int>(std::ceil(std::fabs(b) * 512.0)));
  cd w = std::abs(start);
  for (int s = 1; s <= steps; ++s) {
    const cd t(a, b * static_cast<double>(s) / steps);
    const cd prod = c(t) * c_tilde(t);
    if (std::abs(prod) <= 1e-28 * ref * ref) throw NumericalError("abs_c: branch undefined");
    const cd root = std::sqrt(prod);
    w = std::abs(root - w) <= std::abs(root + w) ? root : -root;
  }
  return w;
}

cd Symbol::eval(SymbolKind kind, cd theta) const {
  switch (kind) {
    case SymbolKind::c: return c(theta);
    case SymbolKind::c_tilde: return c_tilde(theta);
    case SymbolKind::abs_c: return abs_c(theta);
    case SymbolKind::potential_v: return v(theta);
  }
  return {};
}

DualRoots dual_symbol_roots(const CouplingTriple& lambda) {
  const double l1 = lambda.l1();
  const double l3 = lambda.l3();
  if (l1 == 0.0 && l3 == 0.0) throw DomainError("dual_symbol_roots: constant symbol, no roots");
  DualRoots out;
  if (l1 == 0.0) {
    out.roots = {cd(-l3, 0.0)};
    out.degenerate = true;
    return out;
  }
  const double disc = 1.0 - 4.0 * l1 * l3;
  if (disc >= 0.0) {
    // q = -(1 + sqrt(disc))/2 avoids cancellation; roots q/l1 and l3/q.
    const double q = -0.5 * (1.0 + std::sqrt(disc));
    out.roots = {cd(l3 / q, 0.0), cd(q / l1, 0.0)};
  } else {
    const double im = std::sqrt(-disc) / (2.0 * l1);
    const double re = -1.0 / (2.0 * l1);
    out.roots = {cd(re, im), cd(re, -im)};
  }
  std::stable_sort(out.roots.begin(), out.roots.end(),
                   [](const cd& x, const cd& y) { return std::abs(x) < std::abs(y); });
  return out;
}

std::vector<TorusRoot> real_roots_on_torus(const CouplingTriple& lambda, double alpha) {
  std::vector<TorusRoot> out;
  auto push = [&](double phi_over_2pi, int mult) {
    out.push_back({wrap_unit(phi_over_2pi - 0.5 * alpha), mult});
  };
  if (lambda.isotropic()) {
    if (lambda.l3() == 0.0) return out;
    const double r = -lambda.l2() / (2.0 * lambda.l3());
    if (approx_eq(r, -1.0)) {
      push(0.5, 2);
    } else if (r > -1.0) {
      const double phi = std::acos(r) / kTwoPi;
      push(phi, 1);
      push(1.0 - phi, 1);
    }
  } else if (approx_eq(lambda.hopping_sum(), lambda.l2())) {
    push(0.5, 1);
  }
  std::sort(out.begin(), out.end(), [](const TorusRoot& a, const TorusRoot& b) { return a.theta < b.theta; });
  return out;
}

bool dual_has_singularity(const CouplingTriple& lambda) {
  const auto label = classify(lambda);
  if (label.region == Region::III_isotropic) return true;
  return label.region == Region::III_anisotropic && approx_eq(lambda.hopping_sum(), 1.0);
}

double mean_log_abs_symbol(const CouplingTriple& lambda) {
  // c_lambda = c_{sigma(mu)} with mu = sigma(lambda), and
  // c_{sigma(mu)}(t) = (1/mu2) e^{-i phi} (mu1 z^2 + z + mu3).
  const CouplingTriple mu = sigma(lambda);
  if (mu.l1() == 0.0 && mu.l3() == 0.0) return std::log(1.0 / mu.l2());
  const DualRoots r = dual_symbol_roots(mu);
  const double leading = r.degenerate ? 1.0 / mu.l2() : mu.l1() / mu.l2();
  double acc = std::log(leading);
  for (const auto& y : r.roots) acc += std::max(0.0, std::log(std::abs(y)));
  return acc;
}

}  // namespace ehm
