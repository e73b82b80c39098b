#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "ehm/verify/acceptance.hpp"

namespace ehm::verify::detail {

CriterionResult check_continued_fractions(const SuiteOptions& o);
CriterionResult check_duality_algebra(const SuiteOptions& o);
CriterionResult check_winding(const SuiteOptions& o);
CriterionResult check_birkhoff(const SuiteOptions& o);
CriterionResult check_determinant(const SuiteOptions& o);
CriterionResult check_convergence_factor(const SuiteOptions& o);
CriterionResult check_spectral_duality(const SuiteOptions& o);
CriterionResult check_amo_lyapunov(const SuiteOptions& o);
CriterionResult check_bandwidth_scaling(const SuiteOptions& o);
CriterionResult check_det_identity(const SuiteOptions& o);
CriterionResult check_point_spectrum(const SuiteOptions& o);

inline const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

/// One stream per check, so adding draws to one check leaves the others alone.
inline std::mt19937_64 rng_for(const SuiteOptions& o, int id) {
  return std::mt19937_64(o.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id)));
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Status verdict(bool ok) { return ok ? Status::pass : Status::fail; }

std::string sci(double x, int digits = 3);

}  // namespace ehm::verify::detail
