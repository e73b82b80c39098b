#include <chrono>
#include <cstdio>
#include <exception>

#include "checks.hpp"
#include "ehm/errors.hpp"

namespace ehm::verify {
namespace {

using Check = CriterionResult (*)(const SuiteOptions&);

struct Entry {
  const char* title;
  Check run;
};

const Entry kChecks[kCriterionCount] = {
    {"continued-fraction law", detail::check_continued_fractions},
    {"duality algebra", detail::check_duality_algebra},
    {"winding factorization", detail::check_winding},
    {"Birkhoff sums", detail::check_birkhoff},
    {"transfer-matrix determinant", detail::check_determinant},
    {"convergence factor", detail::check_convergence_factor},
    {"duality of approximant spectra", detail::check_spectral_duality},
    {"AMO Lyapunov exponent", detail::check_amo_lyapunov},
    {"critical bandwidth scaling", detail::check_bandwidth_scaling},
    {"determinant identity", detail::check_det_identity},
    {"point-spectrum probe", detail::check_point_spectrum},
};

}  // namespace

namespace detail {

std::string sci(double x, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return buf;
}

}  // namespace detail

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::indeterminate: return "INDETERMINATE";
  }
  return "?";
}

CriterionResult run_criterion(int id, const SuiteOptions& options) {
  if (id < 1 || id > kCriterionCount) throw DomainError("unknown criterion " + std::to_string(id));
  const Entry& e = kChecks[id - 1];
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = e.run(options);
  } catch (const std::exception& ex) {
    r.status = Status::fail;
    r.summary = std::string("error: ") + ex.what();
  }
  r.id = id;
  r.title = e.title;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& options, const std::vector<int>& ids,
                                       const std::function<void(const CriterionResult&)>& progress) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
  }
  std::vector<CriterionResult> out;
  for (int id : todo) {
    out.push_back(run_criterion(id, options));
    if (progress) progress(out.back());
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %2d %s: ", to_string(r.status).c_str(), r.id, r.title.c_str());
  return head + r.summary;
}

nlohmann::json to_json(const CriterionResult& r) {
  return {{"id", r.id}, {"title", r.title}, {"status", to_string(r.status)}, {"summary", r.summary}, {"data", r.data}};
}

}  // namespace ehm::verify
