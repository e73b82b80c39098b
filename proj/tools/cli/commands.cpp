#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <regex>
#include <sstream>

#include "ehm/birkhoff.hpp"
#include "ehm/cocycle.hpp"
#include "ehm/contfrac.hpp"
#include "ehm/duality.hpp"
#include "ehm/errors.hpp"
#include "ehm/model.hpp"
#include "ehm/spectral.hpp"
#include "ehm/verify/acceptance.hpp"
#include "ehm/winding.hpp"

namespace ehm::cli {
namespace {

using nlohmann::json;

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

struct Couplings {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  CouplingTriple triple() const { return {l1, l2, l3}; }
};

json triple_json(const CouplingTriple& l) { return {l.l1(), l.l2(), l.l3()}; }

void add_couplings(CLI::App* sub, Couplings& c) {
  sub->add_option("--l1", c.l1, "coupling l1 >= 0")->required();
  sub->add_option("--l2", c.l2, "coupling l2 > 0")->required();
  sub->add_option("--l3", c.l3, "coupling l3 >= 0")->required();
}

json couplings_params(const Couplings& c) { return {{"l1", c.l1}, {"l2", c.l2}, {"l3", c.l3}}; }

json big(const BigInt& v) {
  if (v <= std::numeric_limits<std::int64_t>::max()) return static_cast<std::int64_t>(v);
  return v.str();
}

struct Frequency {
  std::optional<double> alpha;
  std::vector<std::int64_t> terms;
  int max_terms = 40;
};

void add_frequency(CLI::App* sub, Frequency& f) {
  auto* a = sub->add_option("--alpha", f.alpha, "rotation number in (0, 1)");
  auto* t = sub->add_option("--alpha-cf", f.terms, "partial quotients a1,a2,... (each >= 1)")->delimiter(',');
  a->excludes(t);
  sub->add_option("--max-terms", f.max_terms, "terms kept when expanding --alpha")
      ->capture_default_str()
      ->check(CLI::Range(1, 200));
}

json frequency_params(const Frequency& f) {
  json p = json::object();
  if (f.alpha) p["alpha"] = *f.alpha;
  if (!f.terms.empty()) p["alpha_cf"] = f.terms;
  p["max_terms"] = f.max_terms;
  return p;
}

// golden mean when neither flag is given
FrequencyCF make_cf(const Frequency& f) {
  if (!f.terms.empty()) return cf_from_terms(std::span<const std::int64_t>(f.terms));
  return cf_expand(f.alpha.value_or(kGolden), f.max_terms);
}

std::pair<int, int> parse_pair(const std::string& s, char sep, const char* what) {
  const auto cut = s.find(sep);
  try {
    if (cut == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    const int a = std::stoi(s.substr(0, cut), &used);
    if (used != cut) throw std::invalid_argument(s);
    const std::string rest = s.substr(cut + 1);
    const int b = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    return {a, b};
  } catch (const std::exception&) {
    throw DomainError(std::string("malformed ") + what + " '" + s + "'");
  }
}

// "builtin:sin1+0.5sin2" (terms a*sin n or a*cos n) or "file:coeffs.csv" with
// rows n,re[,im].
AnalyticTorusFunction parse_function(const std::string& spec) {
  std::map<int, cd> coeffs;
  if (spec.rfind("builtin:", 0) == 0) {
    static const std::regex term(R"(^([0-9]*\.?[0-9]*)(sin|cos)([0-9]+)$)");
    std::stringstream ss(spec.substr(8));
    std::string item;
    while (std::getline(ss, item, '+')) {
      std::smatch m;
      if (!std::regex_match(item, m, term)) throw DomainError("malformed function term '" + item + "'");
      const double a = m[1].length() ? std::stod(m[1]) : 1.0;
      const int n = std::stoi(m[3]);
      if (m[2] == "sin") {
        coeffs[n] += cd(0.0, -0.5 * a);
        coeffs[-n] += cd(0.0, 0.5 * a);
      } else {
        coeffs[n] += 0.5 * a;
        coeffs[-n] += 0.5 * a;
      }
    }
  } else if (spec.rfind("file:", 0) == 0) {
    std::ifstream in(spec.substr(5));
    if (!in) throw DomainError("cannot read " + spec.substr(5));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::stringstream ls(line);
      std::string n, re, im;
      std::getline(ls, n, ',');
      std::getline(ls, re, ',');
      std::getline(ls, im, ',');
      try {
        coeffs[std::stoi(n)] += cd(std::stod(re), im.empty() ? 0.0 : std::stod(im));
      } catch (const std::exception&) {
        throw DomainError("malformed coefficient row '" + line + "'");
      }
    }
  } else {
    throw DomainError("function must be builtin:... or file:...");
  }
  if (coeffs.empty()) throw DomainError("function has no coefficients");
  const int lo = std::min(0, coeffs.begin()->first), hi = std::max(0, coeffs.rbegin()->first);
  std::vector<cd> dense(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [n, c] : coeffs) dense[static_cast<std::size_t>(n - lo)] = c;
  return make_analytic(TrigSeries(lo, std::move(dense)));
}

void register_classify(CLI::App& app, Invocation& inv) {
  auto* sub = app.add_subcommand("classify", "Region, boundary lines and dual image of a coupling triple (JSON)");
  auto c = std::make_shared<Couplings>();
  add_couplings(sub, *c);
  sub->callback([&inv, c] {
    inv.provenance.command = "classify";
    inv.provenance.parameters = couplings_params(*c);
    inv.run = [c] {
      const CouplingTriple l = c->triple();
      const RegionLabel a = classify(l);
      const CouplingTriple s = sigma(l);
      const RegionLabel b = classify(s);
      Result r;
      r.object = {{"lambda", triple_json(l)},
                  {"region", to_string(a.region)},
                  {"flags", a.flags.names()},
                  {"interior", a.interior},
                  {"sigma", triple_json(s)},
                  {"sigma_region", to_string(b.region)},
                  {"sigma_flags", b.flags.names()},
                  {"dual_singularity", dual_has_singularity(l)}};
      return r;
    };
  });
}

void register_cf(CLI::App& app, Invocation& inv) {
  auto* sub = app.add_subcommand("cf", "Continued fraction, convergents and beta estimate of a frequency (JSON)");
  auto f = std::make_shared<Frequency>();
  auto tail = std::make_shared<int>(1);
  add_frequency(sub, *f);
  sub->add_option("--tail-start", *tail, "first index used by the beta estimate")->capture_default_str();
  sub->callback([&inv, f, tail] {
    inv.provenance.command = "cf";
    inv.provenance.parameters = frequency_params(*f);
    inv.provenance.parameters["tail_start"] = *tail;
    inv.run = [f, tail] {
      const FrequencyCF cf = make_cf(*f);
      const BetaEstimate beta = estimate_beta(cf, *tail);
      json terms = json::array(), convergents = json::array(), samples = json::array();
      for (const auto& a : cf.terms()) terms.push_back(big(a));
      for (const auto& c : cf.convergents()) convergents.push_back({big(c.p), big(c.q)});
      for (const auto& [q, rate] : beta.samples) samples.push_back({q, rate});
      Result r;
      r.object = {{"value", cf.value()},
                  {"source", cf.source() == CfSource::numeric ? "numeric" : "explicit"},
                  {"terms", terms},
                  {"convergents", convergents},
                  {"beta_samples", samples},
                  {"beta", beta.beta},
                  {"tail_start", beta.tail_start}};
      return r;
    };
  });
}

void register_winding(CLI::App& app, Invocation& inv) {
  auto* sub = app.add_subcommand("winding", "Unimodular factorization of the dual symbol (JSON)");
  sub->footer("--f-output CSV columns: theta,f");
  auto c = std::make_shared<Couplings>();
  struct Opts {
    double alpha = kGolden;
    std::size_t grid = 4096;
    std::string f_output;
  };
  auto o = std::make_shared<Opts>();
  add_couplings(sub, *c);
  sub->add_option("--alpha", o->alpha, "rotation number")->capture_default_str();
  sub->add_option("--grid", o->grid, "grid size, a power of two >= 64")->capture_default_str();
  sub->add_option("--f-output", o->f_output, "also write f on the grid as CSV to this path");
  sub->callback([&inv, c, o] {
    inv.provenance.command = "winding";
    inv.provenance.parameters = couplings_params(*c);
    inv.provenance.parameters.update({{"alpha", o->alpha}, {"grid", o->grid}});
    inv.run = [&inv, c, o] {
      const WindingFactorization w = factorize(c->triple(), o->alpha, o->grid);
      const FactorizationCheck ck = verify_factorization(w, o->grid);
      json roots = json::array();
      for (const auto& y : w.roots.roots) roots.push_back({y.real(), y.imag()});
      Result r;
      r.object = {{"lambda", triple_json(w.couplings)},
                  {"alpha", w.alpha},
                  {"roots", roots},
                  {"convention", w.convention == ReflectionConvention::direct ? "direct" : "reflected"},
                  {"winding", w.winding},
                  {"delta0", w.delta0},
                  {"c_bound", w.c_bound},
                  {"modes", w.f_fourier.nmax()},
                  {"mean_f", ck.mean_f},
                  {"max_residual", ck.max_residual},
                  {"conj_residual", ck.conj_residual},
                  {"winding_number", ck.winding_number}};
      if (!o->f_output.empty()) {
        Result f;
        f.table = Table{{"theta", "f"}, {}};
        for (std::size_t j = 0; j < w.f_samples.size(); ++j) {
          f.table->rows.push_back({static_cast<double>(j) / static_cast<double>(w.f_samples.size()), w.f_samples[j]});
        }
        emit(render(f, inv.provenance, Format::csv), o->f_output);
      }
      return r;
    };
  });
}

void register_birkhoff(CLI::App& app, Invocation& inv) {
  auto* sub = app.add_subcommand("birkhoff-verify", "Birkhoff-sum sups along denominators against their bounds (CSV)");
  sub->footer(
      "CSV columns: m,q_m,sup,bound,certified_sup,stylized_bound\n"
      "  bound is the mid-proof Dirichlet bound; stylized_bound is empty when q_{m+1} is not stored.\n"
      "Exit code 3 when some sup exceeds its bound.");
  auto f = std::make_shared<Frequency>();
  struct Opts {
    std::string function = "builtin:sin1+0.5sin2";
    int levels = 12;
    int tail_start = 1;
    std::string rule = "all";
    std::size_t grid = 0;
  };
  auto o = std::make_shared<Opts>();
  add_frequency(sub, *f);
  sub->add_option("--f", o->function, "builtin:<a>sin<n>+... or file:<csv of n,re,im>")->capture_default_str();
  sub->add_option("--levels", o->levels, "number of denominators reported")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--tail-start", o->tail_start, "first convergent index considered")->capture_default_str();
  sub->add_option("--rule", o->rule, "all: every index; beta: fast-growth subsequence")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "beta"}));
  sub->add_option("--grid", o->grid, "x grid (0: max(4096, 8 q))")->capture_default_str();
  sub->callback([&inv, f, o] {
    inv.provenance.command = "birkhoff-verify";
    inv.provenance.parameters = frequency_params(*f);
    inv.provenance.parameters.update({{"f", o->function}, {"levels", o->levels}, {"tail_start", o->tail_start},
                                      {"rule", o->rule}, {"grid", o->grid}});
    inv.table_default = true;
    inv.run = [f, o] {
      const FrequencyCF cf = make_cf(*f);
      const AnalyticTorusFunction fn = parse_function(o->function);
      if (o->tail_start < 1 || o->tail_start > cf.depth()) throw DomainError("tail-start outside the expansion");
      DenominatorSubsequence sub;
      double beta = 0.0;
      if (o->rule == "beta") {
        beta = estimate_beta(cf, o->tail_start).beta;
        sub = select_subsequence(cf, beta, o->tail_start);
      } else {
        for (int m = o->tail_start; m <= cf.depth(); ++m) sub.indices.push_back(m);
      }
      if (static_cast<int>(sub.indices.size()) > o->levels) sub.indices.resize(static_cast<std::size_t>(o->levels));
      const BirkhoffReport rep = verify_uniform_lemma(fn, cf, sub, o->grid);
      Result r;
      r.table = Table{{"m", "q_m", "sup", "bound", "certified_sup", "stylized_bound"}, {}};
      for (const auto& row : rep.rows) {
        r.table->rows.push_back({row.m, row.q, row.sup, row.mid_proof_bound, row.certified_sup,
                                 std::isnan(row.stylized_bound) ? json() : json(row.stylized_bound)});
      }
      r.object = {{"alpha", cf.value()}, {"delta0", fn.delta0}, {"c_bound", fn.c_bound}, {"beta", beta},
                  {"decreasing", rep.decreasing}, {"within_bound", rep.within_bound}};
      r.exit_code = rep.within_bound ? 0 : 3;
      return r;
    };
  });
}

void register_lyapunov(CLI::App& app, Invocation& inv) {
  auto* sub = app.add_subcommand("lyapunov", "Lyapunov exponent of the operator's cocycle over an energy range (CSV)");
  sub->footer("CSV columns: E,le_raw,le_regularized,std_error");
  auto c = std::make_shared<Couplings>();
  struct Opts {
    double alpha = kGolden;
    double emin = -4.0, emax = 4.0;
    int esteps = 81;
    std::int64_t n = 100000;
    std::size_t samples = 4;
  };
  auto o = std::make_shared<Opts>();
  add_couplings(sub, *c);
  sub->add_option("--alpha", o->alpha, "rotation number")->capture_default_str();
  sub->add_option("--emin", o->emin, "lowest energy")->capture_default_str();
  sub->add_option("--emax", o->emax, "highest energy")->capture_default_str();
  sub->add_option("--esteps", o->esteps, "number of energies")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--n", o->n, "cocycle steps per phase (>= 1000)")->capture_default_str();
  sub->add_option("--samples", o->samples, "phases averaged")->capture_default_str()->check(CLI::PositiveNumber);
  sub->callback([&inv, c, o] {
    inv.provenance.command = "lyapunov";
    inv.provenance.parameters = couplings_params(*c);
    inv.provenance.parameters.update({{"alpha", o->alpha}, {"emin", o->emin}, {"emax", o->emax},
                                      {"esteps", o->esteps}, {"n", o->n}, {"samples", o->samples}});
    inv.table_default = true;
    inv.run = [c, o] {
      if (o->emax < o->emin) throw DomainError("emax must be >= emin");
      const CouplingTriple l = c->triple();
      Result r;
      r.table = Table{{"E", "le_raw", "le_regularized", "std_error"}, {}};
      double log_mean = 0.0;
      for (int i = 0; i < o->esteps; ++i) {
        const double e = o->esteps == 1 ? o->emin : o->emin + (o->emax - o->emin) * i / (o->esteps - 1);
        const LyapunovEstimate le = lyapunov(l, e, o->alpha, o->n, o->samples);
        log_mean = le.log_mean_abs_c;
        r.table->rows.push_back({e, le.le_raw, le.le_regularized, le.std_error});
      }
      r.object = {{"lambda", triple_json(l)}, {"log_mean_abs_c", log_mean}};
      return r;
    };
  });
}

void register_butterfly(CLI::App& app, Invocation& inv) {
  auto* sub = app.add_subcommand("butterfly", "Periodic-approximant bands for every p/q with q <= qmax (CSV)");
  sub->footer("CSV columns: p,q,band_index,E_min,E_max");
  auto c = std::make_shared<Couplings>();
  struct Opts {
    int qmax = 20;
    int theta_grid = 16;
  };
  auto o = std::make_shared<Opts>();
  add_couplings(sub, *c);
  sub->add_option("--qmax", o->qmax, "largest denominator")->capture_default_str()->check(CLI::Range(1, 500));
  sub->add_option("--theta-grid", o->theta_grid, "phase grid per 1/q (>= 8)")->capture_default_str()->check(CLI::Range(8, 4096));
  sub->callback([&inv, c, o] {
    inv.provenance.command = "butterfly";
    inv.provenance.parameters = couplings_params(*c);
    inv.provenance.parameters.update({{"qmax", o->qmax}, {"theta_grid", o->theta_grid}});
    inv.table_default = true;
    inv.run = [c, o] {
      const CouplingTriple l = c->triple();
      Result r;
      r.table = Table{{"p", "q", "band_index", "E_min", "E_max"}, {}};
      std::size_t fractions = 0;
      for (std::int64_t q = 1; q <= o->qmax; ++q) {
        for (std::int64_t p = 0; p < q; ++p) {
          if (std::gcd(p, q) != 1) continue;
          ++fractions;
          const auto spec = approximant_spectrum(l, p, q, o->theta_grid, 8);
          for (std::size_t b = 0; b < spec.bands.size(); ++b) {
            r.table->rows.push_back({p, q, b, spec.bands[b].lo, spec.bands[b].hi});
          }
        }
      }
      r.object = {{"lambda", triple_json(l)}, {"fractions", fractions}};
      return r;
    };
  });
}

void register_probe(CLI::App& app, Invocation& inv) {
  auto* sub = app.add_subcommand("probe", "IPR statistics of truncated eigenvectors at chosen phases (JSON)");
  auto c = std::make_shared<Couplings>();
  struct Opts {
    double alpha = kGolden;
    std::vector<std::string> rational;
    std::vector<double> thetas;
    std::vector<int> ns = {1000, 2000, 4000};
  };
  auto o = std::make_shared<Opts>();
  add_couplings(sub, *c);
  sub->add_option("--alpha", o->alpha, "rotation number")->capture_default_str();
  sub->add_option("--theta-rational", o->rational, "alpha-rational phase j,k meaning 2 theta = j alpha + k (repeatable)");
  sub->add_option("--theta", o->thetas, "generic phases, comma separated")->delimiter(',');
  sub->add_option("--N", o->ns, "truncation sizes, comma separated")->delimiter(',')->capture_default_str();
  sub->callback([&inv, c, o] {
    inv.provenance.command = "probe";
    inv.provenance.parameters = couplings_params(*c);
    inv.provenance.parameters.update(
        {{"alpha", o->alpha}, {"theta_rational", o->rational}, {"theta", o->thetas}, {"N", o->ns}});
    inv.run = [c, o] {
      std::vector<Phase> phases;
      for (const auto& s : o->rational) {
        const auto [j, k] = parse_pair(s, ',', "--theta-rational");
        phases.push_back(Phase::alpha_rational(j, k, o->alpha));
      }
      for (double t : o->thetas) phases.push_back(Phase::generic(t));
      if (phases.empty()) throw DomainError("give at least one --theta or --theta-rational");
      const PointSpectrumReport rep = point_spectrum_probe(c->triple(), o->alpha, phases, o->ns);
      json rows = json::array();
      for (const auto& p : rep.rows) {
        rows.push_back({{"theta", p.theta}, {"alpha_rational", p.alpha_rational}, {"N", p.N}, {"max_ipr", p.max_ipr},
                        {"median_ipr", p.median_ipr}, {"states", p.states}, {"examined", p.examined}});
      }
      Result r;
      r.object = {{"lambda", triple_json(rep.couplings)}, {"alpha", rep.alpha}, {"rows", rows}};
      return r;
    };
  });
}

void register_duality(CLI::App& app, Invocation& inv) {
  auto* sub = app.add_subcommand("duality-check", "Dual equations, conjugacy and det M for a test vector (JSON)");
  auto c = std::make_shared<Couplings>();
  struct Opts {
    double alpha = kGolden;
    std::optional<double> theta;
    std::string rational;
    std::optional<int> truncation;
    std::string exact;
    std::size_t grid = 0;
  };
  auto o = std::make_shared<Opts>();
  add_couplings(sub, *c);
  sub->add_option("--alpha", o->alpha, "rotation number")->capture_default_str();
  auto* th = sub->add_option("--theta", o->theta, "generic phase");
  auto* tr = sub->add_option("--theta-rational", o->rational, "alpha-rational phase j,k");
  th->excludes(tr);
  auto* ft = sub->add_option("--from-truncation", o->truncation, "use the central eigenvector of H on [-N, N]");
  auto* ex = sub->add_option("--exact", o->exact, "use the finite-support eigenfunction at alpha = p/q");
  ft->excludes(ex);
  sub->add_option("--grid", o->grid, "torus grid, a power of two (0: automatic)")->capture_default_str();
  sub->callback([&inv, c, o] {
    inv.provenance.command = "duality-check";
    inv.provenance.parameters = couplings_params(*c);
    inv.provenance.parameters.update({{"alpha", o->alpha}, {"grid", o->grid}});
    if (o->theta) inv.provenance.parameters["theta"] = *o->theta;
    if (!o->rational.empty()) inv.provenance.parameters["theta_rational"] = o->rational;
    if (o->truncation) inv.provenance.parameters["from_truncation"] = *o->truncation;
    if (!o->exact.empty()) inv.provenance.parameters["exact"] = o->exact;
    inv.run = [c, o] {
      const CouplingTriple l = c->triple();
      double alpha = o->alpha, energy = 0.0;
      std::optional<Phase> phase;
      std::vector<cd> seq;
      int nmin = 0;
      json source;
      if (o->truncation) {
        if (o->theta) phase = Phase::generic(*o->theta);
        if (!o->rational.empty()) {
          const auto [j, k] = parse_pair(o->rational, ',', "--theta-rational");
          phase = Phase::alpha_rational(j, k, alpha);
        }
        if (!phase) throw DomainError("--from-truncation needs --theta or --theta-rational");
        const TruncatedTestVector tv = central_eigenvector(l, alpha, *phase, *o->truncation);
        energy = tv.energy;
        seq = tv.sequence;
        nmin = tv.nmin;
        source = {{"kind", "truncation"}, {"N", *o->truncation}, {"edge_mass", tv.edge_mass}};
      } else if (!o->exact.empty()) {
        if (o->theta || !o->rational.empty()) throw DomainError("--exact fixes its own phase; drop --theta");
        const auto [p, q] = parse_pair(o->exact, '/', "--exact");
        const ExactSolution sol = exact_rational_eigenfunction(l, p, q);
        alpha = sol.alpha;
        energy = sol.energy;
        phase = Phase::generic(sol.theta);
        seq = sol.sequence;
        nmin = sol.nmin;
        source = {{"kind", "exact"}, {"p", p}, {"q", q}};
      } else {
        throw DomainError("give --from-truncation N or --exact p/q");
      }
      const std::size_t grid = o->grid ? o->grid : next_power_of_two(std::max<std::size_t>(4 * seq.size(), 1024));
      const TorusFunctionGrid u = sequence_to_torus(seq, nmin, grid);
      const DualResidual res = dual_equation_residual(l, alpha, phase->theta(), energy, u);
      const ConjugacyResidual conj = conjugacy_residual(l, alpha, phase->theta(), energy, u);
      const DetIdentityReport det = det_identity_check(l, alpha, *phase, u);
      Result r;
      r.object = {{"lambda", triple_json(l)},
                  {"alpha", alpha},
                  {"theta", phase->theta()},
                  {"energy", energy},
                  {"source", source},
                  {"grid", grid},
                  {"r1", res.r1},
                  {"r2", res.r2},
                  {"conjugacy_residual", conj.residual},
                  {"conjugacy_excluded", conj.excluded},
                  {"b_estimate", det.b_estimate},
                  {"relative_variation", det.relative_variation},
                  {"hypothesis_violated", det.hypothesis_violated}};
      return r;
    };
  });
}

void register_verify_all(CLI::App& app, Invocation& inv) {
  auto* sub = app.add_subcommand("verify-all", "Run the acceptance suite, one PASS/FAIL line per check");
  sub->footer(
      "Report (with --output) CSV columns: id,title,status,summary\n"
      "Exit code 3 when any check fails; INDETERMINATE does not count as a failure.");
  struct Opts {
    std::string preset;
    std::vector<int> only;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--preset", o->preset, "parameter bundle")->required()->check(CLI::IsMember({"paper"}));
  sub->add_option("--only", o->only, "run only these check ids, comma separated")
      ->delimiter(',')
      ->check(CLI::Range(1, verify::kCriterionCount));
  sub->callback([&inv, o] {
    inv.provenance.command = "verify-all";
    inv.provenance.parameters = {{"preset", o->preset}, {"only", o->only}};
    inv.table_default = true;
    inv.print_report = false;
    inv.run = [&inv, o] {
      verify::SuiteOptions opts;
      opts.seed = inv.provenance.seed;
      const auto results = verify::run_suite(opts, o->only, [](const verify::CriterionResult& c) {
        std::cout << verify::format_line(c) << std::endl;
      });
      Result r;
      r.table = Table{{"id", "title", "status", "summary"}, {}};
      json checks = json::array();
      bool failed = false;
      for (const auto& c : results) {
        r.table->rows.push_back({c.id, c.title, verify::to_string(c.status), c.summary});
        checks.push_back(verify::to_json(c));
        failed = failed || c.status == verify::Status::fail;
      }
      r.object = {{"checks", checks}, {"all_passed", !failed}};
      r.exit_code = failed ? 3 : 0;
      return r;
    };
  });
}

}  // namespace

void register_commands(CLI::App& app, Invocation& inv) {
  register_classify(app, inv);
  register_cf(app, inv);
  register_winding(app, inv);
  register_birkhoff(app, inv);
  register_lyapunov(app, inv);
  register_butterfly(app, inv);
  register_probe(app, inv);
  register_duality(app, inv);
  register_verify_all(app, inv);
}

}  // namespace ehm::cli
