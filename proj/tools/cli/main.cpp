#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI/CLI.hpp>

#include "commands.hpp"
#include "ehm/errors.hpp"
#include "ehm/parallel.hpp"
#include "report.hpp"

int main(int argc, char** argv) {
  using namespace ehm::cli;

  CLI::App app{"ehm: numerics for the extended Harper's model and its self-dual regime"};
  app.set_version_flag("--version", EHM_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  unsigned threads = 0;
  std::string output, format;
  std::uint64_t seed = 20240607;
  app.add_option("--threads", threads, "worker threads (default: $EHM_THREADS, else all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--output,-o", output, "write the report to this path instead of stdout");
  app.add_option("--format", format, "json or csv (default depends on the command)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "seed for randomized checks")->capture_default_str();

  Invocation inv;
  register_commands(app, inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const ehm::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (threads > 0) ehm::set_thread_count(threads);
  inv.provenance.seed = seed;
  try {
    const Result r = inv.run();
    const bool csv = format.empty() ? inv.table_default : format == "csv";
    if (inv.print_report || !output.empty()) emit(render(r, inv.provenance, csv ? Format::csv : Format::json), output);
    return r.exit_code;
  } catch (const ehm::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
