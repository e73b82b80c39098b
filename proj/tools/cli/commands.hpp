#pragma once

#include <functional>

#include <CLI/CLI.hpp>

#include "report.hpp"

namespace ehm::cli {

/// Filled in by the subcommand chosen at parse time.
struct Invocation {
  Provenance provenance;
  std::function<Result()> run;
  bool table_default = false;  // csv unless --format says otherwise
  bool print_report = true;    // false: report only goes to --output
};

void register_commands(CLI::App& app, Invocation& inv);

}  // namespace ehm::cli
