#pragma once

// Report assembly for the command-line tool: a JSON object, an optional table,
// a provenance header, and an all-or-nothing write to the destination.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ehm::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct Result {
  nlohmann::json object = nlohmann::json::object();
  std::optional<Table> table;
  int exit_code = 0;
};

enum class Format { json, csv };

struct Provenance {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
};

/// Doubles with 17 significant digits so they read back bit-exact.
std::string csv_number(double x);

/// CSV: '#' provenance lines, then the table (or the object flattened to
/// key,value rows). JSON: {"provenance", "result"[, "table"]}.
std::string render(const Result& r, const Provenance& p, Format f);

/// Writes to stdout when path is empty, else to a sibling temporary that is
/// renamed over path once complete.
void emit(const std::string& text, const std::string& path);

}  // namespace ehm::cli
