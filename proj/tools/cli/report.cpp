#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "ehm/errors.hpp"

namespace ehm::cli {
namespace {

using nlohmann::json;

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return csv_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "";
  const std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(child, prefix.empty() ? k : prefix + "." + k, out);
  } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), out);
  } else if (v.is_array()) {
    std::string joined;
    for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? ";" : "") + csv_cell(v[i]);
    out.emplace_back(prefix, joined);
  } else {
    out.emplace_back(prefix, v);
  }
}

}  // namespace

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string render(const Result& r, const Provenance& p, Format f) {
  const json prov = {{"tool", "ehm"}, {"version", EHM_VERSION}, {"command", p.command},
                     {"parameters", p.parameters}, {"seed", p.seed}};
  if (f == Format::json) {
    json doc = {{"provenance", prov}, {"result", r.object}};
    if (r.table) doc["table"] = {{"columns", r.table->columns}, {"rows", r.table->rows}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# ehm " << EHM_VERSION << " " << p.command << "\n";
  for (const auto& [k, v] : p.parameters.items()) os << "# " << k << "=" << csv_cell(v) << "\n";
  os << "# seed=" << p.seed << "\n";
  if (r.table) {
    for (std::size_t i = 0; i < r.table->columns.size(); ++i) os << (i ? "," : "") << r.table->columns[i];
    os << "\n";
    for (const auto& row : r.table->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << "\n";
    }
  } else {
    std::vector<std::pair<std::string, json>> kv;
    flatten(r.object, "", kv);
    os << "key,value\n";
    for (const auto& [k, v] : kv) os << k << "," << csv_cell(v) << "\n";
  }
  return os.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw DomainError("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DomainError("cannot move output into place at " + path);
  }
}

}  // namespace ehm::cli
