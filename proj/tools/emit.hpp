#pragma once

#include "config.hpp"
#include "landau/core.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace landau::app {

struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct CommandResult {
  std::string command;
  std::vector<CheckReport> reports;
  std::vector<Table> tables;
  std::vector<std::string> binaries;  // files written directly by the command

  bool pass() const;
};

// JSON text with every float at 17 significant digits and keys in insertion order.
std::string to_json_text(const nlohmann::ordered_json& j);

nlohmann::ordered_json summary_json(const CommandResult& result, const RunConfig& config);

// Writes <out>/<command>.json and <out>/<table>.csv per the format; returns the paths.
std::vector<std::string> emit_result(const CommandResult& result, const RunConfig& config);

}  // namespace landau::app
