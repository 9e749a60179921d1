#include "emit.hpp"

#include "landau/anchors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace landau::app {
namespace {

std::string number(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_value(std::string& out, const nlohmann::ordered_json& j, int depth) {
  const std::string pad(static_cast<size_t>(2 * (depth + 1)), ' '), close(static_cast<size_t>(2 * depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + nlohmann::ordered_json(key).dump() + ": ";
      write_value(out, value, depth + 1);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      write_value(out, j[i], depth + 1);
    }
    out += "\n" + close + "]";
  } else if (j.is_number_float()) {
    out += number(j.get<double>());
  } else {
    out += j.dump();
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace

bool CommandResult::pass() const {
  for (const CheckReport& r : reports)
    if (!r.pass) return false;
  return true;
}

std::string to_json_text(const nlohmann::ordered_json& j) {
  std::string out;
  write_value(out, j, 0);
  out += "\n";
  return out;
}

nlohmann::ordered_json summary_json(const CommandResult& result, const RunConfig& config) {
  nlohmann::ordered_json j;
  j["command"] = result.command;
  j["paper_ref"] = anchor::artifact;
  j["pass"] = result.pass();
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config.entries) cfg[key] = value;
  j["config"] = cfg;
  j["suite_count"] = result.reports.size();
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const CheckReport& r : result.reports) {
    nlohmann::ordered_json s;
    s["name"] = r.name;
    s["paper_ref"] = r.paper_ref;
    s["pass"] = r.pass;
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    for (const Metric& m : r.metrics) metrics[m.name] = m.value;
    s["metrics"] = metrics;
    s["notes"] = r.notes;
    suites.push_back(s);
  }
  j["suites"] = suites;
  nlohmann::ordered_json tables = nlohmann::ordered_json::array();
  for (const Table& t : result.tables) tables.push_back({{"name", t.name}, {"rows", t.rows.size()}});
  j["tables"] = tables;
  return j;
}

std::vector<std::string> emit_result(const CommandResult& result, const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + config.out);
  std::vector<std::string> written;
  const std::filesystem::path dir(config.out);
  if (config.want_json()) {
    const auto path = dir / (result.command + ".json");
    write_file(path, to_json_text(summary_json(result, config)));
    written.push_back(path.string());
  }
  if (config.want_csv()) {
    for (const Table& t : result.tables) {
      std::string text;
      for (size_t i = 0; i < t.header.size(); ++i) text += (i ? "," : "") + t.header[i];
      text += "\n";
      for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.17g", row[i]);
          text += (i ? "," : "") + std::string(buf);
        }
        text += "\n";
      }
      const auto path = dir / (t.name + ".csv");
      write_file(path, text);
      written.push_back(path.string());
    }
  }
  return written;
}

}  // namespace landau::app
