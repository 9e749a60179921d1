#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace landau::app {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(x)) throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  return x;
}

long parse_int(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  char* end = nullptr;
  const long x = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError(key + ": expected a comma-separated list of numbers");
  return out;
}

void in_range(const std::string& key, double x, double lo, double hi, const std::string& range) {
  if (!(x >= lo && x <= hi)) throw ConfigError(key + " out of range " + range);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt(xs[i]);
  return s;
}

}  // namespace

const KeyValues& config_keys() {
  static const KeyValues keys = {
      {"gamma", "0"},
      {"dim", "2"},
      {"grid-n", "24"},
      {"grid-l", "6"},
      {"xi", "0,1,2,5,10,20"},
      {"order", "20"},
      {"c0", "0.125"},
      {"K", "auto"},
      {"kappa", "0,10,-10,100,-100"},
      {"t", "0.1,1"},
      {"scan-lines", "-0.5,-0.25,-0.001"},
      {"scan-im-min", "1"},
      {"scan-im-max", "10000"},
      {"scan-per-octave", "4"},
      {"scan-margin", "0.05"},
      {"hypo-n", "16,24"},
      {"refine-n", "48"},
      {"collision-n", "32"},
      {"quant-dim", "1"},
      {"quant-n", "48"},
      {"quant-l", "8"},
      {"tau", "0.33333333333333331,0.5,2"},
      {"probes", "1000"},
      {"samples", "1000"},
      {"seed", "1"},
      {"out", "landau_out"},
      {"format", "both"},
      {"dump", "false"},
  };
  return keys;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

RunConfig build_config(const KeyValues& overrides) {
  std::map<std::string, std::string> v(config_keys().begin(), config_keys().end());
  for (const auto& [key, value] : overrides) {
    if (!v.count(key)) throw ConfigError("unknown configuration key '" + key + "'");
    v[key] = value;
  }

  RunConfig c;
  c.gamma = parse_double("gamma", v["gamma"]);
  in_range("gamma", c.gamma, 0.0, 1.0, "[0,1]");
  c.dim = static_cast<int>(parse_int("dim", v["dim"]));
  in_range("dim", c.dim, 1, 3, "[1,3]");
  c.grid_n = static_cast<int>(parse_int("grid-n", v["grid-n"]));
  in_range("grid-n", c.grid_n, 4, 64, "[4,64]");
  c.grid_l = parse_double("grid-l", v["grid-l"]);
  in_range("grid-l", c.grid_l, 5.5, 50.0, "[5.5,50]");
  c.xi = parse_list("xi", v["xi"]);
  for (double x : c.xi) in_range("xi", std::abs(x), 0.0, 1e4, "[-1e4,1e4]");
  c.order = static_cast<int>(parse_int("order", v["order"]));
  in_range("order", c.order, 20, 120, "[20,120]");
  c.c0 = parse_double("c0", v["c0"]);
  if (!(c.c0 > 0.0)) throw ConfigError("c0 out of range (0,inf)");
  if (trim(v["K"]) != "auto") {
    c.K = parse_double("K", v["K"]);
    if (!(c.K > 0.0)) throw ConfigError("K out of range (0,inf) or 'auto'");
  }
  c.kappa = parse_list("kappa", v["kappa"]);
  c.t = parse_list("t", v["t"]);
  for (double t : c.t) in_range("t", t, 0.0, 100.0, "[0,100]");
  c.scan_lines = parse_list("scan-lines", v["scan-lines"]);
  for (double x : c.scan_lines) in_range("scan-lines", x, -1e6, 0.0, "[-1e6,0]");
  c.scan_im_min = parse_double("scan-im-min", v["scan-im-min"]);
  c.scan_im_max = parse_double("scan-im-max", v["scan-im-max"]);
  if (!(c.scan_im_min > 0.0)) throw ConfigError("scan-im-min out of range (0,inf)");
  if (!(c.scan_im_max > c.scan_im_min)) throw ConfigError("scan-im-max must exceed scan-im-min");
  c.scan_per_octave = static_cast<int>(parse_int("scan-per-octave", v["scan-per-octave"]));
  in_range("scan-per-octave", c.scan_per_octave, 1, 64, "[1,64]");
  c.scan_margin = parse_double("scan-margin", v["scan-margin"]);
  in_range("scan-margin", c.scan_margin, 0.0, 1.0, "[0,1]");
  c.hypo_n.clear();
  for (double n : parse_list("hypo-n", v["hypo-n"])) {
    if (n != std::round(n)) throw ConfigError("hypo-n: expected integers");
    in_range("hypo-n", n, 4, 64, "[4,64]");
    c.hypo_n.push_back(static_cast<int>(n));
  }
  if (c.hypo_n.size() < 2) throw ConfigError("hypo-n: expected at least two grid sizes");
  c.refine_n = static_cast<int>(parse_int("refine-n", v["refine-n"]));
  in_range("refine-n", c.refine_n, 4, 64, "[4,64]");
  if (c.refine_n <= c.grid_n) throw ConfigError("refine-n must exceed grid-n");
  c.collision_n = static_cast<int>(parse_int("collision-n", v["collision-n"]));
  in_range("collision-n", c.collision_n, 4, 64, "[4,64]");
  c.quant_dim = static_cast<int>(parse_int("quant-dim", v["quant-dim"]));
  in_range("quant-dim", c.quant_dim, 1, 2, "[1,2]");
  c.quant_n = static_cast<int>(parse_int("quant-n", v["quant-n"]));
  in_range("quant-n", c.quant_n, 8, 256, "[8,256]");
  if (c.quant_n % 2) throw ConfigError("quant-n must be even");
  c.quant_l = parse_double("quant-l", v["quant-l"]);
  in_range("quant-l", c.quant_l, 1.0, 100.0, "[1,100]");
  c.tau = parse_list("tau", v["tau"]);
  for (double t : c.tau) in_range("tau", t, 0.0, 8.0, "[0,8]");
  c.probes = static_cast<int>(parse_int("probes", v["probes"]));
  in_range("probes", c.probes, 10, 1000000, "[10,1e6]");
  c.samples = static_cast<int>(parse_int("samples", v["samples"]));
  in_range("samples", c.samples, 1, 1000000, "[1,1e6]");
  const long seed = parse_int("seed", v["seed"]);
  if (seed < 0) throw ConfigError("seed out of range [0,inf)");
  c.seed = static_cast<std::uint64_t>(seed);
  c.out = trim(v["out"]);
  if (c.out.empty()) throw ConfigError("out: expected a directory path");
  c.format = trim(v["format"]);
  if (c.format != "csv" && c.format != "json" && c.format != "both") throw ConfigError("format must be one of csv, json, both");
  const std::string dump = trim(v["dump"]);
  if (dump != "true" && dump != "false") throw ConfigError("dump must be true or false");
  c.dump = dump == "true";

  if (const char* env = std::getenv("LANDAU_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1 || n > 1024) throw ConfigError("LANDAU_WORKERS out of range [1,1024]");
  }

  c.entries = {
      {"gamma", fmt(c.gamma)},
      {"dim", std::to_string(c.dim)},
      {"grid-n", std::to_string(c.grid_n)},
      {"grid-l", fmt(c.grid_l)},
      {"xi", fmt_list(c.xi)},
      {"order", std::to_string(c.order)},
      {"c0", fmt(c.c0)},
      {"K", c.K > 0.0 ? fmt(c.K) : "auto"},
      {"kappa", fmt_list(c.kappa)},
      {"t", fmt_list(c.t)},
      {"scan-lines", fmt_list(c.scan_lines)},
      {"scan-im-min", fmt(c.scan_im_min)},
      {"scan-im-max", fmt(c.scan_im_max)},
      {"scan-per-octave", std::to_string(c.scan_per_octave)},
      {"scan-margin", fmt(c.scan_margin)},
      {"hypo-n", fmt_list(std::vector<double>(c.hypo_n.begin(), c.hypo_n.end()))},
      {"refine-n", std::to_string(c.refine_n)},
      {"collision-n", std::to_string(c.collision_n)},
      {"quant-dim", std::to_string(c.quant_dim)},
      {"quant-n", std::to_string(c.quant_n)},
      {"quant-l", fmt(c.quant_l)},
      {"tau", fmt_list(c.tau)},
      {"probes", std::to_string(c.probes)},
      {"samples", std::to_string(c.samples)},
      {"seed", std::to_string(c.seed)},
      {"format", c.format},
      {"dump", c.dump ? "true" : "false"},
  };
  return c;
}

}  // namespace landau::app
