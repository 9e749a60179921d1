#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace landau::app {

// Invalid configuration: the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  double gamma = 0.0;
  int dim = 2;
  int grid_n = 24;
  double grid_l = 6.0;
  std::vector<double> xi = {0, 1, 2, 5, 10, 20};
  int order = 20;
  double c0 = 0.125;
  double K = 0.0;  // 0 means auto
  std::vector<double> kappa = {0, 10, -10, 100, -100};
  std::vector<double> t = {0.1, 1.0};
  std::vector<double> scan_lines = {-0.5, -0.25, -1e-3};
  double scan_im_min = 1.0;
  double scan_im_max = 1e4;
  int scan_per_octave = 4;
  double scan_margin = 0.05;
  std::vector<int> hypo_n = {16, 24};
  int refine_n = 48;
  int collision_n = 32;
  int quant_dim = 1;
  int quant_n = 48;
  double quant_l = 8.0;
  std::vector<double> tau = {1.0 / 3.0, 0.5, 2.0};
  int probes = 1000;
  int samples = 1000;
  std::uint64_t seed = 1;
  std::string out = "landau_out";
  std::string format = "both";
  bool dump = false;

  // Normalized key/value pairs in key order, for the report header.
  std::vector<std::pair<std::string, std::string>> entries;

  bool want_json() const { return format != "csv"; }
  bool want_csv() const { return format != "json"; }
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Every configuration key with its default value, in report order.
const KeyValues& config_keys();

// Flat "key = value" lines; '#' starts a comment.
KeyValues read_config_file(const std::string& path);

// Later entries override earlier ones; unknown keys and bad values throw ConfigError.
RunConfig build_config(const KeyValues& overrides);

}  // namespace landau::app
