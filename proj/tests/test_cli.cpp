#include "doctest.h"

#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>

using namespace landau;
using namespace landau::app;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "landau_cli");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("landau_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string message_for(const KeyValues& kv) {
  try {
    build_config(kv);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  const RunConfig d = build_config({});
  CHECK(d.dim == 2);
  CHECK(d.grid_n == 24);
  CHECK(d.grid_l == 6.0);
  CHECK(d.xi == std::vector<double>{0, 1, 2, 5, 10, 20});
  const RunConfig c = build_config({{"gamma", "0.5"}, {"gamma", "1"}, {"xi", "0,1,5"}, {"format", "json"}});
  CHECK(c.gamma == 1.0);
  CHECK(c.xi == std::vector<double>{0, 1, 5});
  CHECK(c.want_json());
  CHECK_FALSE(c.want_csv());
  for (const auto& [key, value] : c.entries) CHECK(key != "out");
}

TEST_CASE("config errors name the field") {
  CHECK(message_for({{"gamma", "2"}}) == "gamma out of range [0,1]");
  CHECK(message_for({{"dim", "5"}}).rfind("dim out of range", 0) == 0);
  CHECK(message_for({{"grid-n", "abc"}}).rfind("grid-n:", 0) == 0);
  CHECK(message_for({{"no-such-key", "1"}}).find("no-such-key") != std::string::npos);
  CHECK(message_for({{"format", "xml"}}).rfind("format", 0) == 0);
}

TEST_CASE("config file parsing") {
  const fs::path dir = scratch("file");
  fs::create_directories(dir);
  const fs::path f = dir / "run.cfg";
  std::ofstream(f) << "# profile\ngamma = 0.5\n\n  xi = 0, 1  # trailing\n";
  const KeyValues kv = read_config_file(f.string());
  REQUIRE(kv.size() == 2);
  CHECK(kv[0] == std::pair<std::string, std::string>{"gamma", "0.5"});
  CHECK(build_config(kv).xi == std::vector<double>{0, 1});
  std::ofstream(f) << "gamma 0.5\n";
  CHECK_THROWS_AS(read_config_file(f.string()), ConfigError);
  CHECK_THROWS_AS(read_config_file((dir / "missing.cfg").string()), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("json text keeps 17 digits and field order") {
  nlohmann::ordered_json j;
  j["b"] = 0.1;
  j["a"] = 1.0 / 3.0;
  const std::string text = to_json_text(j);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("\"b\"") < text.find("\"a\""));
}

TEST_CASE("summary of empty and failed results") {
  const RunConfig cfg = build_config({});
  CommandResult empty;
  empty.command = "kernel-check";
  const nlohmann::ordered_json e = summary_json(empty, cfg);
  CHECK(e["suite_count"] == 0);
  CHECK(e["suites"].empty());
  CHECK(e.contains("paper_ref"));

  CommandResult failed;
  failed.command = "kernel-check";
  CheckReport r("probe", "ref");
  r.require(false, "forced");
  failed.reports.push_back(r);
  CHECK_FALSE(failed.pass());
  const std::string text = to_json_text(summary_json(failed, cfg));
  CHECK(text.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("exit codes") {
  const fs::path out = scratch("exit");
  CHECK(run({"kernel-check", "--gamma", "2"}) == 2);
  CHECK(run({"no-such-command"}) == 2);
  CHECK(run({"kernel-check", "--bogus", "1"}) == 2);
  CHECK(run({"assemble", "--dim", "1", "--out", out.string()}) == 2);
  CHECK(run({"quant-check", "--quant-dim", "3"}) == 2);
  fs::create_directories(out.parent_path());
  std::ofstream(out.string() + "_file") << "x";
  CHECK(run({"quant-check", "--out", out.string() + "_file"}) == 2);
  fs::remove(out.string() + "_file");
  fs::remove_all(out);
}

TEST_CASE("reports are byte-identical for the same seed") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  CHECK(run({"quant-check", "--out", a.string(), "--seed", "3"}) == 0);
  CHECK(run({"quant-check", "--out", b.string(), "--seed", "3"}) == 0);
  const std::string ja = slurp(a / "quant-check.json");
  CHECK_FALSE(ja.empty());
  CHECK(ja == slurp(b / "quant-check.json"));
  CHECK(ja.find("\"command\": \"quant-check\"") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}
