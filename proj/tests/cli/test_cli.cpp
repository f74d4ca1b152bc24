// End-to-end checks of the regensim binary: exit codes, stream formats,
// seed precedence, and byte-stable output pinned by golden files. The
// numeric content of the tables is covered by the unit suites; these tests
// pin the command surface.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "regensim-cli-tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path config_path(const std::string& name) {
  return fs::path(GOLDEN_DIR).parent_path() / "configs" / name;
}

std::string golden(const std::string& name) {
  return slurp(fs::path(GOLDEN_DIR) / name);
}

fs::path write_scratch(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

// Runs the binary through the shell with REGENSIM_* scrubbed from the
// environment so ambient settings cannot leak into the assertions.
RunResult run_cli(const std::string& args,
                  const std::vector<std::string>& env = {}) {
  static int serial = 0;
  const fs::path out_path = scratch_dir() / ("out." + std::to_string(serial));
  const fs::path err_path = scratch_dir() / ("err." + std::to_string(serial));
  ++serial;

  std::string cmd = "env -u REGENSIM_SEED -u REGENSIM_ISA";
  for (const std::string& kv : env) cmd += " " + kv;
  cmd += " " REGENSIM_BIN " " + args;
  cmd += " > " + out_path.string() + " 2> " + err_path.string();

  const int status = std::system(cmd.c_str());
  RunResult result;
  if (status != -1 && WIFEXITED(status)) result.code = WEXITSTATUS(status);
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("usage errors exit with the config code") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("bogus-subcommand").code == 2);
  CHECK(run_cli("sample --config x.json").code == 2);  // missing --from/--to
  CHECK(run_cli("rho --config x.json --max-m 3 --unknown-flag").code == 2);

  const RunResult help = run_cli("--help");
  CHECK(help.code == 0);
  CHECK(contains(help.out, "sample"));
  CHECK(contains(help.out, "dump-config"));
  CHECK(run_cli("sample --help").code == 0);
}

TEST_CASE("config errors exit with the config code") {
  const std::string linear = config_path("linear.json").string();

  RunResult r = run_cli("rho --config /does/not/exist.json --max-m 3");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "cannot open"));

  const fs::path notjson = write_scratch("notjson.json", "{{{");
  r = run_cli("rho --config " + notjson.string() + " --max-m 3");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "not valid JSON"));

  const fs::path badkey = write_scratch("badkey.json", R"({
    "model": {"kind": "binary_ar", "link": "linear",
              "theta0": 0.0, "theta": [0.3]},
    "bogus": 1
  })");
  r = run_cli("dump-config --config " + badkey.string());
  CHECK(r.code == 2);
  CHECK(contains(r.err, "bogus"));

  // A bare schedule has no sampling kernel behind it.
  r = run_cli("sample --config " + config_path("const08.json").string() +
              " --from 0 --to 3");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "no sampling kernel"));

  CHECK(run_cli("sample --config " + linear + " --from 3 --to 1").code == 2);
  CHECK(run_cli("sample --config " + linear + " --from 0 --to 0 --count 0")
            .code == 2);
  CHECK(run_cli("rho --config " + linear + " --max-m -1").code == 2);
  CHECK(run_cli("bounds --config " + linear + " --window-len 0 --m 1").code ==
        2);
  CHECK(run_cli("bounds --config " + linear + " --window-len 1 --m 0").code ==
        2);
  CHECK(run_cli("dary --config " + linear + " --steps 3").code == 2);

  // The impatience sum for this chain exceeds one at depth 1, so the bound
  // is vacuous and reported as an error rather than a number.
  r = run_cli("bounds --config " + config_path("lowmass.json").string() +
              " --window-len 3 --m 1");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "not below 1"));

  // An unparseable environment seed is rejected, not silently ignored.
  const fs::path seedless = write_scratch("seedless.json", R"({
    "model": {"kind": "binary_ar", "link": "linear",
              "theta0": 0.0, "theta": [0.3]},
    "regime": "beta-positive"
  })");
  r = run_cli("sample --config " + seedless.string() + " --from 0 --to 0",
              {"REGENSIM_SEED=abc"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "REGENSIM_SEED"));
}

TEST_CASE("rho table matches the frozen reference") {
  const RunResult r = run_cli("rho --config " +
                              config_path("const08.json").string() +
                              " --max-m 8");
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("rho_const.csv"));
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] == "m,beta_m,f_m,rho_m");
}

TEST_CASE("bounds match the frozen reference") {
  const RunResult r = run_cli("bounds --config " +
                              config_path("const08.json").string() +
                              " --window-len 1 --m 2");
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("bounds_const.csv"));
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "bound,value");
  CHECK(contains(lines[1], "tau_tail,"));
  CHECK(contains(lines[2], "impatience,"));
}

TEST_CASE("sample stream is reproducible and honors seed precedence") {
  const std::string linear = config_path("linear.json").string();
  const std::string args = "sample --config " + linear +
                           " --from -2 --to 3 --count 3";
  const std::string reference = golden("sample_linear.jsonl");

  const RunResult base = run_cli(args);
  REQUIRE(base.code == 0);
  CHECK(base.out == reference);
  CHECK(run_cli(args).out == reference);

  // Each line is a complete record for the requested window.
  const auto lines = lines_of(base.out);
  REQUIRE(lines.size() == 3);
  for (const std::string& line : lines) {
    const auto record = nlohmann::json::parse(line);
    CHECK(record.at("window") == nlohmann::json({-2, 3}));
    CHECK(record.at("symbols").size() == 6);
    CHECK(record.at("aborted") == false);
    CHECK(record.at("tau").get<int64_t>() <= -2);
    CHECK(record.at("uniforms_used").get<int64_t>() > 0);
  }

  // Precedence: flag over config seed over environment.
  CHECK(run_cli(args, {"REGENSIM_SEED=999"}).out == reference);
  CHECK(run_cli(args + " --seed 411").out == reference);
  CHECK(run_cli(args + " --seed 500").out != reference);

  const fs::path seedless = write_scratch("precedence.json", R"({
    "model": {"kind": "binary_ar", "link": "linear",
              "theta0": 0.0, "theta": [0.3]},
    "regime": "beta-positive"
  })");
  const std::string seedless_args = "sample --config " + seedless.string() +
                                    " --from -2 --to 3 --count 3";
  CHECK(run_cli(seedless_args, {"REGENSIM_SEED=411"}).out == reference);
  CHECK(run_cli(seedless_args).out == run_cli(seedless_args + " --seed 0").out);

  // --out writes the identical bytes and keeps stdout quiet.
  const fs::path out_file = scratch_dir() / "sample.jsonl";
  const RunResult filed = run_cli(args + " --out " + out_file.string());
  CHECK(filed.code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(out_file) == reference);

  // Kernel selection must not change the stream: the vector paths are
  // bit-compatible with the scalar reference, and unknown names fall back
  // to automatic selection.
  CHECK(run_cli(args, {"REGENSIM_ISA=scalar"}).out == reference);
  CHECK(run_cli(args, {"REGENSIM_ISA=avx2"}).out == reference);
  CHECK(run_cli(args, {"REGENSIM_ISA=never-heard-of-it"}).out == reference);
}

TEST_CASE("renewal scan matches the frozen reference") {
  const RunResult r = run_cli("renewal --config " +
                              config_path("linear.json").string() +
                              " --from 0 --to 12");
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("renewal_linear.csv"));

  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "time,verified_to,censored");
  // Every reported time is verified only up to the horizon and flagged so.
  for (size_t i = 1; i < lines.size(); ++i) {
    CHECK(contains(lines[i], ",12,1"));
  }

  // Renewal times are only meaningful under the beta-positive assertion.
  const RunResult gated = run_cli("renewal --config " +
                                  config_path("const08.json").string() +
                                  " --from 0 --to 12");
  CHECK(gated.code == 4);
  CHECK(contains(gated.err, "beta-positive"));
}

TEST_CASE("dary walk matches the frozen reference") {
  const RunResult r = run_cli("dary --config " +
                              config_path("dary.json").string() + " --steps 6");
  REQUIRE(r.code == 0);
  CHECK(r.out == golden("dary_walk.csv"));

  // Rows must satisfy the interval map exactly: x' = (x + digit) / base,
  // which is exact in binary floating point for base 2.
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "step,x_left,digit");
  double prev = 0.0;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string step_s, x_s, digit_s;
    std::getline(row, step_s, ',');
    std::getline(row, x_s, ',');
    std::getline(row, digit_s, ',');
    const double x = std::stod(x_s);
    const int digit = std::stoi(digit_s);
    CHECK(std::stoi(step_s) == int(i) - 1);
    CHECK((digit == 0 || digit == 1));
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    if (i > 1) CHECK(x == (prev + digit) / 2.0);
    prev = x;
  }

  CHECK(run_cli("dary --config " + config_path("dary.json").string() +
                " --steps -1")
            .code == 2);
  CHECK(run_cli("dary --config " + config_path("dary.json").string() +
                " --steps 2 --resolution 0")
            .code == 2);
}

TEST_CASE("dump-config is canonical and idempotent") {
  const RunResult first = run_cli("dump-config --config " +
                                  config_path("linear.json").string());
  REQUIRE(first.code == 0);
  CHECK(first.out == golden("dump_linear.json"));

  // Dumping the dump reproduces it byte for byte.
  const fs::path echoed = write_scratch("echoed.json", first.out);
  const RunResult second = run_cli("dump-config --config " + echoed.string());
  CHECK(second.code == 0);
  CHECK(second.out == first.out);

  // Key order and whitespace in the input do not affect the canonical form.
  const fs::path shuffled = write_scratch("shuffled.json", R"({"seed":411,
    "regime":"beta-positive",
    "model":{"theta":[0.3],"theta0":0.0,"link":"linear","kind":"binary_ar"}})");
  const RunResult third = run_cli("dump-config --config " + shuffled.string());
  CHECK(third.code == 0);
  CHECK(third.out == first.out);
}

TEST_CASE("unasserted regime blocks sampling unless forced") {
  const std::string args = "sample --config " +
                           config_path("unassert.json").string() +
                           " --from 0 --to 2";
  const RunResult gated = run_cli(args);
  CHECK(gated.code == 4);
  CHECK(gated.out.empty());
  CHECK(contains(gated.err, "unasserted"));
  CHECK(contains(gated.err, "advisory"));
  CHECK(contains(gated.err, "--force"));

  const RunResult forced = run_cli(args + " --force");
  CHECK(forced.code == 0);
  CHECK(lines_of(forced.out).size() == 1);
}

TEST_CASE("abort exits distinguish total failure from partial success") {
  const std::string lowmass = config_path("lowmass.json").string();

  // Depth 1 cannot reach back far enough for this chain, so every
  // replicate aborts and the run reports total failure.
  const RunResult all = run_cli("sample --config " + lowmass +
                                " --from 0 --to 0 --max-depth 1 --count 4" +
                                " --seed 99");
  CHECK(all.code == 3);
  const auto lines = lines_of(all.out);
  REQUIRE(lines.size() == 4);
  for (const std::string& line : lines) {
    const auto record = nlohmann::json::parse(line);
    CHECK(record.at("aborted") == true);
    CHECK(record.at("tau").is_null());
    CHECK(record.at("symbols").empty());
  }

  const RunResult single = run_cli("sample --config " + lowmass +
                                   " --from 0 --to 0 --max-depth 1 --seed 12");
  CHECK(single.code == 3);

  // A deeper budget lets most replicates finish; any success means exit 0.
  const RunResult mixed = run_cli("sample --config " + lowmass +
                                  " --from 0 --to 0 --max-depth 6 --count 10" +
                                  " --seed 99");
  CHECK(mixed.code == 0);
  CHECK(contains(mixed.out, "\"aborted\":false"));
  CHECK(contains(mixed.out, "\"aborted\":true"));
}
