// regensim: command-line surface over the regeneration sampler. Subcommands
// cover batch window sampling, the height-chain tables and bounds, renewal
// scans, the D-ary interval bridge, and canonical config output.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 sampling aborted
// (every replicate, or the single requested trajectory), 4 regime violation.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "regen/config.hpp"
#include "regen/engine.hpp"
#include "regen/errors.hpp"
#include "regen/house_of_cards.hpp"
#include "regen/models/dary.hpp"
#include "regen/uniform_field.hpp"

namespace {

using namespace regen;
namespace cfg = regen::config;

constexpr int kExitConfig = 2;
constexpr int kExitAborted = 3;
constexpr int kExitRegime = 4;

// Shortest decimal form that parses back to the same double, so tables and
// records are both exact and stable byte-for-byte.
std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Output target: --out file or stdout. Files are truncated and written in
// binary mode so reruns compare byte-identical.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

uint64_t env_seed() {
  const char* raw = std::getenv("REGENSIM_SEED");
  if (raw == nullptr || *raw == '\0') return 0;
  uint64_t value = 0;
  const char* end = raw + std::string_view(raw).size();
  const auto res = std::from_chars(raw, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError(std::string("REGENSIM_SEED is not an unsigned integer: ") +
                      raw);
  return value;
}

// Documented precedence: --seed flag, then the config file's seed key, then
// the REGENSIM_SEED environment variable, then 0.
uint64_t effective_seed(const std::optional<uint64_t>& flag,
                        const cfg::RunConfig& run) {
  if (flag) return *flag;
  if (run.seed) return *run.seed;
  return env_seed();
}

int64_t effective_depth(const std::optional<int64_t>& flag,
                        const cfg::RunConfig& run) {
  const int64_t depth = flag ? *flag : run.max_depth.value_or(1000000);
  if (depth < 1) throw ConfigError("max depth must be at least 1");
  return depth;
}

// Sampling commands run only under an asserted regime; --force overrides
// with the advisory classification echoed so the override is informed.
bool regime_allows_sampling(const cfg::RunConfig& run,
                            const ThresholdSchedule& schedule, bool force) {
  if (run.regime != RegimeAssertion::Unasserted) return true;
  if (force) return true;
  const RegimeReport report = regime_report(schedule, 64, run.regime);
  std::cerr << "regime is unasserted; refusing to sample (advisory: "
            << to_string(report.advisory)
            << "). Assert a regime in the config or pass --force.\n";
  return false;
}

struct SampleArgs {
  std::string config_path;
  int64_t from = 0;
  int64_t to = 0;
  std::optional<uint64_t> seed;
  int64_t count = 1;
  std::optional<int64_t> max_depth;
  std::string out;
  bool force = false;
};

int run_sample(const SampleArgs& a) {
  const cfg::RunConfig run = cfg::load_config_file(a.config_path);
  const cfg::BuiltModel built = cfg::build_model(run);
  if (!built.spec)
    throw ConfigError("this configuration has no sampling kernel");
  if (a.from > a.to) throw ConfigError("--from must be <= --to");
  if (a.count < 1) throw ConfigError("--count must be at least 1");
  if (!regime_allows_sampling(run, built.schedule, a.force)) return kExitRegime;

  const uint64_t master = effective_seed(a.seed, run);
  const int64_t depth = effective_depth(a.max_depth, run);
  Sink sink(a.out);

  int64_t aborted = 0;
  for (int64_t r = 0; r < a.count; ++r) {
    const UniformField field(replicate_seed(master, uint64_t(r)));
    nlohmann::json line;
    line["window"] = {a.from, a.to};
    try {
      const WindowSample ws =
          sample_window(a.from, a.to, field, *built.spec, built.schedule, depth);
      line["symbols"] = ws.symbols;
      line["tau"] = ws.record.tau;
      line["uniforms_used"] = ws.record.uniforms_consumed;
      line["aborted"] = false;
    } catch (const AbortedError& e) {
      line["symbols"] = nlohmann::json::array();
      line["tau"] = nullptr;
      line["uniforms_used"] = e.partial.uniforms_consumed;
      line["aborted"] = true;
      ++aborted;
    }
    sink.stream() << line.dump() << "\n";
  }
  return aborted == a.count ? kExitAborted : 0;
}

struct RhoArgs {
  std::string config_path;
  int64_t max_m = 0;
  std::string out;
};

int run_rho(const RhoArgs& a) {
  const cfg::RunConfig run = cfg::load_config_file(a.config_path);
  const cfg::BuiltModel built = cfg::build_model(run);
  if (a.max_m < 0) throw ConfigError("--max-m must be non-negative");
  const RhoTable table = rho_table(built.schedule, a.max_m);
  Sink sink(a.out);
  sink.stream() << "m,beta_m,f_m,rho_m\n";
  for (int64_t m = 0; m <= a.max_m; ++m)
    sink.stream() << m << "," << fmt(table.beta[size_t(m)]) << ","
                  << fmt(table.first_return[size_t(m)]) << ","
                  << fmt(table.rho[size_t(m)]) << "\n";
  return 0;
}

struct BoundsArgs {
  std::string config_path;
  int64_t window_len = 1;
  int64_t m = 1;
  std::string out;
};

int run_bounds(const BoundsArgs& a) {
  const cfg::RunConfig run = cfg::load_config_file(a.config_path);
  const cfg::BuiltModel built = cfg::build_model(run);
  if (a.window_len < 1) throw ConfigError("--window-len must be at least 1");
  if (a.m < 1) throw ConfigError("--m must be at least 1");
  const double tail = tau_tail_bound(built.schedule, 0, a.window_len - 1, a.m);
  const double impatience =
      impatience_bound(built.schedule, 0, a.window_len - 1, a.m);
  Sink sink(a.out);
  sink.stream() << "bound,value\n";
  sink.stream() << "tau_tail," << fmt(tail) << "\n";
  sink.stream() << "impatience," << fmt(impatience) << "\n";
  return 0;
}

struct RenewalArgs {
  std::string config_path;
  int64_t from = 0;
  int64_t to = 0;
  std::optional<uint64_t> seed;
  std::string out;
};

int run_renewal(const RenewalArgs& a) {
  const cfg::RunConfig run = cfg::load_config_file(a.config_path);
  const cfg::BuiltModel built = cfg::build_model(run);
  if (a.from > a.to) throw ConfigError("--from must be <= --to");
  // Renewal times only exist in the semi-infinite regime, so this command
  // requires the beta-positive assertion outright.
  if (run.regime != RegimeAssertion::BetaPositive) {
    const RegimeReport report = regime_report(built.schedule, 64, run.regime);
    std::cerr << "renewal scan requires the beta-positive assertion "
              << "(advisory: " << to_string(report.advisory) << ").\n";
    return kExitRegime;
  }
  const UniformField field(effective_seed(a.seed, run));
  const RenewalReport report = renewal_scan(a.from, a.to, field, built.schedule);
  Sink sink(a.out);
  sink.stream() << "time,verified_to,censored\n";
  for (const RenewalPoint& p : report.points)
    sink.stream() << p.time << "," << p.verified_to << ","
                  << (p.right_censored ? 1 : 0) << "\n";
  return 0;
}

struct DaryArgs {
  std::string config_path;
  std::optional<int64_t> resolution;
  int64_t steps = 0;
  std::optional<uint64_t> seed;
  std::optional<int64_t> max_depth;
  std::string out;
  bool force = false;
};

int run_dary(const DaryArgs& a) {
  const cfg::RunConfig run = cfg::load_config_file(a.config_path);
  const cfg::BuiltModel built = cfg::build_model(run);
  if (!built.base)
    throw ConfigError("the dary command needs a dary model configuration");
  const int64_t resolution = a.resolution.value_or(*built.resolution);
  if (resolution < 1) throw ConfigError("--resolution must be at least 1");
  if (a.steps < 0) throw ConfigError("--steps must be non-negative");
  if (!regime_allows_sampling(run, built.schedule, a.force)) return kExitRegime;

  const UniformField field(effective_seed(a.seed, run));
  const int64_t depth = effective_depth(a.max_depth, run);

  // One window [-resolution, steps-1] drives both the perfectly sampled
  // start state and every forward digit, so the whole trajectory is one
  // consistent sample.
  std::vector<Symbol> symbols;
  try {
    symbols = sample_window(-resolution, a.steps - 1, field, *built.spec,
                            built.schedule, depth)
                  .symbols;
  } catch (const AbortedError&) {
    std::cerr << "trajectory aborted at depth " << depth << "\n";
    return kExitAborted;
  }
  const auto at = [&](int64_t i) { return symbols[size_t(i + resolution)]; };

  auto digits = std::vector<int64_t>(size_t(resolution));  // most recent first
  for (int64_t j = 1; j <= resolution; ++j) digits[size_t(j - 1)] = at(-j);
  models::DaryState state = models::dary_state(*built.base, digits);

  Sink sink(a.out);
  sink.stream() << "step,x_left,digit\n";
  sink.stream() << 0 << "," << fmt(state.point) << "," << at(-1) << "\n";
  for (int64_t j = 1; j <= a.steps; ++j) {
    const int64_t digit = at(j - 1);
    state = models::dary_step(state, digit);
    sink.stream() << j << "," << fmt(state.point) << "," << digit << "\n";
  }
  return 0;
}

int run_dump(const std::string& config_path, const std::string& out) {
  const cfg::RunConfig run = cfg::load_config_file(config_path);
  Sink sink(out);
  sink.stream() << cfg::dump_config(run);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect sampler for stationary processes with long memory"};
  app.require_subcommand(1);

  SampleArgs sample;
  CLI::App* cmd_sample =
      app.add_subcommand("sample", "Draw window samples as JSON lines");
  cmd_sample->add_option("--config", sample.config_path, "Config file")
      ->required();
  cmd_sample->add_option("--from", sample.from, "Window start")->required();
  cmd_sample->add_option("--to", sample.to, "Window end")->required();
  cmd_sample->add_option("--seed", sample.seed, "Master seed");
  cmd_sample->add_option("--count", sample.count, "Number of replicates");
  cmd_sample->add_option("--max-depth", sample.max_depth, "Abort depth");
  cmd_sample->add_option("--out", sample.out, "Output path (default stdout)");
  cmd_sample->add_flag("--force", sample.force,
                       "Sample even under an unasserted regime");

  RhoArgs rho;
  CLI::App* cmd_rho =
      app.add_subcommand("rho", "Height-chain return table as CSV");
  cmd_rho->add_option("--config", rho.config_path, "Config file")->required();
  cmd_rho->add_option("--max-m", rho.max_m, "Largest step index")->required();
  cmd_rho->add_option("--out", rho.out, "Output path (default stdout)");

  BoundsArgs bounds;
  CLI::App* cmd_bounds =
      app.add_subcommand("bounds", "Regeneration bounds as CSV");
  cmd_bounds->add_option("--config", bounds.config_path, "Config file")
      ->required();
  cmd_bounds->add_option("--window-len", bounds.window_len, "Window length")
      ->required();
  cmd_bounds->add_option("--m", bounds.m, "Depth for both bounds")->required();
  cmd_bounds->add_option("--out", bounds.out, "Output path (default stdout)");

  RenewalArgs renewal;
  CLI::App* cmd_renewal =
      app.add_subcommand("renewal", "Scan for renewal times as CSV");
  cmd_renewal->add_option("--config", renewal.config_path, "Config file")
      ->required();
  cmd_renewal->add_option("--from", renewal.from, "Scan start")->required();
  cmd_renewal->add_option("--to", renewal.to, "Scan end")->required();
  cmd_renewal->add_option("--seed", renewal.seed, "Field seed");
  cmd_renewal->add_option("--out", renewal.out, "Output path (default stdout)");

  DaryArgs dary;
  CLI::App* cmd_dary =
      app.add_subcommand("dary", "D-ary interval trajectory as CSV");
  cmd_dary->add_option("--config", dary.config_path, "Config file")->required();
  cmd_dary->add_option("--resolution", dary.resolution,
                       "Digit window length (defaults to the config)");
  cmd_dary->add_option("--steps", dary.steps, "Forward steps")->required();
  cmd_dary->add_option("--seed", dary.seed, "Field seed");
  cmd_dary->add_option("--max-depth", dary.max_depth, "Abort depth");
  cmd_dary->add_option("--out", dary.out, "Output path (default stdout)");
  cmd_dary->add_flag("--force", dary.force,
                     "Sample even under an unasserted regime");

  std::string dump_path;
  std::string dump_out;
  CLI::App* cmd_dump =
      app.add_subcommand("dump-config", "Echo the config in canonical form");
  cmd_dump->add_option("--config", dump_path, "Config file")->required();
  cmd_dump->add_option("--out", dump_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (cmd_sample->parsed()) return run_sample(sample);
    if (cmd_rho->parsed()) return run_rho(rho);
    if (cmd_bounds->parsed()) return run_bounds(bounds);
    if (cmd_renewal->parsed()) return run_renewal(renewal);
    if (cmd_dary->parsed()) return run_dary(dary);
    if (cmd_dump->parsed()) return run_dump(dump_path, dump_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
