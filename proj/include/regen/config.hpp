#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "regen/house_of_cards.hpp"
#include "regen/schedule.hpp"
#include "regen/specification.hpp"

namespace regen::config {

enum class OutputFormat { JsonLines, Csv };

// Plain mirrors of the JSON schema. These stay comparable and serializable;
// build_model translates them into live kernels and schedules, so closures
// and other non-serializable machinery never appear here.
struct TailDescriptor {
  enum class Kind { None, Geometric, Power };
  Kind kind = Kind::None;
  double coeff = 0.0;
  double ratio = 0.0;     // geometric only
  double exponent = 0.0;  // power only
  bool operator==(const TailDescriptor&) const = default;
};

struct BinaryARModel {
  double theta0 = 0.0;
  std::vector<double> theta;
  TailDescriptor theta_tail{};
  enum class LinkKind { Linear, Logistic };
  LinkKind link = LinkKind::Linear;
  std::optional<int64_t> k0{};
  int64_t k_enum = 16;
  bool operator==(const BinaryARModel&) const = default;
};

struct FiniteOrderModel {
  std::vector<Symbol> alphabet;
  int64_t order = 0;
  std::vector<std::vector<double>> table;  // one row per context code
  bool operator==(const FiniteOrderModel&) const = default;
};

struct DaryModel {
  int64_t base = 2;
  int64_t resolution = 1;
  int64_t order = 0;                       // order of the digit chain
  std::vector<std::vector<double>> table;  // digit chain rows, digits 0..D-1
  bool operator==(const DaryModel&) const = default;
};

struct ScheduleTail {
  enum class Kind { None, Degenerate, Constant, Geometric, Power };
  Kind kind = Kind::Degenerate;
  double value = 0.0;     // constant only
  double coeff = 0.0;     // geometric / power
  double ratio = 0.0;     // geometric only
  double exponent = 0.0;  // power only
  bool operator==(const ScheduleTail&) const = default;
};

struct ExplicitScheduleModel {
  std::vector<double> head;
  ScheduleTail tail{};
  bool operator==(const ExplicitScheduleModel&) const = default;
};

using ModelConfig = std::variant<BinaryARModel, FiniteOrderModel, DaryModel,
                                 ExplicitScheduleModel>;

struct RunConfig {
  ModelConfig model{};
  RegimeAssertion regime = RegimeAssertion::Unasserted;
  // Left unset when the file omits the key, so the CLI can tell an explicit
  // "seed": 0 apart from "no opinion" when applying its precedence rules.
  std::optional<uint64_t> seed{};
  std::optional<int64_t> max_depth{};
  OutputFormat format = OutputFormat::JsonLines;
  bool operator==(const RunConfig&) const = default;
};

// Live counterpart of a RunConfig. spec is null for explicit-schedule
// configs, which only drive schedule-level commands; base and resolution are
// set for the D-ary bridge only.
struct BuiltModel {
  std::shared_ptr<const SpecificationKernel> spec;
  ThresholdSchedule schedule;
  std::optional<int64_t> base;
  std::optional<int64_t> resolution;
};

// Strict parse: unknown keys, wrong types, and out-of-range values all raise
// ConfigError with the offending key in the message.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

// Canonical JSON, stable across runs; parse_config(dump_config(c)) == c.
std::string dump_config(const RunConfig& cfg);

// Translates the mirror structs into kernels and a schedule. Model
// construction failures are rewrapped as ConfigError so callers see one
// error type for "this configuration cannot run".
BuiltModel build_model(const RunConfig& cfg);

}  // namespace regen::config
