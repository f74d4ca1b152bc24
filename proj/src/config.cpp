#include "regen/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "regen/errors.hpp"
#include "regen/models/binary_ar.hpp"
#include "regen/models/finite_order.hpp"

namespace regen::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw ConfigError(message);
}

// Strict schema: every present key must be in the allowed set, so typos in
// optional keys fail loudly instead of silently falling back to defaults.
void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const char* where) {
  if (!obj.is_object()) fail(std::string(where) + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      fail("unknown key \"" + item.key() + "\" in " + where);
  }
}

const json& require(const json& obj, const char* key, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end())
    fail(std::string(where) + " is missing required key \"" + key + "\"");
  return *it;
}

double as_double(const json& v, const char* what) {
  if (!v.is_number()) fail(std::string(what) + " must be a number");
  return v.get<double>();
}

int64_t as_int64(const json& v, const char* what) {
  if (!v.is_number_integer())
    fail(std::string(what) + " must be an integer");
  return v.get<int64_t>();
}

uint64_t as_uint64(const json& v, const char* what) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0)
    return uint64_t(v.get<int64_t>());
  fail(std::string(what) + " must be a non-negative integer");
}

std::string as_string(const json& v, const char* what) {
  if (!v.is_string()) fail(std::string(what) + " must be a string");
  return v.get<std::string>();
}

std::vector<double> as_double_list(const json& v, const char* what) {
  if (!v.is_array()) fail(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_double(e, what));
  return out;
}

std::vector<std::vector<double>> as_table(const json& v, const char* what) {
  if (!v.is_array()) fail(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> out;
  out.reserve(v.size());
  for (const auto& row : v) out.push_back(as_double_list(row, what));
  return out;
}

TailDescriptor parse_theta_tail(const json& v) {
  TailDescriptor out;
  const std::string kind = as_string(require(v, "kind", "theta_tail"),
                                     "theta_tail.kind");
  if (kind == "geometric") {
    expect_keys(v, {"kind", "coeff", "ratio"}, "theta_tail");
    out.kind = TailDescriptor::Kind::Geometric;
    out.coeff = as_double(require(v, "coeff", "theta_tail"), "theta_tail.coeff");
    out.ratio = as_double(require(v, "ratio", "theta_tail"), "theta_tail.ratio");
  } else if (kind == "power") {
    expect_keys(v, {"kind", "coeff", "exponent"}, "theta_tail");
    out.kind = TailDescriptor::Kind::Power;
    out.coeff = as_double(require(v, "coeff", "theta_tail"), "theta_tail.coeff");
    out.exponent =
        as_double(require(v, "exponent", "theta_tail"), "theta_tail.exponent");
  } else {
    fail("theta_tail.kind must be \"geometric\" or \"power\", got \"" + kind +
         "\"");
  }
  return out;
}

ScheduleTail parse_schedule_tail(const json& v) {
  ScheduleTail out;
  const std::string kind = as_string(require(v, "kind", "tail"), "tail.kind");
  if (kind == "none") {
    expect_keys(v, {"kind"}, "tail");
    out.kind = ScheduleTail::Kind::None;
  } else if (kind == "degenerate") {
    expect_keys(v, {"kind"}, "tail");
    out.kind = ScheduleTail::Kind::Degenerate;
  } else if (kind == "constant") {
    expect_keys(v, {"kind", "value"}, "tail");
    out.kind = ScheduleTail::Kind::Constant;
    out.value = as_double(require(v, "value", "tail"), "tail.value");
  } else if (kind == "geometric") {
    expect_keys(v, {"kind", "coeff", "ratio"}, "tail");
    out.kind = ScheduleTail::Kind::Geometric;
    out.coeff = as_double(require(v, "coeff", "tail"), "tail.coeff");
    out.ratio = as_double(require(v, "ratio", "tail"), "tail.ratio");
  } else if (kind == "power") {
    expect_keys(v, {"kind", "coeff", "exponent"}, "tail");
    out.kind = ScheduleTail::Kind::Power;
    out.coeff = as_double(require(v, "coeff", "tail"), "tail.coeff");
    out.exponent = as_double(require(v, "exponent", "tail"), "tail.exponent");
  } else {
    fail("tail.kind \"" + kind + "\" is not a schedule tail");
  }
  return out;
}

std::vector<Symbol> as_alphabet(const json& v) {
  if (!v.is_array() || v.empty())
    fail("alphabet must be a non-empty array of integers");
  std::vector<Symbol> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    const int64_t s = as_int64(e, "alphabet entry");
    if (s < std::numeric_limits<Symbol>::min() ||
        s > std::numeric_limits<Symbol>::max())
      fail("alphabet entry " + std::to_string(s) + " is out of symbol range");
    out.push_back(Symbol(s));
  }
  return out;
}

ModelConfig parse_model(const json& v) {
  const std::string kind = as_string(require(v, "kind", "model"), "model.kind");
  if (kind == "binary_ar") {
    expect_keys(v, {"kind", "theta0", "theta", "theta_tail", "link", "k0",
                    "k_enum"},
                "model");
    BinaryARModel m;
    m.theta0 = as_double(require(v, "theta0", "model"), "theta0");
    m.theta = as_double_list(require(v, "theta", "model"), "theta");
    if (v.contains("theta_tail")) m.theta_tail = parse_theta_tail(v["theta_tail"]);
    const std::string link = as_string(require(v, "link", "model"), "link");
    if (link == "linear")
      m.link = BinaryARModel::LinkKind::Linear;
    else if (link == "logistic")
      m.link = BinaryARModel::LinkKind::Logistic;
    else
      fail("link must be \"linear\" or \"logistic\", got \"" + link + "\"");
    if (v.contains("k0")) m.k0 = as_int64(v["k0"], "k0");
    if (v.contains("k_enum")) m.k_enum = as_int64(v["k_enum"], "k_enum");
    return m;
  }
  if (kind == "finite_order") {
    expect_keys(v, {"kind", "alphabet", "order", "table"}, "model");
    FiniteOrderModel m;
    m.alphabet = as_alphabet(require(v, "alphabet", "model"));
    m.order = as_int64(require(v, "order", "model"), "order");
    m.table = as_table(require(v, "table", "model"), "table row");
    return m;
  }
  if (kind == "dary") {
    expect_keys(v, {"kind", "base", "resolution", "order", "table"}, "model");
    DaryModel m;
    m.base = as_int64(require(v, "base", "model"), "base");
    m.resolution = as_int64(require(v, "resolution", "model"), "resolution");
    m.order = as_int64(require(v, "order", "model"), "order");
    m.table = as_table(require(v, "table", "model"), "table row");
    return m;
  }
  if (kind == "explicit_schedule") {
    expect_keys(v, {"kind", "head", "tail"}, "model");
    ExplicitScheduleModel m;
    m.head = as_double_list(require(v, "head", "model"), "head");
    m.tail = parse_schedule_tail(require(v, "tail", "model"));
    return m;
  }
  fail("model.kind \"" + kind + "\" is not a known model");
}

json dump_theta_tail(const TailDescriptor& t) {
  json out;
  switch (t.kind) {
    case TailDescriptor::Kind::None:
      break;
    case TailDescriptor::Kind::Geometric:
      out["kind"] = "geometric";
      out["coeff"] = t.coeff;
      out["ratio"] = t.ratio;
      break;
    case TailDescriptor::Kind::Power:
      out["kind"] = "power";
      out["coeff"] = t.coeff;
      out["exponent"] = t.exponent;
      break;
  }
  return out;
}

json dump_schedule_tail(const ScheduleTail& t) {
  json out;
  switch (t.kind) {
    case ScheduleTail::Kind::None:
      out["kind"] = "none";
      break;
    case ScheduleTail::Kind::Degenerate:
      out["kind"] = "degenerate";
      break;
    case ScheduleTail::Kind::Constant:
      out["kind"] = "constant";
      out["value"] = t.value;
      break;
    case ScheduleTail::Kind::Geometric:
      out["kind"] = "geometric";
      out["coeff"] = t.coeff;
      out["ratio"] = t.ratio;
      break;
    case ScheduleTail::Kind::Power:
      out["kind"] = "power";
      out["coeff"] = t.coeff;
      out["exponent"] = t.exponent;
      break;
  }
  return out;
}

json dump_model(const ModelConfig& model) {
  json out;
  if (const auto* m = std::get_if<BinaryARModel>(&model)) {
    out["kind"] = "binary_ar";
    out["theta0"] = m->theta0;
    out["theta"] = m->theta;
    if (m->theta_tail.kind != TailDescriptor::Kind::None)
      out["theta_tail"] = dump_theta_tail(m->theta_tail);
    out["link"] =
        m->link == BinaryARModel::LinkKind::Linear ? "linear" : "logistic";
    if (m->k0) out["k0"] = *m->k0;
    out["k_enum"] = m->k_enum;
  } else if (const auto* f = std::get_if<FiniteOrderModel>(&model)) {
    out["kind"] = "finite_order";
    out["alphabet"] = f->alphabet;
    out["order"] = f->order;
    out["table"] = f->table;
  } else if (const auto* d = std::get_if<DaryModel>(&model)) {
    out["kind"] = "dary";
    out["base"] = d->base;
    out["resolution"] = d->resolution;
    out["order"] = d->order;
    out["table"] = d->table;
  } else if (const auto* e = std::get_if<ExplicitScheduleModel>(&model)) {
    out["kind"] = "explicit_schedule";
    out["head"] = e->head;
    out["tail"] = dump_schedule_tail(e->tail);
  }
  return out;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& table,
                            size_t row_len) {
  std::vector<double> flat;
  flat.reserve(table.size() * row_len);
  for (const auto& row : table) {
    if (row.size() != row_len)
      fail("table rows must all have " + std::to_string(row_len) +
           " entries, found one with " + std::to_string(row.size()));
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

TailRule to_tail_rule(const ScheduleTail& t) {
  switch (t.kind) {
    case ScheduleTail::Kind::None:
      return NoTail{};
    case ScheduleTail::Kind::Degenerate:
      return DegenerateOneTail{};
    case ScheduleTail::Kind::Constant:
      return ConstantTail{t.value};
    case ScheduleTail::Kind::Geometric:
      return GeometricTail{t.coeff, t.ratio};
    case ScheduleTail::Kind::Power:
      return PowerTail{t.coeff, t.exponent};
  }
  return NoTail{};
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(std::string("configuration is not valid JSON: ") + e.what());
  }
  expect_keys(root, {"model", "regime", "seed", "max_depth", "format"},
              "configuration");

  RunConfig cfg;
  cfg.model = parse_model(require(root, "model", "configuration"));

  if (root.contains("regime")) {
    const std::string regime = as_string(root["regime"], "regime");
    if (regime == "sum-beta-diverges")
      cfg.regime = RegimeAssertion::SumBetaDiverges;
    else if (regime == "beta-positive")
      cfg.regime = RegimeAssertion::BetaPositive;
    else if (regime == "unasserted")
      cfg.regime = RegimeAssertion::Unasserted;
    else
      fail("regime \"" + regime +
           "\" is not one of sum-beta-diverges, beta-positive, unasserted");
  }
  if (root.contains("seed")) cfg.seed = as_uint64(root["seed"], "seed");
  if (root.contains("max_depth")) {
    cfg.max_depth = as_int64(root["max_depth"], "max_depth");
    if (*cfg.max_depth < 1) fail("max_depth must be at least 1");
  }
  if (root.contains("format")) {
    const std::string format = as_string(root["format"], "format");
    if (format == "json-lines")
      cfg.format = OutputFormat::JsonLines;
    else if (format == "csv")
      cfg.format = OutputFormat::Csv;
    else
      fail("format must be \"json-lines\" or \"csv\", got \"" + format + "\"");
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open configuration file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string dump_config(const RunConfig& cfg) {
  json root;
  root["model"] = dump_model(cfg.model);
  root["regime"] = to_string(cfg.regime);
  if (cfg.seed) root["seed"] = *cfg.seed;
  if (cfg.max_depth) root["max_depth"] = *cfg.max_depth;
  root["format"] =
      cfg.format == OutputFormat::JsonLines ? "json-lines" : "csv";
  return root.dump(2) + "\n";
}

BuiltModel build_model(const RunConfig& cfg) {
  try {
    if (const auto* m = std::get_if<BinaryARModel>(&cfg.model)) {
      models::BinaryARSpec::Params p;
      p.theta0 = m->theta0;
      p.theta = m->theta;
      switch (m->theta_tail.kind) {
        case TailDescriptor::Kind::None:
          break;
        case TailDescriptor::Kind::Geometric:
          p.tail = models::GeometricThetaTail{m->theta_tail.coeff,
                                              m->theta_tail.ratio};
          break;
        case TailDescriptor::Kind::Power:
          p.tail = models::PowerThetaTail{m->theta_tail.coeff,
                                          m->theta_tail.exponent};
          break;
      }
      p.link = m->link == BinaryARModel::LinkKind::Linear
                   ? models::Link(models::LinearLink{})
                   : models::Link(models::LogisticLink{});
      p.k0 = m->k0;
      p.k_enum = m->k_enum;
      auto spec = std::make_shared<const models::BinaryARSpec>(std::move(p));
      ThresholdSchedule sch = spec->schedule();
      return BuiltModel{spec, std::move(sch), std::nullopt, std::nullopt};
    }
    if (const auto* f = std::get_if<FiniteOrderModel>(&cfg.model)) {
      const Alphabet alphabet(f->alphabet);
      auto spec = std::make_shared<const models::FiniteOrderSpec>(
          alphabet, f->order, flatten(f->table, alphabet.size()));
      ThresholdSchedule sch = spec->schedule();
      return BuiltModel{spec, std::move(sch), std::nullopt, std::nullopt};
    }
    if (const auto* d = std::get_if<DaryModel>(&cfg.model)) {
      if (d->base < 2) fail("dary base must be at least 2");
      if (d->resolution < 1) fail("dary resolution must be at least 1");
      std::vector<Symbol> digits;
      for (int64_t g = 0; g < d->base; ++g) digits.push_back(Symbol(g));
      auto spec = std::make_shared<const models::FiniteOrderSpec>(
          Alphabet(digits), d->order, flatten(d->table, size_t(d->base)));
      ThresholdSchedule sch = spec->schedule();
      return BuiltModel{spec, std::move(sch), d->base, d->resolution};
    }
    const auto& e = std::get<ExplicitScheduleModel>(cfg.model);
    return BuiltModel{nullptr, ThresholdSchedule(e.head, to_tail_rule(e.tail)),
                      std::nullopt, std::nullopt};
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& err) {
    fail(std::string("model rejected: ") + err.what());
  }
}

}  // namespace regen::config
