#ifndef INDUCTIVE_CONFIG_HPP
#define INDUCTIVE_CONFIG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "analogy.hpp"
#include "carnap.hpp"
#include "core.hpp"
#include "mixtures.hpp"
#include "symmetry.hpp"

namespace inductive {

// Experiment configuration. The file is JSON; the schema below (version 1) is the contract.
//
//   schema_version  1
//   task            "predict" | "simulate" | "audit" | "converge" | "compare"
//   outcomes        [label, ...]            k >= 2
//   types           [label, ...]            optional, default ["t0"]
//   rules           [{name, kind, ...}]     kind-specific parameters:
//       carnap      alpha: [a_i]
//       analogical  alpha: [[a_i0, a_i1], ...], beta, gamma, self_analogy_bound (optional)
//       skyrms      components: [[a_i], ...], weights (optional, default uniform)
//       maher       w, alpha4: [4], alpha_v: [2], alpha_w: [2]
//   history         [[outcome_label, type_label], ...]   optional
//   history_csv     path to a `step,outcome_label,type_label` file  optional
//   next_type       type label for predict               optional, default every type
//   process         {type_probs, frequencies: [[...] per type], horizon, seed}
//   audit           {length, tolerance, max_outcomes, max_length}
//   output          directory for artifacts

inline constexpr int kSchemaVersion = 1;

enum class Task { predict, simulate, audit, converge, compare };

inline const char* to_string(Task t) {
  switch (t) {
    case Task::predict: return "predict";
    case Task::simulate: return "simulate";
    case Task::audit: return "audit";
    case Task::converge: return "converge";
    case Task::compare: return "compare";
  }
  return "?";
}

inline Task parse_task(const std::string& s) {
  for (Task t : {Task::predict, Task::simulate, Task::audit, Task::converge, Task::compare}) {
    if (s == to_string(t)) return t;
  }
  throw InvalidInput("config: unknown task '" + s + "'");
}

using RuleParams = std::variant<CarnapParams, AnalogyParams, MixtureModel, MaherParams>;

struct RuleSpec {
  std::string name;
  RuleParams params;

  std::string kind() const {
    static constexpr std::array<const char*, 4> names{"carnap", "analogical", "skyrms", "maher"};
    return names[params.index()];
  }

  AnyRule make_rule() const {
    return std::visit(
        [](const auto& p) -> AnyRule {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, CarnapParams>) return CarnapRule(p);
          else if constexpr (std::is_same_v<P, AnalogyParams>) return AnalogicalRule(p);
          else if constexpr (std::is_same_v<P, MixtureModel>) return SkyrmsRule(p);
          else return MaherRule(p);
        },
        params);
  }

  std::size_t outcome_count() const { return make_rule().outcome_count(); }

  friend bool operator==(const RuleSpec&, const RuleSpec&) = default;
};

struct ProcessSpec {
  std::vector<double> type_probs;               // empty: uniform over the type space
  std::vector<std::vector<double>> frequencies;  // one per type
  std::size_t horizon = 0;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const ProcessSpec&, const ProcessSpec&) = default;
};

struct AuditSpec {
  std::size_t length = 5;
  double tolerance = kExactTolerance;
  std::size_t max_outcomes = 4;
  std::size_t max_length = 7;

  friend bool operator==(const AuditSpec&, const AuditSpec&) = default;
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  Task task = Task::predict;
  std::vector<std::string> outcomes;
  std::vector<std::string> types{"t0"};
  std::vector<RuleSpec> rules;
  std::vector<std::pair<std::string, std::string>> history;  // (outcome label, type label)
  std::optional<std::string> next_type;
  ProcessSpec process;
  AuditSpec audit;
  std::string output = ".";

  OutcomeSpace outcome_space() const { return OutcomeSpace(outcomes); }
  TypeSpace type_space() const { return TypeSpace(types); }

  TypedHistory typed_history() const {
    const OutcomeSpace os = outcome_space();
    const TypeSpace ts = type_space();
    std::vector<Outcome> xs;
    std::vector<TypeIndex> ys;
    for (const auto& [o, t] : history) {
      xs.push_back(os.index_of(o));
      ys.push_back(ts.index_of(t));
    }
    return TypedHistory(os.count(), ts.count(), std::move(xs), std::move(ys));
  }

  bool stochastic() const { return task == Task::simulate || task == Task::converge || task == Task::compare; }

  StreamConfig stream_config() const {
    const std::size_t m = types.size();
    std::vector<double> probs = process.type_probs;
    if (probs.empty()) probs.assign(m, 1.0 / static_cast<double>(m));
    StreamConfig sc{TypeProcess(std::move(probs)), {}};
    for (const auto& f : process.frequencies) sc.frequencies.emplace_back(f);
    sc.validate();
    return sc;
  }

  /// Throws InvalidInput naming the violated invariant.
  void validate() const {
    detail::require(schema_version == kSchemaVersion,
                    "config: unsupported schema_version " + std::to_string(schema_version));
    const OutcomeSpace os = outcome_space();
    const TypeSpace ts = type_space();
    detail::require(!rules.empty(), "config: at least one rule is required");
    for (const auto& r : rules) {
      detail::require(!r.name.empty(), "config: every rule needs a name");
      detail::require(r.outcome_count() == os.count(),
                      "config: rule '" + r.name + "' does not match the number of outcomes");
      if (std::holds_alternative<AnalogyParams>(r.params)) {
        detail::require(ts.count() == kAnalogyTypes, "config: analogical rule '" + r.name + "' needs exactly two types");
      }
    }
    for (std::size_t a = 0; a < rules.size(); ++a) {
      for (std::size_t b = a + 1; b < rules.size(); ++b) {
        detail::require(rules[a].name != rules[b].name, "config: rule names must be distinct");
      }
    }
    (void)typed_history();
    if (next_type) (void)ts.index_of(*next_type);
    if (task == Task::compare) detail::require(rules.size() >= 2, "config: compare needs at least two rules");
    if (stochastic()) {
      detail::require(process.seed.has_value(), "config: a seed is required for stochastic tasks");
      detail::require(process.horizon >= 1, "config: process.horizon must be positive");
      if (task != Task::simulate) {
        const StreamConfig sc = stream_config();
        detail::require(sc.outcome_count() == os.count(), "config: process frequencies must cover every outcome");
      } else if (!process.type_probs.empty()) {
        (void)TypeProcess(process.type_probs);
      }
      if (!process.type_probs.empty()) {
        detail::require(process.type_probs.size() == ts.count(), "config: process.type_probs must cover every type");
      }
    }
    if (task == Task::audit) {
      detail::require(audit.length >= 1, "config: audit.length must be positive");
      detail::require(audit.tolerance >= 0.0, "config: audit.tolerance must be nonnegative");
    }
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ---------------------------------------------------------------------------
// JSON mapping

namespace detail {

using nlohmann::json;

template <class T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InvalidInput("config: missing field '" + std::string(key) + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput("config: field '" + std::string(key) + "' in " + where + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get_field<T>(j, key, where) : fallback;
}

inline RuleSpec rule_from_json(const json& j) {
  const std::string where = "rule";
  RuleSpec spec{get_field<std::string>(j, "name", where), CarnapParams({1, 1})};
  const std::string kind = get_field<std::string>(j, "kind", where);
  const std::string at = "rule '" + spec.name + "'";
  if (kind == "carnap") {
    spec.params = CarnapParams(get_field<std::vector<double>>(j, "alpha", at));
  } else if (kind == "analogical") {
    spec.params = AnalogyParams(get_field<std::vector<std::array<double, 2>>>(j, "alpha", at),
                                get_field<double>(j, "beta", at), get_field<double>(j, "gamma", at),
                                get_or<bool>(j, "self_analogy_bound", false, at));
  } else if (kind == "skyrms") {
    std::vector<CarnapParams> comps;
    for (auto& a : get_field<std::vector<std::vector<double>>>(j, "components", at)) comps.emplace_back(std::move(a));
    if (j.contains("weights")) {
      spec.params = MixtureModel(std::move(comps), SimplexVector(get_field<std::vector<double>>(j, "weights", at)));
    } else {
      spec.params = MixtureModel(std::move(comps));
    }
  } else if (kind == "maher") {
    spec.params = MaherParams(get_field<double>(j, "w", at), CarnapParams(get_field<std::vector<double>>(j, "alpha4", at)),
                              CarnapParams(get_field<std::vector<double>>(j, "alpha_v", at)),
                              CarnapParams(get_field<std::vector<double>>(j, "alpha_w", at)));
  } else {
    throw InvalidInput("config: unknown rule kind '" + kind + "'");
  }
  return spec;
}

inline std::vector<double> to_vector(std::span<const double> xs) { return {xs.begin(), xs.end()}; }

inline json rule_to_json(const RuleSpec& r) {
  json j{{"name", r.name}, {"kind", r.kind()}};
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, CarnapParams>) {
          j["alpha"] = to_vector(p.alpha());
        } else if constexpr (std::is_same_v<P, AnalogyParams>) {
          j["alpha"] = p.alpha();
          j["beta"] = p.beta();
          j["gamma"] = p.gamma();
          j["self_analogy_bound"] = p.self_analogy_bound();
        } else if constexpr (std::is_same_v<P, MixtureModel>) {
          json comps = json::array();
          for (const auto& c : p.components()) comps.push_back(to_vector(c.alpha()));
          j["components"] = comps;
          j["weights"] = to_vector(p.weights().values());
        } else {
          j["w"] = p.w();
          j["alpha4"] = to_vector(p.alpha4().alpha());
          j["alpha_v"] = to_vector(p.alpha_v().alpha());
          j["alpha_w"] = to_vector(p.alpha_w().alpha());
        }
      },
      r.params);
  return j;
}

}  // namespace detail

/// Parses and validates. Histories given via history_csv must be loaded by the caller
/// (see parse_history_csv) since this function does no I/O.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::get_field;
  using detail::get_or;
  if (!j.is_object()) throw InvalidInput("config: top level must be an object");
  ExperimentConfig c;
  const std::string where = "config";
  c.schema_version = get_field<int>(j, "schema_version", where);
  detail::require(c.schema_version == kSchemaVersion,
                  "config: unsupported schema_version " + std::to_string(c.schema_version));
  c.task = parse_task(get_field<std::string>(j, "task", where));
  c.outcomes = get_field<std::vector<std::string>>(j, "outcomes", where);
  c.types = get_or<std::vector<std::string>>(j, "types", {"t0"}, where);
  for (const auto& r : get_field<nlohmann::json>(j, "rules", where)) c.rules.push_back(detail::rule_from_json(r));
  c.history = get_or<std::vector<std::pair<std::string, std::string>>>(j, "history", {}, where);
  if (j.contains("next_type")) c.next_type = get_field<std::string>(j, "next_type", where);
  if (j.contains("process")) {
    const auto& p = j.at("process");
    c.process.type_probs = get_or<std::vector<double>>(p, "type_probs", {}, "process");
    c.process.frequencies = get_or<std::vector<std::vector<double>>>(p, "frequencies", {}, "process");
    c.process.horizon = get_or<std::size_t>(p, "horizon", 0, "process");
    if (p.contains("seed")) c.process.seed = get_field<std::uint64_t>(p, "seed", "process");
  }
  if (j.contains("audit")) {
    const auto& a = j.at("audit");
    c.audit.length = get_or<std::size_t>(a, "length", c.audit.length, "audit");
    c.audit.tolerance = get_or<double>(a, "tolerance", c.audit.tolerance, "audit");
    c.audit.max_outcomes = get_or<std::size_t>(a, "max_outcomes", c.audit.max_outcomes, "audit");
    c.audit.max_length = get_or<std::size_t>(a, "max_length", c.audit.max_length, "audit");
  }
  c.output = get_or<std::string>(j, "output", ".", where);
  return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("config: not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["schema_version"] = c.schema_version;
  j["task"] = to_string(c.task);
  j["outcomes"] = c.outcomes;
  j["types"] = c.types;
  j["rules"] = nlohmann::json::array();
  for (const auto& r : c.rules) j["rules"].push_back(detail::rule_to_json(r));
  if (!c.history.empty()) j["history"] = c.history;
  if (c.next_type) j["next_type"] = *c.next_type;
  nlohmann::json p;
  p["type_probs"] = c.process.type_probs;
  p["frequencies"] = c.process.frequencies;
  p["horizon"] = c.process.horizon;
  if (c.process.seed) p["seed"] = *c.process.seed;
  j["process"] = p;
  j["audit"] = {{"length", c.audit.length},
                {"tolerance", c.audit.tolerance},
                {"max_outcomes", c.audit.max_outcomes},
                {"max_length", c.audit.max_length}};
  j["output"] = c.output;
  return j;
}

// ---------------------------------------------------------------------------
// History CSV: `step,outcome_label,type_label`

inline std::string history_to_csv(const TypedHistory& h, const OutcomeSpace& os, const TypeSpace& ts) {
  std::string out = "step,outcome_label,type_label\n";
  for (std::size_t t = 0; t < h.size(); ++t) {
    out += std::to_string(t) + ',' + os.label(h.outcomes()[t]) + ',' + ts.label(h.types()[t]) + '\n';
  }
  return out;
}

inline std::vector<std::pair<std::string, std::string>> parse_history_csv(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  std::size_t expected_step = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      detail::require(line == "step,outcome_label,type_label", "history csv: bad header '" + line + "'");
      header = false;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    detail::require(c2 != std::string::npos && line.find(',', c2 + 1) == std::string::npos,
                    "history csv: expected three columns in '" + line + "'");
    detail::require(line.substr(0, c1) == std::to_string(expected_step), "history csv: steps must count from 0");
    ++expected_step;
    rows.emplace_back(line.substr(c1 + 1, c2 - c1 - 1), line.substr(c2 + 1));
  }
  detail::require(!header, "history csv: missing header");
  return rows;
}

}  // namespace inductive

#endif  // INDUCTIVE_CONFIG_HPP
