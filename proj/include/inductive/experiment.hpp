#ifndef INDUCTIVE_EXPERIMENT_HPP
#define INDUCTIVE_EXPERIMENT_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "config.hpp"
#include "symmetry.hpp"

namespace inductive {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitResource = 3, kExitNumerical = 4 };

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string content;
};

struct RunResult {
  std::vector<Artifact> artifacts;
  std::vector<std::string> summary;  // one line per task
};

namespace detail {

inline std::string csv_number(double v) { return format_double(v); }

inline std::string join_pred_header(std::size_t k, const std::string& prefix = "pred_") {
  std::string h;
  for (std::size_t i = 0; i < k; ++i) h += ',' + prefix + std::to_string(i);
  return h;
}

inline void append_preds(std::string& row, const SimplexVector& p) {
  for (double v : p) row += ',' + csv_number(v);
}

inline SimplexVector predict_any(const AnyRule& rule, const CountStatistics& counts, const TypedHistory& h,
                                 TypeIndex t) {
  return rule.count_based() ? rule.predict(counts, t) : rule.predict(h, t);
}

inline RunResult run_predict(const ExperimentConfig& c) {
  const OutcomeSpace os = c.outcome_space();
  const TypeSpace ts = c.type_space();
  const TypedHistory h = c.typed_history();
  std::vector<TypeIndex> next_types;
  if (c.next_type) {
    next_types.push_back(ts.index_of(*c.next_type));
  } else {
    for (TypeIndex t = 0; t < ts.count(); ++t) next_types.push_back(t);
  }
  std::string csv = "rule,next_type,outcome,probability\n";
  for (const auto& spec : c.rules) {
    const AnyRule rule = spec.make_rule();
    for (TypeIndex t : next_types) {
      const SimplexVector p = rule.predict(h, t);
      for (Outcome i = 0; i < p.size(); ++i) {
        csv += spec.name + ',' + ts.label(t) + ',' + os.label(i) + ',' + csv_number(p[i]) + '\n';
      }
    }
  }
  RunResult r;
  r.artifacts.push_back({"predict.csv", std::move(csv)});
  r.summary.push_back("predict: " + std::to_string(c.rules.size()) + " rule(s), history length " +
                      std::to_string(h.size()) + " -> predict.csv");
  return r;
}

inline RunResult run_simulate(const ExperimentConfig& c) {
  const OutcomeSpace os = c.outcome_space();
  const TypeSpace ts = c.type_space();
  const RuleSpec& spec = c.rules.front();
  const AnyRule rule = spec.make_rule();
  const std::uint64_t seed = *c.process.seed;
  const TypeProcess types = c.process.type_probs.empty()
                                ? TypeProcess(std::vector<double>(ts.count(), 1.0 / static_cast<double>(ts.count())))
                                : TypeProcess(c.process.type_probs);
  Rng type_rng(seed, 1);
  Rng outcome_rng(seed, 2);
  const auto* analogy = std::get_if<AnalogyParams>(&spec.params);
  std::optional<AnalogyUrn> urn;
  if (analogy) urn.emplace(*analogy);

  std::string trace = "step,type,outcome" + join_pred_header(os.count()) + '\n';
  TypedHistory h(os.count(), ts.count());
  CountStatistics counts(os.count(), ts.count());
  const bool keep_history = !rule.count_based();
  std::vector<Outcome> xs;
  std::vector<TypeIndex> ys;
  for (std::size_t step = 0; step < c.process.horizon; ++step) {
    const TypeIndex t = types.draw(type_rng);
    const SimplexVector pred = predict_any(rule, counts, h, t);
    const Outcome o = urn ? urn->draw(t, outcome_rng) : outcome_rng.categorical(pred.values());
    std::string row = std::to_string(step) + ',' + ts.label(t) + ',' + os.label(o);
    append_preds(row, pred);
    trace += row + '\n';
    counts.add(o, t);
    if (keep_history) h = h.appended(o, t);
    xs.push_back(o);
    ys.push_back(t);
  }
  const TypedHistory full(os.count(), ts.count(), std::move(xs), std::move(ys));

  RunResult r;
  r.artifacts.push_back({"trace.csv", std::move(trace)});
  r.artifacts.push_back({"history.csv", history_to_csv(full, os, ts)});
  r.summary.push_back("simulate " + spec.name + ": " + std::to_string(c.process.horizon) + " steps" +
                      (urn ? " (urn scheme)" : "") + " -> trace.csv, history.csv");
  return r;
}

inline RunResult run_audit(const ExperimentConfig& c) {
  const std::size_t k = c.outcomes.size();
  const std::size_t L = c.audit.length;
  const double tol = c.audit.tolerance;
  const EnumerationBudget budget{c.audit.max_outcomes, c.audit.max_length, 10};
  std::string text = "schema_version: " + std::to_string(kSchemaVersion) + '\n';
  RunResult r;
  for (const auto& spec : c.rules) {
    const AnyRule rule = spec.make_rule();
    std::vector<SymmetryReport> reports;
    const bool two_type = std::holds_alternative<AnalogyParams>(spec.params);
    if (!two_type) {
      reports.push_back(check_exchangeability(rule, k, L, tol, budget));
      reports.push_back(check_sufficientness(rule, Sufficientness::classic, k, L, tol, budget));
    }
    reports.push_back(check_partial_exchangeability(rule, k, L, tol, budget));
    reports.push_back(check_generalized_partial_exchangeability(rule, k, L, tol, budget));
    if (two_type) {
      reports.push_back(check_sufficientness(rule, Sufficientness::modified, k, L, tol, budget));
    }
    reports.push_back(check_future_type_independence(rule, k, L, tol, budget));

    text += "\n# rule: " + spec.name + " (" + spec.kind() + "), k=" + std::to_string(k) + ", L=" + std::to_string(L) + '\n';
    std::string line = "audit " + spec.name + ":";
    for (const auto& rep : reports) {
      text += '\n' + to_text(rep);
      line += ' ' + rep.postulate + '=' + (rep.passed ? "PASS" : "FAIL");
    }
    if (two_type) {
      // Not part of any postulate; recorded so the status of the k in {i,j} swaps is visible.
      text += "\n# diagnostic (not required)\n" + to_text(probe_repeated_middle_swaps(rule, k, L, tol, budget));
    }
    r.summary.push_back(std::move(line));
  }
  r.artifacts.push_back({"audit.txt", std::move(text)});
  return r;
}

inline RunResult run_converge(const ExperimentConfig& c) {
  const OutcomeSpace os = c.outcome_space();
  const TypeSpace ts = c.type_space();
  const StreamConfig sc = c.stream_config();
  std::string csv = "rule,step,type,outcome,predictive,frequency,convex_limit\n";
  RunResult r;
  for (const auto& spec : c.rules) {
    const AnyRule rule = spec.make_rule();
    std::optional<AnalogyParams> analogy;
    if (const auto* a = std::get_if<AnalogyParams>(&spec.params)) analogy = *a;
    const LimitReport rep = estimate_reichenbach_limit(rule, sc, c.process.horizon, *c.process.seed, analogy);
    for (const auto& cp : rep.checkpoints) {
      for (TypeIndex j = 0; j < cp.predictive.size(); ++j) {
        for (Outcome i = 0; i < os.count(); ++i) {
          csv += spec.name + ',' + std::to_string(cp.step) + ',' + ts.label(j) + ',' + os.label(i) + ',' +
                 csv_number(cp.predictive[j][i]) + ',' + csv_number(sc.frequencies[j][i]) + ',' +
                 (analogy ? csv_number(rep.convex_limit[j][i]) : std::string()) + '\n';
        }
      }
    }
    std::string line = "converge " + spec.name + ": verdict=" + to_string(rep.verdict) +
                       " distance_to_frequency=" + csv_number(rep.final_distance_to_frequency);
    if (rep.final_distance_to_convex) line += " distance_to_convex=" + csv_number(*rep.final_distance_to_convex);
    r.summary.push_back(std::move(line));
  }
  r.artifacts.push_back({"converge.csv", std::move(csv)});
  return r;
}

inline RunResult run_compare(const ExperimentConfig& c) {
  const OutcomeSpace os = c.outcome_space();
  const TypeSpace ts = c.type_space();
  const StreamConfig sc = c.stream_config();
  std::vector<AnyRule> rules;
  std::string csv = "step,type,outcome";
  for (const auto& spec : c.rules) {
    rules.push_back(spec.make_rule());
    csv += join_pred_header(os.count(), spec.name + "_pred_");
  }
  csv += '\n';

  IidStream stream(sc, *c.process.seed);
  TypedHistory h(os.count(), ts.count());
  CountStatistics counts(os.count(), ts.count());
  bool keep_history = false;
  for (const auto& rule : rules) keep_history = keep_history || !rule.count_based();
  for (std::size_t step = 0; step < c.process.horizon; ++step) {
    const TypeIndex t = stream.next_type();
    const Outcome o = stream.outcome(t);
    std::string row = std::to_string(step) + ',' + ts.label(t) + ',' + os.label(o);
    for (const auto& rule : rules) append_preds(row, predict_any(rule, counts, h, t));
    csv += row + '\n';
    counts.add(o, t);
    if (keep_history) h = h.appended(o, t);
  }
  RunResult r;
  r.artifacts.push_back({"compare.csv", std::move(csv)});
  r.summary.push_back("compare: " + std::to_string(rules.size()) + " rules over " +
                      std::to_string(c.process.horizon) + " steps -> compare.csv");
  return r;
}

}  // namespace detail

/// Executes the configured task in memory. Nothing touches the disk.
inline RunResult run_task(const ExperimentConfig& c) {
  c.validate();
  switch (c.task) {
    case Task::predict: return detail::run_predict(c);
    case Task::simulate: return detail::run_simulate(c);
    case Task::audit: return detail::run_audit(c);
    case Task::converge: return detail::run_converge(c);
    case Task::compare: return detail::run_compare(c);
  }
  throw InvalidInput("config: unknown task");
}

enum : int { kExitIo = 1 };

namespace detail {

inline std::filesystem::path temp_path(const std::filesystem::path& dest) {
  auto tmp = dest;
  tmp += ".tmp";
  return tmp;
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace detail

/// Temp file in the target directory, then rename over the destination.
inline void write_atomic(const std::filesystem::path& dest, const std::string& content) {
  const auto tmp = detail::temp_path(dest);
  detail::write_file(tmp, content);
  std::filesystem::rename(tmp, dest);
}

/// Runs the task and writes every artifact only after all of them have been computed.
/// All temp files are staged before the first rename, so a failed write leaves no artifact.
inline RunResult run(const ExperimentConfig& c) {
  RunResult r = run_task(c);
  const std::filesystem::path dir(c.output);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> staged;
  try {
    for (const auto& a : r.artifacts) {
      staged.push_back(detail::temp_path(dir / a.name));
      detail::write_file(staged.back(), a.content);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& t : staged) std::filesystem::remove(t, ec);
    throw;
  }
  for (std::size_t n = 0; n < staged.size(); ++n) std::filesystem::rename(staged[n], dir / r.artifacts[n].name);
  return r;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Reads a config file, resolving history_csv relative to the config's directory.
inline ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("config: not valid JSON: ") + e.what());
  }
  ExperimentConfig c = config_from_json(j);
  if (j.contains("history_csv")) {
    detail::require(c.history.empty(), "config: give either history or history_csv, not both");
    std::filesystem::path hp = j.at("history_csv").get<std::string>();
    if (hp.is_relative()) hp = path.parent_path() / hp;
    c.history = parse_history_csv(read_file(hp));
  }
  return c;
}

/// Maps the error taxonomy onto exit codes and prints one summary line per task.
inline int run_guarded(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const RunResult r = run(c);
    for (const auto& line : r.summary) out << line << '\n';
    return kExitOk;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const NumericalDegeneracy& e) {
    err << "numerical degeneracy: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const RegularityViolation& e) {
    err << "numerical degeneracy: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InvalidInput& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace inductive

#endif  // INDUCTIVE_EXPERIMENT_HPP
