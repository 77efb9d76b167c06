#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypgame/agents.hpp"
#include "hypgame/corruption.hpp"
#include "hypgame/engine.hpp"
#include "hypgame/gateway.hpp"

namespace hypgame {

enum class TaskKind { corruption, reconstruction };
enum class Method { hypothesis_game, zero_shot, chain_of_thought, react };
enum class ControllerKind { scripted, policy, gateway };
enum class SelectorKind { whole_state, per_fragment, sliding_window, entity_mention };
enum class GatewayKind { none, mock, http };
enum class JudgeKind { rule, gateway };

struct ControllerSpec {
  ControllerKind kind = ControllerKind::policy;
  // Scripted plans keyed by pathway id; "*" applies to every other pathway.
  // The target "@corrupted" expands to the ids carrying injected errors and
  // "@inserted" to those of inserted statements only.
  std::map<std::string, std::vector<ScriptedRound>> plans;
  PolicyControllerOptions policy;

  bool operator==(const ControllerSpec&) const = default;
};

struct SelectorSpec {
  SelectorKind kind = SelectorKind::whole_state;
  std::size_t width = 3;
  std::size_t stride = 1;

  bool operator==(const SelectorSpec&) const = default;
};

struct ExperimentSpec {
  std::string name = "experiment";
  TaskKind task = TaskKind::corruption;
  Method method = Method::hypothesis_game;
  std::optional<GameConfig> game;  // present iff method == hypothesis_game
  ControllerSpec controller;
  SelectorSpec selector;

  std::filesystem::path pathways;  // JSONL {name, steps, id?, cue?}
  std::filesystem::path bank;      // corruption task
  std::filesystem::path corpus;    // optional
  std::filesystem::path lexicon;
  std::filesystem::path prompts_dir;    // optional override of the built-in templates
  std::filesystem::path mock_gateway;   // gateway = mock
  std::filesystem::path output_dir;

  std::optional<ErrorType> error_type;  // nullopt = mixed
  Difficulty difficulty = Difficulty::L1;
  double fraction = 0.3;

  std::vector<std::uint64_t> seeds{1};
  GatewayKind gateway = GatewayKind::none;
  JudgeKind judge = JudgeKind::rule;
  bool score = false;
  std::size_t corpus_top_k = 3;
  std::size_t debate_claimsmiths = 2;
  std::size_t debate_turns = 1;

  bool operator==(const ExperimentSpec&) const = default;
};
void validate(const ExperimentSpec& spec);

// Relative paths are resolved against the experiment file's directory.
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
std::string spec_hash(const ExperimentSpec& spec);

enum class RunStatus { completed, failed, skipped };

struct RunRecord {
  std::string run_id;
  std::string pathway_id;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::completed;
  std::optional<std::string> error;
  std::string started_at;  // ISO-8601 UTC; only the manifest carries timestamps
  std::string finished_at;
};

struct BatchSummary {
  std::vector<RunRecord> runs;  // sorted by run_id
  std::size_t completed = 0;    // newly completed in this invocation
  std::size_t skipped = 0;      // already complete from an earlier invocation
  std::size_t failed = 0;
};

// Writes runs/<run_id>/{output.json,trajectory.jsonl} and manifest.json under
// spec.output_dir. A run already marked completed in the manifest is skipped.
// `gateway` replaces the gateway named in the experiment (shared by all runs).
BatchSummary run_experiment_batch(const ExperimentSpec& spec, std::size_t concurrency = 1,
                                  Gateway* gateway = nullptr);

// Text answer of a baseline model turned into a hypothesis: lines after the
// "FINAL PATHWAY:" marker when present, list markers stripped, duplicates dropped.
HypothesisState parse_model_pathway(const std::string& answer, const std::string& pathway_name,
                                    const std::string& pathway_id);

// --- reporting ---------------------------------------------------------------

struct ResultRow {
  std::string run_id;
  std::string pathway_id;
  std::string method;
  std::uint64_t seed = 0;
  std::string error_type;  // empty outside the corruption task
  std::string difficulty;
  std::string fraction;
  std::map<std::string, double> metrics;

  bool operator==(const ResultRow&) const = default;
};

struct AggregateRow {
  std::string stratum;  // "all", "error_type=wrong_entity", "difficulty=L1", "fraction=0.3"
  std::string method;
  std::string metric;
  std::size_t n = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  bool operator==(const AggregateRow&) const = default;
};

struct BootstrapOptions {
  std::size_t resamples = 10000;
  std::uint64_t seed = 12345;
  double confidence = 0.95;

  bool operator==(const BootstrapOptions&) const = default;
};

struct MetricReport {
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;
  std::vector<std::string> empty_strata;
  BootstrapOptions bootstrap;

  bool operator==(const MetricReport&) const = default;
};

struct ConfidenceInterval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Percentile bootstrap of the mean; percentiles interpolate linearly between
// order statistics. The interval is widened to contain the sample mean.
ConfidenceInterval bootstrap_ci(std::span<const double> values, std::size_t resamples,
                                std::uint64_t seed, double confidence = 0.95);

// Seed used for one (stratum, method, metric) cell.
std::uint64_t bootstrap_seed(std::uint64_t base, const std::string& stratum,
                             const std::string& method, const std::string& metric);

MetricReport aggregate_rows(std::vector<ResultRow> rows, const BootstrapOptions& options = {});
// Reads runs/*/output.json. Throws invalid_input when no completed run exists.
MetricReport aggregate_report(const std::filesystem::path& results_dir,
                              const BootstrapOptions& options = {});

// report.json, aggregates.csv, rows.csv and (optionally) plot_data.tsv.
void emit_report(const MetricReport& report, const std::filesystem::path& out_dir,
                 bool plot_data = true);
MetricReport read_report_json(const std::filesystem::path& path);

}  // namespace hypgame
