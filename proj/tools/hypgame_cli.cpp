#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hypgame/corruption.hpp"
#include "hypgame/evaluation.hpp"
#include "hypgame/experiment.hpp"
#include "hypgame/lexicon.hpp"
#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hypgame;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_input, path.string() + ": " + e.what());
  }
}

HypothesisState read_pathway(const fs::path& path) {
  try {
    return parse_pathway(read_json(path).get<PathwayRecord>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_input, path.string() + ": " + e.what());
  }
}

void write_output(const std::string& out, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::io, "cannot write " + out);
  file << text;
}

std::string joined(const HypothesisState& state) {
  std::vector<std::string> parts;
  for (const auto& f : state.fragments) parts.push_back(f.text);
  return join(parts, " ");
}

struct RunArgs {
  std::string spec;
  std::size_t concurrency = 1;
};

int cmd_run(const RunArgs& args) {
  const auto spec = load_experiment_spec(args.spec);
  const auto summary = run_experiment_batch(spec, args.concurrency);
  std::cout << "completed " << summary.completed << ", skipped " << summary.skipped << ", failed "
            << summary.failed << "\n";
  for (const auto& r : summary.runs) {
    if (r.status == RunStatus::failed) std::cerr << r.run_id << ": " << r.error.value_or("") << "\n";
  }
  std::cout << "results in " << spec.output_dir.string() << "\n";
  return summary.failed == 0 ? exit_ok : exit_failure;
}

struct CorruptArgs {
  std::string bank;
  std::string pathway;
  std::string lexicon;
  std::string error_type = "mixed";
  std::string difficulty = "L1";
  double fraction = 0.1;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_corrupt(const CorruptArgs& args) {
  std::optional<Lexicon> lexicon;
  if (!args.lexicon.empty()) lexicon = Lexicon::load_jsonl(args.lexicon);
  const auto bank = load_bank(args.bank, lexicon ? &*lexicon : nullptr);
  const auto pathway = read_pathway(args.pathway);
  CorruptionPolicy policy;
  if (args.error_type != "mixed") policy.error_type = parse_enum<ErrorType>(args.error_type);
  policy.difficulty = parse_enum<Difficulty>(args.difficulty);
  policy.fraction = args.fraction;
  policy.seed = args.seed;
  validate(policy);
  auto plan = sample_plan(pathway, bank, policy);
  auto result = apply_plan(pathway, plan);
  plan.applied = result.applied;
  write_output(args.out, {{"corrupted", to_pathway_record(result.corrupted)}, {"plan", plan}});
  return exit_ok;
}

struct EvalArgs {
  std::string task = "corruption";
  std::string ref;
  std::string gen;
  std::string plan;
  std::string lexicon;
  std::string out;
};

int cmd_eval(const EvalArgs& args) {
  const auto lexicon = Lexicon::load_jsonl(args.lexicon);
  const auto reference = read_pathway(args.ref);
  const auto generated = read_pathway(args.gen);
  const PRF prf = entity_prf(state_entities(reference, lexicon), state_entities(generated, lexicon));
  json metrics{{"precision", prf.precision},
               {"recall", prf.recall},
               {"f1", prf.f1},
               {"levenshtein", levenshtein_word_norm(joined(reference), joined(generated))},
               {"entity_drift", entity_drift(reference, generated, lexicon, EntityKind::gene).total()}};
  json verdicts = json::array();
  if (args.task == "corruption") {
    if (args.plan.empty()) throw Error(ErrorCode::invalid_input, "--plan is required for the corruption task");
    json plan_doc = read_json(args.plan);
    if (plan_doc.contains("plan")) plan_doc = plan_doc.at("plan");
    const auto plan = plan_doc.get<CorruptionPlan>();
    if (plan.applied.empty()) throw Error(ErrorCode::invalid_input, "the plan lists no applied corruption");
    RulePersistenceJudge judge;
    std::vector<JudgeVerdict> list;
    for (std::size_t i = 0; i < plan.applied.size(); ++i) {
      const auto& a = plan.applied[i];
      list.push_back({"c" + std::to_string(i), judge_persistence(a.original, a.corrupted, generated, judge),
                      std::nullopt});
    }
    metrics["error_removal_rate"] = error_removal_rate(list);
    verdicts = list;
  } else if (args.task == "reconstruction") {
    RuleRecallJudge judge;
    std::vector<std::string> reactions;
    for (const auto& f : reference.fragments) reactions.push_back(f.text);
    const auto recall = detailed_recall(reactions, generated, judge);
    metrics["recall_input_entities"] = recall.input_entities;
    metrics["recall_output_entities"] = recall.output_entities;
    metrics["recall_directionality"] = recall.directionality;
    metrics["recall_reaction_type"] = recall.reaction_type;
    verdicts = recall.verdicts;
  } else {
    throw Error(ErrorCode::invalid_input, "unknown task '" + args.task + "'");
  }
  write_output(args.out, {{"task", args.task}, {"metrics", metrics}, {"verdicts", verdicts}});
  return exit_ok;
}

struct ReportArgs {
  std::string results;
  std::string out;
  std::size_t resamples = 10000;
  std::uint64_t seed = 12345;
  double confidence = 0.95;
  bool no_plot = false;
};

int cmd_report(const ReportArgs& args) {
  const BootstrapOptions options{args.resamples, args.seed, args.confidence};
  const auto report = aggregate_report(args.results, options);
  const fs::path out = args.out.empty() ? fs::path(args.results) / "report" : fs::path(args.out);
  emit_report(report, out, !args.no_plot);
  std::cout << report.rows.size() << " runs, " << report.aggregates.size() << " aggregate cells, "
            << report.empty_strata.size() << " empty strata\n"
            << "report in " << out.string() << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypothesis game engine and benchmark harness"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run an experiment batch described by a JSON spec");
  run->add_option("--spec", run_args.spec, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--concurrency", run_args.concurrency, "Worker threads")->check(CLI::PositiveNumber);

  CorruptArgs corrupt_args;
  auto* corrupt = app.add_subcommand("corrupt", "Inject errors from a bank into a pathway");
  corrupt->add_option("--bank", corrupt_args.bank, "Corruption bank (JSONL)")->required()->check(CLI::ExistingFile);
  corrupt->add_option("--pathway", corrupt_args.pathway, "Pathway record (JSON)")->required()->check(CLI::ExistingFile);
  corrupt->add_option("--lexicon", corrupt_args.lexicon, "Entity lexicon (JSONL) for bank checks")
      ->check(CLI::ExistingFile);
  corrupt->add_option("--error-type", corrupt_args.error_type, "wrong_entity, wrong_relation, unsupported_step or mixed");
  corrupt->add_option("--difficulty", corrupt_args.difficulty, "L1 or L2");
  corrupt->add_option("--fraction", corrupt_args.fraction, "Share of steps to corrupt");
  corrupt->add_option("--seed", corrupt_args.seed, "Sampling seed");
  corrupt->add_option("--out", corrupt_args.out, "Output file (default stdout)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Score a generated pathway against a reference");
  eval->add_option("--task", eval_args.task, "corruption or reconstruction");
  eval->add_option("--ref", eval_args.ref, "Reference pathway (JSON)")->required()->check(CLI::ExistingFile);
  eval->add_option("--gen", eval_args.gen, "Generated pathway (JSON)")->required()->check(CLI::ExistingFile);
  eval->add_option("--plan", eval_args.plan, "Output of `corrupt` (corruption task)")->check(CLI::ExistingFile);
  eval->add_option("--lexicon", eval_args.lexicon, "Entity lexicon (JSONL)")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", eval_args.out, "Output file (default stdout)");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Aggregate a results directory with bootstrap intervals");
  report->add_option("--results", report_args.results, "Batch output directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", report_args.out, "Report directory (default <results>/report)");
  report->add_option("--resamples", report_args.resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
  report->add_option("--seed", report_args.seed, "Bootstrap base seed");
  report->add_option("--confidence", report_args.confidence, "Interval coverage")->check(CLI::Range(0.5, 0.999));
  report->add_flag("--no-plot", report_args.no_plot, "Skip plot_data.tsv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*corrupt) return cmd_corrupt(corrupt_args);
    if (*eval) return cmd_eval(eval_args);
    if (*report) return cmd_report(report_args);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::invalid_input || e.code() == ErrorCode::insufficient_bank ? exit_usage
                                                                                            : exit_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_usage;
}
