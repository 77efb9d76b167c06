#include "hypgame/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hypgame/corpus.hpp"
#include "hypgame/evaluation.hpp"
#include "hypgame/lexicon.hpp"
#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

using nlohmann::json;
namespace fs = std::filesystem;

void validate(const ExperimentSpec& spec) {
  if (trim(spec.name).empty()) throw Error(ErrorCode::invalid_input, "experiment needs a name");
  if ((spec.method == Method::hypothesis_game) != spec.game.has_value()) {
    throw Error(ErrorCode::invalid_input, "a game config is required for hypothesis_game and only for it");
  }
  if (spec.game) validate(*spec.game);
  if (spec.pathways.empty()) throw Error(ErrorCode::invalid_input, "experiment names no pathway file");
  if (spec.lexicon.empty()) throw Error(ErrorCode::invalid_input, "experiment names no lexicon file");
  if (spec.task == TaskKind::corruption && spec.bank.empty()) {
    throw Error(ErrorCode::invalid_input, "the corruption task needs a bank file");
  }
  if (spec.seeds.empty()) throw Error(ErrorCode::invalid_input, "experiment lists no replicate seeds");
  if (spec.output_dir.empty()) throw Error(ErrorCode::invalid_input, "experiment has no output directory");
  if (spec.gateway == GatewayKind::mock && spec.mock_gateway.empty()) {
    throw Error(ErrorCode::invalid_input, "mock gateway selected without a mock_gateway file");
  }
  if (spec.task == TaskKind::corruption) {
    CorruptionPolicy policy;
    policy.error_type = spec.error_type;
    policy.difficulty = spec.difficulty;
    policy.fraction = spec.fraction;
    validate(policy);
  }
}

ExperimentSpec load_experiment_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read experiment spec " + path.string());
  ExperimentSpec spec;
  try {
    spec = json::parse(in).get<ExperimentSpec>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_input, "experiment spec " + path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  for (fs::path* p : {&spec.pathways, &spec.bank, &spec.corpus, &spec.lexicon, &spec.prompts_dir,
                      &spec.mock_gateway, &spec.output_dir}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  if (spec.output_dir.empty()) spec.output_dir = base / ("results-" + spec.name);
  validate(spec);
  return spec;
}

std::string spec_hash(const ExperimentSpec& spec) {
  const json j = spec;
  return to_hex(fnv1a64(j.dump()));
}

HypothesisState parse_model_pathway(const std::string& answer, const std::string& pathway_name,
                                    const std::string& pathway_id) {
  std::string body = answer;
  std::string lower = answer;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (auto pos = lower.rfind("final pathway:"); pos != std::string::npos) {
    body = answer.substr(pos + std::string_view("final pathway:").size());
  }
  HypothesisState state;
  state.pathway_name = pathway_name;
  state.pathway_id = pathway_id;
  std::set<std::string> seen;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    std::size_t skip = 0;
    while (skip < t.size() && (t[skip] == '-' || t[skip] == '*' || t[skip] == ' ')) ++skip;
    std::size_t digits = skip;
    while (digits < t.size() && std::isdigit(static_cast<unsigned char>(t[digits]))) ++digits;
    if (digits > skip && digits < t.size() && (t[digits] == '.' || t[digits] == ')')) skip = digits + 1;
    t = trim(std::string_view(t).substr(skip));
    const std::string norm = normalize_statement(t);
    if (norm.empty() || !seen.insert(norm).second) continue;
    const std::size_t i = state.fragments.size();
    state.fragments.push_back(make_claim("s" + std::to_string(i), t,
                                         {{EvidenceSource::introspection, std::nullopt, std::nullopt}}, i));
  }
  return state;
}

namespace {

struct PathwayInput {
  PathwayRecord record;
  std::string cue;
  HypothesisState reference;
};

std::vector<PathwayInput> load_pathways(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read pathways " + path.string());
  std::vector<PathwayInput> out;
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      PathwayInput p;
      p.record = j.get<PathwayRecord>();
      p.cue = j.value("cue", p.record.name);
      p.reference = parse_pathway(p.record);
      if (!ids.insert(p.reference.pathway_id).second) {
        throw InputError("duplicate pathway id '" + p.reference.pathway_id + "'");
      }
      out.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw InputError("pathways line " + std::to_string(line_no) + ": " + e.what(), {line_no});
    }
  }
  if (out.empty()) throw Error(ErrorCode::invalid_input, "pathway file " + path.string() + " is empty");
  return out;
}

std::string safe_id(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string joined_text(const HypothesisState& state) {
  std::vector<std::string> parts;
  for (const auto& f : state.fragments) parts.push_back(f.text);
  return join(parts, " ");
}

bool is_cue_fragment(const Fragment& f) {
  return normalize_statement(f.text).rfind("pathway name:", 0) == 0;
}

struct Shared {
  const ExperimentSpec& spec;
  Lexicon lexicon;
  CorruptionBank bank;
  std::optional<Corpus> corpus;
  PromptLibrary prompts;
  MoveRegistry registry = MoveRegistry::standard();
  std::optional<json> mock_doc;
  std::unique_ptr<Gateway> shared_gateway;  // http
  Gateway* override_gateway = nullptr;
};

std::unique_ptr<Controller> make_controller(const Shared& sh, const std::string& pathway_id,
                                           const std::vector<AppliedCorruption>& applied,
                                           Gateway* gateway) {
  const auto& cs = sh.spec.controller;
  switch (cs.kind) {
    case ControllerKind::scripted: {
      auto it = cs.plans.find(pathway_id);
      if (it == cs.plans.end()) it = cs.plans.find("*");
      std::vector<ScriptedRound> plan = it == cs.plans.end() ? std::vector<ScriptedRound>{} : it->second;
      std::set<std::string> corrupted;
      std::set<std::string> inserted;
      for (const auto& a : applied) {
        corrupted.insert(a.fragment_id);
        if (a.operation == CorruptionOperation::insert) inserted.insert(a.fragment_id);
      }
      auto expand_ids = [&](std::set<std::string>& ids) {
        if (ids.erase("@corrupted")) ids.insert(corrupted.begin(), corrupted.end());
        if (ids.erase("@inserted")) ids.insert(inserted.begin(), inserted.end());
      };
      for (auto& round : plan) {
        for (auto& req : round.requests) {
          expand_ids(req.targets);
          if (req.target_region) expand_ids(*req.target_region);
        }
      }
      return std::make_unique<ScriptedController>(std::move(plan));
    }
    case ControllerKind::policy:
      return std::make_unique<PolicyController>(cs.policy);
    case ControllerKind::gateway:
      if (!gateway) throw Error(ErrorCode::invalid_input, "the gateway controller needs a gateway");
      return std::make_unique<GatewayController>(*gateway, sh.prompts);
  }
  throw Error(ErrorCode::invalid_input, "unknown controller kind");
}

std::unique_ptr<Selector> make_selector(const Shared& sh) {
  switch (sh.spec.selector.kind) {
    case SelectorKind::whole_state:
      return std::make_unique<WholeStateSelector>();
    case SelectorKind::per_fragment:
      return std::make_unique<PerFragmentSelector>();
    case SelectorKind::sliding_window:
      return std::make_unique<SlidingWindowSelector>(sh.spec.selector.width, sh.spec.selector.stride);
    case SelectorKind::entity_mention:
      return std::make_unique<EntityMentionSelector>(sh.lexicon);
  }
  throw Error(ErrorCode::invalid_input, "unknown selector kind");
}

std::string task_prompt(const Shared& sh, const PathwayInput& p, const HypothesisState& initial) {
  if (sh.spec.task == TaskKind::reconstruction) {
    return sh.prompts.render(prompt_names::task_reconstruction, {{"pathway_name", p.cue}}).user;
  }
  std::vector<std::string> lines;
  for (const auto& f : initial.fragments) lines.push_back(f.text);
  return sh.prompts
      .render(prompt_names::task_corruption,
              {{"pathway_name", p.record.name}, {"hypothesis", join(lines, "\n")}})
      .user;
}

HypothesisState run_baseline(const Shared& sh, const PathwayInput& p, const HypothesisState& initial,
                             Gateway& gateway, json& extra) {
  const std::string task = task_prompt(sh, p, initial);
  RenderedPrompt prompt;
  switch (sh.spec.method) {
    case Method::zero_shot:
      prompt = sh.prompts.render(prompt_names::zero_shot, {{"task", task}});
      break;
    case Method::chain_of_thought:
      prompt = sh.prompts.render(prompt_names::chain_of_thought, {{"task", task}});
      break;
    case Method::react: {
      std::vector<EvidenceRecord> hits;
      if (sh.corpus) hits = retrieve_corpus(p.cue, *sh.corpus, sh.spec.corpus_top_k);
      prompt = sh.prompts.render(prompt_names::react, {{"task", task}, {"tool_results", render_evidence(hits)}});
      extra["retrievals"] = hits;
      break;
    }
    case Method::hypothesis_game:
      throw Error(ErrorCode::invalid_input, "not a baseline method");
  }
  auto reply = complete_with_retry(gateway, {prompt.role, prompt.user, 0.0, std::nullopt});
  extra["answer"] = reply.text;
  return parse_model_pathway(reply.text, p.record.name, p.reference.pathway_id);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::io, "failed writing " + path.string());
}

void execute_run(const Shared& sh, const PathwayInput& p, std::uint64_t seed, const std::string& run_id) {
  const ExperimentSpec& spec = sh.spec;
  const fs::path dir = spec.output_dir / "runs" / run_id;
  fs::create_directories(dir);

  std::unique_ptr<Gateway> own_gateway;
  Gateway* gateway = sh.override_gateway;
  if (!gateway && spec.gateway == GatewayKind::mock) {
    own_gateway = MockGateway::from_json(*sh.mock_doc);
    gateway = own_gateway.get();
  } else if (!gateway && spec.gateway == GatewayKind::http) {
    gateway = sh.shared_gateway.get();
  }

  const HypothesisState& reference = p.reference;
  HypothesisState initial;
  std::optional<CorruptionPlan> plan;
  if (spec.task == TaskKind::corruption) {
    CorruptionPolicy policy;
    policy.error_type = spec.error_type;
    policy.difficulty = spec.difficulty;
    policy.fraction = spec.fraction;
    policy.seed = seed;
    plan = sample_plan(reference, sh.bank, policy);
    auto applied = apply_plan(reference, *plan);
    plan->applied = applied.applied;
    initial = std::move(applied.corrupted);
  } else {
    initial.pathway_id = reference.pathway_id;
    initial.pathway_name = reference.pathway_name;
    initial.fragments.push_back(make_claim("s0", "Pathway name: " + p.cue,
                                           {{EvidenceSource::seed_input, std::nullopt, std::nullopt}}, 0));
  }

  json out;
  out["run_id"] = run_id;
  out["pathway_id"] = reference.pathway_id;
  out["pathway_name"] = reference.pathway_name;
  out["seed"] = seed;
  out["task"] = spec.task;
  out["method"] = spec.method;
  out["initial"] = to_pathway_record(initial);
  if (plan) out["corruption"] = *plan;

  HypothesisState final_state;
  if (spec.method == Method::hypothesis_game) {
    GameConfig config = *spec.game;
    config.seed = seed;
    if (trim(config.task_goal).empty()) {
      config.task_goal = spec.task == TaskKind::corruption
                             ? "Find and repair the errors in the pathway \"" + reference.pathway_name +
                                   "\" while keeping every correct statement unchanged."
                             : "Reconstruct the biological pathway \"" + p.cue + "\" as a list of reactions.";
    }
    Context context{config.task_goal, {}, sh.corpus ? std::optional<std::string>(sh.corpus->name) : std::nullopt};
    AgentDeps deps;
    deps.gateway = gateway;
    deps.corpus = sh.corpus ? &*sh.corpus : nullptr;
    deps.prompts = &sh.prompts;
    deps.corpus_top_k = spec.corpus_top_k;
    deps.debate.n_claimsmiths = spec.debate_claimsmiths;
    deps.debate.n_turns = spec.debate_turns;
    deps.debate.concurrent = false;
    const ExecutorMap executors = standard_executors(deps);
    auto controller = make_controller(sh, reference.pathway_id, plan ? plan->applied : std::vector<AppliedCorruption>{}, gateway);
    auto selector = config.variant == GameVariant::localized ? make_selector(sh) : nullptr;
    RoundScorer scorer;
    if (spec.score) {
      scorer = [&sh, &reference](const HypothesisState& s) {
        return score_vector(s, std::span<const HypothesisState>(&reference, 1), sh.lexicon);
      };
    }
    const GameSetup setup{sh.registry, executors, context, scorer};
    const Trajectory trajectory = run_game(config, initial, *controller, selector.get(), setup);
    std::ostringstream traj;
    write_trajectory(traj, trajectory);
    write_file(dir / "trajectory.jsonl", traj.str());
    final_state = trajectory.final;
    out["termination_reason"] = trajectory.termination_reason;
    out["rounds"] = trajectory.rounds.size();
  } else {
    if (!gateway) throw Error(ErrorCode::invalid_input, "baseline methods need a gateway");
    json extra = json::object();
    final_state = run_baseline(sh, p, initial, *gateway, extra);
    out["baseline"] = extra;
  }

  HypothesisState evaluated = final_state;
  if (spec.task == TaskKind::reconstruction) {
    std::erase_if(evaluated.fragments, is_cue_fragment);
  }
  out["final"] = to_pathway_record(final_state);

  ResultRow row;
  row.run_id = run_id;
  row.pathway_id = reference.pathway_id;
  row.method = to_string(spec.method);
  row.seed = seed;
  const PRF prf = entity_prf(state_entities(reference, sh.lexicon), state_entities(evaluated, sh.lexicon));
  row.metrics["precision"] = prf.precision;
  row.metrics["recall"] = prf.recall;
  row.metrics["f1"] = prf.f1;
  row.metrics["levenshtein"] = levenshtein_word_norm(joined_text(reference), joined_text(evaluated));
  row.metrics["entity_drift"] =
      static_cast<double>(entity_drift(reference, evaluated, sh.lexicon, EntityKind::gene).total());

  std::vector<JudgeVerdict> verdicts;
  if (spec.task == TaskKind::corruption) {
    row.error_type = spec.error_type ? to_string(*spec.error_type) : "mixed";
    row.difficulty = to_string(spec.difficulty);
    row.fraction = format_number(spec.fraction);
    std::unique_ptr<PersistenceJudge> judge;
    if (spec.judge == JudgeKind::gateway) {
      if (!gateway) throw Error(ErrorCode::invalid_input, "the gateway judge needs a gateway");
      judge = std::make_unique<GatewayPersistenceJudge>(*gateway, sh.prompts);
    } else {
      judge = std::make_unique<RulePersistenceJudge>();
    }
    for (std::size_t i = 0; i < plan->applied.size(); ++i) {
      const auto& a = plan->applied[i];
      const std::string original = a.original.empty() ? "(none: the statement was inserted)" : a.original;
      verdicts.push_back({"c" + std::to_string(i),
                          judge_persistence(spec.judge == JudgeKind::rule ? a.original : original,
                                            a.corrupted, evaluated, *judge),
                          std::nullopt});
    }
    row.metrics["error_removal_rate"] = error_removal_rate(verdicts);
  } else {
    std::unique_ptr<RecallJudge> judge;
    if (spec.judge == JudgeKind::gateway) {
      if (!gateway) throw Error(ErrorCode::invalid_input, "the gateway judge needs a gateway");
      judge = std::make_unique<GatewayRecallJudge>(*gateway, sh.prompts);
    } else {
      judge = std::make_unique<RuleRecallJudge>();
    }
    std::vector<std::string> reactions;
    for (const auto& f : reference.fragments) reactions.push_back(f.text);
    const auto recall = detailed_recall(reactions, evaluated, *judge);
    verdicts = recall.verdicts;
    row.metrics["recall_input_entities"] = recall.input_entities;
    row.metrics["recall_output_entities"] = recall.output_entities;
    row.metrics["recall_directionality"] = recall.directionality;
    row.metrics["recall_reaction_type"] = recall.reaction_type;
  }
  out["verdicts"] = verdicts;
  out["row"] = row;
  write_file(dir / "output.json", out.dump(2) + "\n");
}

void write_manifest(const ExperimentSpec& spec, const std::map<std::string, RunRecord>& runs,
                    const BatchSummary& invocation) {
  json m;
  m["spec_hash"] = spec_hash(spec);
  m["spec"] = spec;
  json list = json::array();
  for (const auto& [_, r] : runs) list.push_back(r);
  m["runs"] = list;
  m["last_invocation"] = {{"completed", invocation.completed},
                          {"skipped", invocation.skipped},
                          {"failed", invocation.failed}};
  write_file(spec.output_dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

BatchSummary run_experiment_batch(const ExperimentSpec& spec, std::size_t concurrency, Gateway* gateway) {
  validate(spec);
  if (concurrency < 1) concurrency = 1;
  Shared sh{spec, Lexicon::load_jsonl(spec.lexicon), {}, {}, PromptLibrary::builtin(), MoveRegistry::standard(),
            {}, {}, gateway};
  if (spec.task == TaskKind::corruption) sh.bank = load_bank(spec.bank);
  if (!spec.corpus.empty()) sh.corpus = Corpus::load_jsonl(spec.corpus);
  if (!spec.prompts_dir.empty()) sh.prompts = PromptLibrary::load_dir(spec.prompts_dir);
  if (!gateway && spec.gateway == GatewayKind::mock) {
    std::ifstream in(spec.mock_gateway);
    if (!in) throw Error(ErrorCode::io, "cannot read mock gateway " + spec.mock_gateway.string());
    sh.mock_doc = json::parse(in);
  }
  if (!gateway && spec.gateway == GatewayKind::http) sh.shared_gateway = HttpGateway::from_env();

  const auto pathways = load_pathways(spec.pathways);
  fs::create_directories(spec.output_dir / "runs");

  std::map<std::string, RunRecord> records;
  const fs::path manifest_path = spec.output_dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    try {
      const json m = json::parse(in);
      if (m.value("spec_hash", "") == spec_hash(spec)) {
        for (const auto& r : m.at("runs")) {
          auto rec = r.get<RunRecord>();
          records[rec.run_id] = rec;
        }
      }
    } catch (const std::exception&) {
      records.clear();
    }
  }

  struct Job {
    const PathwayInput* pathway;
    std::uint64_t seed;
    std::string run_id;
  };
  std::vector<Job> jobs;
  BatchSummary summary;
  for (const auto& p : pathways) {
    for (auto seed : spec.seeds) {
      Job job{&p, seed, safe_id(p.reference.pathway_id) + "__s" + std::to_string(seed)};
      auto it = records.find(job.run_id);
      if (it != records.end() && it->second.status == RunStatus::completed &&
          fs::exists(spec.output_dir / "runs" / job.run_id / "output.json")) {
        ++summary.skipped;
        continue;
      }
      jobs.push_back(std::move(job));
    }
  }

  std::mutex mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      RunRecord rec{job.run_id, job.pathway->reference.pathway_id, job.seed, RunStatus::completed, std::nullopt,
                    utc_now(), ""};
      try {
        execute_run(sh, *job.pathway, job.seed, job.run_id);
      } catch (const std::exception& e) {
        rec.status = RunStatus::failed;
        rec.error = e.what();
      }
      rec.finished_at = utc_now();
      std::lock_guard lock(mutex);
      (rec.status == RunStatus::completed ? summary.completed : summary.failed) += 1;
      records[rec.run_id] = rec;
      write_manifest(spec, records, summary);
    }
  };
  std::vector<std::thread> threads;
  const std::size_t n_threads = std::min(concurrency, std::max<std::size_t>(jobs.size(), 1));
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  write_manifest(spec, records, summary);
  for (const auto& [_, r] : records) summary.runs.push_back(r);
  return summary;
}

}  // namespace hypgame
