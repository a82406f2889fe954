// gedprog command-line driver.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "gedprog/error.hpp"
#include "gedprog/evolution.hpp"
#include "gedprog/inference.hpp"
#include "gedprog/io.hpp"
#include "gedprog/metrics.hpp"
#include "gedprog/toy_corpus.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gedprog;

namespace {

struct Common {
  std::string matcher = "neighbor_biased";
  double beta = 1.0;
  int time_limit_ms = 10000;
  int max_parallel = 4;
  bool serial = false;
};

struct OracleArgs {
  std::string pairs, out;
  int node_limit = kDefaultExactNodeLimit;
};

struct EvolveArgs {
  std::string pairs, out = "run", backend = "mutator", resume;
  std::string endpoint, model = "default", prompts;
  EvolutionConfig cfg;
};

struct SelectArgs {
  std::string programs, pairs, out;
  int budget = kDefaultBudget;
};

struct InferArgs {
  std::string ensemble, pairs, out;
  bool override_matcher = false;
};

struct EvalArgs {
  std::string predictions, truths, out;
};

struct BenchArgs {
  std::string pairs, ensemble, out;
  int repeat = 3;
};

struct CorpusArgs {
  std::string family = "labeled", out;
  ToyCorpusConfig cfg;
};

MatcherConfig matcher_of(const Common& c) {
  auto kind = parse_matcher_kind(c.matcher);
  if (!kind) throw CLI::ValidationError("--matcher", "unknown matcher " + c.matcher);
  return {*kind, c.beta};
}

RunnerConfig runner_of(const Common& c) {
  RunnerConfig r;
  r.limits.time_limit = std::chrono::milliseconds(c.time_limit_ms);
  r.max_parallel = c.max_parallel;
  return r;
}

ExecPolicy policy_of(const Common& c) {
  return c.serial ? ExecPolicy::serial : ExecPolicy::parallel;
}

void emit(const std::string& path, const json& doc) {
  if (path.empty() || path == "-")
    std::cout << doc.dump(2) << "\n";
  else
    write_json_file(path, doc);
}

std::vector<PairRecord> load_pairs(const std::string& path) {
  auto records = read_pairs_file(path);
  if (records.empty()) throw DataError(path + ": no pairs");
  return records;
}

int run_oracle(const OracleArgs& a, const Common& c) {
  auto records = load_pairs(a.pairs);
  const auto pairs = pairs_of(records);
  std::vector<ExactGed> results;
  try {
    results = exact_ged_batch(pairs, a.node_limit, policy_of(c));
  } catch (const std::length_error& e) {
    throw DataError(e.what());
  }
  for (std::size_t t = 0; t < records.size(); ++t)
    records[t].pair.true_ged = results[t].distance.value;
  if (a.out.empty() || a.out == "-") {
    for (const auto& r : records) std::cout << pair_to_json(r).dump() << "\n";
  } else {
    write_pairs_file(a.out, records);
  }
  return 0;
}

int run_evolve(EvolveArgs a, const Common& c) {
  const auto records = load_pairs(a.pairs);
  const auto pairs = pairs_of(records);
  const TrainCorpus corpus(pairs);
  a.cfg.matcher = matcher_of(c);
  a.cfg.policy = policy_of(c);
  fs::create_directories(a.out);
  if (a.cfg.checkpoint_path.empty())
    a.cfg.checkpoint_path = fs::path(a.out) / "checkpoint.json";

  std::unique_ptr<GeneratorBackend> backend;
  PromptTemplates templates;
  if (a.backend == "mutator") {
    backend = std::make_unique<SeededMutator>(a.cfg.seed);
  } else if (a.backend == "llm") {
    if (a.endpoint.empty())
      throw CLI::ValidationError("--endpoint", "required for the llm backend");
    LlmHttpConfig lc;
    lc.endpoint = a.endpoint;
    lc.model = a.model;
    lc.temperature = a.cfg.temperature;
    backend = std::make_unique<LlmHttpBackend>(lc);
    templates = a.prompts.empty() ? PromptTemplates::load_default()
                                  : PromptTemplates::load(a.prompts);
  } else {
    throw CLI::ValidationError("--backend", "expected mutator or llm");
  }

  ProgramRunner runner(runner_of(c));
  Evolution evo(a.cfg, corpus, *backend, runner, templates);
  EvolutionResult result =
      a.resume.empty() ? evo.run() : evo.resume(a.resume);
  write_ensemble_dir(fs::path(a.out) / "ensemble", result.ensemble);
  write_json_file(fs::path(a.out) / "run.json", result_to_json(result));
  std::cout << json{{"iterations", result.iterations},
                    {"stop", result.stop == StopReason::patience
                                 ? "patience"
                                 : "max_iterations"},
                    {"j_value", result.ensemble.j_value},
                    {"programs", result.ensemble.programs.size()},
                    {"ensemble", (fs::path(a.out) / "ensemble").string()}}
                   .dump()
            << "\n";
  return 0;
}

int run_select(const SelectArgs& a, const Common& c) {
  const auto programs = read_program_dir(a.programs);
  if (programs.empty()) throw DataError(a.programs + ": no programs");
  const auto records = load_pairs(a.pairs);
  const auto pairs = pairs_of(records);
  const TrainCorpus corpus(pairs);
  const MatcherConfig matcher = matcher_of(c);
  ProgramRunner runner(runner_of(c));
  BoundTable table = corpus.make_bound_table();
  std::map<ProgramId, ScoredProgram> archive;
  json rejected = json::array();
  for (const auto& p : programs) {
    BoundRow row = bound_row(p, corpus, matcher, runner, policy_of(c));
    if (!row.bounds) {
      spdlog::warn("p{} rejected on pair {}: {}", p.id, row.failed_pair,
                   row.failure);
      table.mark_invalid(p.id);
      rejected.push_back({{"id", p.id}, {"pair", row.failed_pair},
                          {"reason", row.failure}});
      continue;
    }
    table.add_row(p.id, std::move(*row.bounds));
    archive.emplace(p.id, ScoredProgram{p, 0});
  }
  const auto ids = table.program_ids();
  const Ensemble ens = greedy_select(ids, a.budget, table);
  const EnsembleManifest manifest = make_manifest(ens, archive, matcher, a.budget);
  if (!a.out.empty()) write_ensemble_dir(a.out, manifest);
  std::cout << json{{"j_value", ens.j_value},
                    {"members", ens.members},
                    {"gains", ens.admission_gains},
                    {"rejected", rejected}}
                   .dump(2)
            << "\n";
  return 0;
}

int run_infer(const InferArgs& a, const Common& c) {
  EnsembleManifest manifest = read_ensemble(a.ensemble);
  if (a.override_matcher) manifest.matcher = matcher_of(c);
  const auto records = load_pairs(a.pairs);
  const auto pairs = pairs_of(records);
  ProgramRunner runner(runner_of(c));
  EvalReport report = infer(manifest, pairs, manifest.matcher, runner, policy_of(c));
  report.ensemble_ref = a.ensemble;
  for (std::size_t t = 0; t < report.pairs.size(); ++t)
    for (const auto& f : report.pairs[t].failures)
      spdlog::warn("pair {}: {}", t, f);
  emit(a.out, report_to_json(report));
  return report.error_pairs == 0 ? 0 : static_cast<int>(ErrorClass::data);
}

std::vector<std::optional<std::int64_t>> read_predictions(const std::string& path,
                                                          std::vector<std::optional<std::int64_t>>& truths) {
  std::vector<std::optional<std::int64_t>> preds;
  const std::string text = read_text_file(path);
  json doc = json::parse(text, nullptr, false);
  auto take = [&](const json& rec) {
    preds.push_back(rec.contains("prediction")
                        ? std::optional<std::int64_t>(rec["prediction"].get<std::int64_t>())
                        : std::nullopt);
    truths.push_back(rec.contains("true_ged")
                         ? std::optional<std::int64_t>(rec["true_ged"].get<std::int64_t>())
                         : std::nullopt);
  };
  try {
    if (!doc.is_discarded() && doc.is_object() && doc.contains("pairs")) {
      for (const auto& rec : doc["pairs"]) take(rec);
      return preds;
    }
    std::istringstream in(text);
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json rec = json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.is_object())
        throw DataError(path + ":" + std::to_string(line_no) + ": not a JSON object");
      take(rec);
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return preds;
}

int run_eval(const EvalArgs& a) {
  std::vector<std::optional<std::int64_t>> truths;
  const auto preds = read_predictions(a.predictions, truths);
  if (!a.truths.empty()) {
    const auto records = load_pairs(a.truths);
    if (records.size() != preds.size())
      throw DataError("predictions and truths differ in length");
    for (std::size_t t = 0; t < records.size(); ++t)
      truths[t] = records[t].pair.true_ged;
  }
  std::vector<std::int64_t> p, y;
  int skipped = 0;
  for (std::size_t t = 0; t < preds.size(); ++t) {
    if (!truths[t]) throw DataError("pair " + std::to_string(t) + " has no truth");
    if (!preds[t]) {
      ++skipped;
      continue;
    }
    p.push_back(*preds[t]);
    y.push_back(*truths[t]);
  }
  if (p.empty()) throw DataError("no predictions to evaluate");
  emit(a.out, json{{"pairs", p.size()},
                   {"error_pairs", skipped},
                   {"rmse", rmse(p, y)},
                   {"emr", emr(p, y)}});
  return 0;
}

template <class F>
double seconds_of(F&& f, int repeat) {
  double best = 1e300;
  for (int r = 0; r < repeat; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count());
  }
  return best;
}

int run_bench(const BenchArgs& a, const Common& c) {
  const auto records = load_pairs(a.pairs);
  const auto pairs = pairs_of(records);
  const TrainCorpus corpus(pairs);
  const MatcherConfig matcher = matcher_of(c);
  ProgramRunner runner(runner_of(c));
  EnsembleManifest manifest;
  if (a.ensemble.empty()) {
    manifest.matcher = matcher;
    manifest.programs = {
        {PriorityProgram::builtin(1, std::string(kZeroPriority)), 0},
        {PriorityProgram::builtin(2, std::string(kLabelPassthrough)), 0},
        {PriorityProgram::builtin(3, std::string(kDegreeNeighbor)), 0}};
  } else {
    manifest = read_ensemble(a.ensemble);
  }
  json report = {{"pairs", pairs.size()},
                 {"programs", manifest.programs.size()},
                 {"threads", omp_get_max_threads()}};
  for (auto policy : {ExecPolicy::serial, ExecPolicy::parallel}) {
    const std::string tag = policy == ExecPolicy::serial ? "serial" : "parallel";
    const double t_rows = seconds_of(
        [&] {
          for (const auto& m : manifest.programs)
            bound_row(m.program, corpus, manifest.matcher, runner, policy);
        },
        a.repeat);
    const double t_infer = seconds_of(
        [&] { infer(manifest, pairs, manifest.matcher, runner, policy); }, a.repeat);
    const double t_exact = seconds_of(
        [&] { exact_ged_batch(pairs, kDefaultExactNodeLimit, policy); }, a.repeat);
    report[tag] = {{"bound_rows_s", t_rows},
                   {"inference_s", t_infer},
                   {"inference_ms_per_pair", 1000.0 * t_infer / pairs.size()},
                   {"exact_ged_s", t_exact}};
  }
  emit(a.out, report);
  return 0;
}

int run_make_corpus(CorpusArgs a) {
  a.cfg.family = parse_toy_family(a.family);
  auto& labels = LabelTable::shared();
  if (a.cfg.family == ToyFamily::labeled)
    a.cfg.alphabet = {labels.intern("C"), labels.intern("N"), labels.intern("O"),
                      labels.intern("S"), labels.intern("Cl")};
  else
    a.cfg.alphabet = {labels.intern("")};
  const auto pairs = make_toy_corpus(a.cfg);
  std::vector<PairRecord> records;
  for (const auto& p : pairs) records.push_back({p, {}, {}});
  if (a.out.empty() || a.out == "-") {
    for (const auto& r : records) std::cout << pair_to_json(r).dump() << "\n";
  } else {
    write_pairs_file(a.out, records);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph edit distance upper bounds from evolved priority programs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults");
  Common common;
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Warnings and errors only");
  app.add_option("--matcher", common.matcher,
                 "hungarian | greedy | neighbor_biased")
      ->capture_default_str();
  app.add_option("--beta", common.beta, "Neighbor bonus weight")->capture_default_str();
  app.add_option("--time-limit-ms", common.time_limit_ms,
                 "Per-call limit for external programs")
      ->capture_default_str();
  app.add_option("--max-parallel", common.max_parallel,
                 "Concurrent external program processes")
      ->capture_default_str();
  app.add_flag("--serial", common.serial, "Disable OpenMP kernels");

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "Exact GED for every pair (n <= 10)");
  o->add_option("--pairs", oracle.pairs)->required();
  o->add_option("--out", oracle.out, "Output pairs file (default stdout)");
  o->add_option("--node-limit", oracle.node_limit)->capture_default_str();

  EvolveArgs evolve;
  auto* e = app.add_subcommand("evolve", "Evolve a program ensemble");
  e->add_option("--pairs", evolve.pairs, "Training pairs")->required();
  e->add_option("--out", evolve.out, "Run directory")->capture_default_str();
  e->add_option("--backend", evolve.backend, "mutator | llm")->capture_default_str();
  e->add_option("--seed", evolve.cfg.seed)->capture_default_str();
  e->add_option("--islands", evolve.cfg.islands)->capture_default_str();
  e->add_option("--context", evolve.cfg.context_size, "Programs per prompt")
      ->capture_default_str();
  e->add_option("--budget", evolve.cfg.budget)->capture_default_str();
  e->add_option("--patience", evolve.cfg.patience)->capture_default_str();
  e->add_option("--threshold", evolve.cfg.threshold)->capture_default_str();
  e->add_option("--iterations", evolve.cfg.max_iterations)->capture_default_str();
  e->add_option("--cull-period", evolve.cfg.cull_period)->capture_default_str();
  e->add_option("--temperature", evolve.cfg.temperature)->capture_default_str();
  e->add_option("--max-transport-failures", evolve.cfg.max_transport_failures)
      ->capture_default_str();
  e->add_option("--checkpoint-every", evolve.cfg.checkpoint_every)
      ->capture_default_str();
  e->add_option("--checkpoint", evolve.cfg.checkpoint_path,
                "Default <out>/checkpoint.json");
  e->add_option("--resume", evolve.resume, "Checkpoint to continue from");
  e->add_option("--endpoint", evolve.endpoint, "Chat completions URL");
  e->add_option("--model", evolve.model)->capture_default_str();
  e->add_option("--prompts", evolve.prompts, "Prompt template directory");

  SelectArgs select;
  auto* s = app.add_subcommand("select", "Greedy selection over a program directory");
  s->add_option("--programs", select.programs)->required();
  s->add_option("--pairs", select.pairs)->required();
  s->add_option("--budget", select.budget)->capture_default_str();
  s->add_option("--out", select.out, "Ensemble directory to write");

  InferArgs inf;
  auto* i = app.add_subcommand("infer", "Predict GED with an ensemble");
  i->add_option("--ensemble", inf.ensemble)->required();
  i->add_option("--pairs", inf.pairs)->required();
  i->add_option("--out", inf.out, "Report file (default stdout)");
  i->add_flag("--override-matcher", inf.override_matcher,
              "Use --matcher instead of the manifest's");

  EvalArgs ev;
  auto* v = app.add_subcommand("eval", "RMSE and EMR of predictions");
  v->add_option("--predictions", ev.predictions, "infer report or JSONL")->required();
  v->add_option("--truths", ev.truths, "Pairs file with true_ged");
  v->add_option("--out", ev.out);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Serial vs parallel timing report");
  b->add_option("--pairs", bench.pairs)->required();
  b->add_option("--ensemble", bench.ensemble, "Default: the builtin programs");
  b->add_option("--repeat", bench.repeat)->capture_default_str();
  b->add_option("--out", bench.out);

  CorpusArgs corpus;
  auto* m = app.add_subcommand("make-corpus", "Seeded toy corpus with exact truths");
  m->add_option("--family", corpus.family, "labeled | dense | sparse")
      ->capture_default_str();
  m->add_option("--pairs", corpus.cfg.pairs)->capture_default_str();
  m->add_option("--min-nodes", corpus.cfg.min_nodes)->capture_default_str();
  m->add_option("--max-nodes", corpus.cfg.max_nodes)->capture_default_str();
  m->add_option("--max-edits", corpus.cfg.max_edits)->capture_default_str();
  m->add_option("--seed", corpus.cfg.seed)->capture_default_str();
  m->add_option("--out", corpus.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : static_cast<int>(ErrorClass::usage);
  }

  auto logger = spdlog::stderr_color_mt("gedprog");
  spdlog::set_default_logger(logger);
  spdlog::set_level(verbose ? spdlog::level::debug
                    : quiet ? spdlog::level::warn
                            : spdlog::level::info);

  try {
    if (*o) return run_oracle(oracle, common);
    if (*e) return run_evolve(evolve, common);
    if (*s) return run_select(select, common);
    if (*i) return run_infer(inf, common);
    if (*v) return run_eval(ev);
    if (*b) return run_bench(bench, common);
    if (*m) return run_make_corpus(corpus);
  } catch (const CLI::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return static_cast<int>(ErrorClass::usage);
  } catch (const Error& err) {
    spdlog::error("{}", err.what());
    return err.exit_code();
  } catch (const std::exception& err) {
    spdlog::error("{}", err.what());
    return static_cast<int>(ErrorClass::internal);
  }
  return static_cast<int>(ErrorClass::usage);
}
