#include "gedprog/evolution.hpp"

#include <spdlog/spdlog.h>

#include "gedprog/error.hpp"

namespace gedprog {

using nlohmann::json;

namespace {

PoolConfig pool_config(const EvolutionConfig& c) {
  return {c.islands, c.temperature, c.cull_period, c.seed};
}

json log_to_json(const IterationLog& l) {
  return {{"iteration", l.iteration},     {"candidates", l.candidates},
          {"accepted", l.accepted},       {"rejections", l.rejections},
          {"transport_failed", l.transport_failed},
          {"culled", l.culled},           {"j_value", l.j_value},
          {"ensemble_size", l.ensemble_size}};
}

IterationLog log_from_json(const json& d) {
  IterationLog l;
  l.iteration = d.at("iteration");
  l.candidates = d.at("candidates");
  l.accepted = d.at("accepted");
  l.rejections = d.at("rejections").get<std::vector<std::string>>();
  l.transport_failed = d.at("transport_failed");
  l.culled = d.at("culled");
  l.j_value = d.at("j_value");
  l.ensemble_size = d.at("ensemble_size");
  return l;
}

}  // namespace

json state_to_json(const EvolutionState& s) {
  json entries = json::array();
  for (const auto& [id, e] : s.pool.entries)
    entries.push_back({{"program", program_to_json(e.program)},
                       {"score", e.score},
                       {"island", e.island},
                       {"origin", e.origin}});
  json rows = json::array();
  for (ProgramId id : s.table.program_ids()) {
    auto r = s.table.row(id);
    rows.push_back({{"id", id}, {"bounds", std::vector<std::int64_t>(r.begin(), r.end())}});
  }
  json archive = json::array();
  for (const auto& [id, sp] : s.archive)
    archive.push_back({{"program", program_to_json(sp.program)}, {"score", sp.score}});
  json log = json::array();
  for (const auto& l : s.log) log.push_back(log_to_json(l));
  auto sentinels = s.table.sentinels();
  return {
      {"format", "gedprog-checkpoint"},
      {"version", 1},
      {"iteration", s.iteration},
      {"stall", s.stall},
      {"transport_failures", s.transport_failures},
      {"pool",
       {{"entries", std::move(entries)},
        {"next_id", s.pool.next_id},
        {"registrations", s.pool.registrations},
        {"rng", s.pool.rng_state}}},
      {"table",
       {{"sentinels", std::vector<std::int64_t>(sentinels.begin(), sentinels.end())},
        {"rows", std::move(rows)},
        {"invalid", std::vector<ProgramId>(s.table.invalid_ids().begin(),
                                           s.table.invalid_ids().end())}}},
      {"archive", std::move(archive)},
      {"ensemble", s.ensemble},
      {"j_trace", s.j_trace},
      {"log", std::move(log)},
      {"backend_state", s.backend_state},
  };
}

EvolutionState state_from_json(const json& doc) {
  if (doc.value("format", "") != "gedprog-checkpoint")
    throw DataError("not a checkpoint file");
  try {
    EvolutionState s;
    s.iteration = doc.at("iteration");
    s.stall = doc.at("stall");
    s.transport_failures = doc.at("transport_failures");
    const json& pool = doc.at("pool");
    for (const auto& e : pool.at("entries")) {
      PoolEntry pe{program_from_json(e.at("program")), e.at("score"),
                   e.at("island"), e.at("origin")};
      s.pool.entries.emplace(pe.program.id, std::move(pe));
    }
    s.pool.next_id = pool.at("next_id");
    s.pool.registrations = pool.at("registrations");
    s.pool.rng_state = pool.at("rng");
    const json& table = doc.at("table");
    s.table = BoundTable(table.at("sentinels").get<std::vector<std::int64_t>>());
    for (const auto& r : table.at("rows"))
      s.table.add_row(r.at("id"), r.at("bounds").get<std::vector<std::int64_t>>());
    for (const auto& id : table.at("invalid")) s.table.mark_invalid(id);
    for (const auto& a : doc.at("archive")) {
      ScoredProgram sp{program_from_json(a.at("program")), a.at("score")};
      s.archive.emplace(sp.program.id, std::move(sp));
    }
    s.ensemble = doc.at("ensemble").get<std::vector<ProgramId>>();
    s.j_trace = doc.at("j_trace").get<std::vector<std::int64_t>>();
    for (const auto& l : doc.at("log")) s.log.push_back(log_from_json(l));
    s.backend_state = doc.at("backend_state");
    return s;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

Evolution::Evolution(EvolutionConfig config, const TrainCorpus& corpus,
                     GeneratorBackend& backend, const ProgramRunner& runner,
                     PromptTemplates templates)
    : config_(std::move(config)),
      corpus_(corpus),
      backend_(backend),
      runner_(runner),
      templates_(std::move(templates)),
      pool_(pool_config(config_)),
      table_(corpus.make_bound_table()),
      ensemble_(Ensemble::empty(table_)) {
  if (config_.context_size < 1)
    throw std::invalid_argument("context size must be at least 1");
  if (config_.budget < 1) throw std::invalid_argument("budget must be at least 1");
  if (config_.patience < 1)
    throw std::invalid_argument("patience must be at least 1");
}

void Evolution::refresh_ensemble() {
  const auto ids = table_.program_ids();
  Ensemble fresh = greedy_select(ids, config_.budget, table_);
  // Greedy on a larger candidate set is not guaranteed to do better; keep
  // the previous selection when it still wins.
  if (ensemble_.members.empty() || fresh.j_value <= ensemble_.j_value)
    ensemble_ = std::move(fresh);
}

std::optional<std::string> Evolution::admit(PriorityProgram candidate,
                                            bool& culled) {
  candidate.id = pool_.allocate_id();
  candidate.created_at = iteration_;
  BoundRow row =
      bound_row(candidate, corpus_, config_.matcher, runner_, config_.policy);
  if (!row.bounds) {
    table_.mark_invalid(candidate.id);
    return "p" + std::to_string(candidate.id) + " pair " +
           std::to_string(row.failed_pair) + ": " + row.failure;
  }
  table_.add_row(candidate.id, std::move(*row.bounds));
  const std::int64_t score = marginal_gain(ensemble_, candidate.id, table_);
  refresh_ensemble();
  archive_.emplace(candidate.id, ScoredProgram{candidate, score});
  pool_.register_program(std::move(candidate), score);
  if (pool_.cull_due()) {
    pool_.cull_islands();
    culled = true;
  }
  return std::nullopt;
}

void Evolution::seed() {
  bool culled = false;
  auto rejected = admit(PriorityProgram::builtin(0, std::string(kZeroPriority)),
                        culled);
  if (rejected)
    throw std::runtime_error("zero program failed on the corpus: " + *rejected);
  trace_.push_back(ensemble_.j_value);
  spdlog::info("seeded: J = {}", ensemble_.j_value);
}

bool Evolution::step() {
  if (stopped_) return false;
  if (iteration_ >= config_.max_iterations) {
    stopped_ = StopReason::max_iterations;
    return false;
  }
  ++iteration_;
  IterationLog entry;
  entry.iteration = iteration_;
  const std::int64_t before = ensemble_.j_value;

  GenerateResult gen = backend_.generate(
      make_request(templates_, pool_.sample_context(config_.context_size)));
  entry.transport_failed = gen.transport_failed;
  entry.candidates = static_cast<int>(gen.candidates.size());
  if (gen.transport_failed) {
    ++transport_failures_;
    spdlog::warn("iteration {}: generator unavailable ({} in a row)", iteration_,
                 transport_failures_);
  } else {
    transport_failures_ = 0;
  }
  for (auto& c : gen.candidates) {
    if (auto reason = admit(std::move(c), entry.culled)) {
      spdlog::info("iteration {}: rejected {}", iteration_, *reason);
      entry.rejections.push_back(std::move(*reason));
    } else {
      ++entry.accepted;
    }
  }

  entry.j_value = ensemble_.j_value;
  entry.ensemble_size = static_cast<int>(ensemble_.members.size());
  trace_.push_back(ensemble_.j_value);
  stall_ = before - ensemble_.j_value > config_.threshold ? 0 : stall_ + 1;
  spdlog::info("iteration {}: {} candidates, {} accepted, J = {}, stall {}",
               iteration_, entry.candidates, entry.accepted, entry.j_value,
               stall_);
  log_.push_back(std::move(entry));

  if (transport_failures_ >= config_.max_transport_failures) {
    if (!config_.checkpoint_path.empty()) write_checkpoint(config_.checkpoint_path);
    throw BackendError("generator backend unavailable after " +
                       std::to_string(transport_failures_) +
                       " consecutive failures");
  }
  if (config_.checkpoint_every > 0 && !config_.checkpoint_path.empty() &&
      iteration_ % config_.checkpoint_every == 0)
    write_checkpoint(config_.checkpoint_path);
  if (stall_ >= config_.patience) stopped_ = StopReason::patience;
  else if (iteration_ >= config_.max_iterations)
    stopped_ = StopReason::max_iterations;
  return !stopped_;
}

EvolutionResult Evolution::run() {
  seed();
  while (step()) {
  }
  return finish(*stopped_);
}

EvolutionResult Evolution::resume(const std::filesystem::path& checkpoint) {
  restore(state_from_json(read_json_file(checkpoint)));
  spdlog::info("resumed at iteration {}: J = {}", iteration_, ensemble_.j_value);
  if (stall_ >= config_.patience) stopped_ = StopReason::patience;
  while (step()) {
  }
  return finish(*stopped_);
}

EvolutionState Evolution::snapshot() const {
  EvolutionState s;
  s.iteration = iteration_;
  s.stall = stall_;
  s.transport_failures = transport_failures_;
  s.pool = pool_.state();
  s.table = table_;
  s.archive = archive_;
  s.ensemble = ensemble_.members;
  s.j_trace = trace_;
  s.log = log_;
  s.backend_state = backend_.save_state();
  return s;
}

void Evolution::restore(const EvolutionState& s) {
  if (s.table.pair_count() != corpus_.size())
    throw DataError("checkpoint was written for a different corpus");
  iteration_ = s.iteration;
  stall_ = s.stall;
  transport_failures_ = s.transport_failures;
  pool_ = Pool::restore(pool_config(config_), s.pool);
  table_ = s.table;
  archive_ = s.archive;
  ensemble_ = Ensemble::empty(table_);
  for (ProgramId id : s.ensemble) ensemble_.add(id, table_);
  trace_ = s.j_trace;
  log_ = s.log;
  backend_.load_state(s.backend_state);
  stopped_.reset();
}

void Evolution::write_checkpoint(const std::filesystem::path& path) const {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  write_json_file(tmp, state_to_json(snapshot()));
  std::filesystem::rename(tmp, path);
  spdlog::debug("checkpoint written to {}", path.string());
}

EvolutionResult Evolution::finish(StopReason stop) const {
  EvolutionResult r;
  r.ensemble = make_manifest(ensemble_, archive_, config_.matcher, config_.budget);
  r.j_trace = trace_;
  r.log = log_;
  r.stop = stop;
  r.iterations = iteration_;
  spdlog::info("stopped after {} iterations ({}): J = {}, {} programs", iteration_,
               stop == StopReason::patience ? "patience" : "max iterations",
               ensemble_.j_value, ensemble_.members.size());
  return r;
}

EnsembleManifest make_manifest(const Ensemble& ensemble,
                               const std::map<ProgramId, ScoredProgram>& archive,
                               const MatcherConfig& matcher, int budget) {
  EnsembleManifest m;
  m.matcher = matcher;
  m.budget = budget;
  m.j_value = ensemble.j_value;
  for (std::size_t i = 0; i < ensemble.members.size(); ++i)
    m.programs.push_back(
        {archive.at(ensemble.members[i]).program, ensemble.admission_gains[i]});
  return m;
}

json result_to_json(const EvolutionResult& r) {
  json log = json::array();
  for (const auto& l : r.log) log.push_back(log_to_json(l));
  json members = json::array();
  for (const auto& m : r.ensemble.programs)
    members.push_back({{"id", m.program.id}, {"score", m.score}});
  return {{"iterations", r.iterations},
          {"stop", r.stop == StopReason::patience ? "patience" : "max_iterations"},
          {"j_value", r.ensemble.j_value},
          {"j_trace", r.j_trace},
          {"ensemble", std::move(members)},
          {"log", std::move(log)}};
}

}  // namespace gedprog
