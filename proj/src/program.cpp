#include "gedprog/program.hpp"

#include <stdlib.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "gedprog/error.hpp"

#ifndef GEDPROG_DEFAULT_ASSET_DIR
#define GEDPROG_DEFAULT_ASSET_DIR "assets"
#endif

namespace gedprog {

using nlohmann::json;

PriorityProgram PriorityProgram::builtin(ProgramId id, std::string name,
                                         DegreeNeighborParams params) {
  if (!is_builtin_name(name))
    throw std::invalid_argument("unknown builtin program: " + name);
  PriorityProgram p;
  p.id = id;
  p.kind = BuiltinProgram{std::move(name), params};
  p.length = p.source_text().size();
  return p;
}

PriorityProgram PriorityProgram::external(ProgramId id, std::string source,
                                          std::vector<std::string> command) {
  if (source.empty()) throw std::invalid_argument("empty program source");
  PriorityProgram p;
  p.id = id;
  p.length = source.size();
  p.kind = ExternalProgram{std::move(source), std::move(command)};
  return p;
}

std::string PriorityProgram::source_text() const {
  if (const auto* b = std::get_if<BuiltinProgram>(&kind))
    return builtin_python_source(b->name, b->params);
  return std::get<ExternalProgram>(kind).source;
}

std::string describe(const ExecOutcome& o) {
  struct Visitor {
    std::string operator()(const ExecOk& ok) const {
      return "ok(" + std::to_string(ok.weights.rows()) + "x" +
             std::to_string(ok.weights.cols()) + ")";
    }
    std::string operator()(const ExecTimeout&) const { return "timeout"; }
    std::string operator()(const ExecCrash& c) const {
      return "crash(exit=" + std::to_string(c.exit_code) +
             ", signal=" + std::to_string(c.signal) + ")";
    }
    std::string operator()(const ExecMalformed& m) const {
      return "malformed(" + m.reason + ")";
    }
  };
  return std::visit(Visitor{}, o);
}

std::filesystem::path asset_dir() {
  if (const char* env = std::getenv("GEDPROG_ASSETS"); env && *env) return env;
  return GEDPROG_DEFAULT_ASSET_DIR;
}

std::vector<std::string> default_external_command() {
  return {"python3", "{driver}", "{source}"};
}

ExecOutcome validate_weights(WeightMatrix w, int n) {
  if (w.rows() != n || w.cols() != n)
    return ExecMalformed{"dimension mismatch: expected " + std::to_string(n) +
                         "x" + std::to_string(n) + ", got " +
                         std::to_string(w.rows()) + "x" +
                         std::to_string(w.cols())};
  if (!w.all_finite()) return ExecMalformed{"non-finite entry"};
  return ExecOk{std::move(w)};
}

std::string encode_request(const Graph& g1, const Graph& g2,
                           const WeightMatrix& w0) {
  auto adjacency = [](const Graph& g) {
    json rows = json::array();
    for (int i = 0; i < g.size(); ++i) {
      json row = json::array();
      for (int j = 0; j < g.size(); ++j) row.push_back(g.adjacent(i, j) ? 1 : 0);
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json w = json::array();
  for (int i = 0; i < w0.rows(); ++i) {
    json row = json::array();
    for (double x : w0.row(i)) row.push_back(x);
    w.push_back(std::move(row));
  }
  json req = {{"adj1", adjacency(g1)}, {"adj2", adjacency(g2)}, {"w0", w}};
  return req.dump();
}

ExecOutcome decode_response(std::string_view stdout_data, int n) {
  json doc;
  try {
    doc = json::parse(stdout_data.begin(), stdout_data.end());
  } catch (const json::out_of_range&) {
    return ExecMalformed{"non-finite entry"};
  } catch (const json::exception&) {
    return ExecMalformed{"output is not a single JSON object"};
  }
  if (!doc.is_object() || !doc.contains("weights"))
    return ExecMalformed{"output object lacks \"weights\""};
  const json& rows = doc["weights"];
  if (!rows.is_array()) return ExecMalformed{"\"weights\" is not an array"};
  const int r = static_cast<int>(rows.size());
  int c = -1;
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(n) * n);
  for (const json& row : rows) {
    if (!row.is_array()) return ExecMalformed{"weight row is not an array"};
    if (c == -1) c = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != c)
      return ExecMalformed{"ragged weight rows"};
    for (const json& x : row) {
      if (!x.is_number()) return ExecMalformed{"non-numeric weight entry"};
      data.push_back(x.get<double>());
    }
  }
  WeightMatrix w(r, r == 0 ? 0 : c);
  std::copy(data.begin(), data.end(), w.data().begin());
  return validate_weights(std::move(w), n);
}

ProgramRunner::ProgramRunner(RunnerConfig config)
    : config_(std::move(config)), slots_(std::max(1, config_.max_parallel)) {
  std::string pattern =
      (std::filesystem::temp_directory_path() / "gedprog-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr)
    throw RunnerError("cannot create runner work directory");
  workdir_ = pattern;
}

ProgramRunner::~ProgramRunner() {
  std::error_code ec;
  std::filesystem::remove_all(workdir_, ec);
}

std::filesystem::path ProgramRunner::materialize(
    const std::string& source) const {
  std::lock_guard lock(files_mutex_);
  if (auto it = files_.find(source); it != files_.end()) return it->second;
  auto path = workdir_ / ("program_" + std::to_string(files_.size()) + ".py");
  std::ofstream out(path, std::ios::binary);
  out << source;
  if (!out) throw RunnerError("cannot write program source to " + path.string());
  files_.emplace(source, path);
  return path;
}

ExecOutcome ProgramRunner::run_external(const ExternalProgram& p,
                                        const Graph& g1, const Graph& g2,
                                        const WeightMatrix& w0) const {
  const auto source_path = materialize(p.source).string();
  const auto driver_path = (asset_dir() / "priority_driver.py").string();
  std::vector<std::string> argv;
  for (const auto& arg : p.command.empty() ? default_external_command()
                                           : p.command) {
    if (arg == "{source}")
      argv.push_back(source_path);
    else if (arg == "{driver}")
      argv.push_back(driver_path);
    else
      argv.push_back(arg);
  }

  const std::string request = encode_request(g1, g2, w0);
  slots_.acquire();
  ProcessResult res;
  try {
    res = run_sandboxed(argv, request, config_.limits);
  } catch (...) {
    slots_.release();
    throw;
  }
  slots_.release();

  switch (res.status) {
    case ProcessResult::Status::timed_out:
      return ExecTimeout{};
    case ProcessResult::Status::output_overflow:
      return ExecMalformed{"output exceeds " +
                           std::to_string(config_.limits.max_output_bytes) +
                           " bytes"};
    case ProcessResult::Status::signaled:
      return ExecCrash{0, res.signal,
                       "terminated by signal " + std::to_string(res.signal)};
    case ProcessResult::Status::exited:
      if (res.exit_code != 0)
        return ExecCrash{res.exit_code, 0,
                         "exit code " + std::to_string(res.exit_code)};
      return decode_response(res.stdout_data, g1.size());
  }
  return ExecMalformed{"unknown process status"};
}

ExecOutcome ProgramRunner::evaluate(const PriorityProgram& p, const Graph& g1,
                                    const Graph& g2,
                                    const WeightMatrix& w0) const {
  if (g1.size() != g2.size() || w0.rows() != g1.size() ||
      w0.cols() != g2.size())
    throw std::invalid_argument("evaluate: graphs must be padded and match w0");
  if (const auto* b = std::get_if<BuiltinProgram>(&p.kind)) {
    WeightMatrix w;
    if (b->name == kZeroPriority)
      w = builtin_zero(g1, g2, w0);
    else if (b->name == kLabelPassthrough)
      w = builtin_label_passthrough(g1, g2, w0);
    else if (b->name == kDegreeNeighbor)
      w = builtin_degree_neighbor(g1, g2, w0, b->params);
    else
      throw std::invalid_argument("unknown builtin program: " + b->name);
    return validate_weights(std::move(w), g1.size());
  }
  return run_external(std::get<ExternalProgram>(p.kind), g1, g2, w0);
}

ExecOutcome evaluate_program(const PriorityProgram& p, const Graph& g1,
                             const Graph& g2, const WeightMatrix& w0,
                             std::chrono::milliseconds time_limit) {
  RunnerConfig config;
  config.limits.time_limit = time_limit;
  ProgramRunner runner(config);
  return runner.evaluate(p, g1, g2, w0);
}

}  // namespace gedprog
