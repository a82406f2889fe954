#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <variant>
#include <vector>

#include "gedprog/builtins.hpp"
#include "gedprog/graph.hpp"
#include "gedprog/sandbox.hpp"
#include "gedprog/weight_matrix.hpp"

namespace gedprog {

using ProgramId = std::uint32_t;

/// In-process heuristic. `params` is only meaningful for degree_neighbor.
struct BuiltinProgram {
  std::string name;
  DegreeNeighborParams params;
  bool operator==(const BuiltinProgram&) const = default;
};

/// Generated source run in a subprocess. `command` is an argv template where
/// "{source}" expands to a file holding `source` and "{driver}" to the
/// bundled Python driver.
struct ExternalProgram {
  std::string source;
  std::vector<std::string> command;
  bool operator==(const ExternalProgram&) const = default;
};

struct PriorityProgram {
  ProgramId id = 0;
  std::variant<BuiltinProgram, ExternalProgram> kind;
  std::size_t length = 0;  ///< characters of source text
  std::int64_t created_at = 0;

  static PriorityProgram builtin(ProgramId id, std::string name,
                                 DegreeNeighborParams params = {});
  static PriorityProgram external(ProgramId id, std::string source,
                                  std::vector<std::string> command);

  bool is_builtin() const {
    return std::holds_alternative<BuiltinProgram>(kind);
  }
  /// Python text of the program: the rendered builtin or the external source.
  std::string source_text() const;

  bool operator==(const PriorityProgram&) const = default;
};

struct ExecOk {
  WeightMatrix weights;
};
struct ExecTimeout {};
struct ExecCrash {
  int exit_code = 0;
  int signal = 0;
  std::string detail;
};
struct ExecMalformed {
  std::string reason;
};

using ExecOutcome = std::variant<ExecOk, ExecTimeout, ExecCrash, ExecMalformed>;

inline bool is_ok(const ExecOutcome& o) {
  return std::holds_alternative<ExecOk>(o);
}
std::string describe(const ExecOutcome& o);

/// Default external command: run the bundled driver with python3.
std::vector<std::string> default_external_command();

/// Directory holding prompt templates and the Python driver. Honors the
/// GEDPROG_ASSETS environment variable.
std::filesystem::path asset_dir();

struct RunnerConfig {
  SandboxLimits limits;
  int max_parallel = 4;  ///< concurrent subprocesses
};

/// Executes priority programs. Builtins run in-process; external programs
/// run through the subprocess protocol:
///
///   stdin : {"adj1": [[0/1..]..], "adj2": [[..]..], "w0": [[..]..]}
///   stdout: {"weights": [[..]..]}   (nothing else; exit code 0)
///
/// Thread-safe. Source files for external programs are materialized in a
/// private temporary directory removed on destruction.
class ProgramRunner {
 public:
  explicit ProgramRunner(RunnerConfig config = {});
  ~ProgramRunner();
  ProgramRunner(const ProgramRunner&) = delete;
  ProgramRunner& operator=(const ProgramRunner&) = delete;

  ExecOutcome evaluate(const PriorityProgram& p, const Graph& g1,
                       const Graph& g2, const WeightMatrix& w0) const;

  const RunnerConfig& config() const { return config_; }

 private:
  std::filesystem::path materialize(const std::string& source) const;
  ExecOutcome run_external(const ExternalProgram& p, const Graph& g1,
                           const Graph& g2, const WeightMatrix& w0) const;

  RunnerConfig config_;
  std::filesystem::path workdir_;
  mutable std::mutex files_mutex_;
  mutable std::map<std::string, std::filesystem::path> files_;  // source -> file
  mutable std::counting_semaphore<1024> slots_;
};

/// One-shot evaluation with a default runner and the given time limit.
ExecOutcome evaluate_program(const PriorityProgram& p, const Graph& g1,
                             const Graph& g2, const WeightMatrix& w0,
                             std::chrono::milliseconds time_limit);

/// Validates a program's raw output against the expected shape.
ExecOutcome validate_weights(WeightMatrix w, int n);

/// Wire encoding of the request sent to external programs.
std::string encode_request(const Graph& g1, const Graph& g2,
                           const WeightMatrix& w0);

/// Parses an external program's stdout; returns ExecOk or ExecMalformed.
ExecOutcome decode_response(std::string_view stdout_data, int n);

}  // namespace gedprog
