#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gedprog/corpus.hpp"
#include "gedprog/graph.hpp"
#include "gedprog/matching.hpp"
#include "gedprog/program.hpp"

namespace gedprog {

/// Reserved spelling of the dummy label; input files may not use it.
inline constexpr std::string_view kEpsilonName = "ε";

/// Bidirectional label name <-> Label interning. Thread-safe.
class LabelTable {
 public:
  /// Process-wide table used by the file readers and writers.
  static LabelTable& shared();

  /// Throws DataError for the reserved epsilon spelling.
  Label intern(std::string_view name);
  /// kEpsilonName for kEpsilon; throws std::out_of_range for unknown labels.
  std::string name(Label label) const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, Label, std::less<>> ids_;
  std::vector<std::string> names_;
};

/// Graph plus the node ids it was read with (dense ids are assigned in node
/// list order).
struct GraphDocument {
  Graph graph;
  std::vector<nlohmann::json> node_ids;
};

/// {"nodes": [{"id": .., "label": ..}, ...], "edges": [[u, v], ...]}.
/// Node ids may be integers or strings; labels strings or integers.
/// Throws DataError on any violation.
GraphDocument parse_graph(const nlohmann::json& doc,
                          LabelTable& labels = LabelTable::shared());

nlohmann::json graph_to_json(const Graph& g,
                             std::span<const nlohmann::json> node_ids = {},
                             const LabelTable& labels = LabelTable::shared());

/// One line of a pairs file: {"g1": graph, "g2": graph, "true_ged": k?}.
struct PairRecord {
  GraphPair pair;
  std::vector<nlohmann::json> ids1;
  std::vector<nlohmann::json> ids2;
};

PairRecord parse_pair(const nlohmann::json& doc,
                      LabelTable& labels = LabelTable::shared());
nlohmann::json pair_to_json(const PairRecord& rec,
                            const LabelTable& labels = LabelTable::shared());

/// UTF-8, one JSON object per line; blank lines ignored.
std::vector<PairRecord> read_pairs_file(const std::filesystem::path& path);
void write_pairs_file(const std::filesystem::path& path,
                      std::span<const PairRecord> records);
std::vector<GraphPair> pairs_of(std::span<const PairRecord> records);

nlohmann::json program_to_json(const PriorityProgram& p);
/// External programs carry either inline "source" or a "source_file"
/// resolved against `base_dir`.
PriorityProgram program_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});

nlohmann::json params_to_json(const DegreeNeighborParams& p);
DegreeNeighborParams params_from_json(const nlohmann::json& doc);

struct EnsembleMember {
  PriorityProgram program;
  std::int64_t score = 0;  ///< J reduction at admission
};

struct EnsembleManifest {
  MatcherConfig matcher;
  int budget = 0;
  std::int64_t j_value = 0;
  std::vector<EnsembleMember> programs;
};

/// Writes `dir`/ensemble.json and `dir`/programs/p<id>.py.
void write_ensemble_dir(const std::filesystem::path& dir,
                        const EnsembleManifest& manifest);
/// Accepts the directory or the ensemble.json path.
EnsembleManifest read_ensemble(const std::filesystem::path& path);

/// Loads *.py (external, default command) and *.json (program objects) in
/// filename order, assigning ids 1..N.
std::vector<PriorityProgram> read_program_dir(const std::filesystem::path& dir);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& doc);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace gedprog
