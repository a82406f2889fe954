#include "gedprog/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gedprog/error.hpp"

namespace gedprog {

using nlohmann::json;
namespace fs = std::filesystem;

LabelTable& LabelTable::shared() {
  static LabelTable table;
  return table;
}

Label LabelTable::intern(std::string_view name) {
  if (name == kEpsilonName)
    throw DataError("label \"ε\" is reserved for padding nodes");
  std::lock_guard lock(mutex_);
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  const auto id = static_cast<Label>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(std::string(name), id);
  return id;
}

std::string LabelTable::name(Label label) const {
  if (label == kEpsilon) return std::string(kEpsilonName);
  std::lock_guard lock(mutex_);
  if (label < 0 || label >= static_cast<Label>(names_.size()))
    throw std::out_of_range("label id " + std::to_string(label) +
                            " was never interned");
  return names_[label];
}

namespace {

std::string id_key(const json& id) {
  if (id.is_number_integer()) return "i:" + std::to_string(id.get<std::int64_t>());
  if (id.is_string()) return "s:" + id.get<std::string>();
  throw DataError("node id must be an integer or a string");
}

std::string label_text(const json& label) {
  if (label.is_string()) return label.get<std::string>();
  if (label.is_number_integer()) return std::to_string(label.get<std::int64_t>());
  throw DataError("node label must be a string or an integer");
}

}  // namespace

GraphDocument parse_graph(const json& doc, LabelTable& labels) {
  if (!doc.is_object() || !doc.contains("nodes"))
    throw DataError("graph object needs a \"nodes\" array");
  const json& nodes = doc["nodes"];
  if (!nodes.is_array()) throw DataError("\"nodes\" must be an array");

  GraphDocument out;
  std::map<std::string, int> index;
  std::vector<Label> node_labels;
  for (const json& node : nodes) {
    if (!node.is_object() || !node.contains("id"))
      throw DataError("node entry needs an \"id\"");
    const json& id = node["id"];
    const auto key = id_key(id);
    if (!index.emplace(key, static_cast<int>(node_labels.size())).second)
      throw DataError("duplicate node id " + id.dump());
    const std::string text = node.contains("label") ? label_text(node["label"]) : "";
    node_labels.push_back(labels.intern(text));
    out.node_ids.push_back(id);
  }

  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    const json& es = doc["edges"];
    if (!es.is_array()) throw DataError("\"edges\" must be an array");
    for (const json& e : es) {
      if (!e.is_array() || e.size() != 2)
        throw DataError("edge must be a two-element array");
      auto u = index.find(id_key(e[0]));
      auto v = index.find(id_key(e[1]));
      if (u == index.end() || v == index.end())
        throw DataError("edge " + e.dump() + " references an unknown node");
      edges.push_back({u->second, v->second});
    }
  }
  try {
    out.graph = Graph(std::move(node_labels), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid graph: ") + e.what());
  }
  return out;
}

json graph_to_json(const Graph& g, std::span<const json> node_ids,
                   const LabelTable& labels) {
  auto id_of = [&](int v) -> json {
    return v < static_cast<int>(node_ids.size()) ? node_ids[v] : json(v);
  };
  json nodes = json::array();
  for (int v = 0; v < g.size(); ++v) {
    if (g.label(v) == kEpsilon)
      throw std::invalid_argument("cannot serialize a padded graph");
    nodes.push_back({{"id", id_of(v)}, {"label", labels.name(g.label(v))}});
  }
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({id_of(e.u), id_of(e.v)});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

PairRecord parse_pair(const json& doc, LabelTable& labels) {
  if (!doc.is_object() || !doc.contains("g1") || !doc.contains("g2"))
    throw DataError("pair record needs \"g1\" and \"g2\"");
  PairRecord rec;
  auto d1 = parse_graph(doc["g1"], labels);
  auto d2 = parse_graph(doc["g2"], labels);
  rec.pair.g1 = std::move(d1.graph);
  rec.pair.g2 = std::move(d2.graph);
  rec.ids1 = std::move(d1.node_ids);
  rec.ids2 = std::move(d2.node_ids);
  if (doc.contains("true_ged") && !doc["true_ged"].is_null()) {
    const json& t = doc["true_ged"];
    if (!t.is_number_integer() || t.get<std::int64_t>() < 0)
      throw DataError("true_ged must be a non-negative integer");
    rec.pair.true_ged = t.get<std::int64_t>();
  }
  return rec;
}

json pair_to_json(const PairRecord& rec, const LabelTable& labels) {
  json doc = {{"g1", graph_to_json(rec.pair.g1, rec.ids1, labels)},
              {"g2", graph_to_json(rec.pair.g2, rec.ids2, labels)}};
  if (rec.pair.true_ged) doc["true_ged"] = *rec.pair.true_ged;
  return doc;
}

std::vector<PairRecord> read_pairs_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pairs file " + path.string());
  std::vector<PairRecord> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); }))
      continue;
    try {
      out.push_back(parse_pair(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " +
                      e.what());
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " +
                      e.what());
    }
  }
  return out;
}

void write_pairs_file(const fs::path& path, std::span<const PairRecord> records) {
  std::string text;
  for (const auto& r : records) text += pair_to_json(r).dump() + "\n";
  write_text_file(path, text);
}

std::vector<GraphPair> pairs_of(std::span<const PairRecord> records) {
  std::vector<GraphPair> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.pair);
  return out;
}

json params_to_json(const DegreeNeighborParams& p) {
  return {{"label_weight", p.label_weight},
          {"degree_weight", p.degree_weight},
          {"neighbor_weight", p.neighbor_weight},
          {"neighbor_exponent", p.neighbor_exponent},
          {"scale_exponent", p.scale_exponent},
          {"denom_offset", p.denom_offset}};
}

DegreeNeighborParams params_from_json(const json& doc) {
  DegreeNeighborParams p;
  if (doc.is_null()) return p;
  p.label_weight = doc.value("label_weight", p.label_weight);
  p.degree_weight = doc.value("degree_weight", p.degree_weight);
  p.neighbor_weight = doc.value("neighbor_weight", p.neighbor_weight);
  p.neighbor_exponent = doc.value("neighbor_exponent", p.neighbor_exponent);
  p.scale_exponent = doc.value("scale_exponent", p.scale_exponent);
  p.denom_offset = doc.value("denom_offset", p.denom_offset);
  return p;
}

json program_to_json(const PriorityProgram& p) {
  json doc = {{"id", p.id}, {"length", p.length}, {"created_at", p.created_at}};
  if (const auto* b = std::get_if<BuiltinProgram>(&p.kind)) {
    doc["kind"] = "builtin";
    doc["name"] = b->name;
    if (b->name == kDegreeNeighbor) doc["params"] = params_to_json(b->params);
  } else {
    const auto& e = std::get<ExternalProgram>(p.kind);
    doc["kind"] = "external";
    doc["source"] = e.source;
    doc["command"] = e.command;
  }
  return doc;
}

PriorityProgram program_from_json(const json& doc, const fs::path& base_dir) {
  try {
    const auto id = doc.value("id", ProgramId{0});
    const std::string kind = doc.at("kind");
    PriorityProgram p;
    if (kind == "builtin") {
      const std::string name = doc.at("name");
      if (!is_builtin_name(name)) throw DataError("unknown builtin " + name);
      p = PriorityProgram::builtin(
          id, name, params_from_json(doc.value("params", json())));
    } else if (kind == "external") {
      std::string source;
      if (doc.contains("source"))
        source = doc["source"].get<std::string>();
      else
        source = read_text_file(base_dir / doc.at("source_file").get<std::string>());
      auto command = doc.value("command", default_external_command());
      p = PriorityProgram::external(id, std::move(source), std::move(command));
    } else {
      throw DataError("unknown program kind " + kind);
    }
    p.created_at = doc.value("created_at", std::int64_t{0});
    return p;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed program object: ") + e.what());
  }
}

void write_ensemble_dir(const fs::path& dir, const EnsembleManifest& m) {
  fs::create_directories(dir / "programs");
  json programs = json::array();
  for (const auto& member : m.programs) {
    const std::string file = "programs/p" + std::to_string(member.program.id) + ".py";
    write_text_file(dir / file, member.program.source_text());
    json entry = program_to_json(member.program);
    entry["score"] = member.score;
    if (entry["kind"] == "external") {
      entry.erase("source");
      entry["source_file"] = file;
    } else {
      entry["source_file"] = file;  // rendered for reading; not loaded back
    }
    programs.push_back(std::move(entry));
  }
  json doc = {{"format", "gedprog-ensemble"},
              {"version", 1},
              {"matcher", to_string(m.matcher.kind)},
              {"beta", m.matcher.beta},
              {"budget", m.budget},
              {"j_value", m.j_value},
              {"programs", std::move(programs)}};
  write_json_file(dir / "ensemble.json", doc);
}

EnsembleManifest read_ensemble(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / "ensemble.json" : path;
  const json doc = read_json_file(file);
  if (doc.value("format", "") != "gedprog-ensemble")
    throw DataError(file.string() + " is not an ensemble manifest");
  EnsembleManifest m;
  try {
    const auto kind = parse_matcher_kind(doc.value("matcher", "neighbor_biased"));
    if (!kind) throw DataError("unknown matcher in manifest");
    m.matcher = {*kind, doc.value("beta", 1.0)};
    m.budget = doc.value("budget", 0);
    m.j_value = doc.value("j_value", std::int64_t{0});
    for (const json& entry : doc.at("programs")) {
      json copy = entry;
      if (copy.value("kind", "") == "builtin") copy.erase("source_file");
      m.programs.push_back({program_from_json(copy, file.parent_path()),
                            entry.value("score", std::int64_t{0})});
    }
  } catch (const json::exception& e) {
    throw DataError(file.string() + ": " + e.what());
  }
  return m;
}

std::vector<PriorityProgram> read_program_dir(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw DataError("not a program directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() &&
        (entry.path().extension() == ".py" || entry.path().extension() == ".json"))
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<PriorityProgram> out;
  ProgramId next = 1;
  for (const auto& f : files) {
    PriorityProgram p =
        f.extension() == ".py"
            ? PriorityProgram::external(0, read_text_file(f), default_external_command())
            : program_from_json(read_json_file(f), dir);
    p.id = next++;
    out.push_back(std::move(p));
  }
  return out;
}

json read_json_file(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DataError("cannot write " + path.string());
}

}  // namespace gedprog
