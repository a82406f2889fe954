#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "gedprog/error.hpp"
#include "gedprog/io.hpp"
#include "oracles.hpp"

using namespace gedprog;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gedprog_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(GraphJson, ParsesStringIdsAndLabels) {
  LabelTable labels;
  const auto doc = parse_graph(json::parse(R"({
    "nodes": [{"id": "a", "label": "C"}, {"id": "b", "label": "O"}, {"id": "c", "label": 7}],
    "edges": [["a", "b"], ["c", "b"]]})"),
                               labels);
  EXPECT_EQ(doc.graph.size(), 3);
  EXPECT_TRUE(doc.graph.adjacent(0, 1));
  EXPECT_TRUE(doc.graph.adjacent(1, 2));
  EXPECT_EQ(labels.name(doc.graph.label(0)), "C");
  EXPECT_EQ(labels.name(doc.graph.label(2)), "7");
  EXPECT_EQ(doc.node_ids[2], "c");
}

TEST(GraphJson, RejectsBadDocuments) {
  LabelTable labels;
  auto bad = [&](const char* text) {
    EXPECT_THROW(parse_graph(json::parse(text), labels), DataError) << text;
  };
  bad(R"({"edges": []})");
  bad(R"({"nodes": [{"id": 0}, {"id": 0}]})");
  bad(R"({"nodes": [{"id": 0}], "edges": [[0, 1]]})");
  bad(R"({"nodes": [{"id": 0}], "edges": [[0, 0]]})");
  bad(R"({"nodes": [{"id": 0}, {"id": 1}], "edges": [[0, 1], [1, 0]]})");
  bad(R"({"nodes": [{"id": 0, "label": "ε"}]})");
  bad(R"({"nodes": [{"id": 0.5}]})");
  bad(R"({"nodes": [{"id": 0, "label": [1]}]})");
}

TEST(GraphJson, RoundTrip) {
  std::mt19937_64 rng(4);
  LabelTable labels;
  std::vector<Label> alphabet{labels.intern("C"), labels.intern("N"), labels.intern("")};
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = oracle::random_graph(rng, 1 + static_cast<int>(rng() % 8), 0.4, 3);
    std::vector<Label> ls(g.labels().begin(), g.labels().end());
    for (auto& l : ls) l = alphabet[l];
    g = Graph(ls, std::vector<Edge>(g.edges().begin(), g.edges().end()));
    const json once = graph_to_json(g, {}, labels);
    const auto parsed = parse_graph(once, labels);
    EXPECT_EQ(parsed.graph, g);
    EXPECT_EQ(graph_to_json(parsed.graph, parsed.node_ids, labels), once);
  }
}

TEST(PairsFile, RoundTripAndErrors) {
  const auto dir = scratch("pairs");
  const auto path = dir / "pairs.jsonl";
  write_text_file(path,
                  "{\"g1\": {\"nodes\": [{\"id\": 1, \"label\": \"A\"}]}, "
                  "\"g2\": {\"nodes\": [{\"id\": 1, \"label\": \"B\"}]}, \"true_ged\": 1}\n"
                  "\n"
                  "{\"g1\": {\"nodes\": []}, \"g2\": {\"nodes\": [{\"id\": 0}]}}\n");
  const auto records = read_pairs_file(path);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].pair.true_ged, 1);
  EXPECT_FALSE(records[1].pair.true_ged);
  write_pairs_file(dir / "copy.jsonl", records);
  const auto again = read_pairs_file(dir / "copy.jsonl");
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(again[0].pair.g1, records[0].pair.g1);
  EXPECT_EQ(again[1].pair.g2, records[1].pair.g2);
  EXPECT_EQ(read_text_file(dir / "copy.jsonl"),
            [&] {
              std::string s;
              for (const auto& r : again) s += pair_to_json(r).dump() + "\n";
              return s;
            }());

  write_text_file(dir / "bad.jsonl", "{\"g1\": {\"nodes\": []}}\n");
  EXPECT_THROW(read_pairs_file(dir / "bad.jsonl"), DataError);
  write_text_file(dir / "neg.jsonl",
                  "{\"g1\": {\"nodes\": []}, \"g2\": {\"nodes\": []}, \"true_ged\": -1}\n");
  EXPECT_THROW(read_pairs_file(dir / "neg.jsonl"), DataError);
  write_text_file(dir / "junk.jsonl", "not json\n");
  try {
    read_pairs_file(dir / "junk.jsonl");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("junk.jsonl:1"), std::string::npos);
  }
  EXPECT_THROW(read_pairs_file(dir / "missing.jsonl"), DataError);
}

TEST(ProgramJson, RoundTrip) {
  const auto b = PriorityProgram::builtin(4, "degree_neighbor", {1.5, 0, 2, 1, 0.5, 2});
  EXPECT_EQ(program_from_json(program_to_json(b)), b);
  auto e = PriorityProgram::external(9, "def priority(a, b, w):\n  return w\n",
                                     {"python3", "{driver}", "{source}"});
  e.created_at = 12;
  EXPECT_EQ(program_from_json(program_to_json(e)), e);
  EXPECT_THROW(program_from_json(json::parse(R"({"kind": "builtin", "name": "x"})")),
               DataError);
  EXPECT_THROW(program_from_json(json::parse(R"({"kind": "alien"})")), DataError);
}

TEST(EnsembleDir, RoundTrip) {
  const auto dir = scratch("ensemble");
  EnsembleManifest m;
  m.matcher = {MatcherKind::greedy, 0.5};
  m.budget = 3;
  m.j_value = 17;
  m.programs.push_back({PriorityProgram::builtin(2, "zero_priority"), 40});
  m.programs.push_back(
      {PriorityProgram::external(5, "def priority(a, b, w):\n  return w\n",
                                 default_external_command()),
       3});
  write_ensemble_dir(dir, m);
  EXPECT_TRUE(fs::exists(dir / "programs" / "p5.py"));
  EXPECT_TRUE(fs::exists(dir / "programs" / "p2.py"));
  for (const auto& path : {dir, dir / "ensemble.json"}) {
    const auto back = read_ensemble(path);
    EXPECT_EQ(back.matcher.kind, MatcherKind::greedy);
    EXPECT_EQ(back.matcher.beta, 0.5);
    EXPECT_EQ(back.budget, 3);
    EXPECT_EQ(back.j_value, 17);
    ASSERT_EQ(back.programs.size(), 2u);
    EXPECT_EQ(back.programs[0].program, m.programs[0].program);
    EXPECT_EQ(back.programs[1].program, m.programs[1].program);
    EXPECT_EQ(back.programs[1].score, 3);
  }
  write_json_file(dir / "other.json", json{{"format", "nope"}});
  EXPECT_THROW(read_ensemble(dir / "other.json"), DataError);
}

TEST(ProgramDir, LoadsInFilenameOrder) {
  const auto dir = scratch("programs");
  write_text_file(dir / "b.py", "def priority(a, b, w):\n  return w\n");
  write_json_file(dir / "a.json", json{{"kind", "builtin"}, {"name", "zero_priority"}});
  write_text_file(dir / "notes.txt", "ignored");
  const auto programs = read_program_dir(dir);
  ASSERT_EQ(programs.size(), 2u);
  EXPECT_EQ(programs[0].id, 1u);
  EXPECT_TRUE(programs[0].is_builtin());
  EXPECT_EQ(programs[1].id, 2u);
  EXPECT_FALSE(programs[1].is_builtin());
  EXPECT_THROW(read_program_dir(dir / "missing"), DataError);
}

TEST(LabelTable, ReservesEpsilon) {
  LabelTable t;
  EXPECT_THROW(t.intern("ε"), DataError);
  EXPECT_EQ(t.name(kEpsilon), "ε");
  const Label c = t.intern("C");
  EXPECT_EQ(t.intern("C"), c);
  EXPECT_THROW(t.name(99), std::out_of_range);
}
