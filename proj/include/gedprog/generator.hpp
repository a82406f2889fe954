#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gedprog/pool.hpp"
#include "gedprog/program.hpp"

namespace gedprog {

/// Prompt text pieces, loaded from a versioned asset directory.
struct PromptTemplates {
  std::string version;
  std::string problem;  ///< GED definition, rendered as a comment block
  std::string task;     ///< inputs/outputs of the function to write
  std::string header;   ///< "{version}"/"{previous}" expand to numbers

  static PromptTemplates load(const std::filesystem::path& dir);
  /// asset_dir()/prompts/v1
  static PromptTemplates load_default();
};

struct GeneratorRequest {
  std::string problem_text;
  std::string task_text;
  std::string function_header;
  std::vector<ScoredProgram> context;  ///< worst score first
};

GeneratorRequest make_request(const PromptTemplates& templates,
                              std::vector<ScoredProgram> context);

/// Full prompt: problem description, task, the context programs renamed to
/// priority_v0..v{k-1}, then the header of priority_v{k}.
std::string assemble_prompt(const GeneratorRequest& request);

/// Bodies of ``` fenced blocks that define a priority function.
std::vector<std::string> extract_code_blocks(std::string_view text);

/// Renames the first `def priority_vN(` (or `def priority(`) to
/// `def priority(`.
std::string normalize_priority_source(std::string source);

struct GenerateResult {
  std::vector<PriorityProgram> candidates;  ///< ids unassigned (0)
  bool transport_failed = false;
};

class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual std::string name() const = 0;
  virtual GenerateResult generate(const GeneratorRequest& request) = 0;
  /// Opaque state for checkpoints.
  virtual std::string save_state() const { return {}; }
  virtual void load_state(const std::string&) {}
};

/// Bounds applied to mutated coefficients.
DegreeNeighborParams clamp_params(DegreeNeighborParams p);

/// Random perturbation of a degree-neighbor parameter vector: each
/// coefficient is rescaled by a log-normal factor with probability 1/2 (at
/// least one always changes), occasionally zeroed, then clamped and rounded
/// to three decimals.
DegreeNeighborParams mutate_params(const DegreeNeighborParams& base,
                                   std::mt19937_64& rng);

/// Deterministic generator without an LLM: emits one mutated
/// degree-neighbor builtin per context program.
class SeededMutator final : public GeneratorBackend {
 public:
  explicit SeededMutator(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "mutator"; }
  GenerateResult generate(const GeneratorRequest& request) override;
  std::string save_state() const override;
  void load_state(const std::string& state) override;

 private:
  std::mt19937_64 rng_;
};

struct LlmHttpConfig {
  /// e.g. http://localhost:8000/v1/chat/completions (OpenAI-compatible).
  std::string endpoint;
  std::string model;
  double temperature = 0.99;
  /// Environment variable holding the bearer token; unset means no auth.
  std::string api_key_env = "GEDPROG_LLM_API_KEY";
  int max_attempts = 3;
  std::chrono::milliseconds backoff{500};
  std::chrono::seconds timeout{120};
  std::vector<std::string> command = default_external_command();
};

/// Single-turn completion over HTTP. Fenced code in the reply becomes
/// external programs.
class LlmHttpBackend final : public GeneratorBackend {
 public:
  explicit LlmHttpBackend(LlmHttpConfig config);
  std::string name() const override { return "llm"; }
  GenerateResult generate(const GeneratorRequest& request) override;

  /// Request body for a prompt (exposed for tests).
  std::string request_body(const std::string& prompt) const;
  /// Programs parsed from a raw response body; empty if unparseable.
  std::vector<PriorityProgram> parse_response(const std::string& body) const;

 private:
  LlmHttpConfig config_;
  std::string base_url_;
  std::string path_;
};

}  // namespace gedprog
