#include "gedprog/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "gedprog/error.hpp"

namespace gedprog {

using nlohmann::json;

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read prompt template " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

std::string as_comment_block(const std::string& text) {
  std::string out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    out += line.empty() ? "#\n" : "# " + line + "\n";
  return out;
}

const std::regex& priority_def_regex() {
  static const std::regex re(R"(def\s+priority(_v\d+)?\s*\()");
  return re;
}

}  // namespace

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  PromptTemplates t;
  t.version = dir.filename().string();
  t.problem = read_text(dir / "problem.txt");
  t.task = read_text(dir / "task.txt");
  t.header = read_text(dir / "header.txt");
  return t;
}

PromptTemplates PromptTemplates::load_default() {
  return load(asset_dir() / "prompts" / "v1");
}

GeneratorRequest make_request(const PromptTemplates& templates,
                              std::vector<ScoredProgram> context) {
  GeneratorRequest req;
  req.problem_text = templates.problem;
  req.task_text = templates.task;
  const auto k = context.size();
  std::string header = templates.header;
  replace_all(header, "{version}", std::to_string(k));
  replace_all(header, "{previous}", std::to_string(k == 0 ? 0 : k - 1));
  req.function_header = std::move(header);
  req.context = std::move(context);
  return req;
}

std::string normalize_priority_source(std::string source) {
  return std::regex_replace(source, priority_def_regex(), "def priority(",
                            std::regex_constants::format_first_only);
}

std::string assemble_prompt(const GeneratorRequest& request) {
  std::string prompt = as_comment_block(request.problem_text);
  prompt += "\n";
  prompt += as_comment_block(request.task_text);
  prompt += "\n";
  for (std::size_t i = 0; i < request.context.size(); ++i) {
    const auto& sp = request.context[i];
    std::string src = normalize_priority_source(sp.program.source_text());
    replace_all(src, "def priority(",
                "def priority_v" + std::to_string(i) + "(");
    prompt += "# score: " + std::to_string(sp.score) + "\n";
    prompt += src;
    if (!src.empty() && src.back() != '\n') prompt += "\n";
    prompt += "\n";
  }
  prompt += request.function_header;
  return prompt;
}

std::vector<std::string> extract_code_blocks(std::string_view text) {
  std::vector<std::string> blocks;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    const auto body = text.find('\n', open);
    if (body == std::string_view::npos) break;
    const auto close = text.find("```", body + 1);
    if (close == std::string_view::npos) break;
    std::string code(text.substr(body + 1, close - body - 1));
    if (std::regex_search(code, priority_def_regex()))
      blocks.push_back(std::move(code));
    pos = close + 3;
  }
  return blocks;
}

DegreeNeighborParams clamp_params(DegreeNeighborParams p) {
  auto fit = [](double x, double lo, double hi) {
    return std::round(std::clamp(x, lo, hi) * 1000.0) / 1000.0;
  };
  p.label_weight = fit(p.label_weight, 0.05, 20.0);
  p.degree_weight = fit(p.degree_weight, 0.0, 10.0);
  p.neighbor_weight = fit(p.neighbor_weight, 0.0, 10.0);
  p.neighbor_exponent = fit(p.neighbor_exponent, 0.1, 5.0);
  p.scale_exponent = fit(p.scale_exponent, 0.0, 5.0);
  p.denom_offset = fit(p.denom_offset, 0.1, 20.0);
  return p;
}

DegreeNeighborParams mutate_params(const DegreeNeighborParams& base,
                                   std::mt19937_64& rng) {
  DegreeNeighborParams p = base;
  double* fields[] = {&p.label_weight,      &p.degree_weight,
                      &p.neighbor_weight,   &p.neighbor_exponent,
                      &p.scale_exponent,    &p.denom_offset};

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> step(0.0, 0.5);
  std::uniform_int_distribution<int> which(0, 5);
  const int forced = which(rng);
  for (int f = 0; f < 6; ++f) {
    const bool touch = f == forced || unit(rng) < 0.5;
    if (!touch) continue;
    double& x = *fields[f];
    // Weights (not exponents or the offset) can be switched off or revived.
    const bool is_weight = f == 1 || f == 2;
    if (is_weight && unit(rng) < 0.1) {
      x = x == 0.0 ? 1.0 : 0.0;
      continue;
    }
    x = (x == 0.0 ? 0.05 : x) * std::exp(step(rng));
  }
  return clamp_params(p);
}

GenerateResult SeededMutator::generate(const GeneratorRequest& request) {
  GenerateResult out;
  auto emit = [&](const DegreeNeighborParams& base) {
    out.candidates.push_back(PriorityProgram::builtin(
        0, std::string(kDegreeNeighbor), mutate_params(base, rng_)));
  };
  if (request.context.empty()) {
    emit(DegreeNeighborParams{});
    return out;
  }
  for (const auto& sp : request.context) {
    const auto* b = std::get_if<BuiltinProgram>(&sp.program.kind);
    emit(b && b->name == kDegreeNeighbor ? b->params : DegreeNeighborParams{});
  }
  return out;
}

std::string SeededMutator::save_state() const {
  std::ostringstream ss;
  ss << rng_;
  return ss.str();
}

void SeededMutator::load_state(const std::string& state) {
  std::istringstream ss(state);
  ss >> rng_;
  if (!ss) throw DataError("mutator state is corrupt");
}

LlmHttpBackend::LlmHttpBackend(LlmHttpConfig config)
    : config_(std::move(config)) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, url))
    throw std::invalid_argument("LLM endpoint must be an http(s) URL: " +
                                config_.endpoint);
  base_url_ = m[1];
  path_ = m[2].matched ? std::string(m[2]) : "/";
}

std::string LlmHttpBackend::request_body(const std::string& prompt) const {
  json body = {
      {"model", config_.model},
      {"temperature", config_.temperature},
      {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
  };
  return body.dump();
}

std::vector<PriorityProgram> LlmHttpBackend::parse_response(
    const std::string& body) const {
  std::string text;
  try {
    const json doc = json::parse(body);
    const json& choice = doc.at("choices").at(0);
    if (choice.contains("message"))
      text = choice["message"].at("content").get<std::string>();
    else
      text = choice.at("text").get<std::string>();
  } catch (const json::exception& e) {
    spdlog::warn("llm: unparseable response ({})", e.what());
    return {};
  }
  std::vector<PriorityProgram> programs;
  for (auto& code : extract_code_blocks(text))
    programs.push_back(PriorityProgram::external(
        0, normalize_priority_source(std::move(code)), config_.command));
  if (programs.empty()) spdlog::warn("llm: response contained no program");
  return programs;
}

GenerateResult LlmHttpBackend::generate(const GeneratorRequest& request) {
  const std::string body = request_body(assemble_prompt(request));
  httplib::Client client(base_url_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  spdlog::debug("llm request {}{}: {}", base_url_, path_, body);
  auto delay = config_.backoff;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    auto res = client.Post(path_, headers, body, "application/json");
    if (res && res->status == 200) {
      spdlog::debug("llm response: {}", res->body);
      return {parse_response(res->body), false};
    }
    if (res)
      spdlog::warn("llm: HTTP {} (attempt {}/{})", res->status, attempt,
                   config_.max_attempts);
    else
      spdlog::warn("llm: transport error {} (attempt {}/{})",
                   httplib::to_string(res.error()), attempt,
                   config_.max_attempts);
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }
  return {{}, true};
}

}  // namespace gedprog
