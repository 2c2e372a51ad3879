#include "movai/run_config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "movai/error.hpp"

namespace movai {

void RunConfig::validate() const {
  namespace fs = std::filesystem;
  if (!fs::exists(lexicon)) throw ConfigError("lexicon not found: " + lexicon.string());
  if (!fs::exists(prompts)) throw ConfigError("prompt list not found: " + prompts.string());
  noise.validate();
  levels.validate(model.patch);
  train.weights.validate();
  if (noise.sigma.size() != levels.resolution.size())
    throw ConfigError("noise schedule and level spec disagree on the number of levels");
  if (train.steps < 1) throw ConfigError("train.steps must be at least 1");
  if (!(train.learning_rate >= 0.0) || train.learning_rate > 10.0)
    throw ConfigError("train.learning_rate must be in [0, 10]");
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.byte, "malformed config JSON");
  }
  RunConfig cfg;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  try {
    cfg.lexicon = resolve(j.at("lexicon").get<std::string>());
    cfg.prompts = resolve(j.at("prompts").get<std::string>());
    if (j.contains("levels")) {
      const auto& l = j["levels"];
      if (l.contains("resolution")) {
        cfg.levels.resolution.clear();
        for (const auto& r : l["resolution"])
          cfg.levels.resolution.emplace_back(r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>());
      }
      cfg.levels.frames = l.value("frames", cfg.levels.frames);
    }
    if (j.contains("noise")) {
      const auto& n = j["noise"];
      if (n.contains("sigma")) cfg.noise.sigma = n["sigma"].get<std::vector<double>>();
      cfg.noise.steps_per_level = n.value("steps_per_level", cfg.noise.steps_per_level);
    }
    if (j.contains("loss")) {
      const auto& l = j["loss"];
      cfg.train.weights.lambda_temporal = l.value("lambda_temporal", cfg.train.weights.lambda_temporal);
      cfg.train.weights.lambda_semantic = l.value("lambda_semantic", cfg.train.weights.lambda_semantic);
      cfg.train.weights.lambda_adversarial = l.value("lambda_adversarial", cfg.train.weights.lambda_adversarial);
    }
    if (j.contains("train")) {
      const auto& t = j["train"];
      cfg.train.steps = t.value("steps", cfg.train.steps);
      cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
      cfg.train.seed = t.value("seed", cfg.train.seed);
    }
    if (j.contains("output_dir")) cfg.output_dir = resolve(j["output_dir"].get<std::string>());
    else cfg.output_dir = resolve(cfg.output_dir.string());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  cfg.model.levels = cfg.levels.resolution.size();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

std::vector<std::string> read_prompts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open prompt list " + path.string());
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

}  // namespace movai
