#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "movai/pvr.hpp"

namespace movai {

/// JSON run configuration. Relative paths resolve against the config file's
/// directory.
///
///   {
///     "lexicon": "lexicon.txt",
///     "prompts": "train_prompts.txt",       // one scene prompt per line
///     "levels": {"resolution": [[16,16],[32,32],[64,64]], "frames": 8},
///     "noise": {"sigma": [1.0,0.5,0.25], "steps_per_level": 8},
///     "loss": {"lambda_temporal": 0.5, "lambda_semantic": 0.1, "lambda_adversarial": 0},
///     "train": {"steps": 200, "learning_rate": 0.01, "seed": 42},
///     "output_dir": "out"
///   }
///
/// Every key except "lexicon" and "prompts" is optional and defaults to the
/// values above.
struct RunConfig {
  std::filesystem::path lexicon;
  std::filesystem::path prompts;
  LevelSpec levels;
  NoiseSchedule noise;
  TrainHyper train;
  ModelConfig model;
  std::filesystem::path output_dir = "out";

  /// Throws ConfigError on out-of-range values or missing files.
  void validate() const;
};

/// Throws IoError, FormatError (malformed JSON) or ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);

/// Non-empty, non-comment lines of a prompt list.
std::vector<std::string> read_prompts(const std::filesystem::path& path);

}  // namespace movai
