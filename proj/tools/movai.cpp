// movai: text -> scene graph -> annotated layout -> rendered / generated video.
//
// Exit codes: 0 success, 2 usage or input error, 3 I/O error, 4 malformed
// file, 1 failed gradient check or anything unexpected.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "movai/error.hpp"
#include "movai/gradient_suite.hpp"
#include "movai/lexicon.hpp"
#include "movai/metrics.hpp"
#include "movai/parser.hpp"
#include "movai/pvr.hpp"
#include "movai/render.hpp"
#include "movai/run_config.hpp"
#include "movai/scene_graph.hpp"
#include "movai/temporal.hpp"

namespace fs = std::filesystem;
using namespace movai;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInput = 2, kIo = 3, kFormat = 4 };

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path.string());
}

// Maps a character offset in `text` to 1-based line and column.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

SceneGraph parse_with_diagnostics(const std::string& text, const Lexicon& lexicon) {
  try {
    return parse_prompt(text, lexicon);
  } catch (const UnknownWord& e) {
    const auto [line, col] = line_column(text, e.column());
    std::cerr << "error: line " << line << ", column " << col << ": unknown word '" << e.word() << "'\n";
    throw;
  } catch (const GrammarError& e) {
    const auto [line, col] = line_column(text, e.column());
    std::cerr << "error: line " << line << ", column " << col << ": expected " << e.expected() << "\n";
    throw;
  }
}

SceneGraph load_graph(const fs::path& path) { return deserialize(read_text(path)); }

// Annotates the graph for `frames` unless it already carries annotations of
// that length.
SceneGraph ensure_annotated(SceneGraph graph, int frames) {
  if (!graph.annotations.empty()) {
    if (graph.annotations.front().duration() == static_cast<std::size_t>(frames)) return graph;
    graph.annotations.clear();
  }
  return annotate(graph, frames);
}

std::vector<fs::path> list_videos(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".mvt") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}


}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"movai: scene-graph video generation at desk scale"};
  app.require_subcommand(1);

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "Parse a prompt into a scene-graph JSON file");
  std::string parse_text;
  std::optional<std::string> parse_file;
  std::string parse_lexicon, parse_out;
  bool parse_annotate = false;
  int parse_frames = 8;
  parse_cmd->add_option("text", parse_text, "Prompt text");
  parse_cmd->add_option("--file", parse_file, "Read the prompt from a file");
  parse_cmd->add_option("--lexicon", parse_lexicon, "Lexicon file")->required();
  parse_cmd->add_option("--out", parse_out, "Output graph file (default: stdout)");
  parse_cmd->add_flag("--annotate", parse_annotate, "Solve the layout and add temporal annotations");
  parse_cmd->add_option("--frames", parse_frames, "Frames for --annotate")->check(CLI::PositiveNumber);

  // render
  auto* render_cmd = app.add_subcommand("render", "Rasterize a scene graph into an .mvt video");
  std::string render_graph, render_out;
  std::optional<int> render_frames;
  std::size_t render_size = 64;
  std::optional<std::string> render_ppm;
  render_cmd->add_option("graph", render_graph, "Scene-graph file")->required();
  render_cmd->add_option("--frames", render_frames, "Frame count (default: annotation length or 8)")
      ->check(CLI::PositiveNumber);
  render_cmd->add_option("--size", render_size, "Square frame size in pixels")->check(CLI::PositiveNumber);
  render_cmd->add_option("--out", render_out, "Output .mvt file")->required();
  render_cmd->add_option("--ppm", render_ppm, "Also export frames as PPM into this directory");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Run the refinement chain from noise");
  std::string gen_text, gen_out;
  std::optional<std::string> gen_graph, gen_lexicon, gen_model, gen_config, gen_ppm;
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("text", gen_text, "Prompt text");
  gen_cmd->add_option("--graph", gen_graph, "Scene-graph file instead of a prompt");
  gen_cmd->add_option("--lexicon", gen_lexicon, "Lexicon file (required with a prompt)");
  gen_cmd->add_option("--model", gen_model, "Trained model file");
  gen_cmd->add_option("--config", gen_config, "Run config supplying levels and noise schedule");
  gen_cmd->add_option("--seed", gen_seed, "Noise seed");
  gen_cmd->add_option("--out", gen_out, "Output .mvt file; the graph is written next to it as .json")->required();
  gen_cmd->add_option("--ppm", gen_ppm, "Also export frames as PPM into this directory");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a model from a run config");
  std::string train_config;
  std::optional<std::uint64_t> train_seed;
  std::optional<int> train_steps;
  std::optional<std::string> train_out;
  train_cmd->add_option("--config", train_config, "Run config JSON")->required();
  train_cmd->add_option("--seed", train_seed, "Override train.seed");
  train_cmd->add_option("--steps", train_steps, "Override train.steps");
  train_cmd->add_option("--out-dir", train_out, "Override output_dir");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Compare generated videos against references");
  std::string eval_gen, eval_ref;
  eval_cmd->add_option("--generated", eval_gen, "Directory of generated .mvt files")->required();
  eval_cmd->add_option("--reference", eval_ref, "Directory of reference .mvt files")->required();

  // gradcheck
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every analytic gradient");
  std::uint64_t grad_seed = 0;
  int grad_instances = 50;
  bool grad_perturb = false;
  grad_cmd->add_option("--seed", grad_seed, "Seed for the random instances");
  grad_cmd->add_option("--instances", grad_instances, "Instances per operation")->check(CLI::PositiveNumber);
  // Test hook: scale analytic gradients by 1.01 so the check must fail.
  grad_cmd->add_flag("--perturb-gradient", grad_perturb)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*parse_cmd) {
      const Lexicon lexicon = Lexicon::load(parse_lexicon);
      std::string text = parse_file ? read_text(*parse_file) : parse_text;
      if (parse_file && parse_cmd->count("text") > 0) throw ConfigError("give either a prompt or --file, not both");
      SceneGraph graph = parse_with_diagnostics(text, lexicon);
      if (parse_annotate) graph = annotate(graph, parse_frames);
      const std::string doc = serialize(graph);
      if (parse_out.empty())
        std::cout << doc;
      else
        write_text(parse_out, doc);
      return kOk;
    }

    if (*render_cmd) {
      SceneGraph graph = load_graph(render_graph);
      int frames = render_frames.value_or(graph.annotations.empty() ? 8 : static_cast<int>(graph.annotations.front().duration()));
      graph = ensure_annotated(std::move(graph), frames);
      const VideoTensor v = render_scene(graph, render_size, render_size, static_cast<std::size_t>(frames));
      write_video(v, render_out);
      if (render_ppm) export_frames(v, *render_ppm);
      return kOk;
    }

    if (*gen_cmd) {
      const bool has_text = gen_cmd->count("text") > 0;
      if (has_text == gen_graph.has_value()) throw ConfigError("give exactly one of a prompt or --graph");
      NoiseSchedule schedule;
      LevelSpec spec;
      if (gen_config) {
        const RunConfig cfg = load_run_config(*gen_config);
        schedule = cfg.noise;
        spec = cfg.levels;
      }
      SceneGraph graph;
      if (has_text) {
        if (!gen_lexicon) throw ConfigError("--lexicon is required with a prompt");
        graph = parse_with_diagnostics(gen_text, Lexicon::load(*gen_lexicon));
      } else {
        graph = load_graph(*gen_graph);
      }
      graph = ensure_annotated(std::move(graph), static_cast<int>(spec.frames));
      ModelParams params;
      if (gen_model) {
        params = load_model(*gen_model);
      } else {
        std::cerr << "warning: no --model given; using untrained parameters initialized from the seed\n";
        ModelConfig config;
        config.levels = spec.resolution.size();
        params = init_params(config, gen_seed);
      }
      const VideoTensor v = generate(graph, params, schedule, spec, gen_seed);
      const fs::path out(gen_out);
      write_video(v, out);
      write_text(fs::path(out).replace_extension(".json"), serialize(graph));
      if (gen_ppm) export_frames(v, *gen_ppm);
      return kOk;
    }

    if (*train_cmd) {
      RunConfig cfg = load_run_config(train_config);
      if (train_seed) cfg.train.seed = *train_seed;
      if (train_steps) cfg.train.steps = *train_steps;
      if (train_out) cfg.output_dir = *train_out;
      cfg.validate();
      const Lexicon lexicon = Lexicon::load(cfg.lexicon);
      std::vector<SceneGraph> scenes;
      for (const auto& prompt : read_prompts(cfg.prompts))
        scenes.push_back(annotate(parse_with_diagnostics(prompt, lexicon), static_cast<int>(cfg.levels.frames)));
      const ModelParams init = init_params(cfg.model, cfg.train.seed);
      const TrainResult result = train(scenes, init, cfg.train, cfg.noise, cfg.levels);
      fs::create_directories(cfg.output_dir);
      save_model(result.params, cfg.output_dir / "model.mvai");
      write_text(cfg.output_dir / "loss_history.csv", history_csv(result.history));
      const auto& first = result.history.front();
      const auto& last = result.history.back();
      std::cerr << "trained " << result.history.size() << " steps on " << scenes.size()
                << " scenes; composite " << first.composite << " -> " << last.composite << "\n";
      return kOk;
    }

    if (*eval_cmd) {
      const auto gen_files = list_videos(eval_gen);
      const auto ref_files = list_videos(eval_ref);
      std::vector<FeatureVector> gen_feats, ref_feats;
      double consistency = 0.0, alignment = 0.0;
      std::size_t aligned = 0;
      for (const auto& p : gen_files) {
        const VideoTensor v = read_video(p);
        gen_feats.push_back(video_feature(v));
        consistency += temporal_consistency(v);
        const fs::path graph_path = fs::path(p).replace_extension(".json");
        if (fs::exists(graph_path)) {
          alignment += alignment_score(load_graph(graph_path), v);
          ++aligned;
        }
      }
      for (const auto& p : ref_files) ref_feats.push_back(video_feature(read_video(p)));
      const double fvd = frechet_distance(summarize(gen_feats), summarize(ref_feats));
      // Fixed-precision numbers are emitted verbatim rather than through the
      // JSON library's shortest round-trip formatting.
      std::cout << "{\n"
                << "  \"fvd_proxy\": " << fixed6(fvd) << ",\n"
                << "  \"alignment\": " << (aligned ? fixed6(alignment / static_cast<double>(aligned)) : "null") << ",\n"
                << "  \"temporal_consistency\": " << fixed6(consistency / static_cast<double>(gen_files.size()))
                << "\n}\n";
      return kOk;
    }

    if (*grad_cmd) {
      GradSuiteOptions opts;
      opts.seed = grad_seed;
      opts.instances = grad_instances;
      opts.perturbation = grad_perturb ? 1e-2 : 0.0;
      const auto entries = run_gradient_suite(opts);
      bool ok = true;
      std::printf("%-20s %6s %9s %11s %13s %13s %13s  %s\n", "operation", "step", "instances", "coordinates",
                  "max_rel_error", "analytic", "numeric", "status");
      for (const auto& e : entries) {
        ok = ok && e.passed();
        std::printf("%-20s %6.0e %9d %11zu %13.3e %13.5e %13.5e  %s\n", e.name.c_str(), e.step, e.instances, e.coordinates,
                    e.worst.max_relative_error, e.worst.analytic, e.worst.numeric, e.passed() ? "ok" : "FAIL");
      }
      std::printf("tolerance %.0e: %s\n", kGradCheckTolerance, ok ? "all passed" : "FAILED");
      return ok ? kOk : kFailure;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFormat;
  } catch (const UnknownWord&) {
    return kInput;  // diagnostic already printed
  } catch (const GrammarError&) {
    return kInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
